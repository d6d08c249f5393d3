//! Versioned binary checkpoints.
//!
//! Byte layout, all integers little-endian:
//!
//! ```text
//! magic    4  b"MACP"
//! version  u32            (currently 1)
//! seed     u64
//! input    u64            input vector length
//! layers   u64            layer count, then per layer:
//!   tag    u32            0 affine, 1 rectifier, 2 conv2d, 3 softmax,
//!                         4 offset
//!   fields 5 × u64        affine: fan_in, fan_out, 0, 0, 0
//!                         conv2d: in_ch, out_ch, kernel, height, width
//!                         offset: value as f64 bits, 0, 0, 0, 0
//!                         others: zeros
//! params   u64            count, then count × f64 little-endian
//! ```
//!
//! Parameters are serialized as `f64` regardless of the in-memory scalar;
//! round-trips are bit-exact for `f64` networks.

use std::io::{self, Read, Write};

use super::{LayerSpec, Network, NetworkError};
use crate::scalar::Real;

pub const MAGIC: &[u8; 4] = b"MACP";
pub const VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CheckpointError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("bad magic bytes; not a checkpoint")]
    BadMagic,
    #[error("unsupported checkpoint version {0}")]
    BadVersion(u32),
    #[error("unknown layer tag {0}")]
    BadLayerTag(u32),
    #[error("inconsistent checkpoint: {0}")]
    Inconsistent(#[from] NetworkError),
}

pub fn write<F: Real, W: Write>(net: &Network<F>, mut out: W) -> Result<(), CheckpointError> {
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&net.seed.to_le_bytes())?;
    out.write_all(&(net.input_len() as u64).to_le_bytes())?;
    out.write_all(&(net.layers().len() as u64).to_le_bytes())?;
    for spec in net.layers() {
        let (tag, fields): (u32, [u64; 5]) = match *spec {
            LayerSpec::Affine { fan_in, fan_out } => (0, [fan_in as u64, fan_out as u64, 0, 0, 0]),
            LayerSpec::Rectifier => (1, [0; 5]),
            LayerSpec::Conv2d {
                in_channels,
                out_channels,
                kernel,
                height,
                width,
            } => (
                2,
                [
                    in_channels as u64,
                    out_channels as u64,
                    kernel as u64,
                    height as u64,
                    width as u64,
                ],
            ),
            LayerSpec::Softmax => (3, [0; 5]),
            LayerSpec::Offset { value } => (4, [value.to_bits(), 0, 0, 0, 0]),
        };
        out.write_all(&tag.to_le_bytes())?;
        for f in fields {
            out.write_all(&f.to_le_bytes())?;
        }
    }
    out.write_all(&(net.params().len() as u64).to_le_bytes())?;
    for &p in net.params() {
        out.write_all(&p.f64().to_le_bytes())?;
    }
    Ok(())
}

pub fn read<F: Real, R: Read>(mut input: R) -> Result<Network<F>, CheckpointError> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let version = read_u32(&mut input)?;
    if version != VERSION {
        return Err(CheckpointError::BadVersion(version));
    }
    let seed = read_u64(&mut input)?;
    let input_len = read_u64(&mut input)? as usize;
    let n_layers = read_u64(&mut input)? as usize;
    let mut layers = Vec::with_capacity(n_layers);
    for _ in 0..n_layers {
        let tag = read_u32(&mut input)?;
        let mut fields = [0u64; 5];
        for f in &mut fields {
            *f = read_u64(&mut input)?;
        }
        layers.push(match tag {
            0 => LayerSpec::Affine {
                fan_in: fields[0] as usize,
                fan_out: fields[1] as usize,
            },
            1 => LayerSpec::Rectifier,
            2 => LayerSpec::Conv2d {
                in_channels: fields[0] as usize,
                out_channels: fields[1] as usize,
                kernel: fields[2] as usize,
                height: fields[3] as usize,
                width: fields[4] as usize,
            },
            3 => LayerSpec::Softmax,
            4 => LayerSpec::Offset {
                value: f64::from_bits(fields[0]),
            },
            t => return Err(CheckpointError::BadLayerTag(t)),
        });
    }
    let n_params = read_u64(&mut input)? as usize;
    let mut params = Vec::with_capacity(n_params);
    for _ in 0..n_params {
        let mut buf = [0u8; 8];
        input.read_exact(&mut buf)?;
        params.push(F::of(f64::from_le_bytes(buf)));
    }
    Ok(Network::from_parts(layers, input_len, params, seed)?)
}

pub fn save<F: Real>(net: &Network<F>, path: &std::path::Path) -> Result<(), CheckpointError> {
    write(net, std::io::BufWriter::new(std::fs::File::create(path)?))
}

pub fn load<F: Real>(path: &std::path::Path) -> Result<Network<F>, CheckpointError> {
    read(std::io::BufReader::new(std::fs::File::open(path)?))
}

fn read_u32<R: Read>(r: &mut R) -> io::Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}
