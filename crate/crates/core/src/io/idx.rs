//! IDX tensor files: big-endian magic and dimensions, one byte per element.
//!
//! Magic 0x00000803 is a rank-3 u8 tensor (images), 0x00000801 a rank-1 u8
//! vector (labels). Pixel bytes map to `[0,1]` by `v / 255`.

use std::io::{self, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::scalar::Real;

pub const IMAGE_MAGIC: u32 = 0x0000_0803;
pub const LABEL_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Error)]
pub enum IdxError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("bad magic {got:#010x}, expected {expected:#010x}")]
    BadMagic { got: u32, expected: u32 },
    #[error("dimension product overflows")]
    DimensionOverflow,
    #[error("payload truncated: expected {expected} bytes, got {got}")]
    Truncated { expected: usize, got: usize },
}

/// Decoded image set: `count` images of `rows x cols` pixels scaled into
/// `[0,1]`, flattened row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Images<F> {
    pub count: usize,
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<Vec<F>>,
}

pub fn read_images<F: Real, R: Read>(mut input: R) -> Result<Images<F>, IdxError> {
    let magic = read_u32(&mut input)?;
    if magic != IMAGE_MAGIC {
        return Err(IdxError::BadMagic {
            got: magic,
            expected: IMAGE_MAGIC,
        });
    }
    let count = read_u32(&mut input)? as usize;
    let rows = read_u32(&mut input)? as usize;
    let cols = read_u32(&mut input)? as usize;
    let per_image = rows.checked_mul(cols).ok_or(IdxError::DimensionOverflow)?;
    let total = count
        .checked_mul(per_image)
        .ok_or(IdxError::DimensionOverflow)?;
    let mut raw = Vec::with_capacity(total);
    let got = input.read_to_end(&mut raw)?;
    if got != total {
        return Err(IdxError::Truncated {
            expected: total,
            got,
        });
    }
    let pixels = raw
        .chunks_exact(per_image)
        .map(|chunk| chunk.iter().map(|&b| F::of(f64::from(b) / 255.0)).collect())
        .collect();
    Ok(Images {
        count,
        rows,
        cols,
        pixels,
    })
}

pub fn read_labels<R: Read>(mut input: R) -> Result<Vec<u8>, IdxError> {
    let magic = read_u32(&mut input)?;
    if magic != LABEL_MAGIC {
        return Err(IdxError::BadMagic {
            got: magic,
            expected: LABEL_MAGIC,
        });
    }
    let count = read_u32(&mut input)? as usize;
    let mut raw = Vec::with_capacity(count);
    let got = input.read_to_end(&mut raw)?;
    if got != count {
        return Err(IdxError::Truncated {
            expected: count,
            got,
        });
    }
    Ok(raw)
}

/// Write images from raw bytes (one per pixel). The inverse of
/// [`read_images`] up to the fixed `/255` scaling.
pub fn write_images<W: Write>(
    mut out: W,
    rows: usize,
    cols: usize,
    images: &[Vec<u8>],
) -> Result<(), IdxError> {
    out.write_all(&IMAGE_MAGIC.to_be_bytes())?;
    out.write_all(&(images.len() as u32).to_be_bytes())?;
    out.write_all(&(rows as u32).to_be_bytes())?;
    out.write_all(&(cols as u32).to_be_bytes())?;
    for img in images {
        assert_eq!(img.len(), rows * cols, "image byte count");
        out.write_all(img)?;
    }
    Ok(())
}

pub fn write_labels<W: Write>(mut out: W, labels: &[u8]) -> Result<(), IdxError> {
    out.write_all(&LABEL_MAGIC.to_be_bytes())?;
    out.write_all(&(labels.len() as u32).to_be_bytes())?;
    out.write_all(labels)?;
    Ok(())
}

pub fn load_images<F: Real>(path: &Path) -> Result<Images<F>, IdxError> {
    read_images(io::BufReader::new(std::fs::File::open(path)?))
}

pub fn load_labels(path: &Path) -> Result<Vec<u8>, IdxError> {
    read_labels(io::BufReader::new(std::fs::File::open(path)?))
}

pub fn save_images(
    path: &Path,
    rows: usize,
    cols: usize,
    images: &[Vec<u8>],
) -> Result<(), IdxError> {
    write_images(
        io::BufWriter::new(std::fs::File::create(path)?),
        rows,
        cols,
        images,
    )
}

pub fn save_labels(path: &Path, labels: &[u8]) -> Result<(), IdxError> {
    write_labels(io::BufWriter::new(std::fs::File::create(path)?), labels)
}

fn read_u32<R: Read>(r: &mut R) -> io::Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_be_bytes(buf))
}
