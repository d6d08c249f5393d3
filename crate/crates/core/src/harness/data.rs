//! Image datasets: container type, deterministic synthetic corpora, and the
//! embedding of a finite data space as a pixel corpus.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::features::PixelFeature;
use crate::dataspace::{FiniteDataSpace, Label};
use crate::scalar::Real;

/// A labelled image set; images are flattened row-major in `[0,1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<F> {
    pub images: Vec<Vec<F>>,
    pub labels: Vec<u8>,
    pub rows: usize,
    pub cols: usize,
}

impl<F: Real> Dataset<F> {
    pub fn new(images: Vec<Vec<F>>, labels: Vec<u8>, rows: usize, cols: usize) -> Self {
        assert_eq!(images.len(), labels.len(), "one label per image");
        assert!(
            images.iter().all(|img| img.len() == rows * cols),
            "image dimensions"
        );
        Dataset {
            images,
            labels,
            rows,
            cols,
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows * self.cols
    }

    pub fn filter_classes(&self, classes: &[u8]) -> Self {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| classes.contains(&self.labels[i]))
            .collect();
        self.select(&keep)
    }

    pub fn select(&self, indices: &[usize]) -> Self {
        Dataset {
            images: indices.iter().map(|&i| self.images[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            rows: self.rows,
            cols: self.cols,
        }
    }

    /// Seeded subsample without replacement; `None` keeps everything.
    pub fn subsample(&self, n: Option<usize>, seed: u64) -> Self {
        match n {
            None => self.clone(),
            Some(n) if n >= self.len() => self.clone(),
            Some(n) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut pool: Vec<usize> = (0..self.len()).collect();
                for i in 0..n {
                    let j = rng.gen_range(i..pool.len());
                    pool.swap(i, j);
                }
                let mut chosen = pool[..n].to_vec();
                chosen.sort_unstable();
                self.select(&chosen)
            }
        }
    }

    /// Threshold every pixel into {0, 1}.
    pub fn binarized(&self, threshold: F) -> Self {
        Dataset {
            images: self
                .images
                .iter()
                .map(|img| {
                    img.iter()
                        .map(|&v| if v >= threshold { F::one() } else { F::zero() })
                        .collect()
                })
                .collect(),
            labels: self.labels.clone(),
            rows: self.rows,
            cols: self.cols,
        }
    }

    /// Empirical class imbalance of the label multiset (two-class sets).
    pub fn class_imbalance(&self) -> F {
        let mut counts = std::collections::BTreeMap::new();
        for &l in &self.labels {
            *counts.entry(l).or_insert(0usize) += 1;
        }
        let mut values: Vec<usize> = counts.values().copied().collect();
        values.sort_unstable();
        match values.as_slice() {
            [] | [_] => F::one(),
            [lo, .., hi] => F::of_usize(*hi) / F::of_usize((*lo).max(1)),
        }
    }
}

/// Synthetic bars: class 0 images hold one full-height vertical bar, class 1
/// one full-width horizontal bar, on an 8x8 grid. Bar positions cycle so
/// every column and row appears equally often per class; bar pixels sit in
/// [0.85, 1], background in [0, 0.15], so binarizing at 0.5 is exact.
pub fn bars<F: Real>(per_class: usize, seed: u64) -> Dataset<F> {
    let (rows, cols) = (8, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images = Vec::with_capacity(per_class * 2);
    let mut labels = Vec::with_capacity(per_class * 2);
    for i in 0..per_class {
        let column = i % cols;
        images.push(render_bar(&mut rng, rows, cols, |r, c| {
            let _ = r;
            c == column
        }));
        labels.push(0);
    }
    for i in 0..per_class {
        let row = i % rows;
        images.push(render_bar(&mut rng, rows, cols, |r, c| {
            let _ = c;
            r == row
        }));
        labels.push(1);
    }
    Dataset::new(images, labels, rows, cols)
}

fn render_bar<F: Real>(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    on: impl Fn(usize, usize) -> bool,
) -> Vec<F> {
    let mut img = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = if on(r, c) {
                rng.gen_range(0.85..1.0)
            } else {
                rng.gen_range(0.0..0.15)
            };
            img.push(F::of(v));
        }
    }
    img
}

/// 5x7 stroke bitmaps for the ten digits, scaled and jittered into 28x28
/// frames. A deterministic stand-in corpus with the IDX geometry of the
/// handwritten-digit sets.
const DIGIT_FONT: [[u8; 7]; 10] = [
    // Each row is 5 bits, top to bottom.
    [
        0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110,
    ], // 0
    [
        0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110,
    ], // 1
    [
        0b01110, 0b10001, 0b00001, 0b00110, 0b01000, 0b10000, 0b11111,
    ], // 2
    [
        0b01110, 0b10001, 0b00001, 0b00110, 0b00001, 0b10001, 0b01110,
    ], // 3
    [
        0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010,
    ], // 4
    [
        0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110,
    ], // 5
    [
        0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110,
    ], // 6
    [
        0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000,
    ], // 7
    [
        0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110,
    ], // 8
    [
        0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100,
    ], // 9
];

/// Render `count` jittered 28x28 glyph images of the requested digit
/// classes, labels cycling through `classes`. Stroke pixels land in
/// [0.8, 1], background in [0, 0.1].
pub fn synthetic_digits<F: Real>(count: usize, classes: &[u8], seed: u64) -> Dataset<F> {
    assert!(!classes.is_empty() && classes.iter().all(|&c| c < 10));
    let (rows, cols) = (28, 28);
    let scale = 3; // 5x7 -> 15x21
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images = Vec::with_capacity(count);
    let mut labels = Vec::with_capacity(count);
    for i in 0..count {
        let digit = classes[i % classes.len()];
        let glyph = &DIGIT_FONT[digit as usize];
        let dx = 6 + rng.gen_range(0..5) as usize - 2; // horizontal jitter ±2
        let dy = 3 + rng.gen_range(0..5) as usize - 2;
        let mut img = vec![F::zero(); rows * cols];
        for (p, v) in img.iter_mut().enumerate() {
            let (r, c) = (p / cols, p % cols);
            let inside = r >= dy
                && r < dy + 7 * scale
                && c >= dx
                && c < dx + 5 * scale
                && glyph[(r - dy) / scale] >> (4 - (c - dx) / scale) & 1 == 1;
            let value = if inside {
                rng.gen_range(0.8..1.0)
            } else {
                rng.gen_range(0.0..0.1)
            };
            *v = F::of(value);
        }
        images.push(img);
        labels.push(digit);
    }
    Dataset::new(images, labels, rows, cols)
}

/// Embed a finite data space as a pixel corpus: one image per point, one
/// pixel per feature, pixel f lit exactly when the point lies in feature f.
/// The companion features make corpus matching coincide with the stored
/// extensions, so sampled estimates reduce to the exact tabular quantities.
pub fn embed_space<F: Real>(space: &FiniteDataSpace<F>) -> (Dataset<F>, Vec<PixelFeature<F>>) {
    let d = space.n_features();
    let images: Vec<Vec<F>> = (0..space.n_points())
        .map(|p| {
            (0..d)
                .map(|f| {
                    if space.contains(f, p) {
                        F::one()
                    } else {
                        F::zero()
                    }
                })
                .collect()
        })
        .collect();
    let labels: Vec<u8> = (0..space.n_points())
        .map(|p| if space.label(p) == Label::Minus { 0 } else { 1 })
        .collect();
    let features = (0..d)
        .map(|f| PixelFeature {
            support: vec![f],
            values: vec![F::one()],
            tolerance: F::zero(),
        })
        .collect();
    (Dataset::new(images, labels, 1, d), features)
}
