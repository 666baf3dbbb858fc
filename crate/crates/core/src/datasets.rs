//! Seeded toy datasets and the 2×2 pixel task.
//!
//! Random draws use [`crate::rng`]. For the two point datasets each sample
//! draws `x1`, then `x2` (and for the band a third uniform `u` deciding the
//! label), all from the same stream.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: i32,
}

/// How the band labelling probability is formed from `(x1 + x2)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandProbability {
    /// `min(1, (x1 + x2)²)`.
    #[default]
    Min,
    /// `max(1, (x1 + x2)²)`, which labels every point as signal.
    Max,
}

impl BandProbability {
    pub fn probability(self, x1: f64, x2: f64) -> f64 {
        let s = (x1 + x2).powi(2);
        match self {
            BandProbability::Min => s.min(1.0),
            BandProbability::Max => s.max(1.0),
        }
    }
}

impl std::str::FromStr for BandProbability {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(BandProbability::Min),
            "max" => Ok(BandProbability::Max),
            _ => Err(Error::InvalidConfig(format!("band probability must be min or max, got {s:?}"))),
        }
    }
}

pub fn circle_label(x1: f64, x2: f64) -> i32 {
    if x1 * x1 + x2 * x2 > 0.5 {
        1
    } else {
        -1
    }
}

/// `n` points uniform on `[−1, 1]²`, labelled `+1` outside the circle of
/// radius `√½` and `−1` inside.
pub fn circle_dataset(n: usize, seed: u64) -> Vec<Sample> {
    let mut r = rng::seeded(seed);
    (0..n)
        .map(|_| {
            let x1 = rng::uniform(&mut r, -1.0, 1.0);
            let x2 = rng::uniform(&mut r, -1.0, 1.0);
            Sample {
                features: vec![x1, x2],
                label: circle_label(x1, x2),
            }
        })
        .collect()
}

/// `n` points uniform on `[−1, 1]²`, labelled `+2` with probability given by
/// `reading` and `−2` otherwise.
pub fn band_dataset(n: usize, seed: u64, reading: BandProbability) -> Vec<Sample> {
    let mut r = rng::seeded(seed);
    (0..n)
        .map(|_| {
            let x1 = rng::uniform(&mut r, -1.0, 1.0);
            let x2 = rng::uniform(&mut r, -1.0, 1.0);
            let u = rng::unit_f64(&mut r);
            let label = if u < reading.probability(x1, x2) { 2 } else { -2 };
            Sample {
                features: vec![x1, x2],
                label,
            }
        })
        .collect()
}

/// Pixels `(p00, p01, p10, p11)` of image `i` (row, column), read from the
/// bits of `i` with `p00` most significant.
pub fn pixel_image(i: usize) -> [u8; 4] {
    [(i >> 3) as u8 & 1, (i >> 2) as u8 & 1, (i >> 1) as u8 & 1, i as u8 & 1]
}

/// 1 when some column has both pixels set.
pub fn pixel_label(p: [u8; 4]) -> i32 {
    let [p00, p01, p10, p11] = p;
    i32::from((p00 & p10) | (p01 & p11))
}

/// All 16 images in index order.
pub fn pixel2x2_dataset() -> Vec<Sample> {
    (0..16)
        .map(|i| {
            let p = pixel_image(i);
            Sample {
                features: p.iter().map(|&b| f64::from(b)).collect(),
                label: pixel_label(p),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub seed: u64,
    pub train: Vec<Sample>,
    pub test: Vec<Sample>,
}

/// Balanced 7 + 7 selection of the pixel images split 5 + 5 / 2 + 2.
///
/// Draw order: shuffle the 9 background images and keep the first 7, then
/// shuffle the 7 signal images, then shuffle the 7 kept backgrounds. The
/// first 5 of each list train, the last 2 test. Train and test list signal
/// samples first.
pub fn balanced_split(seed: u64) -> Split {
    let all = pixel2x2_dataset();
    let (mut sig, mut bkg): (Vec<Sample>, Vec<Sample>) = all.into_iter().partition(|s| s.label == 1);
    let mut r = rng::seeded(seed);
    rng::shuffle(&mut r, &mut bkg);
    bkg.truncate(sig.len());
    rng::shuffle(&mut r, &mut sig);
    rng::shuffle(&mut r, &mut bkg);
    let train = sig[..5].iter().chain(&bkg[..5]).cloned().collect();
    let test = sig[5..].iter().chain(&bkg[5..]).cloned().collect();
    Split { seed, train, test }
}

/// Writes samples as CSV with a `# seed=…` comment line first.
pub fn write_csv(mut out: impl Write, samples: &[Sample], columns: &[&str], seed: Option<u64>) -> Result<()> {
    if let Some(s) = seed {
        writeln!(out, "# seed={s}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = columns.to_vec();
    header.push("label");
    w.write_record(&header)?;
    for s in samples {
        if s.features.len() != columns.len() {
            return Err(Error::DimensionMismatch {
                expected: columns.len(),
                got: s.features.len(),
            });
        }
        let mut row: Vec<String> = s.features.iter().map(|x| format!("{x:?}")).collect();
        row.push(s.label.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads CSV written by [`write_csv`]; returns the samples and the seed
/// comment if present.
pub fn read_csv(mut input: impl Read) -> Result<(Vec<Sample>, Option<u64>)> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let seed = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .find_map(|l| l.trim_start_matches('#').trim().strip_prefix("seed="))
        .map(|s| s.trim().parse::<u64>())
        .transpose()
        .map_err(|e| Error::InvalidConfig(format!("bad seed comment: {e}")))?;
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let mut samples = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let n = rec.len();
        if n == 0 {
            continue;
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidConfig(format!("bad number {s:?}: {e}")))
        };
        let features = rec.iter().take(n - 1).map(parse).collect::<Result<_>>()?;
        let label = rec[n - 1]
            .trim()
            .parse::<i32>()
            .map_err(|e| Error::InvalidConfig(format!("bad label: {e}")))?;
        samples.push(Sample { features, label });
    }
    Ok((samples, seed))
}
