//! Seeded synthetic vector streams.
//!
//! All families draw from `ChaCha8Rng`, whose output is specified
//! independently of platform, so a seed names the same stream everywhere.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sketch::Batch;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// i.i.d. standard normal entries.
    Gaussian,
    /// `Σ_{j<rank} gⱼ/(j+1) · bⱼ + noise · z` over a fixed random orthonormal
    /// basis `b`, with standard normal `g` and `z`.
    LowRank { rank: usize, noise: f64 },
    /// Successive random orthonormal frames, emitted one unit vector at a
    /// time. Keeps the covariance spectrum nearly flat, which maximizes
    /// shrinkage.
    Rotations,
    /// The same random unit vector every time.
    Repeated,
}

impl Family {
    pub const NAMES: [&'static str; 4] = ["gaussian", "low-rank", "rotations", "repeated"];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gaussian => write!(f, "gaussian"),
            Family::LowRank { rank, noise } => write!(f, "low-rank(rank={rank}, noise={noise})"),
            Family::Rotations => write!(f, "rotations"),
            Family::Repeated => write!(f, "repeated"),
        }
    }
}

/// Parses the family name; `low-rank` gets rank 2 and noise 0.01.
impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Family::Gaussian),
            "low-rank" | "lowrank" => Ok(Family::LowRank {
                rank: 2,
                noise: 0.01,
            }),
            "rotations" => Ok(Family::Rotations),
            "repeated" => Ok(Family::Repeated),
            other => Err(Error::param(format!(
                "unknown generator {other:?}, expected one of {}",
                Family::NAMES.join(", ")
            ))),
        }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
    dim: usize,
    family: Family,
    basis: Vec<Vec<f64>>,
    cursor: usize,
}

impl Generator {
    pub fn new(family: Family, dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("generator dimension must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = match family {
            Family::Gaussian | Family::Rotations => Vec::new(),
            Family::LowRank { rank, .. } => orthonormal_frame(&mut rng, dim, rank.min(dim)),
            Family::Repeated => orthonormal_frame(&mut rng, dim, 1),
        };
        Ok(Self {
            rng,
            dim,
            family,
            basis,
            cursor: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }
}

impl Iterator for Generator {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let d = self.dim;
        let v = match self.family {
            Family::Gaussian => (0..d).map(|_| self.normal()).collect(),
            Family::LowRank { noise, .. } => {
                let mut v = vec![0.0; d];
                for j in 0..self.basis.len() {
                    let w = self.normal() / (j + 1) as f64;
                    for (x, b) in v.iter_mut().zip(&self.basis[j]) {
                        *x += w * b;
                    }
                }
                if noise != 0.0 {
                    for x in v.iter_mut() {
                        *x += noise * self.normal();
                    }
                }
                v
            }
            Family::Rotations => {
                if self.cursor == self.basis.len() {
                    self.basis = orthonormal_frame(&mut self.rng, d, d);
                    self.cursor = 0;
                }
                self.cursor += 1;
                self.basis[self.cursor - 1].clone()
            }
            Family::Repeated => self.basis[0].clone(),
        };
        Some(v)
    }
}

/// `count` orthonormal vectors from Gram–Schmidt (applied twice) on
/// Gaussian draws.
fn orthonormal_frame(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(count);
    while frame.len() < count {
        let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        for _ in 0..2 {
            for u in &frame {
                let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= dot * y;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            frame.push(v);
        }
    }
    frame
}

/// Groups consecutive vectors into batches of `batch_size` columns; a short
/// remainder becomes the final batch.
pub fn into_batches<T: Scalar>(
    dim: usize,
    vectors: &[Vec<f64>],
    batch_size: usize,
) -> Result<Vec<Batch<T>>> {
    if batch_size == 0 {
        return Err(Error::param("batch size must be positive"));
    }
    vectors
        .chunks(batch_size)
        .map(|chunk| {
            let mut data = Vec::with_capacity(dim * chunk.len());
            for v in chunk {
                if v.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: v.len(),
                    });
                }
                data.extend(v.iter().map(|&x| T::of(x)));
            }
            Batch::from_column_major(dim, data)
        })
        .collect()
}
