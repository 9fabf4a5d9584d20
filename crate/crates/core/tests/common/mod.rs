//! Test-only reference implementations. Nothing here calls into the
//! crate's eigensolver or sketch update.

#![allow(dead_code)]

use fdcov::linalg::SymMatrix;
use fdcov::stream::Family;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type Dense = Vec<Vec<f64>>;

pub fn to_dense(s: &SymMatrix<f64>) -> Dense {
    (0..s.dim()).map(|i| s.row(i).to_vec()).collect()
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, d: usize) -> SymMatrix<f64> {
    let scale: f64 = 10f64.powf(rng.gen_range(-2.0..3.0));
    SymMatrix::from_upper_fn(d, |_, _| {
        let z: f64 = StandardNormal.sample(rng);
        scale * z
    })
}

pub fn random_vectors(rng: &mut ChaCha8Rng, d: usize, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| StandardNormal.sample(rng)).collect())
        .collect()
}

/// `Σ x xᵀ` with a plain triple loop over all `d²` entries.
pub fn naive_gram(d: usize, vectors: &[Vec<f64>]) -> Dense {
    let mut out = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            for v in vectors {
                out[i][j] += v[i] * v[j];
            }
        }
    }
    out
}

pub fn max_abs_diff(a: &Dense, b: &SymMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            worst = worst.max((x - b.get(i, j)).abs());
        }
    }
    worst
}

/// Number of eigenvalues of `a` strictly below `mu`, from the signs of the
/// pivots of an unpivoted `LDLᵀ` factorization of `a − μI` (Sylvester's law
/// of inertia).
fn count_below(a: &Dense, mu: f64) -> usize {
    let n = a.len();
    let mut m: Dense = a.clone();
    for i in 0..n {
        m[i][i] -= mu;
    }
    let tiny = 1e-300;
    let mut negatives = 0;
    for k in 0..n {
        let mut p = m[k][k];
        if p == 0.0 {
            p = -tiny;
        }
        if p < 0.0 {
            negatives += 1;
        }
        for i in k + 1..n {
            let f = m[i][k] / p;
            for j in k + 1..n {
                m[i][j] -= f * m[k][j];
            }
        }
    }
    negatives
}

/// Descending eigenvalues by bisection on the inertia count.
pub fn bisection_eigenvalues(a: &Dense) -> Vec<f64> {
    let n = a.len();
    let radius = (0..n)
        .map(|i| a[i].iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        + 1.0;
    (0..n)
        .map(|idx| {
            // want the (n - idx)-th smallest eigenvalue
            let target = n - idx;
            let (mut lo, mut hi) = (-radius, radius);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if count_below(a, mid) >= target {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Solves `m x = b` with partial pivoting.
fn solve(mut m: Dense, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].abs().partial_cmp(&m[j][k].abs()).unwrap())
            .unwrap();
        m.swap(k, p);
        b.swap(k, p);
        let piv = if m[k][k] == 0.0 { 1e-300 } else { m[k][k] };
        for i in k + 1..n {
            let f = m[i][k] / piv;
            for j in k..n {
                m[i][j] -= f * m[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| m[k][j] * x[j]).sum();
        let piv = if m[k][k] == 0.0 { 1e-300 } else { m[k][k] };
        x[k] = (b[k] - s) / piv;
    }
    x
}

/// Eigenvectors for the first `count` descending eigenvalues by shifted
/// inverse iteration, orthogonalized against the earlier ones.
pub fn inverse_iteration_vectors(a: &Dense, values: &[f64], count: usize) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for &lambda in values.iter().take(count) {
        let shift = lambda + 1e-10 * lambda.abs().max(1.0);
        let mut m = a.clone();
        for i in 0..n {
            m[i][i] -= shift;
        }
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
        for _ in 0..4 {
            x = solve(m.clone(), x);
            for u in &out {
                let dot: f64 = x.iter().zip(u).map(|(p, q)| p * q).sum();
                for (p, q) in x.iter_mut().zip(u) {
                    *p -= dot * q;
                }
            }
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        out.push(x);
    }
    out
}

/// Straight-line Frequent Directions over dense `Vec<Vec<f64>>` using the
/// bisection/inverse-iteration eigensolver above. Returns every
/// intermediate sketch.
pub fn reference_fd(d: usize, ell: usize, batches: &[Vec<Vec<f64>>]) -> Vec<Dense> {
    let mut sketch = vec![vec![0.0; d]; d];
    let mut history = Vec::new();
    for batch in batches {
        let gram = naive_gram(d, batch);
        let mut s = sketch.clone();
        for i in 0..d {
            for j in 0..d {
                s[i][j] += gram[i][j];
            }
        }
        let values = bisection_eigenvalues(&s);
        let lambda_ell = values[ell - 1].max(0.0);
        let keep = values.iter().take(ell - 1).filter(|&&v| v - lambda_ell > 0.0).count();
        let vectors = inverse_iteration_vectors(&s, &values, keep);
        let mut next = vec![vec![0.0; d]; d];
        for (v, u) in values.iter().zip(&vectors) {
            let w = v - lambda_ell;
            for i in 0..d {
                for j in 0..d {
                    next[i][j] += w * u[i] * u[j];
                }
            }
        }
        sketch = next;
        history.push(sketch.clone());
    }
    history
}

/// One randomized stream configuration.
#[derive(Debug, Clone)]
pub struct StreamCase {
    pub id: usize,
    pub dim: usize,
    pub ell: usize,
    pub steps: usize,
    pub width: usize,
    pub family: Family,
    pub seed: u64,
}

impl StreamCase {
    pub fn vectors(&self) -> Vec<Vec<f64>> {
        fdcov::stream::Generator::new(self.family, self.dim, self.seed)
            .unwrap()
            .take(self.steps * self.width)
            .collect()
    }
}

/// `count` cases spanning d in 2..=max_dim, ell in 1..=d, T in 1..=max_steps,
/// widths 1..=ell+2, and the four generator families (low-rank alternating
/// between rank below and at-or-above ell).
pub fn stream_cases(count: usize, max_dim: usize, max_steps: usize, seed: u64) -> Vec<StreamCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|id| {
            let dim = rng.gen_range(2..=max_dim);
            let ell = rng.gen_range(1..=dim);
            let steps = rng.gen_range(1..=max_steps);
            let width = rng.gen_range(1..=ell + 2);
            let family = match id % 5 {
                0 => Family::Gaussian,
                1 => Family::LowRank {
                    rank: if ell > 1 { rng.gen_range(1..ell) } else { 1 },
                    noise: 0.0,
                },
                2 => Family::LowRank {
                    rank: rng.gen_range(ell..=dim),
                    noise: 0.05,
                },
                3 => Family::Rotations,
                _ => Family::Repeated,
            };
            StreamCase {
                id,
                dim,
                ell,
                steps,
                width,
                family,
                seed: rng.gen(),
            }
        })
        .collect()
}
