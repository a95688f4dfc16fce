//! Deterministic parallel Monte Carlo.
//!
//! Samples are split into a fixed number of chunks, each drawing from its own
//! ChaCha stream of the given seed. Chunk sums are combined in chunk order, so
//! results do not depend on the number of worker threads. Standard errors come
//! from the delete-one-chunk jackknife.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;

/// Number of independent chunks (and jackknife groups).
pub const CHUNKS: usize = 256;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl Estimate {
    /// `|mean − target|` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.mean - target).abs() / self.std_error.max(f64::MIN_POSITIVE)
    }

    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        (self.mean - target).abs() <= sigmas * self.std_error
    }
}

/// RNG for chunk `chunk` of a run with the given seed.
pub fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Estimates the means of a `dim`-vector valued random variable.
///
/// `sample` fills its output slice with one draw. All components share the
/// same draws (common random numbers).
pub fn estimate_vec<F>(n: usize, seed: u64, dim: usize, sample: F) -> Result<Vec<Estimate>>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) -> Result<()> + Sync,
{
    let chunks = CHUNKS.min(n.max(1));
    let sizes: Vec<usize> = (0..chunks)
        .map(|c| n / chunks + usize::from(c < n % chunks))
        .collect();
    let sums: Vec<Result<Vec<f64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c);
            let mut total = vec![0.0; dim];
            let mut draw = vec![0.0; dim];
            for _ in 0..sizes[c] {
                draw.iter_mut().for_each(|x| *x = 0.0);
                sample(&mut rng, &mut draw)?;
                total.iter_mut().zip(&draw).for_each(|(t, d)| *t += d);
            }
            Ok(total)
        })
        .collect();
    let sums: Vec<Vec<f64>> = sums.into_iter().collect::<Result<_>>()?;
    Ok((0..dim)
        .map(|d| jackknife(&sums.iter().map(|s| s[d]).collect::<Vec<_>>(), &sizes))
        .collect())
}

/// Scalar version of [`estimate_vec`].
pub fn estimate<F>(n: usize, seed: u64, sample: F) -> Result<Estimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    let v = estimate_vec(n, seed, 1, |rng, out| {
        out[0] = sample(rng)?;
        Ok(())
    })?;
    Ok(v[0])
}

/// Delete-one-group jackknife of the overall mean from group sums and sizes.
pub fn jackknife(sums: &[f64], sizes: &[usize]) -> Estimate {
    let n: usize = sizes.iter().sum();
    let total: f64 = sums.iter().sum();
    let mean = total / n as f64;
    let groups: Vec<(f64, usize)> = sums
        .iter()
        .zip(sizes)
        .filter(|(_, s)| **s > 0)
        .map(|(a, b)| (*a, *b))
        .collect();
    let g = groups.len();
    if g < 2 || groups.iter().any(|(_, s)| *s == n) {
        return Estimate {
            mean,
            std_error: f64::INFINITY,
            samples: n,
        };
    }
    let loo: Vec<f64> = groups
        .iter()
        .map(|(s, c)| (total - s) / (n - c) as f64)
        .collect();
    let bar = loo.iter().sum::<f64>() / g as f64;
    let var = (g as f64 - 1.0) / g as f64 * loo.iter().map(|x| (x - bar).powi(2)).sum::<f64>();
    Estimate {
        mean,
        std_error: var.sqrt(),
        samples: n,
    }
}
