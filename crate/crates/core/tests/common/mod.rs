#![allow(dead_code)]

use closedcurve::{CurvatureFunction, CurvatureProfile, MetricSignature, Sign, SystemSpec};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn euclid(kappa: f64, sigma: f64) -> SystemSpec {
    CurvatureProfile::euclidean_constant(1.0, &[kappa, sigma])
        .unwrap()
        .into()
}

/// Fourier curvature with up to three harmonics and `Σ|coeff| = bound`.
pub fn random_fourier(rng: &mut impl Rng, bound: f64) -> CurvatureFunction {
    let harmonics = rng.random_range(0..=3);
    let mut raw: Vec<f64> = (0..1 + 2 * harmonics)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let total: f64 = raw.iter().map(|x| x.abs()).sum();
    let scale = bound * rng.random_range(0.2..1.0) / total.max(1e-12);
    raw.iter_mut().for_each(|x| *x *= scale);
    let a0 = raw[0];
    let a = raw[1..1 + harmonics].to_vec();
    let b = raw[1 + harmonics..].to_vec();
    CurvatureFunction::Fourier { a0, a, b }
}

/// `n ∈ 2..=5`, any index `v < n` with the negative signs scattered, every
/// curvature bounded by `bound` in sup norm, `ω = 1`.
pub fn random_profile(rng: &mut impl Rng, bound: f64) -> CurvatureProfile {
    let n = rng.random_range(2..=5);
    let v = rng.random_range(0..n);
    let mut eps: Vec<Sign> = (0..n)
        .map(|i| if i < v { Sign::Minus } else { Sign::Plus })
        .collect();
    eps.shuffle(rng);
    let curvatures = (0..n - 1).map(|_| random_fourier(rng, bound)).collect();
    CurvatureProfile::new(MetricSignature::new(n, v).unwrap(), 1.0, curvatures, eps).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
