//! Indefinite-metric linear algebra on `E_v^n`.
//!
//! The metric is `diag(-1 × v, +1 × (n - v))`: the first `v` coordinates are
//! the negative (timelike) directions.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ambient dimension `n` and index `v` of the flat metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricSignature {
    n: usize,
    v: usize,
}

impl MetricSignature {
    pub fn new(n: usize, v: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::input("n", format!("dimension must be at least 2, got {n}")));
        }
        if v >= n {
            return Err(Error::input("v", format!("index must satisfy 0 <= v < n = {n}, got {v}")));
        }
        Ok(Self { n, v })
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// Diagonal of the metric tensor.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| if i < self.v { -1.0 } else { 1.0 }).collect()
    }

    fn check_dim(&self, what: &str, u: &[f64]) -> Result<()> {
        if u.len() != self.n {
            return Err(Error::input(
                what,
                format!("expected {} components, got {}", self.n, u.len()),
            ));
        }
        Ok(())
    }
}

/// A frame sign `ε_i = ⟨V_i, V_i⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    pub fn from_int(x: i64) -> Option<Self> {
        match x {
            -1 => Some(Sign::Minus),
            1 => Some(Sign::Plus),
            _ => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }
}

/// Checks that `signs` has exactly `v` negative entries.
pub(crate) fn check_sign_count(signs: &[Sign], sig: &MetricSignature) -> Result<()> {
    let negatives = signs.iter().filter(|s| **s == Sign::Minus).count();
    if negatives != sig.v() {
        let plural = if sig.v() == 1 { "" } else { "s" };
        return Err(Error::input(
            "eps",
            format!(
                "expected {} negative sign{plural} for v={}, got {negatives}",
                sig.v(),
                sig.v()
            ),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Null,
}

impl std::fmt::Display for CausalCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            CausalCharacter::Spacelike => "spacelike",
            CausalCharacter::Timelike => "timelike",
            CausalCharacter::Null => "null",
        };
        f.write_str(name)
    }
}

/// A pseudo-orthonormal frame: row `i` of `vectors` holds the coordinates of
/// `V_i`, and `signs[i]` is its expected `⟨V_i, V_i⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameState {
    pub vectors: DMatrix<f64>,
    pub signs: Vec<Sign>,
}

impl FrameState {
    pub fn new(vectors: DMatrix<f64>, signs: Vec<Sign>) -> Result<Self> {
        if !vectors.is_square() {
            return Err(Error::input(
                "frame",
                format!("expected a square matrix, got {}x{}", vectors.nrows(), vectors.ncols()),
            ));
        }
        if signs.len() != vectors.nrows() {
            return Err(Error::input(
                "eps",
                format!("expected {} signs, got {}", vectors.nrows(), signs.len()),
            ));
        }
        Ok(Self { vectors, signs })
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }

    /// The standard basis reordered so that the `-1` frame vectors land on the
    /// negative metric directions, in order. Equal to the identity when the
    /// negative signs come first.
    pub fn canonical(signs: &[Sign], sig: &MetricSignature) -> Result<Self> {
        if signs.len() != sig.n() {
            return Err(Error::input(
                "eps",
                format!("expected {} signs, got {}", sig.n(), signs.len()),
            ));
        }
        check_sign_count(signs, sig)?;
        let n = sig.n();
        let mut vectors = DMatrix::zeros(n, n);
        let (mut next_neg, mut next_pos) = (0, sig.v());
        for (i, s) in signs.iter().enumerate() {
            let axis = match s {
                Sign::Minus => {
                    next_neg += 1;
                    next_neg - 1
                }
                Sign::Plus => {
                    next_pos += 1;
                    next_pos - 1
                }
            };
            vectors[(i, axis)] = 1.0;
        }
        Ok(Self {
            vectors,
            signs: signs.to_vec(),
        })
    }
}

pub fn inner(u: &[f64], w: &[f64], sig: &MetricSignature) -> Result<f64> {
    sig.check_dim("u", u)?;
    sig.check_dim("w", w)?;
    Ok(raw_inner(u, w, sig.v()))
}

fn raw_inner(u: &[f64], w: &[f64], v: usize) -> f64 {
    let negative: f64 = u[..v].iter().zip(&w[..v]).map(|(a, b)| a * b).sum();
    let positive: f64 = u[v..].iter().zip(&w[v..]).map(|(a, b)| a * b).sum();
    positive - negative
}

/// Classifies `u` by the exact sign of `⟨u, u⟩`. The zero vector is spacelike.
pub fn causal_character(u: &[f64], sig: &MetricSignature) -> Result<CausalCharacter> {
    let q = inner(u, u, sig)?;
    Ok(if q > 0.0 || u.iter().all(|x| *x == 0.0) {
        CausalCharacter::Spacelike
    } else if q < 0.0 {
        CausalCharacter::Timelike
    } else {
        CausalCharacter::Null
    })
}

/// `√|⟨u, u⟩|`.
pub fn pseudo_norm(u: &[f64], sig: &MetricSignature) -> Result<f64> {
    Ok(inner(u, u, sig)?.abs().sqrt())
}

/// `G - diag(ε)` where `G_ij = ⟨V_i, V_j⟩`. Its max-abs entry is the
/// orthonormality defect of the frame.
pub fn frame_residual(frame: &FrameState, sig: &MetricSignature) -> Result<DMatrix<f64>> {
    let n = sig.n();
    if frame.dim() != n {
        return Err(Error::input(
            "frame",
            format!("expected {n}x{n} frame, got {0}x{0}", frame.dim()),
        ));
    }
    check_sign_count(&frame.signs, sig)
        .map_err(|e| Error::Validation(e.to_string()))?;
    let rows: Vec<Vec<f64>> = frame
        .vectors
        .row_iter()
        .map(|r| r.iter().copied().collect())
        .collect();
    Ok(DMatrix::from_fn(n, n, |i, j| {
        let g = raw_inner(&rows[i], &rows[j], sig.v());
        if i == j {
            g - frame.signs[i].value()
        } else {
            g
        }
    }))
}

/// Largest absolute entry of a matrix; 0 for an empty one.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Gram–Schmidt on the rows of `vectors` under the diagonal metric
/// `metric`, normalising each row to `⟨V_i, V_i⟩ = ±1`.
///
/// Rows must stay non-null throughout; a null row is left unnormalised.
pub fn orthonormalize_rows(vectors: &mut DMatrix<f64>, metric: &[f64]) {
    let n = vectors.nrows();
    let dot = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).zip(metric).map(|((x, y), g)| x * y * g).sum()
    };
    let mut rows: Vec<Vec<f64>> = vectors
        .row_iter()
        .map(|r| r.iter().copied().collect())
        .collect();
    for i in 0..n {
        for j in 0..i {
            let (done, rest) = rows.split_at_mut(i);
            let basis = &done[j];
            let self_dot = dot(basis, basis);
            let coeff = dot(&rest[0], basis) / self_dot;
            for (x, b) in rest[0].iter_mut().zip(basis) {
                *x -= coeff * b;
            }
        }
        let norm = dot(&rows[i], &rows[i]).abs().sqrt();
        if norm > 0.0 {
            rows[i].iter_mut().for_each(|x| *x /= norm);
        }
    }
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            vectors[(i, j)] = *x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig31() -> MetricSignature {
        MetricSignature::new(3, 1).unwrap()
    }

    #[test]
    fn signature_bounds() {
        assert!(MetricSignature::new(1, 0).is_err());
        assert!(MetricSignature::new(3, 3).is_err());
        assert_eq!(MetricSignature::new(4, 1).unwrap().diagonal(), vec![-1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn inner_examples() {
        let sig = sig31();
        assert_eq!(inner(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &sig).unwrap(), -1.0);
        assert_eq!(inner(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &sig).unwrap(), 0.0);
        assert_eq!(inner(&[1.0, 1.0, 0.0], &[1.0, 1.0, 0.0], &sig).unwrap(), 0.0);
        assert!(matches!(
            inner(&[1.0, 0.0], &[1.0, 0.0, 0.0], &sig),
            Err(Error::Input { .. })
        ));
    }

    #[test]
    fn causal_examples() {
        let sig = sig31();
        assert_eq!(causal_character(&[1.0, 0.0, 0.0], &sig).unwrap(), CausalCharacter::Timelike);
        assert_eq!(causal_character(&[0.0, 0.0, 0.0], &sig).unwrap(), CausalCharacter::Spacelike);
        assert_eq!(causal_character(&[1.0, 1.0, 0.0], &sig).unwrap(), CausalCharacter::Null);
        assert!(causal_character(&[1.0], &sig).is_err());
    }

    #[test]
    fn pseudo_norm_examples() {
        let sig = sig31();
        assert_eq!(pseudo_norm(&[1.0, 0.0, 0.0], &sig).unwrap(), 1.0);
        assert_eq!(pseudo_norm(&[1.0, 1.0, 0.0], &sig).unwrap(), 0.0);
        assert_eq!(pseudo_norm(&[0.0, 3.0, 4.0], &sig).unwrap(), 5.0);
    }

    #[test]
    fn frame_residual_examples() {
        let sig = sig31();
        let id = DMatrix::identity(3, 3);
        let f = FrameState::new(id.clone(), vec![Sign::Minus, Sign::Plus, Sign::Plus]).unwrap();
        assert_eq!(max_abs(&frame_residual(&f, &sig).unwrap()), 0.0);

        // Sign count does not match v.
        let f = FrameState::new(id.clone(), vec![Sign::Plus; 3]).unwrap();
        assert!(matches!(frame_residual(&f, &sig), Err(Error::Validation(_))));
        // The same frame is valid in E^3.
        let e3 = MetricSignature::euclidean(3).unwrap();
        assert_eq!(max_abs(&frame_residual(&f, &e3).unwrap()), 0.0);

        let mut scaled = id;
        scaled[(0, 0)] = 2.0;
        let f = FrameState::new(scaled, vec![Sign::Minus, Sign::Plus, Sign::Plus]).unwrap();
        let r = frame_residual(&f, &sig).unwrap();
        assert_eq!(r[(0, 0)], -3.0);
        assert_eq!(max_abs(&r), 3.0);
    }

    #[test]
    fn wrong_signs_residual_entry() {
        // Identity rows with all-plus signs measured against a (-,+,+) metric:
        // G11 = -1 but eps1 = +1. The sign count check rejects this frame, so
        // compute the entry through the raw Gram matrix.
        let sig = sig31();
        let g11 = inner(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &sig).unwrap();
        assert_eq!(g11 - Sign::Plus.value(), -2.0);
    }

    #[test]
    fn canonical_frame_places_negatives_first() {
        let sig = sig31();
        let f = FrameState::canonical(&[Sign::Plus, Sign::Minus, Sign::Plus], &sig).unwrap();
        assert_eq!(f.vectors[(0, 1)], 1.0);
        assert_eq!(f.vectors[(1, 0)], 1.0);
        assert_eq!(f.vectors[(2, 2)], 1.0);
        assert_eq!(max_abs(&frame_residual(&f, &sig).unwrap()), 0.0);

        let f = FrameState::canonical(&[Sign::Minus, Sign::Plus, Sign::Plus], &sig).unwrap();
        assert_eq!(f.vectors, DMatrix::identity(3, 3));
        assert!(FrameState::canonical(&[Sign::Plus; 3], &sig).is_err());
    }

    #[test]
    fn gram_schmidt_restores_boosted_frame() {
        let sig = sig31();
        let (ch, sh) = (0.7_f64.cosh(), 0.7_f64.sinh());
        let mut m = DMatrix::from_row_slice(3, 3, &[ch, sh, 0.0, sh, ch, 0.0, 0.0, 0.0, 1.0]);
        m[(0, 0)] *= 1.0 + 1e-6;
        m[(1, 2)] = 1e-6;
        orthonormalize_rows(&mut m, &sig.diagonal());
        let f = FrameState::new(m, vec![Sign::Minus, Sign::Plus, Sign::Plus]).unwrap();
        assert!(max_abs(&frame_residual(&f, &sig).unwrap()) < 1e-14);
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-10.0..10.0_f64, 4)
    }

    proptest! {
        #[test]
        fn bilinear(u in vec3(), w in vec3(), z in vec3(), a in -5.0..5.0_f64, b in -5.0..5.0_f64, v in 0usize..4) {
            let sig = MetricSignature::new(4, v).unwrap();
            let mix: Vec<f64> = u.iter().zip(&w).map(|(x, y)| a * x + b * y).collect();
            let lhs = inner(&mix, &z, &sig).unwrap();
            let rhs = a * inner(&u, &z, &sig).unwrap() + b * inner(&w, &z, &sig).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + lhs.abs()));
        }

        #[test]
        fn euclidean_is_dot(u in vec3(), w in vec3()) {
            let sig = MetricSignature::euclidean(4).unwrap();
            let dot: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
            prop_assert!((inner(&u, &w, &sig).unwrap() - dot).abs() <= 1e-12 * (1.0 + dot.abs()));
        }

        #[test]
        fn causal_scale_invariant(u in vec3(), c in prop_oneof![-100.0..-1e-3_f64, 1e-3..100.0_f64], v in 0usize..4) {
            let sig = MetricSignature::new(4, v).unwrap();
            let q = inner(&u, &u, &sig).unwrap();
            // Only assert where the sign of the quadratic form is robust to rounding.
            prop_assume!(q.abs() > 1e-9 * u.iter().map(|x| x * x).sum::<f64>());
            let cu: Vec<f64> = u.iter().map(|x| c * x).collect();
            prop_assert_eq!(causal_character(&u, &sig).unwrap(), causal_character(&cu, &sig).unwrap());
        }

        #[test]
        fn norm_squared(u in vec3(), v in 0usize..4) {
            let sig = MetricSignature::new(4, v).unwrap();
            let q = inner(&u, &u, &sig).unwrap().abs();
            let n = pseudo_norm(&u, &sig).unwrap();
            prop_assert!((n * n - q).abs() <= 4.0 * f64::EPSILON * q.max(f64::MIN_POSITIVE));
        }
    }
}
