//! Periodic curvature data and the coefficient matrices built from it.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::{check_sign_count, MetricSignature, Sign};

/// A single ω-periodic curvature function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureFunction {
    Constant(f64),
    /// `a0 + Σ a[m-1] cos(2πms/ω) + b[m-1] sin(2πms/ω)`.
    Fourier {
        #[serde(default)]
        a0: f64,
        #[serde(default)]
        a: Vec<f64>,
        #[serde(default)]
        b: Vec<f64>,
    },
    /// Uniform samples over `[0, ω)`, linearly interpolated with wraparound.
    Samples(Vec<f64>),
}

impl CurvatureFunction {
    fn validate(&self, field: &str) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self {
            CurvatureFunction::Constant(c) if !c.is_finite() => {
                Err(Error::input(field, "constant must be finite"))
            }
            CurvatureFunction::Fourier { a0, a, b } => {
                if !a0.is_finite() || !finite(a) || !finite(b) {
                    return Err(Error::input(field, "fourier coefficients must be finite"));
                }
                Ok(())
            }
            CurvatureFunction::Samples(v) => {
                if v.is_empty() {
                    return Err(Error::input(field, "samples must not be empty"));
                }
                if !finite(v) {
                    return Err(Error::input(field, "samples must be finite"));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Evaluates at `s`, reduced into `[0, ω)` first.
    pub fn eval(&self, s: f64, omega: f64) -> f64 {
        let s = s.rem_euclid(omega);
        match self {
            CurvatureFunction::Constant(c) => *c,
            CurvatureFunction::Fourier { a0, a, b } => {
                let theta = TAU * s / omega;
                let cos_terms: f64 = a
                    .iter()
                    .enumerate()
                    .map(|(m, am)| am * ((m + 1) as f64 * theta).cos())
                    .sum();
                let sin_terms: f64 = b
                    .iter()
                    .enumerate()
                    .map(|(m, bm)| bm * ((m + 1) as f64 * theta).sin())
                    .sum();
                a0 + cos_terms + sin_terms
            }
            CurvatureFunction::Samples(v) => {
                let len = v.len();
                let x = s / omega * len as f64;
                let cell = (x.floor() as usize).min(len - 1);
                let t = x - cell as f64;
                let next = (cell + 1) % len;
                v[cell] + t * (v[next] - v[cell])
            }
        }
    }

    /// Upper bound on `sup |k(s)|`.
    pub fn sup_bound(&self) -> f64 {
        match self {
            CurvatureFunction::Constant(c) => c.abs(),
            CurvatureFunction::Fourier { a0, a, b } => {
                a0.abs() + a.iter().chain(b).map(|x| x.abs()).sum::<f64>()
            }
            CurvatureFunction::Samples(v) => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

/// The Frenet data `(k_1, …, k_{n-1}; ω; ε)` of a curve in `E_v^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    sig: MetricSignature,
    omega: f64,
    curvatures: Vec<CurvatureFunction>,
    eps: Vec<Sign>,
}

impl CurvatureProfile {
    pub fn new(
        sig: MetricSignature,
        omega: f64,
        curvatures: Vec<CurvatureFunction>,
        eps: Vec<Sign>,
    ) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::input("omega", format!("period must be positive and finite, got {omega}")));
        }
        if curvatures.len() != sig.n() - 1 {
            return Err(Error::input(
                "curvatures",
                format!("expected {} curvature functions for n={}, got {}", sig.n() - 1, sig.n(), curvatures.len()),
            ));
        }
        if eps.len() != sig.n() {
            return Err(Error::input(
                "eps",
                format!("expected {} signs for n={}, got {}", sig.n(), sig.n(), eps.len()),
            ));
        }
        check_sign_count(&eps, &sig)?;
        for (i, k) in curvatures.iter().enumerate() {
            k.validate(&format!("curvatures[{i}]"))?;
        }
        Ok(Self {
            sig,
            omega,
            curvatures,
            eps,
        })
    }

    /// Constant curvatures.
    pub fn constant(sig: MetricSignature, omega: f64, ks: &[f64], eps: Vec<Sign>) -> Result<Self> {
        let curvatures = ks.iter().map(|k| CurvatureFunction::Constant(*k)).collect();
        Self::new(sig, omega, curvatures, eps)
    }

    /// Euclidean `E^n` with all signs `+1`.
    pub fn euclidean_constant(omega: f64, ks: &[f64]) -> Result<Self> {
        let sig = MetricSignature::euclidean(ks.len() + 1)?;
        Self::constant(sig, omega, ks, vec![Sign::Plus; ks.len() + 1])
    }

    pub fn signature(&self) -> MetricSignature {
        self.sig
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn curvatures(&self) -> &[CurvatureFunction] {
        &self.curvatures
    }

    pub fn eps(&self) -> &[Sign] {
        &self.eps
    }

    pub fn dim(&self) -> usize {
        self.sig.n()
    }

    /// `(k_1(s), …, k_{n-1}(s))`, periodic in `s`.
    pub fn evaluate(&self, s: f64) -> Vec<f64> {
        self.curvatures.iter().map(|k| k.eval(s, self.omega)).collect()
    }

    /// The Frenet coefficient matrix: `A[i][i+1] = ε_i k_i`,
    /// `A[i+1][i] = -ε_{i+1} k_i`, zero elsewhere.
    pub fn assemble_a(&self, s: f64) -> DMatrix<f64> {
        let n = self.dim();
        let mut a = DMatrix::zeros(n, n);
        for (i, k) in self.evaluate(s).into_iter().enumerate() {
            a[(i, i + 1)] = self.eps[i].value() * k;
            a[(i + 1, i)] = -self.eps[i + 1].value() * k;
        }
        a
    }
}

/// Causal type of the surface carrying a Darboux frame in `E_1^3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Timelike,
    Spacelike,
}

impl SurfaceKind {
    /// Frame signs `(⟨T,T⟩, ⟨g,g⟩, ⟨n,n⟩)`.
    pub fn frame_signs(self, eps: Sign) -> [Sign; 3] {
        match self {
            SurfaceKind::Timelike => [eps, eps.flip(), Sign::Plus],
            SurfaceKind::Spacelike => [Sign::Plus, Sign::Plus, Sign::Minus],
        }
    }
}

/// Darboux coefficient matrix for the frame `{T, g, n}` with geodesic
/// curvature `kg`, normal curvature `kn` and geodesic torsion `tg`.
pub fn assemble_darboux_a(
    kg: f64,
    kn: f64,
    tg: f64,
    eps: Sign,
    surface: SurfaceKind,
) -> Result<DMatrix<f64>> {
    let rows = match surface {
        SurfaceKind::Timelike => {
            let e = eps.value();
            [0.0, kg, -e * kn, kg, 0.0, e * tg, kn, tg, 0.0]
        }
        SurfaceKind::Spacelike => {
            if eps == Sign::Minus {
                return Err(Error::input(
                    "eps",
                    "a timelike curve cannot lie on a spacelike surface",
                ));
            }
            [0.0, kg, kn, -kg, 0.0, tg, kn, tg, 0.0]
        }
    };
    Ok(DMatrix::from_row_slice(3, 3, &rows))
}
