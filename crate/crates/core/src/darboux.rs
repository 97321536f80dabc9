//! Constant Darboux curvatures on a timelike surface in `E_1^3`.
//!
//! With `(k_g, k_n, τ_g)` constant the coefficient matrix `A` satisfies
//! `row₁(A³) = D · row₁(A)` for the discriminant `D = k_g² − εk_n² + ετ_g²`,
//! so the first row of `M(s) = e^{As} − I` collapses to
//!
//! ```text
//! row₁ M(s) = row₁(A) · S(s) + row₁(A²) · C(s)
//! S(s) = Σ Dʲ s^{2j+1}/(2j+1)!   C(s) = Σ Dʲ s^{2j+2}/(2j+2)!
//! ```
//!
//! i.e. `S = sinh(√D s)/√D` and `C = (cosh(√D s) − 1)/D`, read as their
//! trigonometric counterparts when `D < 0`.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::minkowski::Sign;

/// Below this `|D|` the `D → 0` limits are used.
pub const DISCRIMINANT_CUTOFF: f64 = 1e-12;

/// Below this `|D|ω²` the power series is summed directly; the closed forms
/// lose digits to cancellation there.
const SERIES_REGIME: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DarbouxParams {
    pub kg: f64,
    pub kn: f64,
    pub tg: f64,
    pub eps: Sign,
    pub omega: f64,
}

/// Outcome of the constant-curvature closure test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClosureCondition {
    pub closed: bool,
    /// Winding number `k` with `k_g² − εk_n² = −(2kπ/ω)²`, when one exists.
    pub k: Option<u32>,
}

/// First-row entries `(m₁₁, m₁₂, m₁₃)` or their condition-(ii) integrals.
pub type RowOne = [f64; 3];

impl DarbouxParams {
    pub fn new(kg: f64, kn: f64, tg: f64, eps: Sign, omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::input("omega", format!("period must be positive and finite, got {omega}")));
        }
        for (name, x) in [("kg", kg), ("kn", kn), ("tg", tg)] {
            if !x.is_finite() {
                return Err(Error::input(name, "must be finite"));
            }
        }
        let p = Self { kg, kn, tg, eps, omega };
        if !p.discriminant().is_finite() {
            return Err(Error::input("kg/kn/tg", "discriminant overflows"));
        }
        Ok(p)
    }

    /// `D = k_g² − εk_n² + ετ_g²`.
    pub fn discriminant(&self) -> f64 {
        let e = self.eps.value();
        self.kg * self.kg - e * self.kn * self.kn + e * self.tg * self.tg
    }

    /// `k_g² − εk_n²`, the prefactor of `m₁₁`.
    fn tangent_prefactor(&self) -> f64 {
        self.kg * self.kg - self.eps.value() * self.kn * self.kn
    }

    /// `(S(ω), C(ω), ∫₀^ω C)`.
    fn kernels(&self) -> (f64, f64, f64) {
        kernels(self.discriminant(), self.omega)
    }

    /// `(m₁₁(ω), m₁₂(ω), m₁₃(ω))`.
    pub fn closed_form_row1(&self) -> RowOne {
        let (s, c, _) = self.kernels();
        let e = self.eps.value();
        [
            self.tangent_prefactor() * c,
            self.kg * s - e * self.kn * self.tg * c,
            -e * self.kn * s + e * self.kg * self.tg * c,
        ]
    }

    /// `(ω + ∫₀^ω m₁₁, ∫₀^ω m₁₂, ∫₀^ω m₁₃)`, using `∫S = C` and
    /// `∫C = (S − ω)/D`.
    pub fn closed_form_row1_integrals(&self) -> RowOne {
        let (_, c, q) = self.kernels();
        let e = self.eps.value();
        [
            self.omega + self.tangent_prefactor() * q,
            self.kg * c - e * self.kn * self.tg * q,
            -e * self.kn * c + e * self.kg * self.tg * q,
        ]
    }

    /// Closed iff `τ_g = 0` and `k_g² − εk_n² = −(2kπ/ω)²` for some `k ≥ 1`,
    /// both to within `tol`.
    pub fn closure_condition(&self, tol: f64) -> ClosureCondition {
        let not_closed = ClosureCondition { closed: false, k: None };
        if self.tg.abs() >= tol {
            return not_closed;
        }
        let prefactor = self.tangent_prefactor();
        let k_max = (self.omega * (-prefactor).max(0.0).sqrt() / TAU).ceil() as u32 + 1;
        (1..=k_max)
            .find(|k| {
                let w = TAU * f64::from(*k) / self.omega;
                (prefactor + w * w).abs() < tol
            })
            .map_or(not_closed, |k| ClosureCondition { closed: true, k: Some(k) })
    }
}

/// `(S(ω), C(ω), Q(ω))` with `Q = ∫₀^ω C = (S − ω)/D`, split by the sign
/// and size of `D`.
fn kernels(d: f64, omega: f64) -> (f64, f64, f64) {
    if d.abs() <= DISCRIMINANT_CUTOFF {
        return (omega, omega * omega / 2.0, omega.powi(3) / 6.0);
    }
    let z = d * omega * omega;
    if z.abs() < SERIES_REGIME {
        return kernel_series(d, omega);
    }
    let root = d.abs().sqrt();
    let x = root * omega;
    let (s, c) = if d > 0.0 {
        let half = (x / 2.0).sinh();
        (x.sinh() / root, 2.0 * half * half / d)
    } else {
        let half = (x / 2.0).sin();
        (x.sin() / root, -2.0 * half * half / d)
    };
    (s, c, (s - omega) / d)
}

fn kernel_series(d: f64, omega: f64) -> (f64, f64, f64) {
    let z = d * omega * omega;
    // term_j = zʲ / (2j+1)! etc., scaled by the matching power of ω.
    let (mut s, mut c, mut q) = (0.0, 0.0, 0.0);
    let (mut ts, mut tc, mut tq) = (omega, omega * omega / 2.0, omega.powi(3) / 6.0);
    for j in 0..40u32 {
        s += ts;
        c += tc;
        q += tq;
        let j = f64::from(j);
        ts *= z / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
        tc *= z / ((2.0 * j + 3.0) * (2.0 * j + 4.0));
        tq *= z / ((2.0 * j + 4.0) * (2.0 * j + 5.0));
        if ts.abs() < 1e-18 * s.abs() && tc.abs() < 1e-18 * c.abs() && tq.abs() < 1e-18 * q.abs() {
            break;
        }
    }
    (s, c, q)
}
