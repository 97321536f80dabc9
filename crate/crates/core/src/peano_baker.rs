//! The iterated-integral series `M(s) = ξA(s) + ξ⁽²⁾A(s) + …` and the
//! closure criterion built on it.
//!
//! `ξA(s) = ∫₀ˢ A` and `ξ⁽ᵏ⁾A(s) = ∫₀ˢ A(σ) ξ⁽ᵏ⁻¹⁾A(σ) dσ`, so `I + M(s)` is
//! the Peano–Baker fundamental solution of `Φ' = AΦ`. A curve with
//! ω-periodic curvatures is closed of period ω iff
//!
//! 1. `M(ω) = 0`, and
//! 2. `ω + ∫₀^ω m₁₁ = ∫₀^ω m₁₂ = … = ∫₀^ω m₁ₙ = 0`.
//!
//! All levels are tabulated on one uniform grid and integrated with
//! cumulative composite Simpson.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::max_abs;
use crate::oracle::{reconstruct_curve, ClosureResiduals, OracleOptions};
use crate::quadrature::{cumulative_simpson, simpson};
use crate::system::SystemSpec;

/// Grid, truncation and verdict settings shared by the series and the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    /// Number of quadrature intervals over `[0, ω]`; must be even.
    pub grid_points: usize,
    /// RK4 steps for the oracle.
    pub steps: usize,
    pub max_order: usize,
    pub tol_series: f64,
    pub tol_zero: f64,
    pub reorthonormalize: bool,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            grid_points: 2048,
            steps: 4096,
            max_order: 64,
            tol_series: 1e-14,
            tol_zero: 1e-8,
            reorthonormalize: false,
        }
    }
}

impl Numerics {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 2 || !self.grid_points.is_multiple_of(2) {
            return Err(Error::input(
                "grid_points",
                format!("must be even and >= 2, got {}", self.grid_points),
            ));
        }
        if self.steps < 2 {
            return Err(Error::input("steps", format!("must be >= 2, got {}", self.steps)));
        }
        if self.max_order < 1 {
            return Err(Error::input("max_order", "must be >= 1"));
        }
        for (name, x) in [("tol_series", self.tol_series), ("tol_zero", self.tol_zero)] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::input(name, format!("must be positive and finite, got {x}")));
            }
        }
        Ok(())
    }

    fn oracle_options(&self) -> OracleOptions {
        OracleOptions {
            steps: self.steps,
            reorthonormalize: self.reorthonormalize,
            ..OracleOptions::default()
        }
    }
}

/// Tabulated `ξ⁽¹⁾A, …, ξ⁽ᴺ⁾A` on the shared grid.
#[derive(Debug, Clone)]
pub struct XiChain {
    pub grid: Vec<f64>,
    pub terms: Vec<Vec<DMatrix<f64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    /// Truncated `M(ω)`.
    pub m_omega: DMatrix<f64>,
    pub order_used: usize,
    /// `Σ_{j>N} (aω)ʲ/j!` with `a = sup ‖A(s)‖_∞` over the grid.
    pub tail_bound: f64,
    pub grid_points: usize,
    /// Set when `max_order` was reached with `tail_bound > tol_series`.
    pub warning: Option<String>,
}

/// `M(s)` on every grid node together with the summary at `ω`.
#[derive(Debug, Clone)]
pub struct SeriesTable {
    pub grid: Vec<f64>,
    pub values: Vec<DMatrix<f64>>,
    pub result: SeriesResult,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Closed,
    NotClosed,
}

#[derive(Debug, Clone)]
pub struct ClosureReport {
    /// Max-abs entry of `M(ω)`.
    pub cond_i_residual: f64,
    /// `(ω + ∫m₁₁, ∫m₁₂, …, ∫m₁ₙ)`.
    pub cond_ii_residuals: Vec<f64>,
    pub det_m_omega: f64,
    pub oracle_frame_gap: f64,
    pub oracle_curve_gap: f64,
    pub oracle: ClosureResiduals,
    pub series: SeriesResult,
    pub verdict: Verdict,
    pub numerics: Numerics,
}

impl ClosureReport {
    pub fn max_cond_ii(&self) -> f64 {
        self.cond_ii_residuals.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn tol_zero(&self) -> f64 {
        self.numerics.tol_zero
    }
}

struct Coefficients {
    grid: Vec<f64>,
    a: Vec<DMatrix<f64>>,
    h: f64,
}

fn tabulate_coefficients(sys: &SystemSpec, grid_points: usize) -> Result<Coefficients> {
    if grid_points < 2 || !grid_points.is_multiple_of(2) {
        return Err(Error::input(
            "grid_points",
            format!("must be even and >= 2, got {grid_points}"),
        ));
    }
    let omega = sys.omega();
    let h = omega / grid_points as f64;
    let grid: Vec<f64> = (0..=grid_points)
        .map(|j| if j == grid_points { omega } else { j as f64 * h })
        .collect();
    let a = grid.iter().map(|s| sys.coefficient(*s)).collect::<Result<_>>()?;
    Ok(Coefficients { grid, a, h })
}

/// `ξ⁽ᵏ⁾A` from `ξ⁽ᵏ⁻¹⁾A` (or from nothing, for `k = 1`).
fn next_level(c: &Coefficients, prev: Option<&[DMatrix<f64>]>) -> Result<Vec<DMatrix<f64>>> {
    let integrand: Vec<DMatrix<f64>> = match prev {
        None => c.a.clone(),
        Some(prev) => c.a.iter().zip(prev).map(|(a, x)| a * x).collect(),
    };
    if let Some(j) = integrand
        .iter()
        .position(|m| m.iter().any(|x| !x.is_finite()))
    {
        return Err(Error::NonFinite {
            what: "series integrand".into(),
            s: c.grid[j],
        });
    }
    cumulative_simpson(&integrand, c.h)
}

fn sup_norm(level: &[DMatrix<f64>]) -> f64 {
    level.iter().map(max_abs).fold(0.0, f64::max)
}

/// Induced ∞-norm (max row sum).
fn row_sum_norm(m: &DMatrix<f64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `Σ_{j>order} xʲ/j!`, summed term by term.
pub fn factorial_tail(x: f64, order: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut term = 1.0;
    for j in 1..=order + 1 {
        term *= x / j as f64;
    }
    let mut tail = 0.0;
    let mut j = order + 1;
    loop {
        tail += term;
        j += 1;
        term *= x / j as f64;
        if !tail.is_finite() || term == 0.0 || (j as f64 > x && term <= tail * 1e-17) || j > 100_000 {
            break;
        }
    }
    tail
}

/// Tabulates the chain up to `max_order` levels, stopping at the first level
/// whose sup over the grid falls below `tol_series`.
pub fn xi_chain(
    sys: &SystemSpec,
    grid_points: usize,
    max_order: usize,
    tol_series: f64,
) -> Result<XiChain> {
    if max_order < 1 {
        return Err(Error::input("max_order", "must be >= 1"));
    }
    let c = tabulate_coefficients(sys, grid_points)?;
    let mut terms: Vec<Vec<DMatrix<f64>>> = Vec::new();
    for _ in 0..max_order {
        let level = next_level(&c, terms.last().map(Vec::as_slice))?;
        let small = sup_norm(&level) < tol_series;
        terms.push(level);
        if small {
            break;
        }
    }
    Ok(XiChain { grid: c.grid, terms })
}

/// `M(s)` on the grid: running partial sums of the chain.
pub fn tabulate_m(sys: &SystemSpec, numerics: &Numerics) -> Result<SeriesTable> {
    numerics.validate()?;
    let c = tabulate_coefficients(sys, numerics.grid_points)?;
    let n = sys.dim();
    let mut values = vec![DMatrix::zeros(n, n); c.grid.len()];
    let mut prev: Option<Vec<DMatrix<f64>>> = None;
    let mut order_used = 0;
    let mut early = false;
    for k in 1..=numerics.max_order {
        let level = next_level(&c, prev.as_deref())?;
        for (m, x) in values.iter_mut().zip(&level) {
            *m += x;
        }
        order_used = k;
        if sup_norm(&level) < numerics.tol_series {
            early = true;
            break;
        }
        prev = Some(level);
    }

    let a_sup = c.a.iter().map(row_sum_norm).fold(0.0, f64::max);
    let tail_bound = factorial_tail(a_sup * sys.omega(), order_used);
    let warning = (!early && tail_bound > numerics.tol_series).then(|| {
        format!(
            "series not converged: tail bound {tail_bound:e} exceeds tol_series {:e} at max_order {}",
            numerics.tol_series, numerics.max_order
        )
    });
    let result = SeriesResult {
        m_omega: values.last().expect("grid is non-empty").clone(),
        order_used,
        tail_bound,
        grid_points: numerics.grid_points,
        warning,
    };
    Ok(SeriesTable {
        grid: c.grid,
        values,
        result,
    })
}

/// Truncated `M(ω)` with its truncation diagnostics.
pub fn m_series(
    sys: &SystemSpec,
    grid_points: usize,
    max_order: usize,
    tol_series: f64,
) -> Result<SeriesResult> {
    let numerics = Numerics {
        grid_points,
        max_order,
        tol_series,
        ..Numerics::default()
    };
    Ok(tabulate_m(sys, &numerics)?.result)
}

impl SeriesTable {
    /// `(ω + ∫₀^ω m₁₁, ∫₀^ω m₁₂, …, ∫₀^ω m₁ₙ)`.
    pub fn row1_integrals(&self) -> Result<Vec<f64>> {
        let n = self.result.m_omega.ncols();
        let h = self.grid[1] - self.grid[0];
        let omega = *self.grid.last().expect("grid is non-empty");
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let column: Vec<f64> = self.values.iter().map(|m| m[(0, j)]).collect();
            out.push(simpson(&column, h)?);
        }
        out[0] += omega;
        Ok(out)
    }
}

fn determinant(m: &DMatrix<f64>) -> f64 {
    m.clone().lu().determinant()
}

/// Evaluates both closure conditions and attaches the oracle's residuals.
pub fn closure_criterion(sys: &SystemSpec, numerics: &Numerics) -> Result<ClosureReport> {
    let table = tabulate_m(sys, numerics)?;
    let cond_ii_residuals = table.row1_integrals()?;
    let m_omega = &table.result.m_omega;
    let cond_i_residual = max_abs(m_omega);
    let det_m_omega = determinant(m_omega);

    let trace = reconstruct_curve(sys, &numerics.oracle_options(), None)?;
    let oracle = trace.closure_residuals()?;

    let max_ii = cond_ii_residuals.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
    let verdict = if cond_i_residual < numerics.tol_zero && max_ii < numerics.tol_zero {
        Verdict::Closed
    } else {
        Verdict::NotClosed
    };
    Ok(ClosureReport {
        cond_i_residual,
        cond_ii_residuals,
        det_m_omega,
        oracle_frame_gap: oracle.frame_gap,
        oracle_curve_gap: oracle.gap,
        oracle,
        series: table.result,
        verdict,
        numerics: *numerics,
    })
}

/// `det M(ω)` and whether it vanishes to `tol_zero`, i.e. whether some
/// non-trivial solution is ω-periodic.
pub fn periodic_solution_test(sys: &SystemSpec, numerics: &Numerics) -> Result<(f64, bool)> {
    let result = tabulate_m(sys, numerics)?.result;
    let det = determinant(&result.m_omega);
    Ok((det, det.abs() < numerics.tol_zero))
}
