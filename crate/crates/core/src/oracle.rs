//! Direct RK4 integration of the frame system, used as ground truth for the
//! series criterion.
//!
//! Frames are propagated in the coordinates of the initial frame: `Φ(0) = I`
//! and row `i` of `Φ(s)` holds `V_i(s)` in the basis `V_1(0), …, V_n(0)`. In
//! those coordinates the metric is `diag(ε)`. Positions are reported in world
//! coordinates, `x(s) = x₀ + ∫₀ˢ row₁(Φ) F₀`, where `F₀` is the initial frame.

use nalgebra::{DMatrix, DVector, RowDVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::minkowski::{frame_residual, max_abs, orthonormalize_rows, FrameState, MetricSignature, Sign};
use crate::quadrature::simpson;
use crate::system::SystemSpec;

pub const DEFAULT_STEPS: usize = 4096;

#[derive(Debug, Clone)]
pub struct OracleOptions {
    pub steps: usize,
    /// Re-orthonormalise `Φ` after every step. Off by default so that drift
    /// stays observable.
    pub reorthonormalize: bool,
    /// World-coordinate initial frame; defaults to [`SystemSpec::initial_frame`].
    pub initial_frame: Option<FrameState>,
    /// Accepted orthonormality defect of a supplied initial frame.
    pub frame_tol: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            reorthonormalize: false,
            initial_frame: None,
            frame_tol: 1e-8,
        }
    }
}

impl OracleOptions {
    pub fn with_steps(steps: usize) -> Self {
        Self {
            steps,
            ..Self::default()
        }
    }
}

/// Arc-length samples of a reconstructed curve.
#[derive(Debug, Clone)]
pub struct CurveTrace {
    pub s: Vec<f64>,
    pub positions: Vec<DVector<f64>>,
    /// `Φ(s_k)` in initial-frame coordinates; `frames[0]` is the identity.
    pub frames: Vec<DMatrix<f64>>,
    pub signs: Vec<Sign>,
    pub signature: MetricSignature,
    pub initial_frame: FrameState,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureResiduals {
    /// Euclidean coordinate norm of `x(ω) − x(0)`.
    pub gap: f64,
    /// Max-abs entry of `Φ(ω) − I`.
    pub frame_gap: f64,
    /// Simpson estimate of `∫₀^ω V₁ ds` in initial-frame coordinates.
    pub tangent_integral: Vec<f64>,
}

impl CurveTrace {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Frame at sample `k` in world coordinates, `Φ(s_k) F₀`.
    pub fn world_frame(&self, k: usize) -> FrameState {
        FrameState {
            vectors: &self.frames[k] * &self.initial_frame.vectors,
            signs: self.signs.clone(),
        }
    }

    /// Largest `frame_residual` over all samples.
    pub fn orthonormality_drift(&self) -> Result<f64> {
        let mut worst = 0.0_f64;
        for k in 0..self.len() {
            worst = worst.max(max_abs(&frame_residual(&self.world_frame(k), &self.signature)?));
        }
        Ok(worst)
    }

    /// Largest `|det Φ(s_k) − 1|` over all samples.
    pub fn determinant_drift(&self) -> f64 {
        self.frames
            .iter()
            .map(|f| (f.clone().lu().determinant() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn closure_residuals(&self) -> Result<ClosureResiduals> {
        if self.len() < 3 {
            return Err(Error::input(
                "trace",
                format!("need at least 3 samples, got {}", self.len()),
            ));
        }
        let last = self.len() - 1;
        let gap = (&self.positions[last] - &self.positions[0]).norm();
        let n = self.frames[0].nrows();
        let frame_gap = max_abs(&(&self.frames[last] - DMatrix::identity(n, n)));
        let h = self.s[1] - self.s[0];
        let tangents: Vec<DVector<f64>> = self
            .frames
            .iter()
            .map(|f| f.row(0).transpose())
            .collect();
        let integral = simpson(&tangents, h).map_err(|_| {
            Error::input("trace", "tangent integral needs an even number of steps")
        })?;
        Ok(ClosureResiduals {
            gap,
            frame_gap,
            tangent_integral: integral.iter().copied().collect(),
        })
    }
}

fn check_steps(steps: usize) -> Result<()> {
    if steps < 2 {
        return Err(Error::input("steps", format!("need at least 2 steps, got {steps}")));
    }
    Ok(())
}

/// `(s_k, Φ(s_k))` for `Φ' = A(s)Φ`, `Φ(0) = I`, by classical RK4 with
/// `h = ω / steps`.
pub fn integrate_frame(sys: &SystemSpec, steps: usize) -> Result<Vec<(f64, DMatrix<f64>)>> {
    let trace = reconstruct_curve(sys, &OracleOptions::with_steps(steps), None)?;
    Ok(trace.s.into_iter().zip(trace.frames).collect())
}

/// `Φ(ω)`.
pub fn monodromy(sys: &SystemSpec, steps: usize) -> Result<DMatrix<f64>> {
    check_steps(steps)?;
    let n = sys.dim();
    let omega = sys.omega();
    let h = omega / steps as f64;
    let mut phi = DMatrix::identity(n, n);
    let mut a0 = sys.coefficient(0.0)?;
    for k in 0..steps {
        let s = k as f64 * h;
        let (next, a1) = rk4_step(sys, &phi, &a0, s, h, omega, k + 1 == steps)?;
        phi = next.phi;
        a0 = a1;
    }
    Ok(phi)
}

struct Step {
    phi: DMatrix<f64>,
    /// `h/6 (Y₁ + 2Y₂ + 2Y₃ + Y₄)` restricted to row 1: the position increment
    /// in initial-frame coordinates.
    tangent_increment: RowDVector<f64>,
}

fn rk4_step(
    sys: &SystemSpec,
    phi: &DMatrix<f64>,
    a0: &DMatrix<f64>,
    s: f64,
    h: f64,
    omega: f64,
    last: bool,
) -> Result<(Step, DMatrix<f64>)> {
    let a_mid = sys.coefficient(s + 0.5 * h)?;
    let a1 = sys.coefficient(if last { omega } else { s + h })?;

    let y1 = phi;
    let k1 = a0 * y1;
    let y2 = phi + &k1 * (0.5 * h);
    let k2 = &a_mid * &y2;
    let y3 = phi + &k2 * (0.5 * h);
    let k3 = &a_mid * &y3;
    let y4 = phi + &k3 * h;
    let k4 = &a1 * &y4;

    let next = phi + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
    let tangent_increment =
        (y1.row(0) + (y2.row(0) + y3.row(0)) * 2.0 + y4.row(0)) * (h / 6.0);
    if next.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite {
            what: "frame".into(),
            s: s + h,
        });
    }
    Ok((
        Step {
            phi: next,
            tangent_increment,
        },
        a1,
    ))
}

/// Integrates `{Φ' = AΦ, x' = row₁(Φ) F₀}` jointly with the same RK4 stages
/// and records every step.
pub fn reconstruct_curve(
    sys: &SystemSpec,
    opts: &OracleOptions,
    x0: Option<&[f64]>,
) -> Result<CurveTrace> {
    check_steps(opts.steps)?;
    let n = sys.dim();
    let signature = sys.signature();
    let signs = sys.sign_sequence();
    let initial_frame = match &opts.initial_frame {
        Some(f) => {
            if f.signs != signs {
                return Err(Error::input("initial_frame", "signs differ from the system's sign sequence"));
            }
            let defect = max_abs(&frame_residual(f, &signature)?);
            if defect > opts.frame_tol {
                return Err(Error::Validation(format!(
                    "initial frame orthonormality defect {defect:e} exceeds {:e}",
                    opts.frame_tol
                )));
            }
            f.clone()
        }
        None => sys.initial_frame(),
    };
    let x0 = match x0 {
        Some(x) if x.len() != n => {
            return Err(Error::input("x0", format!("expected {n} components, got {}", x.len())))
        }
        Some(x) => DVector::from_column_slice(x),
        None => DVector::zeros(n),
    };
    let metric: Vec<f64> = signs.iter().map(|e| e.value()).collect();

    let omega = sys.omega();
    let steps = opts.steps;
    let h = omega / steps as f64;

    let mut s_grid = Vec::with_capacity(steps + 1);
    let mut positions = Vec::with_capacity(steps + 1);
    let mut frames = Vec::with_capacity(steps + 1);

    let mut phi = DMatrix::identity(n, n);
    let mut x = x0;
    let mut a0 = sys.coefficient(0.0)?;
    s_grid.push(0.0);
    positions.push(x.clone());
    frames.push(phi.clone());

    for k in 0..steps {
        let s = k as f64 * h;
        let last = k + 1 == steps;
        let (step, a1) = rk4_step(sys, &phi, &a0, s, h, omega, last)?;
        phi = step.phi;
        if opts.reorthonormalize {
            orthonormalize_rows(&mut phi, &metric);
        }
        x += (step.tangent_increment * &initial_frame.vectors).transpose();
        a0 = a1;

        s_grid.push(if last { omega } else { (k + 1) as f64 * h });
        positions.push(x.clone());
        frames.push(phi.clone());
    }

    Ok(CurveTrace {
        s: s_grid,
        positions,
        frames,
        signs,
        signature,
        initial_frame,
    })
}
