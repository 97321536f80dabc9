//! Composite Simpson quadrature on uniform grids, for scalar, vector and
//! matrix-valued samples.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Values that can be accumulated linearly.
pub trait Integrand: Clone {
    fn zeroed(&self) -> Self;
    /// `self += a * x`
    fn axpy(&mut self, a: f64, x: &Self);
}

impl Integrand for f64 {
    fn zeroed(&self) -> Self {
        0.0
    }

    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
}

impl Integrand for DMatrix<f64> {
    fn zeroed(&self) -> Self {
        DMatrix::zeros(self.nrows(), self.ncols())
    }

    fn axpy(&mut self, a: f64, x: &Self) {
        *self += x * a;
    }
}

impl Integrand for DVector<f64> {
    fn zeroed(&self) -> Self {
        DVector::zeros(self.len())
    }

    fn axpy(&mut self, a: f64, x: &Self) {
        *self += x * a;
    }
}

fn check_intervals(samples: usize) -> Result<()> {
    if samples < 3 || samples.is_multiple_of(2) {
        return Err(Error::input(
            "grid_points",
            format!(
                "composite Simpson needs an even number (>= 2) of intervals, got {}",
                samples.saturating_sub(1)
            ),
        ));
    }
    Ok(())
}

/// `∫` over the whole grid: `f` holds samples at `a, a+h, …, a+2m·h`.
pub fn simpson<T: Integrand>(f: &[T], h: f64) -> Result<T> {
    check_intervals(f.len())?;
    let mut acc = f[0].zeroed();
    acc.axpy(1.0, &f[0]);
    acc.axpy(1.0, &f[f.len() - 1]);
    for (i, fi) in f.iter().enumerate().take(f.len() - 1).skip(1) {
        acc.axpy(if i % 2 == 1 { 4.0 } else { 2.0 }, fi);
    }
    let mut out = acc.zeroed();
    out.axpy(h / 3.0, &acc);
    Ok(out)
}

/// Running integrals `∫_a^{a+jh} f` at every node `j`.
///
/// Even nodes are exact composite Simpson sums. An odd node adds the
/// integral over its half panel of the quadratic through the panel's three
/// samples, `h/12 · (5f₀ + 8f₁ − f₂)`.
pub fn cumulative_simpson<T: Integrand>(f: &[T], h: f64) -> Result<Vec<T>> {
    check_intervals(f.len())?;
    let zero = f[0].zeroed();
    let mut out = Vec::with_capacity(f.len());
    out.push(zero);
    for panel in f.windows(3).step_by(2) {
        let base = out.last().expect("non-empty").clone();

        let mut half = base.clone();
        half.axpy(5.0 * h / 12.0, &panel[0]);
        half.axpy(8.0 * h / 12.0, &panel[1]);
        half.axpy(-h / 12.0, &panel[2]);

        let mut full = base;
        full.axpy(h / 3.0, &panel[0]);
        full.axpy(4.0 * h / 3.0, &panel[1]);
        full.axpy(h / 3.0, &panel[2]);

        out.push(half);
        out.push(full);
    }
    Ok(out)
}
