//! Closure criteria for space curves in Minkowski space-time `E_v^n`.
//!
//! A curve is described intrinsically by periodic curvature functions
//! `k_1(s), …, k_{n-1}(s)` of period `ω` and the sign sequence `ε_i = ⟨V_i, V_i⟩`
//! of its Frenet frame. The frame obeys the linear system `Φ' = A(s)Φ`, and
//! whether the curve closes after one period is decided from the Picard
//! (Peano–Baker) series `M(s) = ξA(s) + ξ⁽²⁾A(s) + …`:
//!
//! * the frame returns to itself iff `M(ω) = 0`;
//! * the position returns to itself iff additionally
//!   `ω + ∫m₁₁ = ∫m₁₂ = … = ∫m₁ₙ = 0`.
//!
//! [`peano_baker`] evaluates that criterion, [`oracle`] integrates the same
//! system directly with RK4 as an independent check, and [`darboux`] carries
//! the closed forms for constant Darboux curvatures on a timelike surface in
//! `E_1^3`.

pub mod darboux;
pub mod error;
pub mod minkowski;
pub mod oracle;
pub mod peano_baker;
pub mod profiles;
pub mod quadrature;
pub mod system;

pub use darboux::{ClosureCondition, DarbouxParams, RowOne};
pub use error::{Error, Result};
pub use minkowski::{CausalCharacter, FrameState, MetricSignature, Sign};
pub use oracle::{ClosureResiduals, CurveTrace, OracleOptions};
pub use peano_baker::{ClosureReport, Numerics, SeriesResult, SeriesTable, Verdict};
pub use profiles::{CurvatureFunction, CurvatureProfile, SurfaceKind};
pub use system::SystemSpec;
