//! One coefficient-matrix interface over the Frenet system in `E_v^n` and
//! the two Darboux systems in `E_1^3`.

use nalgebra::DMatrix;

use crate::darboux::DarbouxParams;
use crate::error::{Error, Result};
use crate::minkowski::{FrameState, MetricSignature, Sign};
use crate::profiles::{assemble_darboux_a, CurvatureProfile, SurfaceKind};

/// A periodic linear system `Φ' = A(s)Φ` whose solution is a moving frame.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    FrenetEvn(CurvatureProfile),
    /// Curve on a timelike surface, frame signs `(ε, −ε, +1)`.
    DarbouxTimelike(DarbouxParams),
    /// Spacelike curve on a spacelike surface, frame signs `(+1, +1, −1)`.
    DarbouxSpacelike { kg: f64, kn: f64, tg: f64, omega: f64 },
}

impl From<CurvatureProfile> for SystemSpec {
    fn from(p: CurvatureProfile) -> Self {
        SystemSpec::FrenetEvn(p)
    }
}

impl From<DarbouxParams> for SystemSpec {
    fn from(p: DarbouxParams) -> Self {
        SystemSpec::DarbouxTimelike(p)
    }
}

impl SystemSpec {
    pub fn darboux_spacelike(kg: f64, kn: f64, tg: f64, omega: f64) -> Result<Self> {
        // Same finiteness and period checks; the sign is fixed for this surface.
        DarbouxParams::new(kg, kn, tg, Sign::Plus, omega)?;
        Ok(SystemSpec::DarbouxSpacelike { kg, kn, tg, omega })
    }

    pub fn dim(&self) -> usize {
        match self {
            SystemSpec::FrenetEvn(p) => p.dim(),
            _ => 3,
        }
    }

    pub fn omega(&self) -> f64 {
        match self {
            SystemSpec::FrenetEvn(p) => p.omega(),
            SystemSpec::DarbouxTimelike(p) => p.omega,
            SystemSpec::DarbouxSpacelike { omega, .. } => *omega,
        }
    }

    pub fn signature(&self) -> MetricSignature {
        match self {
            SystemSpec::FrenetEvn(p) => p.signature(),
            _ => MetricSignature::new(3, 1).expect("E_1^3 is a valid signature"),
        }
    }

    pub fn sign_sequence(&self) -> Vec<Sign> {
        match self {
            SystemSpec::FrenetEvn(p) => p.eps().to_vec(),
            SystemSpec::DarbouxTimelike(p) => SurfaceKind::Timelike.frame_signs(p.eps).to_vec(),
            SystemSpec::DarbouxSpacelike { .. } => {
                SurfaceKind::Spacelike.frame_signs(Sign::Plus).to_vec()
            }
        }
    }

    /// `A(s)`. Darboux systems have constant coefficients.
    pub fn coefficient(&self, s: f64) -> Result<DMatrix<f64>> {
        let a = match self {
            SystemSpec::FrenetEvn(p) => p.assemble_a(s),
            SystemSpec::DarbouxTimelike(p) => {
                assemble_darboux_a(p.kg, p.kn, p.tg, p.eps, SurfaceKind::Timelike)?
            }
            SystemSpec::DarbouxSpacelike { kg, kn, tg, .. } => {
                assemble_darboux_a(*kg, *kn, *tg, Sign::Plus, SurfaceKind::Spacelike)?
            }
        };
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                what: "curvature".into(),
                s,
            });
        }
        Ok(a)
    }

    /// Default starting frame in world coordinates; the identity whenever
    /// the negative signs come first.
    pub fn initial_frame(&self) -> FrameState {
        FrameState::canonical(&self.sign_sequence(), &self.signature())
            .expect("sign sequence is validated at construction")
    }
}
