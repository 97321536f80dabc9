//! Job configuration: a TOML (or JSON) file plus command-line overrides.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use closedcurve::darboux::DarbouxParams;
use closedcurve::{CurvatureFunction, CurvatureProfile, MetricSignature, Numerics, Sign, SystemSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemConfig>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub outputs: OutputsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    #[default]
    Frenet,
    DarbouxTimelike,
    DarbouxSpacelike,
}

/// Either one sign (Darboux) or the full frame-sign list (Frenet).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsSpec {
    One(i64),
    Many(Vec<i64>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(default)]
    pub kind: ProblemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<EpsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curvatures: Vec<CurvatureFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kg: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kn: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tg: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    #[serde(alias = "json-lines")]
    #[value(alias = "json-lines")]
    Jsonl,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_path: Option<PathBuf>,
    /// Sweep table destination; stdout when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// Append the flattened world frame to every trace row.
    #[serde(default)]
    pub frames: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axes: Vec<Axis>,
}

/// `count` evenly spaced values of `param` over `[min, max]`.
///
/// `param` is `k1`, `k2`, … (replaces that curvature by a constant),
/// `omega`, or one of `kg`, `kn`, `tg`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.max } else { self.min + step * i as f64 })
            .collect()
    }

    fn validate(&self, i: usize) -> Result<()> {
        let field = format!("sweep.axes[{i}]");
        if self.count == 0 {
            bail!("{field}.count: must be >= 1");
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            bail!("{field}: need finite min <= max, got [{}, {}]", self.min, self.max);
        }
        Ok(())
    }
}

/// Command-line values that win over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub format: Option<Format>,
    pub tol_zero: Option<f64>,
    pub grid_points: Option<usize>,
    pub steps: Option<usize>,
    pub max_order: Option<usize>,
}

impl JobConfig {
    /// Reads `path` as JSON when it ends in `.json`, TOML otherwise.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?
        } else {
            toml::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?
        };
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(f) = o.format {
            self.outputs.format = f;
        }
        if let Some(t) = o.tol_zero {
            self.numerics.tol_zero = t;
        }
        if let Some(g) = o.grid_points {
            self.numerics.grid_points = g;
        }
        if let Some(s) = o.steps {
            self.numerics.steps = s;
        }
        if let Some(m) = o.max_order {
            self.numerics.max_order = m;
        }
        self.numerics.validate()?;
        if let Some(sweep) = &self.sweep {
            for (i, axis) in sweep.axes.iter().enumerate() {
                axis.validate(i)?;
            }
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<&ProblemConfig> {
        self.problem.as_ref().ok_or_else(|| anyhow!("problem: section missing from config"))
    }
}

fn sign(x: i64, field: &str) -> Result<Sign> {
    Sign::from_int(x).ok_or_else(|| anyhow!("{field}: signs must be -1 or +1, got {x}"))
}

fn required(x: Option<f64>, field: &str) -> Result<f64> {
    x.ok_or_else(|| anyhow!("{field}: required"))
}

impl ProblemConfig {
    pub fn build(&self) -> Result<SystemSpec> {
        let omega = required(self.omega, "omega")?;
        match self.kind {
            ProblemKind::Frenet => self.build_frenet(omega),
            ProblemKind::DarbouxTimelike => Ok(self.darboux_params()?.into()),
            ProblemKind::DarbouxSpacelike => {
                if self.eps.is_some() {
                    bail!("eps: fixed by the spacelike surface, remove it");
                }
                Ok(SystemSpec::darboux_spacelike(
                    required(self.kg, "kg")?,
                    required(self.kn, "kn")?,
                    required(self.tg, "tg")?,
                    omega,
                )?)
            }
        }
    }

    fn build_frenet(&self, omega: f64) -> Result<SystemSpec> {
        let n = self.n.ok_or_else(|| anyhow!("n: required"))?;
        let v = self.v.unwrap_or(0);
        let sig = MetricSignature::new(n, v)?;
        let eps = match &self.eps {
            None if v == 0 => vec![Sign::Plus; n],
            None => bail!("eps: required when v > 0"),
            Some(EpsSpec::One(_)) => bail!("eps: expected a list of {n} signs"),
            Some(EpsSpec::Many(xs)) => xs
                .iter()
                .enumerate()
                .map(|(i, x)| sign(*x, &format!("eps[{i}]")))
                .collect::<Result<_>>()?,
        };
        Ok(CurvatureProfile::new(sig, omega, self.curvatures.clone(), eps)?.into())
    }

    pub fn darboux_params(&self) -> Result<DarbouxParams> {
        if self.kind != ProblemKind::DarbouxTimelike {
            bail!("kind: expected darboux-timelike");
        }
        let eps = match &self.eps {
            None => bail!("eps: required"),
            Some(EpsSpec::One(x)) => sign(*x, "eps")?,
            Some(EpsSpec::Many(xs)) if xs.len() == 1 => sign(xs[0], "eps")?,
            Some(EpsSpec::Many(_)) => bail!("eps: expected a single sign for a Darboux problem"),
        };
        Ok(DarbouxParams::new(
            required(self.kg, "kg")?,
            required(self.kn, "kn")?,
            required(self.tg, "tg")?,
            eps,
            required(self.omega, "omega")?,
        )?)
    }

    /// Sets one sweep parameter.
    pub fn set(&mut self, param: &str, value: f64) -> Result<()> {
        let darboux = self.kind != ProblemKind::Frenet;
        match param {
            "omega" => self.omega = Some(value),
            "kg" if darboux => self.kg = Some(value),
            "kn" if darboux => self.kn = Some(value),
            "tg" if darboux => self.tg = Some(value),
            _ => {
                let index = param
                    .strip_prefix('k')
                    .and_then(|i| i.parse::<usize>().ok())
                    .filter(|_| !darboux)
                    .ok_or_else(|| anyhow!("sweep.param: unknown parameter '{param}'"))?;
                let slot = index
                    .checked_sub(1)
                    .and_then(|i| self.curvatures.get_mut(i))
                    .ok_or_else(|| anyhow!("sweep.param: '{param}' has no matching curvature"))?;
                *slot = CurvatureFunction::Constant(value);
            }
        }
        Ok(())
    }
}
