//! Run configuration: one TOML file with per-command sections. Unknown keys
//! are hard errors so a typo in `mu` or `lambda` cannot silently change a
//! run. All referenced values are validated before any computation starts.

use anyhow::{bail, Context};
use nlspec_core::geometry::LameParameters;
use nlspec_core::spectra::{BoundaryCondition, Domain};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub lame: LameSection,
    #[serde(default)]
    pub domain: Option<DomainSection>,
    /// "dirichlet" or "neumann".
    #[serde(default)]
    pub bc: Option<String>,
    #[serde(default)]
    pub solver: Option<SolverSection>,
    #[serde(default)]
    pub trace: Option<TraceSection>,
    #[serde(default)]
    pub output: Option<OutputSection>,
    #[serde(default)]
    pub symbol_verify: Option<SymbolVerifySection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LameSection {
    pub mu: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    /// "interval" | "rectangle" | "disk"
    pub kind: String,
    #[serde(default)]
    pub length: Option<f64>,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default)]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    /// Interval: number of eigenvalues.
    #[serde(default)]
    pub count: Option<usize>,
    /// Rectangle: grid subdivisions per unit length.
    #[serde(default)]
    pub grid_n: Option<usize>,
    /// Disk: angular order cap.
    #[serde(default)]
    pub m_max: Option<usize>,
    /// Disk: radial root budget per branch.
    #[serde(default)]
    pub k_max: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSection {
    #[serde(default)]
    pub t_min: Option<f64>,
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub dir: Option<String>,
    /// Subset of ["json", "csv"]; "json" is always honored for reports.
    #[serde(default)]
    pub formats: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolVerifySection {
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Subset of ["flat", "polar", "sphere"].
    #[serde(default)]
    pub fields: Option<Vec<String>>,
    #[serde(default)]
    pub max_order: Option<usize>,
    /// Optional spectral-parameter override `[re, im]`, interpreted with the
    /// covector normalized to unit metric length.
    #[serde(default)]
    pub tau: Option<[f64; 2]>,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let config: RunConfig =
            toml::from_str(&text).with_context(|| format!("bad config {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    /// Fail-fast validation of every referenced value.
    pub fn validate(&self) -> anyhow::Result<()> {
        self.params()?;
        if let Some(d) = &self.domain {
            d.to_domain()?;
        }
        if let Some(bc) = &self.bc {
            bc.parse::<BoundaryCondition>()
                .map_err(|e| anyhow::anyhow!("bad bc: {e}"))?;
        }
        if let Some(t) = &self.trace {
            if let (Some(lo), Some(hi)) = (t.t_min, t.t_max) {
                if !(lo > 0.0 && hi > lo) {
                    bail!("trace window must satisfy 0 < t_min < t_max, got [{lo}, {hi}]");
                }
            }
            if let Some(s) = t.samples {
                if s < 8 {
                    bail!("trace.samples must be at least 8, got {s}");
                }
            }
        }
        if let Some(sv) = &self.symbol_verify {
            for f in sv.fields.clone().unwrap_or_default() {
                f.parse::<nlspec_core::verify::VerifyField>()
                    .map_err(|e| anyhow::anyhow!("bad symbol_verify.fields entry: {e}"))?;
            }
            if let Some(order) = sv.max_order {
                if order > 2 {
                    bail!("symbol_verify.max_order is limited to 2, got {order}");
                }
            }
        }
        Ok(())
    }

    pub fn params(&self) -> anyhow::Result<LameParameters> {
        LameParameters::new(self.lame.mu, self.lame.lambda)
            .map_err(|e| anyhow::anyhow!("bad lame parameters: {e}"))
    }

    pub fn bc(&self) -> anyhow::Result<BoundaryCondition> {
        match &self.bc {
            Some(s) => s.parse().map_err(|e| anyhow::anyhow!("bad bc: {e}")),
            None => Ok(BoundaryCondition::Dirichlet),
        }
    }

    pub fn require_domain(&self) -> anyhow::Result<Domain> {
        self.domain
            .as_ref()
            .ok_or_else(|| anyhow::anyhow!("config needs a [domain] section for this command"))?
            .to_domain()
    }
}

impl DomainSection {
    pub fn to_domain(&self) -> anyhow::Result<Domain> {
        let missing = |what: &str| anyhow::anyhow!("domain.kind {:?} needs `{what}`", self.kind);
        let d = match self.kind.as_str() {
            "interval" => Domain::Interval { length: self.length.ok_or_else(|| missing("length"))? },
            "rectangle" => Domain::Rectangle {
                a: self.a.ok_or_else(|| missing("a"))?,
                b: self.b.ok_or_else(|| missing("b"))?,
            },
            "disk" => Domain::Disk { radius: self.radius.ok_or_else(|| missing("radius"))? },
            other => bail!("unknown domain.kind {other:?}"),
        };
        d.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
        Ok(d)
    }
}
