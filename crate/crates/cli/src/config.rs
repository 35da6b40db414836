//! Experiment configuration. Every field has a default, so an empty TOML
//! file (or no file at all) reproduces the reference runs.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hyperbargmann::microlocal::DecayThresholds;
use hyperbargmann::phantom::{PhantomComponent, PhantomKind, PhantomSpec};
use hyperbargmann::transforms::{FilterMode, HyperplaneQuadrature};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Restrict dimension-generic experiments to one `n`; both when unset.
    pub n: Option<usize>,
    /// Semiclassical parameters for the identity check, decreasing.
    pub h_list: Vec<f64>,
    pub out: PathBuf,
    pub filter: String,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
    pub seed: u64,
    /// Object used by `transform` and `verify-identity`; a centred unit
    /// Gaussian when empty.
    pub phantom: Vec<ComponentConfig>,
    pub thresholds: ThresholdConfig,
    pub radon: RadonConfig,
    pub identity: IdentityConfig,
    pub inversion: InversionConfig,
    pub plancherel: PlancherelConfig,
    pub coherent: CoherentConfig,
    pub wf: WfConfig,
    pub cutoff: CutoffConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n: None,
            h_list: vec![1.0, 0.25],
            out: PathBuf::from("out"),
            filter: "derivative".into(),
            threads: 0,
            seed: 20240917,
            phantom: Vec::new(),
            thresholds: ThresholdConfig::default(),
            radon: RadonConfig::default(),
            identity: IdentityConfig::default(),
            inversion: InversionConfig::default(),
            plancherel: PlancherelConfig::default(),
            coherent: CoherentConfig::default(),
            wf: WfConfig::default(),
            cutoff: CutoffConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    pub kind: String,
    #[serde(default)]
    pub center: Vec<f64>,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default = "one")]
    pub weight: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdConfig {
    pub eps0: f64,
    pub n0: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        let d = DecayThresholds::default();
        Self { eps0: d.eps0, n0: d.n0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub half_width: f64,
    pub panels: usize,
    pub per_panel: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let q = HyperplaneQuadrature::default();
        Self { half_width: q.half_width, panels: q.panels, per_panel: q.per_panel }
    }
}

impl QuadratureConfig {
    pub fn rule(&self) -> HyperplaneQuadrature {
        HyperplaneQuadrature { half_width: self.half_width, panels: self.panels, per_panel: self.per_panel }
    }

    fn check(&self, name: &str) -> Result<()> {
        if !(self.half_width > 0.0) || self.panels == 0 || self.per_panel == 0 {
            bail!("{name}: half_width, panels and per_panel must be positive");
        }
        Ok(())
    }
}

/// Sinogram sampling for `transform` and the hyperplane quadrature of the
/// numerical Radon transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadonConfig {
    pub quadrature: QuadratureConfig,
    /// Cheaper rule for whole sinograms in three dimensions.
    pub quadrature3: QuadratureConfig,
    pub directions2: usize,
    pub directions3: usize,
    pub dt: f64,
    pub t_half_width: f64,
    /// Random `(z, ω, t)` samples per `(n, h)` in the closed-form check.
    pub samples: usize,
    pub h_values: Vec<f64>,
}

impl Default for RadonConfig {
    fn default() -> Self {
        Self {
            quadrature: QuadratureConfig::default(),
            quadrature3: QuadratureConfig { half_width: 5.0, panels: 10, per_panel: 8 },
            directions2: 16,
            directions3: 8,
            dt: 0.05,
            t_half_width: 6.0,
            samples: 20,
            h_values: vec![1.0, 0.25],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IdentityConfig {
    /// Per-axis real parts of the test points (`5^n` grid by default).
    pub x_values: Vec<f64>,
    /// Radii `|ξ|` of the imaginary parts.
    pub xi_shells: Vec<f64>,
    /// Shells with `π|ξ|²(1/h - 1/(1+h))` above this are skipped: the
    /// weighted value is then smaller than the integrand by more than
    /// `e^{-budget}` and double precision cannot resolve it.
    pub budget: f64,
    pub directions2: usize,
    pub directions3: usize,
    pub dt: f64,
    pub t_half_width: f64,
    pub tol_h1: f64,
    pub tol_small_h: f64,
}

impl Default for IdentityConfig {
    fn default() -> Self {
        Self {
            x_values: vec![-1.0, -0.5, 0.0, 0.5, 1.0],
            xi_shells: vec![0.5, 1.0, 1.5, 2.0, 3.0],
            budget: 24.0,
            directions2: 64,
            directions3: 96,
            dt: 0.05,
            t_half_width: 8.0,
            tol_h1: 1e-3,
            tol_small_h: 5e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InversionConfig {
    pub directions2: usize,
    pub directions3: usize,
    pub dt: f64,
    pub t_half_width: f64,
    pub grid_half_width: f64,
    pub grid_points: usize,
    pub tol2: f64,
    pub tol3: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            directions2: 64,
            directions3: 32,
            dt: 0.05,
            t_half_width: 6.0,
            grid_half_width: 1.5,
            grid_points: 13,
            tol2: 1e-3,
            tol3: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlancherelConfig {
    pub directions2: usize,
    pub directions3: usize,
    pub dt: f64,
    pub t_half_width: f64,
    pub tol: f64,
}

impl Default for PlancherelConfig {
    fn default() -> Self {
        Self { directions2: 64, directions3: 32, dt: 0.05, t_half_width: 8.0, tol: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoherentConfig {
    /// Centre; the first `n` entries are used.
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub h_values: Vec<f64>,
}

impl Default for CoherentConfig {
    fn default() -> Self {
        Self { x: vec![1.0, 2.0, -0.5], xi: vec![0.5, -1.0, 0.25], h_values: vec![1.0, 0.25] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WfConfig {
    pub h_list: Vec<f64>,
    /// Angles on the unit circle at which points are placed.
    pub angles: usize,
    pub xi_norm: f64,
    pub directions: usize,
    pub min_agreement: f64,
}

impl Default for WfConfig {
    fn default() -> Self {
        Self { h_list: vec![0.25, 0.125, 0.0625, 0.03125], angles: 8, xi_norm: 1.0, directions: 256, min_agreement: 0.9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CutoffConfig {
    pub x0: Vec<f64>,
    pub xi0: Vec<f64>,
    pub rho: f64,
    pub h_list: Vec<f64>,
    pub directions: usize,
    pub dt: f64,
    pub t_half_width: f64,
}

impl Default for CutoffConfig {
    fn default() -> Self {
        Self {
            x0: vec![0.0, 0.0, 0.0],
            xi0: vec![0.0, 0.0, 2.0],
            rho: 0.25,
            h_list: vec![0.5, 0.25, 0.125, 0.0625],
            directions: 64,
            dt: 0.025,
            t_half_width: 6.0,
        }
    }
}

fn decreasing(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() || v.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
        bail!("{name} must be a non-empty list of positive numbers");
    }
    if v.windows(2).any(|w| w[1] >= w[0]) {
        bail!("{name} must be strictly decreasing");
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        bail!("{name} must be positive, got {v}");
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: Self = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.n {
            if n != 2 && n != 3 {
                bail!("n must be 2 or 3, got {n}");
            }
        }
        decreasing("h_list", &self.h_list)?;
        decreasing("radon.h_values", &self.radon.h_values)?;
        decreasing("coherent.h_values", &self.coherent.h_values)?;
        decreasing("wf.h_list", &self.wf.h_list)?;
        decreasing("cutoff.h_list", &self.cutoff.h_list)?;
        self.filter_mode()?;
        self.radon.quadrature.check("radon.quadrature")?;
        self.radon.quadrature3.check("radon.quadrature3")?;
        for (name, v) in [
            ("radon.dt", self.radon.dt),
            ("radon.t_half_width", self.radon.t_half_width),
            ("identity.dt", self.identity.dt),
            ("identity.t_half_width", self.identity.t_half_width),
            ("identity.budget", self.identity.budget),
            ("inversion.dt", self.inversion.dt),
            ("inversion.t_half_width", self.inversion.t_half_width),
            ("inversion.grid_half_width", self.inversion.grid_half_width),
            ("plancherel.dt", self.plancherel.dt),
            ("plancherel.t_half_width", self.plancherel.t_half_width),
            ("wf.xi_norm", self.wf.xi_norm),
            ("cutoff.dt", self.cutoff.dt),
            ("cutoff.t_half_width", self.cutoff.t_half_width),
            ("cutoff.rho", self.cutoff.rho),
            ("thresholds.eps0", self.thresholds.eps0),
            ("thresholds.n0", self.thresholds.n0),
        ] {
            positive(name, v)?;
        }
        for (name, v) in [
            ("radon.directions2", self.radon.directions2),
            ("radon.directions3", self.radon.directions3),
            ("radon.samples", self.radon.samples),
            ("identity.directions2", self.identity.directions2),
            ("identity.directions3", self.identity.directions3),
            ("inversion.directions2", self.inversion.directions2),
            ("inversion.directions3", self.inversion.directions3),
            ("inversion.grid_points", self.inversion.grid_points),
            ("plancherel.directions2", self.plancherel.directions2),
            ("plancherel.directions3", self.plancherel.directions3),
            ("wf.angles", self.wf.angles),
            ("wf.directions", self.wf.directions),
            ("cutoff.directions", self.cutoff.directions),
        ] {
            if v == 0 {
                bail!("{name} must be positive");
            }
        }
        if self.identity.x_values.is_empty() || self.identity.xi_shells.is_empty() {
            bail!("identity.x_values and identity.xi_shells must be non-empty");
        }
        if self.coherent.x.len() < 3 || self.coherent.xi.len() < 3 {
            bail!("coherent.x and coherent.xi need three entries (the first n are used)");
        }
        if self.cutoff.x0.len() != self.cutoff.xi0.len() {
            bail!("cutoff.x0 and cutoff.xi0 must have the same length");
        }
        if self.wf.h_list.len() < 4 || self.cutoff.h_list.len() < 4 {
            bail!("decay fits need at least four h values");
        }
        if !self.phantom.is_empty() {
            self.phantom_spec()?;
        }
        Ok(())
    }

    pub fn filter_mode(&self) -> Result<FilterMode> {
        self.filter.parse().map_err(|e| anyhow::anyhow!("filter: {e}"))
    }

    pub fn thresholds(&self) -> DecayThresholds {
        DecayThresholds { eps0: self.thresholds.eps0, n0: self.thresholds.n0 }
    }

    /// Dimensions selected for dimension-generic experiments.
    pub fn dims(&self) -> Vec<usize> {
        match self.n {
            Some(n) => vec![n],
            None => vec![2, 3],
        }
    }

    /// The configured phantom; its dimension comes from the component
    /// centres, so it must agree with `n` when that is set.
    pub fn phantom_spec(&self) -> Result<Option<PhantomSpec>> {
        if self.phantom.is_empty() {
            return Ok(None);
        }
        let n = self.phantom[0].center.len();
        let components = self
            .phantom
            .iter()
            .map(|c| {
                let kind: PhantomKind = c.kind.parse().map_err(|e| anyhow::anyhow!("phantom kind: {e}"))?;
                Ok(PhantomComponent { kind, center: c.center.clone(), scale: c.scale, weight: c.weight })
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = PhantomSpec::new(n, components)?;
        if let Some(m) = self.n {
            if m != n {
                bail!("phantom components are {n}-dimensional but n = {m}");
            }
        }
        Ok(Some(spec))
    }

    /// The configured phantom in dimension `n`, or the unit Gaussian.
    pub fn phantom_for(&self, n: usize) -> Result<PhantomSpec> {
        match self.phantom_spec()? {
            Some(p) if p.n == n => Ok(p),
            Some(p) => bail!("phantom is {}-dimensional, experiment needs n = {n}", p.n),
            None => Ok(PhantomSpec::standard_gaussian(n)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let cfg: ExperimentConfig = toml::from_str("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        cfg.validate().unwrap();
    }

    #[test]
    fn sections_override_single_fields() {
        let cfg: ExperimentConfig = toml::from_str(
            "n = 2\nh_list = [0.5, 0.1]\n[wf]\nangles = 4\n[[phantom]]\nkind = \"ball_indicator\"\ncenter = [0.0, 0.0]\n",
        )
        .unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.wf.angles, 4);
        assert_eq!(cfg.wf.directions, WfConfig::default().directions);
        assert_eq!(cfg.phantom_spec().unwrap().unwrap(), PhantomSpec::unit_disk());
    }

    #[test]
    fn rejects_bad_values() {
        for text in ["n = 4", "h_list = [0.25, 1.0]", "filter = \"sharp\"", "bogus = 1", "[wf]\nh_list = [0.5, 0.25]"] {
            let parsed: std::result::Result<ExperimentConfig, _> = toml::from_str(text);
            assert!(parsed.map_err(anyhow::Error::from).and_then(|c| c.validate()).is_err(), "{text}");
        }
    }
}
