//! TOML configuration with per-experiment sections; every key has a default.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{LabError, LabResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    TeuwenVerify,
    GfunConstants,
    Weak11Growth,
    BoundSample,
    SpectralIdentities,
}

impl Experiment {
    pub fn id(self) -> &'static str {
        match self {
            Experiment::TeuwenVerify => "teuwen-verify",
            Experiment::GfunConstants => "gfun-constants",
            Experiment::Weak11Growth => "weak11-growth",
            Experiment::BoundSample => "bound-sample",
            Experiment::SpectralIdentities => "spectral-identities",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Optional; must match the verb when present.
    pub experiment: Option<Experiment>,
    pub seed: u64,
    pub teuwen: TeuwenConfig,
    pub gfun: GfunConfig,
    pub weak: WeakConfig,
    pub bounds: BoundsConfig,
    pub spectral: SpectralConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            seed: 42,
            teuwen: TeuwenConfig::default(),
            gfun: GfunConfig::default(),
            weak: WeakConfig::default(),
            bounds: BoundsConfig::default(),
            spectral: SpectralConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TeuwenConfig {
    pub orders: Vec<usize>,
    pub dims: Vec<usize>,
    /// Seeded `(x, y, t)` points per `(m, n)` for the finite-difference oracle.
    pub fd_points: usize,
    pub fd_tolerance: f64,
    /// Absolute error accepted where the derivative itself is near zero.
    pub fd_floor: f64,
    pub x_range: f64,
    pub t_range: [f64; 2],
}

impl Default for TeuwenConfig {
    fn default() -> Self {
        Self {
            orders: vec![1, 2, 3],
            dims: vec![1, 2],
            fd_points: 200,
            fd_tolerance: 1e-7,
            fd_floor: 1e-9,
            x_range: 2.0,
            t_range: [0.05, 5.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GfunConfig {
    pub n: usize,
    pub ps: Vec<f64>,
    pub qs: Vec<f64>,
    pub betas: Vec<f64>,
    /// Space-derivative order, applied along the first coordinate.
    pub k: usize,
    pub semigroups: Vec<String>,
    /// Any of `eigen`, `random`, `super_gaussian`, `vector`.
    pub corpora: Vec<String>,
    pub norm_r: f64,
    /// Components of vector-valued operands; 1 for scalar runs.
    pub norm_m: usize,
    pub eigen_degree: usize,
    pub random_count: usize,
    pub random_degree: usize,
    pub space_points: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
    pub closed_form_tolerance: f64,
}

impl Default for GfunConfig {
    fn default() -> Self {
        Self {
            n: 1,
            ps: vec![1.5, 2.0, 4.0],
            qs: vec![2.0],
            betas: vec![1.0],
            k: 0,
            semigroups: vec!["heat_A".into(), "poisson_A".into()],
            corpora: vec!["eigen".into(), "random".into()],
            norm_r: 2.0,
            norm_m: 1,
            eigen_degree: 8,
            random_count: 8,
            random_degree: 12,
            space_points: 80,
            t_min: 1e-12,
            t_max: 64.0,
            t_points: 1024,
            closed_form_tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeakConfig {
    pub n: usize,
    pub m: usize,
    pub q: f64,
    pub ks: Vec<usize>,
    pub etas: Vec<f64>,
    pub axial_points: usize,
    pub bump_points: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
    /// Trend checks for `|k| <= 2` start here.
    pub bounded_from: f64,
}

impl Default for WeakConfig {
    fn default() -> Self {
        Self {
            n: 1,
            m: 1,
            q: 2.0,
            ks: vec![0, 3],
            etas: (0..=10).map(|i| 3.0 + 0.5 * i as f64).collect(),
            axial_points: 160,
            bump_points: 64,
            t_min: 1e-3,
            t_max: 40.0,
            t_points: 96,
            bounded_from: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsConfig {
    /// `AcotDeriv`, `A2` (both branches), `A2_neg`, `A2_pos`, `b`, `c`, `diferencia`.
    pub bounds: Vec<String>,
    pub dims: Vec<usize>,
    pub m: usize,
    pub k: usize,
    pub q: f64,
    pub eta: Option<f64>,
    pub delta: Option<f64>,
    /// Exponent checked against `eta - delta < 2/p < eta + delta`.
    pub p: f64,
    pub samples: usize,
    pub stability_tolerance: f64,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            bounds: ["AcotDeriv", "A2", "b", "c", "diferencia"].iter().map(|s| s.to_string()).collect(),
            dims: vec![1, 2],
            m: 1,
            k: 0,
            q: 2.0,
            eta: None,
            delta: None,
            p: 2.0,
            samples: 2000,
            stability_tolerance: 0.10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectralConfig {
    pub dims: Vec<usize>,
    pub max_degree: usize,
    pub times: Vec<f64>,
    pub random_count: usize,
    pub space_points: usize,
    pub t_points: usize,
    pub algebraic_tolerance: f64,
    pub quadrature_tolerance: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            dims: vec![1, 2, 3],
            max_degree: 10,
            times: vec![0.0, 0.3, 1.7],
            random_count: 6,
            space_points: 40,
            t_points: 1024,
            algebraic_tolerance: 1e-14,
            quadrature_tolerance: 1e-6,
        }
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> LabResult<()> {
    if cond {
        Ok(())
    } else {
        Err(LabError::Config(msg()))
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> LabResult<Self> {
        toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Checks the section used by `experiment`.
    pub fn validate(&self, experiment: Experiment) -> LabResult<()> {
        if let Some(e) = self.experiment {
            require(e == experiment, || format!("config is for {} but {} was requested", e.id(), experiment.id()))?;
        }
        match experiment {
            Experiment::TeuwenVerify => {
                let c = &self.teuwen;
                require(!c.orders.is_empty() && !c.dims.is_empty(), || "teuwen: empty order or dimension list".into())?;
                require(c.dims.iter().all(|&n| n >= 1), || "teuwen: dimensions must be positive".into())?;
                require(c.fd_tolerance > 0.0 && c.fd_floor >= 0.0, || "teuwen: tolerances must be positive".into())?;
                require(0.0 < c.t_range[0] && c.t_range[0] < c.t_range[1], || {
                    format!("teuwen: bad time range {:?}", c.t_range)
                })?;
                require(c.x_range > 0.0, || "teuwen: x_range must be positive".into())
            }
            Experiment::GfunConstants => {
                let c = &self.gfun;
                require(c.n >= 1, || "gfun: n must be positive".into())?;
                require(!c.ps.is_empty() && !c.qs.is_empty() && !c.betas.is_empty(), || {
                    "gfun: empty parameter list".into()
                })?;
                require(c.qs.iter().all(|&q| q > 1.0), || format!("gfun: every q must exceed 1, got {:?}", c.qs))?;
                require(c.betas.iter().all(|&b| b > 0.0), || "gfun: beta must be positive".into())?;
                require(c.ps.iter().all(|&p| p >= 1.0), || format!("gfun: p must be >= 1, got {:?}", c.ps))?;
                require(!c.corpora.is_empty(), || "gfun: empty corpus selection".into())?;
                for name in &c.corpora {
                    require(["eigen", "random", "super_gaussian", "vector"].contains(&name.as_str()), || {
                        format!("gfun: unknown corpus {name:?}")
                    })?;
                }
                if c.ps.contains(&1.0) {
                    require(c.corpora.iter().all(|s| s == "super_gaussian"), || {
                        "gfun: p = 1 needs the super_gaussian corpus; Hermite-type members are not in L^1".into()
                    })?;
                }
                require(c.norm_m >= 1 && c.norm_r >= 1.0, || "gfun: norm needs m >= 1 and r >= 1".into())?;
                let vector = c.corpora.iter().any(|s| s == "vector");
                require(c.norm_m == 1 || c.corpora.iter().all(|s| s == "vector"), || {
                    "gfun: vector-valued norms need the vector corpus and only it".into()
                })?;
                require(c.norm_m > 1 || !vector, || "gfun: the vector corpus needs norm_m > 1".into())?;
                require(c.space_points >= 2 && c.t_points >= 16, || "gfun: grids too small".into())?;
                require(0.0 < c.t_min && c.t_min < c.t_max, || "gfun: bad time range".into())?;
                for s in &c.semigroups {
                    crate::experiments::parse_semigroup(s)?;
                }
                Ok(())
            }
            Experiment::Weak11Growth => {
                let c = &self.weak;
                require(!c.etas.is_empty(), || "weak: empty eta sweep".into())?;
                require(!c.ks.is_empty(), || "weak: empty list of space orders".into())?;
                require(c.etas.iter().all(|&e| e >= 3.0), || "weak: eta must be >= 3".into())?;
                require(c.etas.windows(2).all(|w| w[0] < w[1]), || "weak: eta sweep must increase".into())?;
                require(c.q > 1.0, || format!("weak: q must exceed 1, got {}", c.q))
            }
            Experiment::BoundSample => {
                let c = &self.bounds;
                require(!c.bounds.is_empty() && !c.dims.is_empty(), || "bounds: empty selection".into())?;
                require(c.samples >= 2, || "bounds: need at least 2 samples".into())?;
                require(c.p >= 1.0, || "bounds: p must be >= 1".into())
            }
            Experiment::SpectralIdentities => {
                let c = &self.spectral;
                require(!c.dims.is_empty() && c.dims.iter().all(|&n| n >= 1), || "spectral: bad dimensions".into())?;
                require(c.times.iter().all(|&t| t >= 0.0), || "spectral: times must be non-negative".into())
            }
        }
    }
}
