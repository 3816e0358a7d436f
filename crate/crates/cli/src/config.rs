//! Run configuration: one JSON file with `seed`, `flow` and `analysis`
//! sections.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use sobolev_flow::analysis::DEFAULT_TAIL_FRACTION;
use sobolev_flow::equilibria::{equilibrium_curve, EquilibriumParams};
use sobolev_flow::flow::FlowConfig;
use sobolev_flow::io::curve_from_json;
use sobolev_flow::seeds::{self, Leaf};
use sobolev_flow::Curve;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: SeedConfig,
    #[serde(default)]
    pub flow: FlowConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedConfig {
    pub n_modes: usize,
    pub shape: Shape,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    Circle {
        radius: f64,
        ell: usize,
        #[serde(default)]
        center: [f64; 2],
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    PerturbedCircle {
        radius: f64,
        ell: usize,
        k: usize,
        eps: f64,
    },
    Random {
        norm_bound: f64,
        seed: u64,
    },
    /// `m` rotated copies of a rose petal traversed with step `n`.
    Petal {
        n: usize,
        m: usize,
        #[serde(default = "default_leaf_samples")]
        samples: usize,
    },
    Equilibrium {
        a: f64,
        b: f64,
        c: f64,
        d: f64,
        ell: usize,
    },
    /// Curve snapshot, relative paths resolved against the config file.
    File {
        path: PathBuf,
    },
}

fn default_leaf_samples() -> usize {
    1025
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Symmetry {
    pub n: usize,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub tail_fraction: f64,
    /// When set, the seed is reparametrised to constant speed and projected
    /// onto the symmetry class before flowing, and a report is written.
    pub symmetry: Option<Symmetry>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            tail_fraction: DEFAULT_TAIL_FRACTION,
            symmetry: None,
        }
    }
}

impl RunConfig {
    pub fn template() -> Self {
        Self {
            seed: SeedConfig {
                n_modes: 32,
                shape: Shape::Ellipse { a: 2.0, b: 1.0 },
            },
            flow: FlowConfig::default(),
            analysis: AnalysisConfig::default(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: RunConfig = serde_json::from_str(&text)
            .map_err(sobolev_flow::io::json_error)
            .with_context(|| format!("parsing {}", path.display()))?;
        if let Shape::File { path: p } = &mut cfg.seed.shape {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.flow.validate()?;
        let tf = self.analysis.tail_fraction;
        if !(tf > 0.0 && tf <= 1.0) {
            bail!(sobolev_flow::Error::InvalidParameter(format!(
                "analysis.tail_fraction must lie in (0, 1], got {tf}"
            )));
        }
        if let Some(s) = self.analysis.symmetry {
            if s.n == 0 || s.m == 0 {
                bail!(sobolev_flow::Error::InvalidSymmetry { n: s.n, m: s.m });
            }
        }
        Ok(())
    }

    /// Replaces the seed of a `random` shape; `false` if the shape has none.
    pub fn override_seed(&mut self, seed: u64) -> bool {
        match &mut self.seed.shape {
            Shape::Random { seed: s, .. } => {
                *s = seed;
                true
            }
            _ => false,
        }
    }

    /// SHA-256 of the canonical JSON of the resolved configuration.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialises");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn build_seed(&self) -> Result<Curve> {
        let n = self.seed.n_modes;
        let curve = match &self.seed.shape {
            Shape::Circle { radius, ell, center } => seeds::circle(*radius, *ell, *center, n)?,
            Shape::Ellipse { a, b } => seeds::ellipse(*a, *b, n)?,
            Shape::PerturbedCircle { radius, ell, k, eps } => seeds::perturbed_circle(*radius, *ell, *k, *eps, n)?,
            Shape::Random { norm_bound, seed } => seeds::random_positive_area(n, *norm_bound, *seed)?,
            Shape::Petal { n: step, m, samples } => seeds::symmetric_from_leaf(&Leaf::petal(*m, *samples)?, *step, n)?,
            Shape::Equilibrium { a, b, c, d, ell } => {
                equilibrium_curve(&EquilibriumParams::new(*a, *b, *c, *d, *ell), n)?
            }
            Shape::File { path } => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                curve_from_json(&text)
                    .with_context(|| format!("parsing {}", path.display()))?
                    .resized(n)
            }
        };
        Ok(curve)
    }
}
