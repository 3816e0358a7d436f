//! Empirical check of `||DE[X]|| >= C (E[X] - l)^{1/2}` near an equilibrium.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::curve::{eps_area, Curve};
use crate::equilibria::{equilibrium_curve, EquilibriumParams};
use crate::error::{Error, Result};
use crate::gradients::grad_e;

/// Samples with `E <= l + ENERGY_GAP_FLOOR` are excluded from the minimum.
pub const ENERGY_GAP_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeOptions {
    pub n_samples: usize,
    pub ball_radius: f64,
    pub n_modes: usize,
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            n_samples: 200,
            ball_radius: 0.05,
            n_modes: 16,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub index: usize,
    pub area: f64,
    pub energy_gap: f64,
    pub grad_norm: f64,
    /// `grad_norm / sqrt(energy_gap)`, `None` when excluded.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub params: EquilibriumParams,
    pub options: ProbeOptions,
    /// Minimum ratio over the included samples.
    pub min_ratio: Option<f64>,
    pub included: usize,
    pub samples: Vec<ProbeSample>,
}

impl ProbeResult {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let err = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["index", "area", "energy_gap", "grad_norm", "ratio"])
            .map_err(err)?;
        for s in &self.samples {
            w.write_record([
                s.index.to_string(),
                format!("{:e}", s.area),
                format!("{:e}", s.energy_gap),
                format!("{:e}", s.grad_norm),
                s.ratio.map(|r| format!("{r:e}")).unwrap_or_default(),
            ])
            .map_err(err)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Draws perturbations uniformly on the `H1` sphere of radius
/// `ball_radius` (modes `|k| <= N`) around the equilibrium `p`.
pub fn gradient_inequality_probe(p: &EquilibriumParams, opts: &ProbeOptions) -> Result<ProbeResult> {
    if !(opts.ball_radius >= 0.0 && opts.ball_radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "ball_radius must be finite and non-negative, got {}",
            opts.ball_radius
        )));
    }
    let y = equilibrium_curve(p, opts.n_modes)?;
    let ell = p.ell as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut samples = Vec::with_capacity(opts.n_samples);
    for index in 0..opts.n_samples {
        let raw = Curve::from_fn(opts.n_modes, |j| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im) / (2.0 * PI * (1.0 + (j * j) as f64)).sqrt()
        });
        let norm = raw.h1_norm();
        let w = if norm > 0.0 {
            raw.scale(opts.ball_radius / norm)
        } else {
            raw
        };
        let x = &y + &w;
        let area = x.area();
        if area <= eps_area(&x) {
            return Err(Error::AreaGuard { sample: index, area });
        }
        let energy_gap = x.energy()? - ell;
        let grad_norm = grad_e(&x)?.h1_norm();
        let ratio = (energy_gap > ENERGY_GAP_FLOOR).then(|| grad_norm / energy_gap.sqrt());
        samples.push(ProbeSample {
            index,
            area,
            energy_gap,
            grad_norm,
            ratio,
        });
    }
    let ratios = samples.iter().filter_map(|s| s.ratio);
    let included = ratios.clone().count();
    let min_ratio = ratios.reduce(f64::min);
    Ok(ProbeResult {
        params: *p,
        options: *opts,
        min_ratio,
        included,
        samples,
    })
}
