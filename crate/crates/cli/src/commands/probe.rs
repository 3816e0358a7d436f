use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde::Serialize;
use sobolev_flow::analysis::{gradient_inequality_probe, ProbeOptions};
use sobolev_flow::equilibria::EquilibriumParams;

use super::write_json;

#[derive(Args)]
pub struct ProbeArgs {
    /// Covering number of the equilibrium.
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub d: f64,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// H1 radius of the perturbations.
    #[arg(long, default_value_t = 0.05)]
    pub radius: f64,
    #[arg(long, default_value_t = 16)]
    pub n_modes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for probe.json and probe.csv.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Summary {
    params: EquilibriumParams,
    options: ProbeOptions,
    min_ratio: Option<f64>,
    included: usize,
}

pub fn run(args: &ProbeArgs) -> Result<()> {
    let p = EquilibriumParams::new(args.a, args.b, args.c, args.d, args.ell);
    let opts = ProbeOptions {
        n_samples: args.samples,
        ball_radius: args.radius,
        n_modes: args.n_modes,
        seed: args.seed,
    };
    let result = gradient_inequality_probe(&p, &opts)?;
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        write_json(&dir.join("probe.json"), &result)?;
        let file = std::fs::File::create(dir.join("probe.csv"))?;
        result.write_csv(std::io::BufWriter::new(file))?;
    }
    let summary = Summary {
        params: result.params,
        options: result.options,
        min_ratio: result.min_ratio,
        included: result.included,
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
