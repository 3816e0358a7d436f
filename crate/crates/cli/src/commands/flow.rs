use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sobolev_flow::analysis::{estimate_rate, isoperimetry_report, prepare_symmetric, RateEstimate};
use sobolev_flow::equilibria::fit_equilibrium;
use sobolev_flow::flow::{conservation_report, flow_run, Termination};
use sobolev_flow::io::{curve_to_json, float_or_inf};
use sobolev_flow::Diagnostics;

use super::{exit_code, write_json, Stamped, EXIT_NOT_CONVERGED, EXIT_OK, EXIT_VALIDATION};
use crate::config::RunConfig;

#[derive(Args)]
pub struct FlowArgs {
    /// Configuration file; repeat for several runs.
    #[arg(long = "config")]
    pub configs: Vec<PathBuf>,
    /// Run directory. With several configs each run goes to a subdirectory
    /// named after its config file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of runs executed concurrently.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Overrides the seed of `random` shapes.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Print a configuration with every default spelled out and exit.
    #[arg(long)]
    pub emit_template: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    TimeLimit,
    StepLimit,
    Failed,
}

/// Contents of `run.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub config_hash: String,
    pub config: RunConfig,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub n_modes: usize,
    pub t_final: f64,
    pub steps: usize,
    pub rejected_steps: usize,
    #[serde(with = "float_or_inf")]
    pub grad_norm: f64,
    pub grad_stop: f64,
    pub initial: Diagnostics,
    pub terminal: Option<Diagnostics>,
    pub rate: Option<RateEstimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_error: Option<String>,
}

/// A report or the reason it could not be produced.
#[derive(Serialize)]
struct Attempt<T: Serialize> {
    #[serde(flatten)]
    value: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl<T: Serialize> Attempt<T> {
    fn from_result<E: std::fmt::Display>(r: std::result::Result<T, E>) -> Self {
        match r {
            Ok(v) => Self {
                value: Some(v),
                error: None,
            },
            Err(e) => Self {
                value: None,
                error: Some(e.to_string()),
            },
        }
    }
}

pub fn run(args: &FlowArgs) -> Result<u8> {
    if args.emit_template {
        println!("{}", serde_json::to_string_pretty(&RunConfig::template())?);
        return Ok(EXIT_OK);
    }
    if args.configs.is_empty() {
        bail!(sobolev_flow::Error::InvalidParameter(
            "at least one --config is required".into()
        ));
    }
    let Some(out) = &args.out else {
        bail!(sobolev_flow::Error::InvalidParameter("--out is required".into()));
    };
    let jobs = run_directories(&args.configs, out);
    let run_job = |(cfg, dir): &(PathBuf, PathBuf)| match run_one(cfg, dir, args.seed) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}: error: {e:#}", cfg.display());
            exit_code(&e)
        }
    };
    let codes: Vec<u8> = if args.jobs > 1 && jobs.len() > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build()
            .context("building thread pool")?;
        pool.install(|| jobs.par_iter().map(run_job).collect())
    } else {
        jobs.iter().map(run_job).collect()
    };
    Ok(codes.into_iter().max().unwrap_or(EXIT_VALIDATION))
}

fn run_directories(configs: &[PathBuf], out: &Path) -> Vec<(PathBuf, PathBuf)> {
    if configs.len() == 1 {
        return vec![(configs[0].clone(), out.to_path_buf())];
    }
    let mut used = std::collections::HashSet::new();
    configs
        .iter()
        .map(|c| {
            let stem = c
                .file_stem()
                .map_or_else(|| "run".to_owned(), |s| s.to_string_lossy().into_owned());
            let mut name = stem.clone();
            let mut k = 1;
            while !used.insert(name.clone()) {
                k += 1;
                name = format!("{stem}-{k}");
            }
            (c.clone(), out.join(name))
        })
        .collect()
}

/// Runs one configuration into `dir` and returns the exit code.
pub fn run_one(config_path: &Path, dir: &Path, seed: Option<u64>) -> Result<u8> {
    let mut cfg = RunConfig::load(config_path)?;
    if let Some(s) = seed {
        if !cfg.override_seed(s) {
            eprintln!("{}: --seed ignored, shape has no random seed", config_path.display());
        }
    }
    let hash = cfg.hash();
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

    let seed_curve = cfg.build_seed()?;
    let prepared = match cfg.analysis.symmetry {
        Some(s) => Some(prepare_symmetric(&seed_curve, s.n, s.m, cfg.seed.n_modes)?),
        None => None,
    };
    let start = prepared.as_ref().map_or(&seed_curve, |p| &p.curve);
    std::fs::write(dir.join("seed.json"), curve_to_json(&seed_curve, Some(&hash)))?;
    std::fs::write(dir.join("initial.json"), curve_to_json(start, Some(&hash)))?;

    let mut summary = RunSummary {
        config_hash: hash.clone(),
        config: cfg.clone(),
        status: RunStatus::Failed,
        error: None,
        n_modes: start.n_modes(),
        t_final: 0.0,
        steps: 0,
        rejected_steps: 0,
        grad_norm: f64::NAN,
        grad_stop: cfg.flow.grad_stop,
        initial: Diagnostics::compute(0.0, start),
        terminal: None,
        rate: None,
        rate_error: None,
    };
    let outcome = match flow_run(start, &cfg.flow) {
        Ok(o) => o,
        Err(e) => {
            summary.error = Some(e.to_string());
            write_json(&dir.join("run.json"), &summary)?;
            return Err(e.into());
        }
    };
    let terminal = &outcome.state.curve;

    let mut csv = BufWriter::new(File::create(dir.join("timeseries.csv"))?);
    writeln!(csv, "# config_hash={hash}")?;
    outcome.series.write_csv(&mut csv)?;
    csv.flush()?;
    std::fs::write(dir.join("terminal.json"), curve_to_json(terminal, Some(&hash)))?;
    write_json(
        &dir.join("conservation.json"),
        &Stamped {
            config_hash: &hash,
            body: Attempt::from_result(conservation_report(&outcome.series)),
        },
    )?;
    write_json(
        &dir.join("fit.json"),
        &Stamped {
            config_hash: &hash,
            body: Attempt::from_result(fit_equilibrium(terminal)),
        },
    )?;
    if let Some(p) = &prepared {
        let report = isoperimetry_report(p, terminal, outcome.grad_norm, cfg.flow.grad_stop);
        write_json(
            &dir.join("report.json"),
            &Stamped {
                config_hash: &hash,
                body: Attempt::from_result(report),
            },
        )?;
    }

    summary.status = match outcome.termination {
        Termination::Converged => RunStatus::Converged,
        Termination::TimeLimit => RunStatus::TimeLimit,
        Termination::StepLimit => RunStatus::StepLimit,
    };
    summary.t_final = outcome.state.t;
    summary.steps = outcome.state.step_count;
    summary.rejected_steps = outcome.rejected_steps;
    summary.grad_norm = outcome.grad_norm;
    summary.terminal = outcome.series.last().map(|r| r.diagnostics);
    match estimate_rate(&outcome.series, terminal, cfg.analysis.tail_fraction) {
        Ok(r) => summary.rate = Some(r),
        Err(e) => summary.rate_error = Some(e.to_string()),
    }
    write_json(&dir.join("run.json"), &summary)?;

    let energy = summary.terminal.map_or(f64::NAN, |d| d.energy);
    println!(
        "{}: {:?} at t = {} after {} steps, E = {energy:.12}, |DE| = {:.3e}",
        config_path.display(),
        summary.status,
        summary.t_final,
        summary.steps,
        summary.grad_norm
    );
    Ok(if summary.status == RunStatus::Converged {
        EXIT_OK
    } else {
        EXIT_NOT_CONVERGED
    })
}
