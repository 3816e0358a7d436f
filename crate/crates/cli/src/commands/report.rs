use std::path::Path;

use anyhow::{Context, Result};
use sobolev_flow::analysis::{isoperimetry_report, prepare_symmetric};
use sobolev_flow::io::curve_from_json;

use super::flow::RunSummary;
use super::{read_text, write_json, Stamped};

/// Rebuilds the prepared curve from `seed.json` and checks it against
/// `terminal.json` and the gradient norm recorded in `run.json`.
pub fn run(run_dir: &Path, n: usize, m: usize, out: Option<&Path>) -> Result<()> {
    let summary: RunSummary = serde_json::from_str(&read_text(&run_dir.join("run.json"))?)
        .map_err(sobolev_flow::io::json_error)
        .context("parsing run.json")?;
    let seed = curve_from_json(&read_text(&run_dir.join("seed.json"))?).context("parsing seed.json")?;
    let terminal = curve_from_json(&read_text(&run_dir.join("terminal.json"))?).context("parsing terminal.json")?;
    let prepared = prepare_symmetric(&seed, n, m, summary.n_modes)?;
    let report = isoperimetry_report(&prepared, &terminal, summary.grad_norm, summary.grad_stop)?;
    let stamped = Stamped {
        config_hash: &summary.config_hash,
        body: &report,
    };
    let default_out = run_dir.join("report.json");
    write_json(out.unwrap_or(&default_out), &stamped)?;
    println!("{}", serde_json::to_string_pretty(&stamped)?);
    Ok(())
}
