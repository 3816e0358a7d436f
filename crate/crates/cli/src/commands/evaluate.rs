use std::path::Path;

use anyhow::{Context, Result};
use sobolev_flow::io::curve_from_json;
use sobolev_flow::Diagnostics;

use super::read_text;

pub fn run(path: &Path, json: bool) -> Result<()> {
    let d = evaluate_file(path)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&d)?);
    } else {
        print!("{}", table(&d));
    }
    Ok(())
}

pub fn evaluate_file(path: &Path) -> Result<Diagnostics> {
    let c = curve_from_json(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Diagnostics::compute(0.0, &c))
}

fn table(d: &Diagnostics) -> String {
    let rows = [
        ("length", d.length),
        ("area", d.area),
        ("dirichlet", d.dirichlet),
        ("energy", d.energy),
        ("iso_ratio", d.iso_ratio),
        ("h1_norm", d.h1_norm),
        ("centered_h1", d.centered_h1_norm),
        ("centroid_x", d.centroid[0]),
        ("centroid_y", d.centroid[1]),
        ("grad_norm", d.grad_norm),
    ];
    rows.iter().map(|(k, v)| format!("{k:<12} {v:.15e}\n")).collect()
}
