mod common;

use common::random_curve;
use proptest::prelude::*;
use sobolev_flow::analysis::symmetry_check;
use sobolev_flow::flow::{conservation_report, flow_run, FlowConfig, TimeSeries};
use sobolev_flow::io::{curve_from_json, curve_to_json};
use sobolev_flow::seeds;

fn short(t_max: f64) -> FlowConfig {
    FlowConfig {
        t_max,
        record_every: 0.25,
        ..FlowConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn energy_dominates_iso_ratio_along_runs(seed in 0u64..10_000) {
        let c = seeds::random_positive_area(8, 1.0, seed).unwrap();
        let out = flow_run(&c, &short(3.0)).unwrap();
        let mut last = f64::INFINITY;
        for d in out.series.diagnostics() {
            prop_assert!(d.iso_ratio >= 1.0 - 1e-9, "I = {}", d.iso_ratio);
            prop_assert!(d.energy >= d.iso_ratio * (1.0 - 1e-9), "E = {} < I = {}", d.energy, d.iso_ratio);
            prop_assert!(d.energy <= last + 1e-12 * last.abs().max(1.0));
            last = d.energy;
        }
        let r = conservation_report(&out.series).unwrap();
        prop_assert!(r.max_drift < 1e-7, "{:?}", r);
        prop_assert!(r.bounds_hold(), "{:?}", r);
    }

    #[test]
    fn symmetry_class_is_preserved(seed in 0u64..10_000, m in 2usize..6, n in 1usize..6) {
        let mut c = random_curve(10, seed).symmetrize(n, m).unwrap();
        // boost the smallest positive mode of the class so the area is positive
        let lead = ((n - 1) % m + 1) as i64;
        c.set_mode(lead, c.mode(lead) + num_complex::Complex64::new(2.0, 0.0));
        prop_assume!(c.area() > 0.5);
        let out = flow_run(&c, &short(2.0)).unwrap();
        for curve in out.series.curves() {
            prop_assert!(symmetry_check(curve, n, m).unwrap() < 1e-12 * (1.0 + curve.h1_norm()));
        }
    }

    #[test]
    fn snapshots_survive_json(seed in 0u64..10_000) {
        let c = random_curve(12, seed);
        let back = curve_from_json(&curve_to_json(&c, Some("h"))).unwrap();
        prop_assert!((&back - &c).max_abs_mode() < 1e-15);
    }
}

#[test]
fn time_series_csv_round_trip_through_a_file() {
    let out = flow_run(&seeds::ellipse(2.0, 1.0, 8).unwrap(), &short(2.0)).unwrap();
    let dir = std::env::temp_dir().join(format!("sobolev-flow-ts-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ts.csv");
    out.series.write_csv(std::fs::File::create(&path).unwrap()).unwrap();
    let back = TimeSeries::read_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(back.records(), out.series.records());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn backward_run_increases_energy() {
    let c = seeds::perturbed_circle(1.0, 1, 2, 0.1, 8).unwrap();
    let cfg = FlowConfig {
        backward: true,
        ..short(0.5)
    };
    let out = flow_run(&c, &cfg).unwrap();
    let e: Vec<f64> = out.series.diagnostics().map(|d| d.energy).collect();
    assert!(e.windows(2).all(|w| w[1] >= w[0]));
    assert!(e.last().unwrap() > e.first().unwrap());
}
