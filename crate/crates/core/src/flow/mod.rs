//! Time integration of `X_t = -DE[X]`.

mod conservation;
pub mod integrator;
mod series;

pub use conservation::{conservation_report, ConservationReport};
pub use series::{Record, TimeSeries, CSV_HEADER};

use serde::{Deserialize, Serialize};

use crate::curve::{eps_area, Curve, Diagnostics};
use crate::error::{Error, Result};
use crate::gradients::grad_e_with;
use integrator::{Dopri5, OdeState, OdeSystem, StepControl};

impl OdeState for Curve {
    fn axpy(&mut self, a: f64, x: &Self) {
        Curve::axpy(self, a, x);
    }
    fn norm(&self) -> f64 {
        self.h1_norm()
    }
}

/// Missing fields take their defaults when deserialising.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_max: f64,
    /// Stop once `||DE||_{H1}` falls below this.
    pub grad_stop: f64,
    /// Spacing of recorded diagnostics in time units.
    pub record_every: f64,
    pub max_steps: usize,
    pub allow_negative_area: bool,
    /// Largest step; defaults to `record_every`.
    pub max_step: Option<f64>,
    /// Integrate `X_t = +DE[X]`. Recorded times are elapsed time.
    pub backward: bool,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            t_max: 500.0,
            grad_stop: 1e-8,
            record_every: 0.5,
            max_steps: 1_000_000,
            allow_negative_area: false,
            max_step: None,
            backward: false,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        positive("t_max", self.t_max)?;
        positive("record_every", self.record_every)?;
        if let Some(h) = self.max_step {
            positive("max_step", h)?;
        }
        if !(self.grad_stop >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grad_stop must be non-negative, got {}",
                self.grad_stop
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be at least 1".into()));
        }
        Ok(())
    }

    fn control(&self) -> StepControl {
        StepControl::new(self.rel_tol, self.abs_tol, self.max_step.unwrap_or(self.record_every))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub t: f64,
    pub curve: Curve,
    pub last_step: f64,
    pub step_count: usize,
}

impl FlowState {
    pub fn new(curve: Curve) -> Self {
        Self {
            t: 0.0,
            curve,
            last_step: 0.0,
            step_count: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Gradient norm fell below `grad_stop`.
    Converged,
    TimeLimit,
    StepLimit,
}

#[derive(Debug, Clone)]
pub struct FlowOutcome {
    pub series: TimeSeries,
    pub state: FlowState,
    pub termination: Termination,
    /// `||DE||_{H1}` of the final state.
    pub grad_norm: f64,
    pub rejected_steps: usize,
}

/// Right-hand side `-DE[X]` (or `+DE[X]` backwards) with the area guard.
struct CurveFlow {
    sign: f64,
    allow_negative_area: bool,
    rejected_area: Option<f64>,
}

impl CurveFlow {
    fn new(cfg: &FlowConfig) -> Self {
        Self {
            sign: if cfg.backward { 1.0 } else { -1.0 },
            allow_negative_area: cfg.allow_negative_area,
            rejected_area: None,
        }
    }
}

impl OdeSystem<Curve> for CurveFlow {
    fn rhs(&mut self, _t: f64, y: &Curve) -> Option<Curve> {
        let area = y.area();
        let eps = eps_area(y);
        let ok = if self.allow_negative_area {
            area.abs() > eps
        } else {
            area > eps
        };
        if !ok || !y.is_finite() {
            self.rejected_area = Some(area);
            return None;
        }
        let energy = y.dirichlet() / area;
        Some(grad_e_with(y, area, energy).scale(self.sign))
    }
}

fn check_initial(c: &Curve, cfg: &FlowConfig) -> Result<()> {
    if !c.is_finite() {
        return Err(Error::InvalidCurve("non-finite coefficients".into()));
    }
    let area = c.area();
    let eps = eps_area(c);
    if cfg.allow_negative_area {
        if area.abs() <= eps {
            return Err(Error::ZeroArea { area, threshold: eps });
        }
    } else if area <= eps {
        return Err(Error::NonPositiveArea { area });
    }
    Ok(())
}

/// Persistent stepper for a single run.
struct Stepper {
    dopri: Dopri5<Curve>,
    sys: CurveFlow,
    allow_negative_area: bool,
}

impl Stepper {
    fn new(cfg: &FlowConfig) -> Self {
        Self {
            dopri: Dopri5::new(cfg.control()),
            sys: CurveFlow::new(cfg),
            allow_negative_area: cfg.allow_negative_area,
        }
    }

    /// Takes one accepted step no later than `t_limit` and returns the
    /// gradient norm at the new state.
    fn advance(&mut self, s: &mut FlowState, t_limit: f64) -> Result<f64> {
        self.sys.rejected_area = None;
        let acc = match self.dopri.step(&mut self.sys, s.t, &s.curve, t_limit) {
            Ok(acc) => acc,
            Err(Error::StepFailure { t, step }) => {
                return Err(match self.sys.rejected_area {
                    Some(area) if !self.allow_negative_area || area.abs() <= eps_area(&s.curve) => {
                        Error::AreaCollapse { t, area }
                    }
                    _ => Error::StepFailure { t, step },
                })
            }
            Err(e) => return Err(e),
        };
        let area = acc.y.area();
        if !self.allow_negative_area && area <= eps_area(&acc.y) {
            return Err(Error::AreaCollapse { t: acc.t, area });
        }
        s.t = acc.t;
        s.curve = acc.y;
        s.last_step = acc.h;
        s.step_count += 1;
        Ok(acc.f.h1_norm())
    }

    fn grad_norm(&mut self, s: &FlowState) -> Result<f64> {
        self.dopri
            .derivative_at(&mut self.sys, s.t, &s.curve)
            .map(|f| f.h1_norm())
            .ok_or_else(|| {
                let area = s.curve.area();
                Error::ZeroArea {
                    area,
                    threshold: eps_area(&s.curve),
                }
            })
    }
}

/// One accepted adaptive step. The previous step size, if any, seeds the
/// controller.
pub fn flow_step(s: &FlowState, cfg: &FlowConfig) -> Result<FlowState> {
    cfg.validate()?;
    check_initial(&s.curve, cfg)?;
    let mut stepper = Stepper::new(cfg);
    stepper.dopri = Dopri5::new(cfg.control()).with_initial_step(s.last_step);
    let mut next = s.clone();
    stepper.advance(&mut next, f64::INFINITY)?;
    Ok(next)
}

/// Integrates from `c0` until the gradient norm drops below `grad_stop`,
/// `t_max` is reached, or `max_steps` steps were taken. Diagnostics are
/// recorded at multiples of `record_every` and at the final time.
pub fn flow_run(c0: &Curve, cfg: &FlowConfig) -> Result<FlowOutcome> {
    cfg.validate()?;
    check_initial(c0, cfg)?;
    let mut stepper = Stepper::new(cfg);
    let mut state = FlowState::new(c0.clone());
    let mut series = TimeSeries::new();
    series.push(Diagnostics::compute(0.0, c0), 0, c0.clone())?;
    let mut grad_norm = stepper.grad_norm(&state)?;
    let mut next_index = 1usize;
    let mut recorded_at = 0.0;

    let termination = loop {
        if grad_norm < cfg.grad_stop {
            break Termination::Converged;
        }
        if state.t >= cfg.t_max {
            break Termination::TimeLimit;
        }
        if state.step_count >= cfg.max_steps {
            break Termination::StepLimit;
        }
        let next_record = (next_index as f64 * cfg.record_every).min(cfg.t_max);
        grad_norm = stepper.advance(&mut state, next_record)?;
        if state.t >= next_record {
            series.push(
                Diagnostics::compute(state.t, &state.curve),
                state.step_count,
                state.curve.clone(),
            )?;
            recorded_at = state.t;
            next_index += 1;
        }
    };
    if state.t > recorded_at {
        series.push(
            Diagnostics::compute(state.t, &state.curve),
            state.step_count,
            state.curve.clone(),
        )?;
    }
    Ok(FlowOutcome {
        series,
        state,
        termination,
        grad_norm,
        rejected_steps: stepper.dopri.rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::test_support::*;
    use crate::gradients::grad_e;
    use num_complex::Complex64;

    fn quick() -> FlowConfig {
        FlowConfig {
            t_max: 5.0,
            ..FlowConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(FlowConfig::default().validate().is_ok());
        let bad = FlowConfig {
            rel_tol: 0.0,
            ..FlowConfig::default()
        };
        assert!(matches!(bad.validate(), Err(Error::InvalidParameter(_))));
        let bad = FlowConfig {
            t_max: -1.0,
            ..FlowConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = FlowConfig {
            max_step: Some(f64::NAN),
            ..FlowConfig::default()
        };
        assert!(bad.validate().is_err());
        let json = serde_json::to_string(&FlowConfig::default()).unwrap();
        let back: FlowConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, FlowConfig::default());
        let partial: FlowConfig = serde_json::from_str(r#"{"rel_tol": 1e-8}"#).unwrap();
        assert_eq!(
            partial,
            FlowConfig {
                rel_tol: 1e-8,
                ..FlowConfig::default()
            }
        );
        assert!(serde_json::from_str::<FlowConfig>(r#"{"rel_tl": 1}"#).is_err());
    }

    #[test]
    fn equilibrium_is_stationary_under_a_step() {
        let mut c = Curve::zero(4);
        c.set_mode(2, Complex64::new(0.7, -0.2));
        c.set_mode(0, Complex64::new(1.0, 3.0));
        let s = FlowState::new(c.clone());
        let next = flow_step(&s, &quick()).unwrap();
        assert!(next.t > 0.0);
        assert!((&next.curve - &c).h1_norm() < 1e-12);
    }

    #[test]
    fn energy_decreases_across_steps() {
        let mut s = FlowState::new(ellipse(2.0, 1.0, 8));
        let mut e = s.curve.energy().unwrap();
        for _ in 0..5 {
            s = flow_step(&s, &quick()).unwrap();
            let e_new = s.curve.energy().unwrap();
            assert!(e_new < e);
            e = e_new;
        }
        assert_eq!(s.step_count, 5);
    }

    #[test]
    fn scaled_data_has_half_the_velocity() {
        let x = ellipse(2.0, 1.0, 4);
        let g = grad_e(&x).unwrap();
        let g2 = grad_e(&x.scale(2.0)).unwrap();
        assert!((&g2 - &g.scale(0.5)).max_abs_mode() < 1e-15);
    }

    #[test]
    fn circle_terminates_immediately() {
        let out = flow_run(&unit_circle(6), &quick()).unwrap();
        assert_eq!(out.termination, Termination::Converged);
        assert!(out.series.len() <= 2);
        for d in out.series.diagnostics() {
            assert!((d.energy - 1.0).abs() < 1e-14);
        }
        assert_eq!(out.state.step_count, 0);
    }

    #[test]
    fn rejects_non_positive_area() {
        let c = unit_circle(2).reverse_orientation();
        assert!(matches!(flow_run(&c, &quick()), Err(Error::NonPositiveArea { .. })));
        let cfg = FlowConfig {
            allow_negative_area: true,
            ..quick()
        };
        // a reversed circle is an equilibrium of the negative-area branch too
        let out = flow_run(&c, &cfg).unwrap();
        assert_eq!(out.termination, Termination::Converged);
    }

    #[test]
    fn records_land_on_the_cadence() {
        let cfg = FlowConfig {
            t_max: 3.0,
            record_every: 0.5,
            ..FlowConfig::default()
        };
        let out = flow_run(&ellipse(2.0, 1.0, 6), &cfg).unwrap();
        assert_eq!(out.termination, Termination::TimeLimit);
        let times: Vec<f64> = out.series.diagnostics().map(|d| d.t).collect();
        assert_eq!(times, vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
        assert_eq!(out.series.curves().len(), 7);
        let steps: Vec<usize> = out.series.records().iter().map(|r| r.step).collect();
        assert!(steps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn step_limit() {
        let cfg = FlowConfig {
            max_steps: 3,
            ..quick()
        };
        let out = flow_run(&ellipse(2.0, 1.0, 3), &cfg).unwrap();
        assert_eq!(out.termination, Termination::StepLimit);
        assert_eq!(out.state.step_count, 3);
        assert_eq!(out.series.last().unwrap().step, 3);
    }

    #[test]
    fn band_limit_and_symmetry_are_exact() {
        let c = ellipse(2.0, 1.0, 8);
        let out = flow_run(&c, &quick()).unwrap();
        for (j, z) in out.state.curve.iter_modes() {
            if j.abs() != 1 {
                assert_eq!(z, Complex64::new(0.0, 0.0), "mode {j}");
            }
        }
    }

    #[test]
    fn backward_run_increases_energy() {
        let cfg = FlowConfig {
            t_max: 1.0,
            backward: true,
            ..FlowConfig::default()
        };
        let c = ellipse(2.0, 1.0, 4);
        let out = flow_run(&c, &cfg).unwrap();
        assert!(out.state.curve.energy().unwrap() > c.energy().unwrap());
    }
}
