//! Dormand-Prince 5(4) with proportional-integral step control.
//!
//! Generic over the state so that it can be exercised on scalar problems
//! with known solutions.

use crate::error::{Error, Result};

/// Vector-space operations needed by the stepper.
pub trait OdeState: Clone {
    /// `self += a * x`.
    fn axpy(&mut self, a: f64, x: &Self);
    fn norm(&self) -> f64;
}

impl OdeState for f64 {
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
}

/// Right-hand side `y' = f(t, y)`. Returning `None` marks `y` as outside the
/// domain; the stepper then retries with a smaller step.
pub trait OdeSystem<S: OdeState> {
    fn rhs(&mut self, t: f64, y: &S) -> Option<S>;
}

impl<S: OdeState, F: FnMut(f64, &S) -> Option<S>> OdeSystem<S> for F {
    fn rhs(&mut self, t: f64, y: &S) -> Option<S> {
        self(t, y)
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights minus the embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub safety: f64,
    pub min_factor: f64,
    pub max_factor: f64,
}

impl StepControl {
    pub fn new(rel_tol: f64, abs_tol: f64, max_step: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            max_step,
            safety: 0.9,
            min_factor: 0.2,
            max_factor: 5.0,
        }
    }
}

/// One accepted step.
#[derive(Debug, Clone)]
pub struct Accepted<S> {
    pub t: f64,
    pub y: S,
    /// Right-hand side at the new point.
    pub f: S,
    pub h: f64,
    pub error_ratio: f64,
    pub rejected: usize,
}

/// Stepper state carried between steps: proposed step, previous error ratio
/// and the first-same-as-last stage.
#[derive(Debug, Clone)]
pub struct Dopri5<S> {
    pub control: StepControl,
    h: Option<f64>,
    prev_err: f64,
    fsal: Option<(f64, S)>,
    pub accepted: usize,
    pub rejected: usize,
}

const ALPHA: f64 = 0.7 / 5.0;
const BETA: f64 = 0.4 / 5.0;

impl<S: OdeState> Dopri5<S> {
    pub fn new(control: StepControl) -> Self {
        Self {
            control,
            h: None,
            prev_err: 1e-4,
            fsal: None,
            accepted: 0,
            rejected: 0,
        }
    }

    /// Seeds the first step size instead of using the starting heuristic.
    pub fn with_initial_step(mut self, h: f64) -> Self {
        if h > 0.0 {
            self.h = Some(h);
        }
        self
    }

    /// Step size the controller would try next.
    pub fn proposed_step(&self) -> Option<f64> {
        self.h
    }

    fn scale(&self, y: &S) -> f64 {
        self.control.abs_tol + self.control.rel_tol * y.norm()
    }

    /// Right-hand side at `(t, y)`, reusing the stored last stage when it
    /// belongs to the same point.
    pub fn derivative_at(&mut self, sys: &mut impl OdeSystem<S>, t: f64, y: &S) -> Option<S> {
        if let Some((tf, f)) = &self.fsal {
            if *tf == t {
                return Some(f.clone());
            }
        }
        let f = sys.rhs(t, y)?;
        self.fsal = Some((t, f.clone()));
        Some(f)
    }

    fn initial_step(&self, sys: &mut impl OdeSystem<S>, t: f64, y: &S, f0: &S) -> f64 {
        let sc = self.scale(y);
        let (d0, d1) = (y.norm() / sc, f0.norm() / sc);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(self.control.max_step);
        let mut y1 = y.clone();
        y1.axpy(h0, f0);
        let d2 = match sys.rhs(t + h0, &y1) {
            Some(mut f1) => {
                f1.axpy(-1.0, f0);
                f1.norm() / sc / h0
            }
            None => return h0 * 1e-3,
        };
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.control.max_step)
    }

    /// Advances from `(t, y)` by one accepted step no longer than
    /// `t_limit - t`.
    pub fn step(&mut self, sys: &mut impl OdeSystem<S>, t: f64, y: &S, t_limit: f64) -> Result<Accepted<S>> {
        let f0 = self
            .derivative_at(sys, t, y)
            .ok_or(Error::StepFailure { t, step: 0.0 })?;
        let mut h = match self.h {
            Some(h) => h,
            None => self.initial_step(sys, t, y, &f0),
        }
        .min(self.control.max_step);
        let min_step = 1e-14 * t.abs().max(1.0);
        let mut rejected = 0;
        let mut after_reject = false;

        loop {
            let remaining = t_limit - t;
            let clipped = h >= remaining;
            let h_try = if clipped { remaining } else { h };
            if h_try < min_step && !clipped {
                return Err(Error::StepFailure { t, step: h_try });
            }

            let mut k: Vec<S> = Vec::with_capacity(7);
            k.push(f0.clone());
            let mut stage_failed = false;
            let mut y_new = y.clone();
            for s in 1..7 {
                let mut ys = y.clone();
                for (j, kj) in k.iter().enumerate() {
                    if A[s][j] != 0.0 {
                        ys.axpy(h_try * A[s][j], kj);
                    }
                }
                match sys.rhs(t + C[s] * h_try, &ys) {
                    Some(ks) => k.push(ks),
                    None => {
                        stage_failed = true;
                        break;
                    }
                }
                if s == 6 {
                    y_new = ys;
                }
            }

            let err_ratio = if stage_failed {
                f64::INFINITY
            } else {
                let mut err = y.clone();
                err.axpy(-1.0, y);
                for (e, ki) in E.iter().zip(&k) {
                    if *e != 0.0 {
                        err.axpy(h_try * e, ki);
                    }
                }
                err.norm() / self.scale(y).max(self.scale(&y_new))
            };

            if err_ratio <= 1.0 {
                let mut factor = if err_ratio == 0.0 {
                    self.control.max_factor
                } else {
                    self.control.safety * err_ratio.powf(-ALPHA) * self.prev_err.powf(BETA)
                };
                factor = factor.clamp(self.control.min_factor, self.control.max_factor);
                if after_reject {
                    factor = factor.min(1.0);
                }
                // a clipped step says nothing about the natural step size
                let h_next = if clipped { h.max(h_try * factor) } else { h_try * factor };
                self.h = Some(h_next.min(self.control.max_step));
                self.prev_err = err_ratio.max(1e-4);
                let f_new = k.pop().expect("seven stages");
                let t_new = if clipped { t_limit } else { t + h_try };
                self.fsal = Some((t_new, f_new.clone()));
                self.accepted += 1;
                self.rejected += rejected;
                return Ok(Accepted {
                    t: t_new,
                    y: y_new,
                    f: f_new,
                    h: h_try,
                    error_ratio: err_ratio,
                    rejected,
                });
            }

            rejected += 1;
            after_reject = true;
            let factor = if err_ratio.is_finite() {
                (self.control.safety * err_ratio.powf(-0.2)).max(self.control.min_factor)
            } else {
                0.25
            };
            h = h_try * factor;
            if h < min_step {
                return Err(Error::StepFailure { t, step: h });
            }
        }
    }
}
