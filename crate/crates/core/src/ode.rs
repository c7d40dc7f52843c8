//! Dormand-Prince 5(4) integrator with PI step-size control and the
//! standard fourth-order continuous extension for dense output.

use crate::error::{Error, Result};

/// Tolerances and step bound for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_step: f64::INFINITY,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_step > 0.0) {
            return Err(Error::invalid("integrator tolerances must be positive"));
        }
        Ok(())
    }
}

/// First-order system `y' = f(t, y)` of fixed dimension.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N]) -> [f64; N];

    /// States outside the domain of the vector field; proposed steps landing
    /// there are rejected and retried with a smaller step.
    fn admissible(&self, _y: &[f64; N]) -> bool {
        true
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const MAX_STEPS: usize = 10_000_000;

fn lin<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

fn finite<const N: usize>(y: &[f64; N]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Interpolating polynomial over one accepted step.
struct DenseStep<const N: usize> {
    t0: f64,
    h: f64,
    r: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let mut out = [0.0; N];
        for i in 0..N {
            let r = &self.r;
            out[i] = r[0][i]
                + theta * (r[1][i] + theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i])));
        }
        out
    }
}

/// Integrates from `(t0, y0)` and returns the state at each of `samples`.
///
/// `samples` must be monotone in the direction of integration starting at
/// or after `t0`; the integration stops at the last sample. Backward
/// integration is selected by decreasing sample times.
pub fn integrate<const N: usize, S: OdeSystem<N>>(
    system: &S,
    t0: f64,
    y0: [f64; N],
    samples: &[f64],
    config: &IntegratorConfig,
) -> Result<Vec<[f64; N]>> {
    config.validate()?;
    if !finite(&y0) || !system.admissible(&y0) {
        return Err(Error::invalid("initial state outside the domain"));
    }
    let Some(&t_end) = samples.last() else {
        return Ok(Vec::new());
    };
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    if samples
        .windows(2)
        .any(|w| (w[1] - w[0]) * dir < 0.0)
        || samples.iter().any(|&s| (s - t0) * dir < 0.0 || !s.is_finite())
    {
        return Err(Error::invalid("sample times must be monotone from t0"));
    }

    let mut out = Vec::with_capacity(samples.len());
    let mut next = 0;
    while next < samples.len() && samples[next] == t0 {
        out.push(y0);
        next += 1;
    }
    if next == samples.len() {
        return Ok(out);
    }

    let mut t = t0;
    let mut y = y0;
    let mut k1 = system.rhs(t, &y);
    let mut h = dir * initial_step(system, t, &y, &k1, config).min((t_end - t0).abs());
    let mut err_old: f64 = 1e-4;
    let mut last_rejected = false;

    for _ in 0..MAX_STEPS {
        if h.abs() > config.max_step {
            h = dir * config.max_step;
        }
        if (t + h - t_end) * dir > 0.0 {
            h = t_end - t;
        }
        if h.abs() <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepSizeUnderflow { t });
        }

        let Some(step) = attempt(system, t, &y, &k1, h) else {
            h *= 0.25;
            last_rejected = true;
            continue;
        };
        let (y_new, k7, y_err, stages) = step;

        let mut sum = 0.0;
        for i in 0..N {
            let sc = config.abs_tol + config.rel_tol * y[i].abs().max(y_new[i].abs());
            sum += (y_err[i] / sc).powi(2);
        }
        let err = (sum / N as f64).sqrt();

        if err <= 1.0 {
            let ydiff: [f64; N] = std::array::from_fn(|i| y_new[i] - y[i]);
            let bspl: [f64; N] = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
            let r4: [f64; N] = std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]);
            let [s1, s3, s4, s5, s6] = stages;
            let r5: [f64; N] = std::array::from_fn(|i| {
                h * (D1 * s1[i] + D3 * s3[i] + D4 * s4[i] + D5 * s5[i] + D6 * s6[i] + D7 * k7[i])
            });
            let dense = DenseStep {
                t0: t,
                h,
                r: [y, ydiff, bspl, r4, r5],
            };
            let t_new = if (t + h - t_end) * dir >= 0.0 { t_end } else { t + h };
            while next < samples.len() && (samples[next] - t_new) * dir <= 0.0 {
                let s = samples[next];
                out.push(if s == t_new { y_new } else { dense.eval(s) });
                next += 1;
            }
            if next == samples.len() {
                return Ok(out);
            }

            let err_c = err.max(1e-10);
            let mut fac = err_c.powf(0.2 - 0.75 * BETA) / err_old.powf(BETA) / SAFETY;
            fac = fac.clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            if last_rejected {
                fac = fac.max(1.0);
            }
            err_old = err_c;
            t = t_new;
            y = y_new;
            k1 = k7;
            h /= fac;
            last_rejected = false;
        } else {
            let fac = (err.powf(0.2) / SAFETY).min(1.0 / FAC_MIN);
            h /= fac;
            last_rejected = true;
        }
    }
    Err(Error::NotConverged("integrator step budget exhausted".into()))
}

type StepResult<const N: usize> = ([f64; N], [f64; N], [f64; N], [[f64; N]; 5]);

fn attempt<const N: usize, S: OdeSystem<N>>(
    system: &S,
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
) -> Option<StepResult<N>> {
    let stage = |y: [f64; N]| -> Option<[f64; N]> {
        (finite(&y) && system.admissible(&y)).then_some(y)
    };
    let y2 = stage(lin(y, h, &[(A21, k1)]))?;
    let k2 = system.rhs(t + C2 * h, &y2);
    let y3 = stage(lin(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k3 = system.rhs(t + C3 * h, &y3);
    let y4 = stage(lin(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k4 = system.rhs(t + C4 * h, &y4);
    let y5 = stage(lin(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
    let k5 = system.rhs(t + C5 * h, &y5);
    let y6 = stage(lin(
        y,
        h,
        &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ))?;
    let k6 = system.rhs(t + h, &y6);
    let y_new = stage(lin(
        y,
        h,
        &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    ))?;
    let k7 = system.rhs(t + h, &y_new);
    if !finite(&k7) {
        return None;
    }
    let y_err: [f64; N] = std::array::from_fn(|i| {
        h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
    });
    Some((y_new, k7, y_err, [*k1, k3, k4, k5, k6]))
}

/// Initial step heuristic from Hairer, Nørsett & Wanner.
fn initial_step<const N: usize, S: OdeSystem<N>>(
    system: &S,
    t: f64,
    y: &[f64; N],
    f0: &[f64; N],
    config: &IntegratorConfig,
) -> f64 {
    let sc: [f64; N] = std::array::from_fn(|i| config.abs_tol + config.rel_tol * y[i].abs());
    let norm = |v: &[f64; N]| {
        (v.iter().zip(sc.iter()).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / N as f64).sqrt()
    };
    let d0 = norm(y);
    let d1 = norm(f0);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h0 = h0.min(config.max_step);
    let y1 = lin(y, h0, &[(1.0, f0)]);
    if !finite(&y1) || !system.admissible(&y1) {
        return h0 * 1e-3;
    }
    let f1 = system.rhs(t + h0, &y1);
    let diff: [f64; N] = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(config.max_step)
}
