//! Energy to squeeze-parameter dictionary.
//!
//! For the harmonic oscillator every energy-indexed Gaussian is the squeezed
//! vacuum `u_r = cosh(r)u₀ + sinh(r)u₀*` with `cosh r = √(ε/ω + ½)`. For the
//! anharmonic oscillator the same structure only holds to first order in `λ`;
//! the weak-coupling expansions below follow the closed first-order formulas
//! for the turning points, the oscillation frequency and `cosh r`, `sinh r`.

use crate::closed_form::{harmonic_trajectory, EllipticTrajectory, GaussianTrajectory};
use crate::dynamics::{uniform_grid, ModeFunction};
use crate::error::{Error, Result};
use crate::fock::gaussian_overlap;
use crate::model::{solve_gap_equation, OscillatorParams};

/// Squeeze parameter and the frequency of the mode it squeezes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    pub r: f64,
    pub cosh_r: f64,
    pub sinh_r: f64,
    pub omega_eff: f64,
}

impl SqueezeParams {
    /// `|cosh²r - sinh²r - 1|`, zero for an exact Bogoliubov pair.
    pub fn normalization_defect(&self) -> f64 {
        (self.cosh_r * self.cosh_r - self.sinh_r * self.sinh_r - 1.0).abs()
    }

    /// `cosh_r·v₀ + sinh_r·v₀*` with `v₀` the plane wave at `omega_eff`.
    pub fn squeezed_mode(&self, t: f64) -> ModeFunction {
        let v0 = ModeFunction::plane_wave(self.omega_eff, t);
        ModeFunction {
            u: v0.u * self.cosh_r + v0.u.conj() * self.sinh_r,
            u_dot: v0.u_dot * self.cosh_r + v0.u_dot.conj() * self.sinh_r,
            t,
        }
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::invalid("omega must be positive"));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::invalid("lambda must be non-negative"));
    }
    Ok(())
}

/// Exact harmonic dictionary `cosh r = √(ε/ω + ½)`, `sinh r = √(ε/ω - ½)`.
pub fn harmonic_squeeze_from_energy(omega: f64, epsilon: f64) -> Result<SqueezeParams> {
    check_omega(omega)?;
    let floor = 0.5 * omega;
    if !(epsilon >= floor) {
        return Err(Error::BelowFloor { epsilon, floor });
    }
    let ratio = epsilon / omega;
    let sinh_r = (ratio - 0.5).sqrt();
    Ok(SqueezeParams {
        r: sinh_r.asinh(),
        cosh_r: (ratio + 0.5).sqrt(),
        sinh_r,
        omega_eff: omega,
    })
}

/// `cosh(r)·mode + sinh(r)·mode*`, applied to amplitude and rate alike.
pub fn apply_bogoliubov(mode: &ModeFunction, r: f64) -> ModeFunction {
    let (c, s) = (r.cosh(), r.sinh());
    ModeFunction {
        u: mode.u * c + mode.u.conj() * s,
        u_dot: mode.u_dot * c + mode.u_dot.conj() * s,
        t: mode.t,
    }
}

/// First-order turning points; `y3` is `None` when `λ = 0` (the root is at infinity).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakCouplingRoots {
    pub y1: f64,
    pub y2: f64,
    pub y3: Option<f64>,
}

fn check_weak(omega: f64, lambda: f64, epsilon: f64) -> Result<f64> {
    check_omega(omega)?;
    check_lambda(lambda)?;
    if !(epsilon > 0.5 * omega) {
        return Err(Error::invalid(
            "weak-coupling expansion needs epsilon > omega/2",
        ));
    }
    Ok((1.0 - omega * omega / (4.0 * epsilon * epsilon)).sqrt())
}

pub fn weak_coupling_roots(omega: f64, lambda: f64, epsilon: f64) -> Result<WeakCouplingRoots> {
    let s = check_weak(omega, lambda, epsilon)?;
    let w2 = omega * omega;
    let w6 = w2 * w2 * w2;
    let e2 = epsilon * epsilon;
    let base = epsilon / w2;
    let pre = 3.0 * lambda / (16.0 * w6);
    let even = 16.0 * e2 - w2;
    let odd = (16.0 * e2 - 3.0 * w2) / s;
    let y3 = (lambda > 0.0).then(|| {
        -2.0 * w2 / (3.0 * lambda) - epsilon / w2
            + 6.0 * e2 * lambda / w6 * (1.0 - w2 / (16.0 * e2))
    });
    Ok(WeakCouplingRoots {
        y1: base * (1.0 - s) - pre * (even - odd),
        y2: base * (1.0 + s) - pre * (even + odd),
        y3,
    })
}

/// `Ω = ω + (3λ/4ω)[2ε/ω² + √(1 - ω²/4ε²)]`.
pub fn weak_coupling_frequency(omega: f64, lambda: f64, epsilon: f64) -> Result<f64> {
    check_omega(omega)?;
    check_lambda(lambda)?;
    if !(epsilon >= 0.5 * omega) {
        return Err(Error::BelowFloor {
            epsilon,
            floor: 0.5 * omega,
        });
    }
    let s = (1.0 - omega * omega / (4.0 * epsilon * epsilon)).max(0.0).sqrt();
    Ok(omega + 3.0 * lambda / (4.0 * omega) * (2.0 * epsilon / (omega * omega) + s))
}

/// First-order `cosh r = A + B`, `sinh r = A - B` with
/// `A = √(Ωy₂/2 + Ω(y₂-y₁)²/(8y₃))`, `B = √(Ωy₁/2 + Ω(y₂-y₁)²/(8y₃))`.
pub fn weak_coupling_squeeze(omega: f64, lambda: f64, epsilon: f64) -> Result<SqueezeParams> {
    let roots = weak_coupling_roots(omega, lambda, epsilon)?;
    let big_omega = weak_coupling_frequency(omega, lambda, epsilon)?;
    let spread = roots.y2 - roots.y1;
    let correction = roots
        .y3
        .map_or(0.0, |y3| big_omega * spread * spread / (8.0 * y3));
    let rad_a = 0.5 * big_omega * roots.y2 + correction;
    let rad_b = 0.5 * big_omega * roots.y1 + correction;
    if rad_a < 0.0 || rad_b < 0.0 {
        return Err(Error::ExpansionBreakdown(format!(
            "negative radicand at lambda = {lambda}"
        )));
    }
    let (a, b) = (rad_a.sqrt(), rad_b.sqrt());
    let (cosh_r, sinh_r) = (a + b, a - b);
    Ok(SqueezeParams {
        r: (sinh_r / cosh_r).atanh(),
        cosh_r,
        sinh_r,
        omega_eff: big_omega,
    })
}

/// First-order expansion errors against the exact quantities at one coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakCouplingErrors {
    pub lambda: f64,
    /// `max(|y₁ - y₁_exact|, |y₂ - y₂_exact|)`.
    pub root_err: f64,
    /// `|Ω - π/T|` with `T` the exact period of `y(t)`.
    pub freq_err: f64,
    pub norm_defect: f64,
}

pub fn weak_coupling_errors(omega: f64, lambda: f64, epsilon: f64) -> Result<WeakCouplingErrors> {
    let params = OscillatorParams::new(omega, lambda)?;
    if params.is_harmonic() {
        return Err(Error::invalid("weak-coupling errors need lambda > 0"));
    }
    let approx = weak_coupling_roots(omega, lambda, epsilon)?;
    let traj = EllipticTrajectory::new(&params, epsilon)?;
    let exact = traj.roots;
    let period = traj.period()?;
    Ok(WeakCouplingErrors {
        lambda,
        root_err: (approx.y1 - exact.y1).abs().max((approx.y2 - exact.y2).abs()),
        freq_err: (weak_coupling_frequency(omega, lambda, epsilon)?
            - std::f64::consts::PI / period)
            .abs(),
        norm_defect: weak_coupling_squeeze(omega, lambda, epsilon)?.normalization_defect(),
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::invalid("slope fit needs at least two paired points"));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::invalid("slope fit needs positive finite values"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("slope fit needs distinct abscissae"));
    }
    Ok(sxy / sxx)
}

/// Best fixed-`r` squeezed gap-vacuum fit to an exact width trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MisfitScan {
    pub best_r: f64,
    pub best_misfit: f64,
}

/// 1000 uniform squeeze parameters on `[0, 3]`.
pub fn default_r_grid() -> Vec<f64> {
    uniform_grid(0.0, 3.0, 1000).expect("static grid")
}

/// Time grid and reference `y(t)` over one period, maximum at `t = 0`.
fn reference_widths(
    params: &OscillatorParams,
    epsilon: f64,
    n_times: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let omega_g = solve_gap_equation(params).omega_g;
    if params.is_harmonic() {
        let times = uniform_grid(0.0, std::f64::consts::PI / params.omega(), n_times)?;
        let ys = times
            .iter()
            .map(|&t| harmonic_trajectory(params, epsilon, t))
            .collect::<Result<Vec<_>>>()?;
        return Ok((times, ys));
    }
    let traj = EllipticTrajectory::new(params, epsilon)?.starting_at_maximum();
    let span = traj
        .period()
        .unwrap_or(std::f64::consts::PI / omega_g);
    let times = uniform_grid(0.0, span, n_times)?;
    let ys = times.iter().map(|&t| traj.chi_squared_at(t)).collect();
    Ok((times, ys))
}

fn relative_misfit(omega_g: f64, r: f64, times: &[f64], ys: &[f64]) -> f64 {
    times
        .iter()
        .zip(ys)
        .map(|(&t, &y)| {
            let v = apply_bogoliubov(&ModeFunction::plane_wave(omega_g, t), r);
            (v.u.norm_sqr() - y).abs() / y
        })
        .fold(0.0, f64::max)
}

/// Time-maximum relative error of `|v_r|²` against the exact `y(t)` for one `r`.
pub fn linear_squeeze_misfit(
    params: &OscillatorParams,
    epsilon: f64,
    r: f64,
    n_times: usize,
) -> Result<f64> {
    let (times, ys) = reference_widths(params, epsilon, n_times)?;
    Ok(relative_misfit(
        solve_gap_equation(params).omega_g,
        r,
        &times,
        &ys,
    ))
}

/// Scans `r_values` for the fixed squeeze of the gap vacuum closest to the
/// exact trajectory at `epsilon`.
pub fn scan_linear_squeeze(
    params: &OscillatorParams,
    epsilon: f64,
    r_values: &[f64],
    n_times: usize,
) -> Result<MisfitScan> {
    if r_values.is_empty() {
        return Err(Error::invalid("squeeze grid is empty"));
    }
    let (times, ys) = reference_widths(params, epsilon, n_times)?;
    let omega_g = solve_gap_equation(params).omega_g;
    let mut best = MisfitScan {
        best_r: r_values[0],
        best_misfit: f64::INFINITY,
    };
    for &r in r_values {
        let m = relative_misfit(omega_g, r, &times, &ys);
        if m < best.best_misfit {
            best = MisfitScan {
                best_r: r,
                best_misfit: m,
            };
        }
    }
    Ok(best)
}

/// Smallest overlap over one period between the exact Gaussian and the fixed
/// squeeze `v_r` of the gap vacuum, both started at maximal width.
pub fn linear_squeeze_min_overlap(
    params: &OscillatorParams,
    epsilon: f64,
    r: f64,
    n_times: usize,
) -> Result<f64> {
    let omega_g = solve_gap_equation(params).omega_g;
    let traj = GaussianTrajectory::new(params, epsilon)?;
    let (trajectory, span) = match traj {
        GaussianTrajectory::Harmonic { .. } => (traj, std::f64::consts::PI / params.omega()),
        GaussianTrajectory::Elliptic(e) => {
            let e = e.starting_at_maximum();
            let span = e.period().unwrap_or(std::f64::consts::PI / omega_g);
            (GaussianTrajectory::Elliptic(e), span)
        }
    };
    let mut worst = f64::INFINITY;
    for t in uniform_grid(0.0, span, n_times)? {
        let fit = apply_bogoliubov(&ModeFunction::plane_wave(omega_g, t), r).width_state()?;
        worst = worst.min(gaussian_overlap(&trajectory.state_at(t), &fit));
    }
    Ok(worst)
}
