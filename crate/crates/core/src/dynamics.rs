//! Numerical evolution of the Gaussian width and of the complex mode
//! functions that define the Gaussian through `â(t)|0⟩ = 0`.
//!
//! A mode `u = χ e^{-iθ}` with Wronskian `u̇*u - u*u̇ = i` has `θ̇ = 1/(2χ²)`,
//! and `|u|` then obeys the width equation. For the harmonic oscillator the
//! mode equation is linear, `ü + ω²u = 0`; for the anharmonic oscillator the
//! Gaussian (mean-field) closure gives `v̈ + ω²v + 3λ|v|²v = 0`.

use num_complex::Complex64;

use crate::bogoliubov::apply_bogoliubov;
use crate::error::{Error, Result};
use crate::model::{solve_gap_equation, width_acceleration, OscillatorParams, WidthState};
use crate::ode::{integrate, OdeSystem};

pub use crate::ode::IntegratorConfig;

/// Tolerance on `|W - i|` accepted for a canonically normalized mode.
pub const WRONSKIAN_TOL: f64 = 1e-9;

struct WidthSystem<'a>(&'a OscillatorParams);

impl OdeSystem<2> for WidthSystem<'_> {
    fn rhs(&self, _t: f64, y: &[f64; 2]) -> [f64; 2] {
        [y[1], width_acceleration(self.0, y[0])]
    }

    fn admissible(&self, y: &[f64; 2]) -> bool {
        y[0] > 0.0
    }
}

struct MeanFieldSystem<'a>(&'a OscillatorParams);

impl OdeSystem<4> for MeanFieldSystem<'_> {
    fn rhs(&self, _t: f64, y: &[f64; 4]) -> [f64; 4] {
        let w = self.0.omega();
        let k = w * w + 3.0 * self.0.lambda() * (y[0] * y[0] + y[1] * y[1]);
        [y[2], y[3], -k * y[0], -k * y[1]]
    }
}

/// Uniform grid of `n` points covering `[t0, t1]`.
pub fn uniform_grid(t0: f64, t1: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::invalid("a time grid needs at least two samples"));
    }
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(Error::invalid("time span must be finite"));
    }
    let dt = (t1 - t0) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { t1 } else { t0 + dt * i as f64 })
        .collect())
}

/// Width states sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<WidthState>,
}

impl WidthTrajectory {
    pub fn chi_squared(&self) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(|s| s.chi() * s.chi())
    }
}

/// Integrates `χ̈ = -ω²χ - 3λχ³ + 1/(4χ³)` from `initial` at `t_span.0`,
/// sampling `n_samples` uniformly spaced points up to `t_span.1`.
pub fn integrate_width(
    params: &OscillatorParams,
    initial: WidthState,
    t_span: (f64, f64),
    n_samples: usize,
    config: &IntegratorConfig,
) -> Result<WidthTrajectory> {
    let times = uniform_grid(t_span.0, t_span.1, n_samples)?;
    integrate_width_at(params, initial, t_span.0, times, config)
}

/// As [`integrate_width`] on caller-supplied sample times.
pub fn integrate_width_at(
    params: &OscillatorParams,
    initial: WidthState,
    t0: f64,
    times: Vec<f64>,
    config: &IntegratorConfig,
) -> Result<WidthTrajectory> {
    let raw = integrate(
        &WidthSystem(params),
        t0,
        [initial.chi(), initial.chi_dot()],
        &times,
        config,
    )?;
    let states = raw
        .into_iter()
        .map(|[chi, chi_dot]| WidthState::new(chi, chi_dot))
        .collect::<Result<Vec<_>>>()?;
    Ok(WidthTrajectory { times, states })
}

/// Complex mode amplitude and its time derivative at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeFunction {
    pub u: Complex64,
    pub u_dot: Complex64,
    pub t: f64,
}

impl ModeFunction {
    pub fn new(u: Complex64, u_dot: Complex64, t: f64) -> Self {
        Self { u, u_dot, t }
    }

    /// Positive-frequency plane wave `e^{-iΩt}/√(2Ω)`.
    pub fn plane_wave(frequency: f64, t: f64) -> Self {
        let u = Complex64::from_polar((2.0 * frequency).sqrt().recip(), -frequency * t);
        Self {
            u,
            u_dot: Complex64::new(0.0, -frequency) * u,
            t,
        }
    }

    pub fn wronskian(&self) -> Complex64 {
        wronskian(self)
    }

    pub fn conj(&self) -> Self {
        Self {
            u: self.u.conj(),
            u_dot: self.u_dot.conj(),
            t: self.t,
        }
    }

    /// Polar modulus `χ = |u|`.
    pub fn chi(&self) -> f64 {
        self.u.norm()
    }

    /// Polar phase `θ` with `u = χ e^{-iθ}`.
    pub fn theta(&self) -> f64 {
        -self.u.arg()
    }

    /// `d(arg u)/dt = Im(u* u̇)/|u|²`.
    pub fn phase_rate(&self) -> f64 {
        (self.u.conj() * self.u_dot).im / self.u.norm_sqr()
    }

    /// Gaussian width state annihilated by the operator built from this mode.
    pub fn width_state(&self) -> Result<WidthState> {
        let chi = self.chi();
        WidthState::new(chi, (self.u.conj() * self.u_dot).re / chi)
    }
}

/// `W = u̇*u - u*u̇`; equal to `i` exactly when `[â, â†] = 1`.
pub fn wronskian(mode: &ModeFunction) -> Complex64 {
    mode.u_dot.conj() * mode.u - mode.u.conj() * mode.u_dot
}

/// Harmonic vacuum mode `u₀(t) = e^{-iωt}/√(2ω)`.
pub fn vacuum_mode_harmonic(params: &OscillatorParams, t: f64) -> Result<ModeFunction> {
    if !params.is_harmonic() {
        return Err(Error::invalid("harmonic vacuum mode needs lambda = 0"));
    }
    Ok(ModeFunction::plane_wave(params.omega(), t))
}

/// Gap-equation vacuum mode `v₀(t) = e^{-iΩ_G t}/√(2Ω_G)`.
pub fn vacuum_mode(params: &OscillatorParams, t: f64) -> ModeFunction {
    ModeFunction::plane_wave(solve_gap_equation(params).omega_g, t)
}

/// Integrates `v̈ + ω²v + 3λ|v|²v = 0` as a real four-dimensional system.
pub fn integrate_meanfield(
    params: &OscillatorParams,
    initial: ModeFunction,
    t_end: f64,
    n_samples: usize,
    config: &IntegratorConfig,
) -> Result<Vec<ModeFunction>> {
    let times = uniform_grid(initial.t, t_end, n_samples)?;
    integrate_meanfield_at(params, initial, &times, config)
}

pub fn integrate_meanfield_at(
    params: &OscillatorParams,
    initial: ModeFunction,
    times: &[f64],
    config: &IntegratorConfig,
) -> Result<Vec<ModeFunction>> {
    if (initial.wronskian() - Complex64::i()).norm() > WRONSKIAN_TOL {
        return Err(Error::invalid("initial mode must satisfy the Wronskian condition"));
    }
    let y0 = [
        initial.u.re,
        initial.u.im,
        initial.u_dot.re,
        initial.u_dot.im,
    ];
    let raw = integrate(&MeanFieldSystem(params), initial.t, y0, times, config)?;
    Ok(raw
        .into_iter()
        .zip(times)
        .map(|(y, &t)| ModeFunction {
            u: Complex64::new(y[0], y[1]),
            u_dot: Complex64::new(y[2], y[3]),
            t,
        })
        .collect())
}

/// Time maximum of `|v̈ + ω²v + 3λ|v|²v|` over sampled modes paired with
/// their second derivatives.
pub fn meanfield_residual(params: &OscillatorParams, samples: &[(ModeFunction, Complex64)]) -> f64 {
    let w2 = params.omega() * params.omega();
    samples
        .iter()
        .map(|(m, acc)| (acc + m.u * (w2 + 3.0 * params.lambda() * m.u.norm_sqr())).norm())
        .fold(0.0, f64::max)
}

/// Mean-field residual of the fixed superposition `cosh(r)v₀ + sinh(r)v₀*`.
///
/// Both `v₀` and `v₀*` oscillate at `Ω_G`, so `v̈_r = -Ω_G² v_r` exactly.
pub fn superposition_residual(params: &OscillatorParams, r: f64, times: &[f64]) -> f64 {
    let omega_g = solve_gap_equation(params).omega_g;
    let samples: Vec<_> = times
        .iter()
        .map(|&t| {
            let v = apply_bogoliubov(&ModeFunction::plane_wave(omega_g, t), r);
            (v, -omega_g * omega_g * v.u)
        })
        .collect();
    meanfield_residual(params, &samples)
}
