//! Exact width trajectories `y(t) = χ²(t)` at fixed energy.
//!
//! With `y = χ²` the first integral becomes `ẏ² = 4P(y)` where
//! `P(y) = 2εy - ω²y² - (3λ/2)y³ - 1/4 = (3λ/2)(y₂ - y)(y - y₁)(y - y₃)`.
//! Quadrature gives `F(κ, p) = √((3λ/2)(y₂ - y₃)) (t + φ₀/2)` with
//! `sin²κ = (y₂ - y₃)(y - y₁) / ((y₂ - y₁)(y - y₃))`, which inverts through
//! the Jacobi sine.

use crate::error::{Error, Result};
use crate::model::{solve_gap_equation, OscillatorParams, WidthState};
use crate::special::{complete_elliptic_k, cubic_real_roots, jacobi_elliptic};

/// Relative turning-point separation below which a trajectory is stationary.
pub const DEGENERATE_SEPARATION: f64 = 1e-10;

/// Roots of the quadrature cubic: turning points `0 < y1 <= y2` and `y3 < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots {
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
    /// Leading coefficient `3λ/2`.
    pub lam_scale: f64,
}

impl CubicRoots {
    /// `P(y) = 2εy - ω²y² - (3λ/2)y³ - 1/4`.
    pub fn quadrature_polynomial(params: &OscillatorParams, epsilon: f64, y: f64) -> f64 {
        let w2 = params.omega() * params.omega();
        ((-1.5 * params.lambda() * y - w2) * y + 2.0 * epsilon) * y - 0.25
    }

    pub fn sum(&self) -> f64 {
        self.y1 + self.y2 + self.y3
    }

    pub fn pair_sum(&self) -> f64 {
        self.y1 * self.y2 + self.y1 * self.y3 + self.y2 * self.y3
    }

    pub fn product(&self) -> f64 {
        self.y1 * self.y2 * self.y3
    }

    /// Elliptic modulus `p = √((y₂ - y₁)/(y₂ - y₃))`.
    pub fn modulus(&self) -> f64 {
        ((self.y2 - self.y1) / (self.y2 - self.y3)).sqrt()
    }

    /// Time scale `√((3λ/2)(y₂ - y₃))`.
    pub fn rate(&self) -> f64 {
        (self.lam_scale * (self.y2 - self.y3)).sqrt()
    }

    pub fn is_degenerate(&self) -> bool {
        (self.y2 - self.y1) / self.y2 < DEGENERATE_SEPARATION
    }
}

/// Turning points of the anharmonic width motion at energy `epsilon`.
pub fn turning_points(params: &OscillatorParams, epsilon: f64) -> Result<CubicRoots> {
    if !(params.lambda() > 0.0) {
        return Err(Error::invalid(
            "turning points need lambda > 0; the harmonic branch is closed-form",
        ));
    }
    if !epsilon.is_finite() {
        return Err(Error::invalid("epsilon must be finite"));
    }
    let vacuum = solve_gap_equation(params);
    let floor = vacuum.epsilon_min;
    let slack = 8.0 * f64::EPSILON * floor.abs().max(1.0);
    if epsilon < floor - slack {
        return Err(Error::BelowFloor { epsilon, floor });
    }

    let lam_scale = 1.5 * params.lambda();
    let w2 = params.omega() * params.omega();
    let sum = -w2 / lam_scale;
    let double_root = |y0: f64| CubicRoots {
        y1: y0,
        y2: y0,
        y3: sum - 2.0 * y0,
        lam_scale,
    };
    if epsilon <= floor {
        return Ok(double_root(vacuum.width_squared()));
    }

    let roots = match cubic_real_roots(lam_scale, w2, -2.0 * epsilon, 0.25) {
        Some(r) if r[0] < 0.0 && r[1] > 0.0 => r,
        // rounding pushed a near-double root off the real axis
        _ => return Ok(double_root(vacuum.width_squared())),
    };
    Ok(CubicRoots {
        y1: roots[1],
        y2: roots[2],
        y3: roots[0],
        lam_scale,
    })
}

/// Closed-form anharmonic trajectory at fixed energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticTrajectory {
    pub roots: CubicRoots,
    pub modulus_p: f64,
    pub rate: f64,
    pub phi0: f64,
    pub epsilon: f64,
}

impl EllipticTrajectory {
    /// Trajectory with `φ₀ = 0`, so that `y(0) = y₁`.
    pub fn new(params: &OscillatorParams, epsilon: f64) -> Result<Self> {
        let roots = turning_points(params, epsilon)?;
        Ok(Self {
            roots,
            modulus_p: roots.modulus(),
            rate: roots.rate(),
            phi0: 0.0,
            epsilon,
        })
    }

    pub fn with_phase(mut self, phi0: f64) -> Self {
        self.phi0 = phi0;
        self
    }

    /// Shifts the phase so that `y(0) = y₂`.
    pub fn starting_at_maximum(self) -> Self {
        if self.is_stationary() {
            return self;
        }
        let k = complete_elliptic_k(self.modulus_p).expect("modulus below one");
        let rate = self.rate;
        self.with_phase(2.0 * k / rate)
    }

    pub fn is_stationary(&self) -> bool {
        self.roots.is_degenerate()
    }

    fn argument(&self, t: f64) -> f64 {
        self.rate * (t + 0.5 * self.phi0)
    }

    /// `y(t) = χ²(t)`.
    pub fn chi_squared_at(&self, t: f64) -> f64 {
        let CubicRoots { y1, y2, y3, .. } = self.roots;
        if self.is_stationary() {
            return 0.5 * (y1 + y2);
        }
        let sn = jacobi_elliptic(self.argument(t), self.modulus_p)
            .expect("modulus below one")
            .sn;
        let s2 = sn * sn;
        let spread = y2 - y1;
        let y = y1 + spread * s2 * (y1 - y3) / ((y2 - y3) - spread * s2);
        y.clamp(y1, y2)
    }

    /// Width and width rate at time `t`.
    pub fn state_at(&self, t: f64) -> WidthState {
        let CubicRoots { y1, y2, y3, .. } = self.roots;
        if self.is_stationary() {
            return WidthState::at_rest_with_width_squared(0.5 * (y1 + y2))
                .expect("positive turning point");
        }
        let j = jacobi_elliptic(self.argument(t), self.modulus_p).expect("modulus below one");
        let s2 = j.sn * j.sn;
        let spread = y2 - y1;
        let denom = (y2 - y3) - spread * s2;
        let y = (y1 + spread * s2 * (y1 - y3) / denom).clamp(y1, y2);
        let dy_ds2 = spread * (y1 - y3) * (y2 - y3) / (denom * denom);
        let y_dot = dy_ds2 * 2.0 * j.sn * j.cn * j.dn * self.rate;
        let chi = y.sqrt();
        WidthState::new(chi, 0.5 * y_dot / chi).expect("positive width")
    }

    /// Full period of `y(t)`, `T = 2K(p)/rate`.
    pub fn period(&self) -> Result<f64> {
        if self.is_stationary() {
            return Err(Error::Stationary);
        }
        Ok(2.0 * complete_elliptic_k(self.modulus_p)? / self.rate)
    }
}

fn check_harmonic(params: &OscillatorParams, epsilon: f64) -> Result<()> {
    if !params.is_harmonic() {
        return Err(Error::invalid("harmonic trajectory needs lambda = 0"));
    }
    let floor = 0.5 * params.omega();
    if !(epsilon >= floor) {
        return Err(Error::BelowFloor { epsilon, floor });
    }
    Ok(())
}

fn harmonic_mean_and_amplitude(params: &OscillatorParams, epsilon: f64) -> (f64, f64) {
    let w = params.omega();
    let mean = epsilon / (w * w);
    let amp = mean * (1.0 - w * w / (4.0 * epsilon * epsilon)).max(0.0).sqrt();
    (mean, amp)
}

/// Harmonic width `y(t) = (ε/ω²)[1 + √(1 - ω²/4ε²) cos 2ωt]`, maximal at `t = 0`.
pub fn harmonic_trajectory(params: &OscillatorParams, epsilon: f64, t: f64) -> Result<f64> {
    check_harmonic(params, epsilon)?;
    let (mean, amp) = harmonic_mean_and_amplitude(params, epsilon);
    Ok(mean + amp * (2.0 * params.omega() * t).cos())
}

pub fn harmonic_state(params: &OscillatorParams, epsilon: f64, t: f64) -> Result<WidthState> {
    check_harmonic(params, epsilon)?;
    let w = params.omega();
    let (mean, amp) = harmonic_mean_and_amplitude(params, epsilon);
    let y = mean + amp * (2.0 * w * t).cos();
    let y_dot = -2.0 * w * amp * (2.0 * w * t).sin();
    let chi = y.sqrt();
    WidthState::new(chi, 0.5 * y_dot / chi)
}

/// Either closed-form branch behind one interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussianTrajectory {
    Harmonic {
        params: OscillatorParams,
        epsilon: f64,
    },
    Elliptic(EllipticTrajectory),
}

impl GaussianTrajectory {
    /// Harmonic branch for `λ = 0` (maximum at `t = 0`), elliptic otherwise
    /// (minimum at `t = 0`).
    pub fn new(params: &OscillatorParams, epsilon: f64) -> Result<Self> {
        if params.is_harmonic() {
            check_harmonic(params, epsilon)?;
            Ok(Self::Harmonic {
                params: *params,
                epsilon,
            })
        } else {
            Ok(Self::Elliptic(EllipticTrajectory::new(params, epsilon)?))
        }
    }

    pub fn chi_squared_at(&self, t: f64) -> f64 {
        match self {
            Self::Harmonic { params, epsilon } => {
                harmonic_trajectory(params, *epsilon, t).expect("validated")
            }
            Self::Elliptic(e) => e.chi_squared_at(t),
        }
    }

    pub fn state_at(&self, t: f64) -> WidthState {
        match self {
            Self::Harmonic { params, epsilon } => {
                harmonic_state(params, *epsilon, t).expect("validated")
            }
            Self::Elliptic(e) => e.state_at(t),
        }
    }

    /// Period of `y(t)`; `None` for a stationary state.
    pub fn period(&self) -> Option<f64> {
        match self {
            Self::Harmonic { params, epsilon } => {
                let (_, amp) = harmonic_mean_and_amplitude(params, *epsilon);
                (amp > 0.0).then(|| std::f64::consts::PI / params.omega())
            }
            Self::Elliptic(e) => e.period().ok(),
        }
    }
}
