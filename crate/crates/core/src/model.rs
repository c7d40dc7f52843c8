//! Oscillator parameters, Gaussian width states and the Gaussian energy
//! functional of `H = p²/2 + ω²x²/2 + λx⁴/4` (units with ħ = m = 1).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Frequency `omega` and quartic coupling `lambda` of the oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    omega: f64,
    lambda: f64,
}

impl OscillatorParams {
    pub fn new(omega: f64, lambda: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::invalid("omega must be positive"));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::invalid("lambda must be non-negative"));
        }
        Ok(Self { omega, lambda })
    }

    /// Harmonic oscillator, `lambda = 0`.
    pub fn harmonic(omega: f64) -> Result<Self> {
        Self::new(omega, 0.0)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_harmonic(&self) -> bool {
        self.lambda == 0.0
    }
}

/// Width `chi > 0` and width rate `chi_dot` of a centered Gaussian.
///
/// The wavefunction is `(2πχ²)^{-1/4} exp[-(1/(4χ²) - iχ̇/(2χ)) x²]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthState {
    chi: f64,
    chi_dot: f64,
}

impl WidthState {
    pub fn new(chi: f64, chi_dot: f64) -> Result<Self> {
        if !(chi.is_finite() && chi > 0.0) {
            return Err(Error::invalid("chi must be positive"));
        }
        if !chi_dot.is_finite() {
            return Err(Error::invalid("chi_dot must be finite"));
        }
        Ok(Self { chi, chi_dot })
    }

    /// State at rest with squared width `y = χ²`.
    pub fn at_rest_with_width_squared(y: f64) -> Result<Self> {
        if !(y.is_finite() && y > 0.0) {
            return Err(Error::invalid("squared width must be positive"));
        }
        Self::new(y.sqrt(), 0.0)
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn chi_dot(&self) -> f64 {
        self.chi_dot
    }

    /// Coefficient `a` of the exponent `exp(-a x²)`.
    pub fn exponent_coefficient(&self) -> Complex64 {
        Complex64::new(
            1.0 / (4.0 * self.chi * self.chi),
            -self.chi_dot / (2.0 * self.chi),
        )
    }

    pub fn wavefunction(&self, x: f64) -> Complex64 {
        let norm = (2.0 * std::f64::consts::PI * self.chi * self.chi).powf(-0.25);
        (-self.exponent_coefficient() * x * x).exp() * norm
    }

    /// Second moments `(Δx², Δp², ½⟨xp + px⟩)`.
    pub fn moments(&self) -> GaussianMoments {
        GaussianMoments {
            dx2: self.chi * self.chi,
            dp2: 1.0 / (4.0 * self.chi * self.chi) + self.chi_dot * self.chi_dot,
            cov: self.chi * self.chi_dot,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMoments {
    pub dx2: f64,
    pub dp2: f64,
    pub cov: f64,
}

impl GaussianMoments {
    /// `Δx²Δp² - cov²`, which is 1/4 for every pure Gaussian.
    pub fn determinant(&self) -> f64 {
        self.dx2 * self.dp2 - self.cov * self.cov
    }

    pub fn uncertainty_product(&self) -> f64 {
        (self.dx2 * self.dp2).sqrt()
    }
}

/// Variational vacuum: gap frequency and the energy floor of the Gaussian family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VacuumSolution {
    pub omega_g: f64,
    pub epsilon_min: f64,
}

impl VacuumSolution {
    /// Squared width `1/(2Ω_G)` at the minimum of the effective potential.
    pub fn width_squared(&self) -> f64 {
        0.5 / self.omega_g
    }

    pub fn state(&self) -> WidthState {
        WidthState {
            chi: self.width_squared().sqrt(),
            chi_dot: 0.0,
        }
    }

    /// Relative residual of `Ω_G² = ω² + 3λ/(2Ω_G)`.
    pub fn gap_residual(&self, params: &OscillatorParams) -> f64 {
        let w = self.omega_g;
        let w0 = params.omega();
        (w * w - w0 * w0 - 1.5 * params.lambda() / w).abs() / (w * w)
    }
}

/// Solves the gap equation and returns `Ω_G` with `ε_min = Ω_G/2 - 3λ/(16Ω_G²)`.
pub fn solve_gap_equation(params: &OscillatorParams) -> VacuumSolution {
    let omega_g = gap_root(params.omega(), params.lambda());
    let epsilon_min = 0.5 * omega_g - 3.0 * params.lambda() / (16.0 * omega_g * omega_g);
    VacuumSolution {
        omega_g,
        epsilon_min,
    }
}

/// Positive root of `Ω³ - ω²Ω - 3λ/2 = 0` for `ω ≥ 0`, `λ ≥ 0`.
///
/// Accepts `ω = 0` so the massless limit can be probed directly.
pub fn gap_root(omega: f64, lambda: f64) -> f64 {
    let w2 = omega * omega;
    let c = 1.5 * lambda;
    let f = |x: f64| x * (x * x - w2) - c;
    let cube = c.cbrt();

    // f(lo) <= 0 < f(hi) on the bracket and f is increasing on [ω, ∞).
    let mut lo = omega;
    let mut hi = omega + cube + 1.0;
    let mut x = omega.max(cube);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx < 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let df = 3.0 * x * x - w2;
        let mut next = if df > 0.0 { x - fx / df } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 2.0 * f64::EPSILON * x.abs() {
            return next;
        }
        x = next;
    }
    x
}

/// `ε = ½χ̇² + V_eff(χ)`.
pub fn energy(params: &OscillatorParams, state: &WidthState) -> f64 {
    0.5 * state.chi_dot * state.chi_dot + potential_unchecked(params, state.chi)
}

/// `V_eff = ω²χ²/2 + 3λχ⁴/4 + 1/(8χ²)`.
pub fn effective_potential(params: &OscillatorParams, chi: f64) -> Result<f64> {
    if !(chi.is_finite() && chi > 0.0) {
        return Err(Error::invalid("chi must be positive"));
    }
    Ok(potential_unchecked(params, chi))
}

fn potential_unchecked(params: &OscillatorParams, chi: f64) -> f64 {
    let y = chi * chi;
    let w = params.omega();
    0.5 * w * w * y + 0.75 * params.lambda() * y * y + 0.125 / y
}

/// `χ̈ = -ω²χ - 3λχ³ + 1/(4χ³)`.
pub fn acceleration(params: &OscillatorParams, state: &WidthState) -> f64 {
    width_acceleration(params, state.chi)
}

pub(crate) fn width_acceleration(params: &OscillatorParams, chi: f64) -> f64 {
    let w = params.omega();
    let chi3 = chi * chi * chi;
    -w * w * chi - 3.0 * params.lambda() * chi3 + 0.25 / chi3
}

pub fn gaussian_moments(state: &WidthState) -> GaussianMoments {
    state.moments()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn params(w: f64, l: f64) -> OscillatorParams {
        OscillatorParams::new(w, l).unwrap()
    }

    fn bisect_gap(w: f64, l: f64) -> f64 {
        let f = |x: f64| x * x * x - w * w * x - 1.5 * l;
        let (mut a, mut b) = (w.max(1e-300), w + (1.5 * l).cbrt() + 1.0);
        while b - a > 1e-15 * b {
            let m = 0.5 * (a + b);
            if f(m) > 0.0 {
                b = m
            } else {
                a = m
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn rejects_bad_params() {
        assert!(OscillatorParams::new(-1.0, 0.0).is_err());
        assert!(OscillatorParams::new(0.0, 0.0).is_err());
        assert!(OscillatorParams::new(1.0, -0.1).is_err());
        assert!(OscillatorParams::new(f64::NAN, 0.0).is_err());
        assert!(WidthState::new(0.0, 0.0).is_err());
        assert!(WidthState::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn harmonic_gap_is_exact() {
        let v = solve_gap_equation(&params(1.0, 0.0));
        assert_eq!(v.omega_g, 1.0);
        assert_eq!(v.epsilon_min, 0.5);
        let v = solve_gap_equation(&params(2.0, 0.0));
        assert_eq!(v.omega_g, 2.0);
        assert_eq!(v.epsilon_min, 1.0);
    }

    #[test]
    fn massless_gap_root() {
        let root = gap_root(0.0, 2.0 / 3.0);
        assert!((root - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gap_matches_bisection() {
        let v = solve_gap_equation(&params(1.0, 0.1));
        let oracle = bisect_gap(1.0, 0.1);
        assert!(v.omega_g > 1.0 && v.omega_g < 1.1);
        assert!((v.omega_g - oracle).abs() < 1e-13);
        assert!((v.omega_g - 1.068).abs() < 1e-3);
    }

    #[test]
    fn gap_residual_on_grid_and_monotone() {
        for &w in &[0.5, 1.0, 2.0] {
            let mut last = 0.0;
            for &l in &[0.0, 1e-3, 0.1, 1.0, 10.0] {
                let p = params(w, l);
                let v = solve_gap_equation(&p);
                assert!(v.gap_residual(&p) <= 1e-12, "w={w} l={l}");
                assert!((v.omega_g - bisect_gap(w, l)).abs() < 1e-12 * v.omega_g);
                assert!(v.omega_g > last);
                last = v.omega_g;
            }
        }
    }

    #[test]
    fn energy_examples() {
        let h = params(1.0, 0.0);
        assert!((energy(&h, &WidthState::new(FRAC_1_SQRT_2, 0.0).unwrap()) - 0.5).abs() < 1e-15);
        assert!((energy(&h, &WidthState::new(1.0, 0.0).unwrap()) - 0.625).abs() < 1e-15);

        let p = params(1.0, 0.1);
        let v = solve_gap_equation(&p);
        assert!((energy(&p, &v.state()) - v.epsilon_min).abs() < 1e-12);
    }

    #[test]
    fn effective_potential_examples() {
        let h = params(1.0, 0.0);
        assert!((effective_potential(&h, FRAC_1_SQRT_2).unwrap() - 0.5).abs() < 1e-15);
        let p = params(1.0, 2.0 / 3.0);
        assert!((effective_potential(&p, 1.0).unwrap() - 1.125).abs() < 1e-15);
        assert!(effective_potential(&p, 0.0).is_err());
        assert!(effective_potential(&p, -0.3).is_err());
    }

    #[test]
    fn potential_minimum_matches_gap() {
        // golden-section search on V_eff as the independent minimizer
        for &(w, l) in &[(1.0, 0.1), (0.5, 1.0), (2.0, 10.0), (1.0, 2.0 / 3.0)] {
            let p = params(w, l);
            let v = solve_gap_equation(&p);
            let g = |c: f64| effective_potential(&p, c).unwrap();
            let (mut a, mut b) = (1e-3, 10.0);
            let phi = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..200 {
                let c = b - phi * (b - a);
                let d = a + phi * (b - a);
                if g(c) < g(d) {
                    b = d
                } else {
                    a = c
                }
            }
            let argmin = 0.5 * (a + b);
            assert!((g(argmin) - v.epsilon_min).abs() < 1e-12);
            assert!((argmin * argmin - v.width_squared()).abs() < 1e-6);
        }
    }

    #[test]
    fn acceleration_examples() {
        let h = params(1.0, 0.0);
        assert!(acceleration(&h, &WidthState::new(FRAC_1_SQRT_2, 0.0).unwrap()).abs() < 1e-15);
        assert!((acceleration(&h, &WidthState::new(1.0, 0.0).unwrap()) + 0.75).abs() < 1e-15);
        for &(w, l) in &[(1.0, 0.1), (0.5, 10.0), (2.0, 1e-3)] {
            let p = params(w, l);
            let v = solve_gap_equation(&p);
            assert!(acceleration(&p, &v.state()).abs() < 1e-12);
        }
    }

    #[test]
    fn moments_examples() {
        let m = WidthState::new(FRAC_1_SQRT_2, 0.0).unwrap().moments();
        assert!((m.dx2 - 0.5).abs() < 1e-15);
        assert!((m.dp2 - 0.5).abs() < 1e-15);
        assert_eq!(m.cov, 0.0);
        assert!((m.uncertainty_product() - 0.5).abs() < 1e-15);

        let m = WidthState::new(1.0, 1.0).unwrap().moments();
        assert_eq!((m.dx2, m.dp2, m.cov), (1.0, 1.25, 1.0));
        assert!((m.determinant() - 0.25).abs() < 1e-15);
    }
}
