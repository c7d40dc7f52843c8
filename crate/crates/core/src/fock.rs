//! Truncated number-basis oracle for the full Hamiltonian and for
//! squeezed-vacuum statistics.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::dynamics::{ModeFunction, WRONSKIAN_TOL};
use crate::error::{Error, Result};
use crate::model::{solve_gap_equation, OscillatorParams, WidthState};

/// Number basis `|0⟩ … |dim-1⟩` of the ladder operators at `base_freq`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockSpace {
    dim: usize,
    base_freq: f64,
}

impl FockSpace {
    pub fn new(dim: usize, base_freq: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::invalid("Fock dimension must be at least 2"));
        }
        if !(base_freq.is_finite() && base_freq > 0.0) {
            return Err(Error::invalid("base frequency must be positive"));
        }
        Ok(Self { dim, base_freq })
    }

    /// Basis built on the gap-equation frequency `Ω_G`.
    pub fn gap_basis(params: &OscillatorParams, dim: usize) -> Result<Self> {
        Self::new(dim, solve_gap_equation(params).omega_g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base_freq(&self) -> f64 {
        self.base_freq
    }

    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::new(dim, self.base_freq)
    }

    /// Number of low-lying states outside the boundary guard band (top quarter).
    pub fn trusted_states(&self) -> usize {
        (3 * self.dim / 4).max(1)
    }
}

/// `x = (a + a†)/√(2Ω)` on `dim` states.
pub fn position_matrix(dim: usize, base_freq: f64) -> DMatrix<f64> {
    let scale = (2.0 * base_freq).sqrt().recip();
    let mut x = DMatrix::zeros(dim, dim);
    for n in 0..dim.saturating_sub(1) {
        let e = scale * ((n + 1) as f64).sqrt();
        x[(n, n + 1)] = e;
        x[(n + 1, n)] = e;
    }
    x
}

/// `H = p²/2 + ω²x²/2 + λx⁴/4` projected onto the truncated basis.
///
/// The quadratic part uses exact ladder matrix elements. `x⁴` is the fourth
/// power of `x` on a basis enlarged by four states and then truncated, which
/// gives the exact projection, so eigenvalues are Rayleigh-Ritz upper bounds.
pub fn build_hamiltonian(params: &OscillatorParams, space: &FockSpace) -> DMatrix<f64> {
    let n = space.dim;
    let wb = space.base_freq;
    let w2 = params.omega() * params.omega();
    let x_big = position_matrix(n + 4, wb);
    let x2_big = &x_big * &x_big;
    let x4 = (&x2_big * &x2_big).view((0, 0), (n, n)).into_owned();

    // x² = (a†² + a² + 2n + 1)/(2Ω), p² = Ω(-a†² - a² + 2n + 1)/2
    let mut h = x4 * (0.25 * params.lambda());
    let kin = 0.25 * wb;
    let pot = 0.25 * w2 / wb;
    for i in 0..n {
        h[(i, i)] += (kin + pot) * (2 * i + 1) as f64;
        if i + 2 < n {
            let e = (pot - kin) * (((i + 1) * (i + 2)) as f64).sqrt();
            h[(i, i + 2)] += e;
            h[(i + 2, i)] += e;
        }
    }
    h
}

/// Eigenvalues sorted ascending with eigenvectors in matching columns.
pub fn eigensystem(params: &OscillatorParams, space: &FockSpace) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(build_hamiltonian(params, space));
    let mut order: Vec<usize> = (0..space.dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<DVector<f64>>>(),
    );
    (values, vectors)
}

fn eigenvalues(params: &OscillatorParams, space: &FockSpace) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(build_hamiltonian(params, space))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// Leading eigenvalues that moved by at most the tolerance when the
    /// basis was enlarged, counted only inside the guard band.
    pub converged_count: usize,
}

/// Spectrum at `space.dim()` with a convergence count against `dim + dim/4`.
pub fn spectrum(params: &OscillatorParams, space: &FockSpace, tol: f64) -> Result<SpectrumResult> {
    let values = eigenvalues(params, space);
    let larger = eigenvalues(params, &space.with_dim(space.dim + (space.dim / 4).max(4))?);
    let converged_count = values
        .iter()
        .zip(larger.iter())
        .take(space.trusted_states())
        .take_while(|(a, b)| (*a - *b).abs() <= tol * a.abs().max(1.0))
        .count();
    Ok(SpectrumResult {
        eigenvalues: values,
        converged_count,
    })
}

/// Lowest eigenvalue at a single truncation.
pub fn ground_energy_at(params: &OscillatorParams, space: &FockSpace) -> f64 {
    eigenvalues(params, space)[0]
}

/// Relative change of `E₀` under dimension doubling tolerated by [`ground_energy`].
pub const GROUND_CONVERGENCE_TOL: f64 = 1e-10;

/// Ground energy checked for stability under doubling of the truncation.
pub fn ground_energy(params: &OscillatorParams, space: &FockSpace) -> Result<f64> {
    let coarse = ground_energy_at(params, space);
    let fine = ground_energy_at(params, &space.with_dim(2 * space.dim)?);
    if (coarse - fine).abs() > GROUND_CONVERGENCE_TOL * fine.abs().max(1.0) {
        return Err(Error::NotConverged(format!(
            "ground energy moved by {:.3e} under doubling of dim {}; increase truncation",
            (coarse - fine).abs(),
            space.dim
        )));
    }
    Ok(fine)
}

/// Coefficients of the normal-ordered quadratic truncation
/// `H_G = diag·(A†A + ½) + const_shift + offdiag·A†² + offdiag*·A²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticCoeffs {
    pub diag: f64,
    pub offdiag: Complex64,
    pub const_shift: f64,
}

impl QuadraticCoeffs {
    /// `⟨0|H_G|0⟩ = diag/2 + const_shift`.
    pub fn vacuum_expectation(&self) -> f64 {
        0.5 * self.diag + self.const_shift
    }
}

fn check_mode(mode: &ModeFunction) -> Result<()> {
    if (mode.wronskian() - Complex64::i()).norm() > WRONSKIAN_TOL {
        return Err(Error::invalid("mode must satisfy the Wronskian condition"));
    }
    Ok(())
}

/// Closed-form coefficients for the ladder operators built from `mode`.
pub fn quadratic_truncation_coeffs(
    params: &OscillatorParams,
    mode: &ModeFunction,
) -> Result<QuadraticCoeffs> {
    check_mode(mode)?;
    let w2 = params.omega() * params.omega();
    let lam = params.lambda();
    let n = mode.u.norm_sqr();
    let vc = mode.u.conj();
    let vdc = mode.u_dot.conj();
    Ok(QuadraticCoeffs {
        diag: mode.u_dot.norm_sqr() + w2 * n + 3.0 * lam * n * n,
        offdiag: 0.5 * (vdc * vdc + w2 * vc * vc + 3.0 * lam * n * vc * vc),
        const_shift: -0.75 * lam * n * n,
    })
}

/// The same coefficients read off matrix elements of the full Hamiltonian in
/// the number basis of `A = i(v*p - v̇*x)`, using `x = vA + v*A†` and
/// `p = v̇A + v̇*A†`. The dropped quartic normal-ordered term has no
/// elements between `|0⟩`, `|1⟩` and `|2⟩` that enter here.
pub fn quadratic_coeffs_from_matrix(
    params: &OscillatorParams,
    mode: &ModeFunction,
) -> Result<QuadraticCoeffs> {
    check_mode(mode)?;
    let dim = 10;
    let mut a = DMatrix::<Complex64>::zeros(dim, dim);
    for n in 0..dim - 1 {
        a[(n, n + 1)] = Complex64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    let ad = a.adjoint();
    let x = &a * mode.u + &ad * mode.u.conj();
    let p = &a * mode.u_dot + &ad * mode.u_dot.conj();
    let x2 = &x * &x;
    let w2 = params.omega() * params.omega();
    let h = &p * &p * Complex64::new(0.5, 0.0)
        + &x2 * Complex64::new(0.5 * w2, 0.0)
        + &x2 * &x2 * Complex64::new(0.25 * params.lambda(), 0.0);
    let e0 = h[(0, 0)].re;
    let e1 = h[(1, 1)].re;
    let diag = e1 - e0;
    Ok(QuadraticCoeffs {
        diag,
        offdiag: h[(2, 0)] / 2f64.sqrt(),
        const_shift: e0 - 0.5 * diag,
    })
}

/// Number-basis amplitudes of the state annihilated by `cosh(r)a - sinh(r)a†`,
/// `c₂ₙ = tanhⁿ(r) √((2n)!)/(2ⁿ n!) / √(cosh r)`, odd amplitudes zero.
pub fn squeezed_vacuum_amplitudes(r: f64, space: &FockSpace) -> Vec<f64> {
    let mut c = vec![0.0; space.dim];
    let t = r.tanh();
    c[0] = r.cosh().sqrt().recip();
    // c₂ₙ₊₂/c₂ₙ = tanh r · √((2n+1)/(2n+2))
    let mut n = 0;
    while 2 * n + 2 < space.dim {
        let ratio = t * (((2 * n + 1) as f64) / ((2 * n + 2) as f64)).sqrt();
        c[2 * n + 2] = c[2 * n] * ratio;
        n += 1;
    }
    c
}

pub fn norm_deficit(amps: &[f64]) -> f64 {
    1.0 - amps.iter().map(|c| c * c).sum::<f64>()
}

/// `⟨N⟩ = Σ n|cₙ|²`.
pub fn number_expectation(amps: &[f64]) -> f64 {
    amps.iter()
        .enumerate()
        .map(|(n, c)| n as f64 * c * c)
        .sum()
}

/// Norm of `(cosh(r)a - sinh(r)a†)c` within the truncated space.
pub fn annihilation_residual(r: f64, amps: &[f64]) -> f64 {
    let (ch, sh) = (r.cosh(), r.sinh());
    let dim = amps.len();
    (0..dim)
        .map(|n| {
            let lower = if n + 1 < dim {
                ((n + 1) as f64).sqrt() * amps[n + 1]
            } else {
                0.0
            };
            let raise = if n > 0 { (n as f64).sqrt() * amps[n - 1] } else { 0.0 };
            (ch * lower - sh * raise).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// `|⟨Ψ_A|Ψ_B⟩| = N_A N_B √π / |a_A* + a_B|^{1/2}` for centered Gaussians.
pub fn gaussian_overlap(a: &WidthState, b: &WidthState) -> f64 {
    let na = (2.0 * std::f64::consts::PI * a.chi() * a.chi()).powf(-0.25);
    let nb = (2.0 * std::f64::consts::PI * b.chi() * b.chi()).powf(-0.25);
    let s = a.exponent_coefficient().conj() + b.exponent_coefficient();
    na * nb * std::f64::consts::PI.sqrt() / s.norm().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bogoliubov::apply_bogoliubov;
    use crate::dynamics::vacuum_mode;

    fn params(w: f64, l: f64) -> OscillatorParams {
        OscillatorParams::new(w, l).unwrap()
    }

    #[test]
    fn harmonic_hamiltonian_is_diagonal() {
        let p = params(1.4, 0.0);
        let h = build_hamiltonian(&p, &FockSpace::new(12, 1.4).unwrap());
        for i in 0..12 {
            for j in 0..12 {
                let expected = if i == j { 1.4 * (i as f64 + 0.5) } else { 0.0 };
                assert!((h[(i, j)] - expected).abs() < 1e-14, "({i},{j})");
            }
        }
    }

    #[test]
    fn vacuum_quartic_moment() {
        let wb = 1.7;
        let x = position_matrix(10, wb);
        let x2 = &x * &x;
        let x4 = &x2 * &x2;
        assert!((x4[(0, 0)] - 3.0 / (4.0 * wb * wb)).abs() < 1e-15);
    }

    #[test]
    fn hamiltonian_is_symmetric_with_parity_blocks() {
        let p = params(1.0, 2.0 / 3.0);
        let h = build_hamiltonian(&p, &FockSpace::gap_basis(&p, 30).unwrap());
        for i in 0..30 {
            for j in 0..30 {
                assert_eq!(h[(i, j)], h[(j, i)]);
                if (i + j) % 2 == 1 {
                    assert_eq!(h[(i, j)], 0.0);
                }
            }
        }
        let x = position_matrix(30, 1.0);
        for i in 0..30 {
            for j in 0..30 {
                if (i + j) % 2 == 0 {
                    assert_eq!(x[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn eigenvectors_have_definite_parity() {
        let p = params(1.0, 2.0 / 3.0);
        let (_, vecs) = eigensystem(&p, &FockSpace::gap_basis(&p, 40).unwrap());
        for k in 0..10 {
            let col = vecs.column(k);
            let even: f64 = (0..40).step_by(2).map(|i| col[i] * col[i]).sum();
            let odd: f64 = (1..40).step_by(2).map(|i| col[i] * col[i]).sum();
            assert!(even.min(odd) < 1e-20, "state {k}");
            assert_eq!(odd < even, k % 2 == 0);
        }
    }

    #[test]
    fn ground_energy_harmonic_and_variational() {
        let h = params(1.0, 0.0);
        let e = ground_energy(&h, &FockSpace::gap_basis(&h, 20).unwrap()).unwrap();
        assert!((e - 0.5).abs() < 1e-12);

        let gaps: Vec<f64> = [2.0 / 3.0, 10.0]
            .iter()
            .map(|&l| {
                let p = params(1.0, l);
                let floor = solve_gap_equation(&p).epsilon_min;
                let e0 = ground_energy(&p, &FockSpace::gap_basis(&p, 60).unwrap()).unwrap();
                assert!(e0 < floor);
                (floor - e0) / floor
            })
            .collect();
        assert!(gaps[1] > gaps[0]);
    }

    #[test]
    fn truncation_convergence_and_monotonicity() {
        let p = params(1.0, 2.0 / 3.0);
        let space = FockSpace::gap_basis(&p, 60).unwrap();
        let e60 = ground_energy_at(&p, &space);
        let e80 = ground_energy_at(&p, &space.with_dim(80).unwrap());
        assert!((e60 - e80).abs() < 1e-10);
        let mut last = f64::INFINITY;
        for dim in (4..64).step_by(4) {
            let sub = space.with_dim(dim).unwrap();
            let e = ground_energy_at(&p, &sub);
            // eigensolver rounding scales with the matrix norm
            let noise = 16.0 * f64::EPSILON * build_hamiltonian(&p, &sub).amax();
            assert!(e <= last + noise, "dim {dim}");
            last = e;
        }
    }

    #[test]
    fn ground_energy_flags_small_basis() {
        let p = params(1.0, 10.0);
        let space = FockSpace::new(6, 1.0).unwrap();
        assert!(matches!(ground_energy(&p, &space), Err(Error::NotConverged(_))));
    }

    #[test]
    fn spectrum_counts_converged_levels() {
        let h = params(1.0, 0.0);
        let s = spectrum(&h, &FockSpace::new(16, 1.0).unwrap(), 1e-9).unwrap();
        assert_eq!(s.converged_count, 12);
        for (n, e) in s.eigenvalues.iter().enumerate() {
            assert!((e - (n as f64 + 0.5)).abs() < 1e-12);
        }
        let p = params(1.0, 10.0);
        let coarse = spectrum(&p, &FockSpace::new(8, 1.0).unwrap(), 1e-9).unwrap();
        assert_eq!(coarse.converged_count, 0);
    }

    #[test]
    fn vacuum_kills_off_diagonal_terms() {
        for &l in &[0.0, 0.1, 2.0 / 3.0, 10.0] {
            let p = params(1.0, l);
            let vac = solve_gap_equation(&p);
            let c = quadratic_truncation_coeffs(&p, &vacuum_mode(&p, 0.3)).unwrap();
            assert!(c.offdiag.norm() < 1e-12, "lambda {l}");
            assert!((c.diag - vac.omega_g).abs() < 1e-12);
            assert!((c.vacuum_expectation() - vac.epsilon_min).abs() < 1e-12);
        }
        let h = params(1.0, 0.0);
        let c = quadratic_truncation_coeffs(&h, &vacuum_mode(&h, 0.0)).unwrap();
        assert!((c.diag - 1.0).abs() < 1e-15);
        assert_eq!(c.const_shift, 0.0);
    }

    #[test]
    fn squeezed_mode_has_off_diagonal_terms() {
        let p = params(1.0, 0.5);
        let vr = apply_bogoliubov(&vacuum_mode(&p, 0.0), 0.4);
        assert!(quadratic_truncation_coeffs(&p, &vr).unwrap().offdiag.norm() > 1e-3);
    }

    #[test]
    fn closed_form_coeffs_match_matrix_elements() {
        let p = params(1.3, 0.7);
        for &r in &[0.0, 0.3, 1.1] {
            let m = apply_bogoliubov(&vacuum_mode(&p, 0.9), r);
            let a = quadratic_truncation_coeffs(&p, &m).unwrap();
            let b = quadratic_coeffs_from_matrix(&p, &m).unwrap();
            assert!((a.diag - b.diag).abs() < 1e-10 * a.diag.abs().max(1.0));
            assert!((a.offdiag - b.offdiag).norm() < 1e-10 * a.diag.abs().max(1.0));
            assert!((a.const_shift - b.const_shift).abs() < 1e-10);
        }
    }

    #[test]
    fn unnormalized_mode_rejected() {
        let p = params(1.0, 0.1);
        let m = vacuum_mode(&p, 0.0);
        let bad = ModeFunction::new(m.u * 2.0, m.u_dot, 0.0);
        assert!(quadratic_truncation_coeffs(&p, &bad).is_err());
    }

    #[test]
    fn squeezed_amplitudes() {
        let space = FockSpace::new(200, 1.0).unwrap();
        let vac = squeezed_vacuum_amplitudes(0.0, &space);
        assert_eq!(vac[0], 1.0);
        assert!(vac[1..].iter().all(|&c| c == 0.0));

        let r = 0.6585;
        let c = squeezed_vacuum_amplitudes(r, &space);
        assert!(c.iter().skip(1).step_by(2).all(|&x| x == 0.0));
        assert!((number_expectation(&c) - r.sinh().powi(2)).abs() < 1e-10);
        assert!(annihilation_residual(r, &c) < 1e-9);
        assert!(norm_deficit(&c).abs() < 1e-12);

        let mut last = f64::INFINITY;
        for dim in [10, 20, 40, 80] {
            let d = norm_deficit(&squeezed_vacuum_amplitudes(1.2, &FockSpace::new(dim, 1.0).unwrap()));
            assert!(d >= -1e-15 && d < last);
            last = d;
        }
    }

    #[test]
    fn overlap_examples() {
        let a = WidthState::new(std::f64::consts::FRAC_1_SQRT_2, 0.0).unwrap();
        let b = WidthState::new(1.0, 0.0).unwrap();
        assert!((gaussian_overlap(&a, &a) - 1.0).abs() < 1e-15);
        let c = WidthState::new(0.8, -0.6).unwrap();
        assert!((gaussian_overlap(&c, &c) - 1.0).abs() < 1e-15);
        let expected = (2.0 * 0.5f64.sqrt() / 1.5).sqrt();
        assert!((gaussian_overlap(&a, &b) - expected).abs() < 1e-15);
        assert_eq!(gaussian_overlap(&a, &c), gaussian_overlap(&c, &a));
    }

    #[test]
    fn rejects_bad_space() {
        assert!(FockSpace::new(1, 1.0).is_err());
        assert!(FockSpace::new(4, 0.0).is_err());
    }
}
