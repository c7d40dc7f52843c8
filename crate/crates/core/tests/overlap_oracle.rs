use anharmonic_core::fock::gaussian_overlap;
use anharmonic_core::WidthState;
use num_complex::Complex64;

/// Trapezoid rule for `|∫ Ψ_A*(x) Ψ_B(x) dx|`; spectrally accurate for Gaussians.
fn quadrature_overlap(a: &WidthState, b: &WidthState) -> f64 {
    let half = 40.0 * a.chi().max(b.chi());
    let n = 20_000;
    let dx = 2.0 * half / n as f64;
    let sum: Complex64 = (0..=n)
        .map(|i| {
            let x = -half + dx * i as f64;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            a.wavefunction(x).conj() * b.wavefunction(x) * w
        })
        .sum();
    (sum * dx).norm()
}

#[test]
fn static_widths_match_quadrature() {
    let a = WidthState::new(std::f64::consts::FRAC_1_SQRT_2, 0.0).unwrap();
    let b = WidthState::new(1.0, 0.0).unwrap();
    let value = gaussian_overlap(&a, &b);
    assert!((value - quadrature_overlap(&a, &b)).abs() < 1e-12);
    assert!((value - 0.970_984).abs() < 1e-6);
}

#[test]
fn moving_widths_match_quadrature() {
    let states = [
        WidthState::new(0.5, 0.0).unwrap(),
        WidthState::new(0.9, 1.2).unwrap(),
        WidthState::new(1.4, -0.7).unwrap(),
        WidthState::new(0.3, 2.5).unwrap(),
    ];
    for a in &states {
        for b in &states {
            let exact = quadrature_overlap(a, b);
            assert!((gaussian_overlap(a, b) - exact).abs() < 1e-10, "{a:?} {b:?}");
        }
    }
}
