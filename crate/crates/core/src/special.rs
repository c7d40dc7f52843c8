//! Elliptic integrals, Jacobi elliptic functions and a real-root cubic solver.
//!
//! Elliptic quantities use the modulus `k` (so the integrand is
//! `1/√(1 - k² sin²θ)`) and are evaluated with the arithmetic-geometric mean
//! and descending Landen transformation.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

const AGM_MAX_ITER: usize = 64;

fn complementary_modulus(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).sqrt()
}

fn check_modulus(k: f64) -> Result<()> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::invalid("modulus must lie in [0, 1)"));
    }
    Ok(())
}

/// Complete elliptic integral of the first kind `K(k) = π / (2 AGM(1, k'))`.
pub fn complete_elliptic_k(k: f64) -> Result<f64> {
    check_modulus(k)?;
    let mut a = 1.0;
    let mut b = complementary_modulus(k);
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let next_b = (a * b).sqrt();
        a = 0.5 * (a + b);
        b = next_b;
    }
    Ok(PI / (a + b))
}

/// Incomplete elliptic integral of the first kind `F(κ, k)` for `κ ∈ [0, π/2]`.
pub fn incomplete_elliptic_f(kappa: f64, k: f64) -> Result<f64> {
    check_modulus(k)?;
    if !(0.0..=FRAC_PI_2).contains(&kappa) {
        return Err(Error::invalid("amplitude must lie in [0, pi/2]"));
    }
    if kappa == FRAC_PI_2 {
        return complete_elliptic_k(k);
    }
    Ok(landen_f(kappa, k))
}

/// Descending Landen iteration `tan(φₙ₊₁ - φₙ) = (bₙ/aₙ) tan φₙ`,
/// `F = φ_N / (2^N a_N)`. Valid for any real amplitude.
fn landen_f(phi: f64, k: f64) -> f64 {
    let mut a = 1.0;
    let mut b = complementary_modulus(k);
    let mut c = k;
    let mut phi = phi;
    let mut scale = 1.0;
    for _ in 0..AGM_MAX_ITER {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        // continuous branch of atan((b/a) tan φ)
        let turns = (phi / PI).round();
        let reduced = phi - turns * PI;
        phi += turns * PI + (b * reduced.sin()).atan2(a * reduced.cos());
        c = 0.5 * (a - b);
        let next_b = (a * b).sqrt();
        a = 0.5 * (a + b);
        b = next_b;
        scale *= 2.0;
    }
    phi / (scale * a)
}

/// Jacobi elliptic functions `(sn, cn, dn)` of argument `u` and modulus `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiElliptic {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

pub fn jacobi_elliptic(u: f64, k: f64) -> Result<JacobiElliptic> {
    check_modulus(k)?;
    let mut a = [0.0; AGM_MAX_ITER + 1];
    let mut c = [0.0; AGM_MAX_ITER + 1];
    a[0] = 1.0;
    c[0] = k;
    let mut b = complementary_modulus(k);
    let mut n = 0;
    let mut scale = 1.0;
    while c[n].abs() > f64::EPSILON * a[n] && n < AGM_MAX_ITER {
        let an = a[n];
        n += 1;
        c[n] = 0.5 * (an - b);
        a[n] = 0.5 * (an + b);
        b = (an * b).sqrt();
        scale *= 2.0;
    }
    // ascending back-substitution sin(2φₙ₋₁ - φₙ) = (cₙ/aₙ) sin φₙ
    let mut phi = scale * a[n] * u;
    while n > 0 {
        phi = 0.5 * (phi + (c[n] / a[n] * phi.sin()).asin());
        n -= 1;
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (1.0 - k * k * sn * sn).sqrt();
    Ok(JacobiElliptic { sn, cn, dn })
}

/// Real roots of `a y³ + b y² + c y + d` when all three are real, ascending.
///
/// The roots come from the trigonometric formula and are then polished with
/// Newton steps on the original polynomial. A slightly positive discriminant
/// (rounding near a double root) is treated as a double root.
pub fn cubic_real_roots(a: f64, b: f64, c: f64, d: f64) -> Option<[f64; 3]> {
    if a == 0.0 || !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) {
        return None;
    }
    let bn = b / a;
    let cn = c / a;
    let dn = d / a;
    let shift = bn / 3.0;
    let p = cn - bn * bn / 3.0;
    let q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;

    let mut roots = if p >= 0.0 {
        if p == 0.0 && q == 0.0 {
            [-shift; 3]
        } else {
            return None;
        }
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = 3.0 * q / (p * m);
        if arg.abs() > 1.0 + 1e-6 {
            return None;
        }
        let theta = arg.clamp(-1.0, 1.0).acos() / 3.0;
        let mut r = [0.0; 3];
        for (i, root) in r.iter_mut().enumerate() {
            *root = m * (theta - 2.0 * PI * i as f64 / 3.0).cos() - shift;
        }
        r
    };
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let poly = |y: f64| ((a * y + b) * y + c) * y + d;
    let deriv = |y: f64| (3.0 * a * y + 2.0 * b) * y + c;
    for root in roots.iter_mut() {
        let mut y = *root;
        let mut resid = poly(y).abs();
        for _ in 0..60 {
            let dp = deriv(y);
            if dp == 0.0 || resid == 0.0 {
                break;
            }
            let next = y - poly(y) / dp;
            let next_resid = poly(next).abs();
            if !(next_resid < resid) {
                break;
            }
            y = next;
            resid = next_resid;
        }
        *root = y;
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Some(roots)
}
