//! Steepest-descent representation.
//!
//! `F(z) = PV int e^{i k a} / (k - nu) dk + sigma PV int e^{-i k b} / (k - nu) dk`
//! with `a = pi - z`, `b = pi + z`. Each principal value is moved onto the ray
//! `k = t omega` along which its exponential decays fastest, leaving half of
//! the residue at `k = nu` behind.

use super::{check_converged, Mode, QuadratureConfig};
use crate::math::{atan2, cabs, cexp, cis, C64, PI};
use crate::quad::{integrate, CVec, Tolerance};
use crate::Result;

/// Rays closer than this to the real axis pass too near the pole.
const MIN_RAY_ANGLE: f64 = PI / 8.0;
/// Upper limit of the scaled ray variable; `e^{-48}` is below any tolerance used.
const S_MAX: f64 = 48.0;
const S_BREAKS: [f64; 9] = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, S_MAX];

fn clamp_angle(theta: f64, upward_if_zero: bool) -> f64 {
    if theta.abs() >= MIN_RAY_ANGLE {
        theta
    } else if theta > 0.0 || (theta == 0.0 && upward_if_zero) {
        MIN_RAY_ANGLE
    } else {
        -MIN_RAY_ANGLE
    }
}

/// `int_0^inf (-i k)^d e^{c t} omega / (k - nu) dt`, `k = t omega`, `d = 0..=order`.
fn ray_integral(omega: C64, c: C64, nu: f64, order: usize, cfg: &QuadratureConfig) -> Result<[C64; 3]> {
    let lambda = -c.re;
    debug_assert!(lambda > 0.0);
    let mi = C64::new(0.0, -1.0);
    let scale = 1.0 / lambda;
    let f = |s: f64| {
        let t = s * scale;
        let k = omega * t;
        let base = cexp(c * t) * omega / (k - nu) * scale;
        let mut out = CVec([C64::new(0.0, 0.0); 3]);
        out.0[0] = base;
        if order >= 1 {
            out.0[1] = base * (mi * k);
        }
        if order >= 2 {
            out.0[2] = out.0[1] * (mi * k);
        }
        out
    };
    let r = integrate(f, &S_BREAKS, Tolerance::new(0.5 * cfg.abs_tol, cfg.rel_tol));
    let worst = r
        .value
        .0
        .iter()
        .copied()
        .fold(C64::new(0.0, 0.0), |m, z| if cabs(z) > cabs(m) { z } else { m });
    check_converged(worst, r.error, r.converged)?;
    Ok(r.value.0)
}

/// `F^{(d)}(x + i y)` for `x >= 0`, `y <= 0`, away from `(pi, 0)`.
pub(super) fn jet(mode: &Mode, x: f64, y: f64, order: usize, cfg: &QuadratureConfig) -> Result<[C64; 3]> {
    let nu = mode.nu();
    let sigma = mode.sigma();
    let z = C64::new(x, y);
    let a = C64::new(PI, 0.0) - z;
    let b = C64::new(PI, 0.0) + z;
    let i = C64::new(0.0, 1.0);

    // Optimal directions: arg omega_a = atan2(pi - x, -y), arg omega_b = atan2(-(pi + x), -y).
    let theta_a = clamp_angle(atan2(PI - x, -y), true);
    let theta_b = clamp_angle(atan2(-(PI + x), -y), false);
    let omega_a = cis(theta_a);
    let omega_b = cis(theta_b);
    let eps_a = if theta_a > 0.0 { 1.0 } else { -1.0 };
    let eps_b = if theta_b > 0.0 { 1.0 } else { -1.0 };

    let ja = ray_integral(omega_a, i * omega_a * a, nu, order, cfg)?;
    let jb = ray_integral(omega_b, -i * omega_b * b, nu, order, cfg)?;

    let e = mode.phase();
    let half_residue = i * PI * cexp(-i * nu * z) * (e * eps_a + e.conj() * (sigma * eps_b));
    let mut out = [C64::new(0.0, 0.0); 3];
    let mut pow = C64::new(1.0, 0.0);
    for d in 0..=order {
        out[d] = ja[d] + jb[d] * sigma + half_residue * pow;
        pow *= C64::new(0.0, -nu);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Family;

    #[test]
    fn ray_side_does_not_change_the_value() {
        // Forcing the first ray below the real axis (residue sign flips) must
        // agree with the upward ray near x = pi where both are admissible.
        let mode = Mode::new(1.5, Family::Sum).unwrap();
        let cfg = QuadratureConfig::default();
        let x = PI - 1e-3;
        let y = -2.0;
        let up = jet(&mode, x, y, 2, &cfg).unwrap();
        let down = jet(&mode, PI + 1e-3, y, 2, &cfg).unwrap();
        // F is smooth across x = pi in the interior
        for d in 0..3 {
            assert!(cabs(up[d] - down[d]) < 5e-3, "{d}: {} vs {}", up[d], down[d]);
        }
    }
}
