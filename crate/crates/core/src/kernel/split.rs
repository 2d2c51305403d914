//! Interior values of `v` from its trace.
//!
//! For the sum family `(d/dy - nu) F` has the elementary integrand `T(k)
//! e^{-i k z}`, whose imaginary part integrates in closed form. Solving the
//! resulting first-order equation in `y` from `y = 0` gives
//!
//! ```text
//! v(x, y) = e^{nu y} [ v(x, 0)
//!     + 2 x int_y^0 (k^2 - (pi^2 - x^2)) / ((k^2 + (pi - x)^2)(k^2 + (pi + x)^2)) e^{-k nu} dk ].
//! ```

use super::{check_converged, QuadratureConfig};
use crate::math::{exp, C64, PI};
use crate::quad::{integrate, Tolerance};
use crate::Result;

pub(super) fn v_from_trace(nu: f64, x: f64, y: f64, trace: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if y == 0.0 {
        return Ok(trace);
    }
    let p2 = (PI - x) * (PI - x);
    let q2 = (PI + x) * (PI + x);
    let c = PI * PI - x * x;
    let f = |k: f64| {
        let k2 = k * k;
        (k2 - c) / ((k2 + p2) * (k2 + q2)) * exp(-k * nu)
    };
    // the integrand varies on the scale |pi - x| near k = 0
    let w = (PI - x.abs()).max(1e-3);
    let mut breaks = [y, 0.0, 0.0, 0.0];
    let mut n = 1;
    for s in [-4.0 * w, -w] {
        if s > y {
            breaks[n] = s;
            n += 1;
        }
    }
    breaks[n] = 0.0;
    let r = integrate(f, &breaks[..=n], Tolerance::new(0.1 * cfg.abs_tol, cfg.rel_tol));
    check_converged(C64::new(r.value, 0.0), r.error, r.converged)?;
    Ok(exp(nu * y) * (trace + 2.0 * x * r.value))
}
