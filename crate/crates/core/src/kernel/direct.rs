//! The defining integral along the real `k` axis.
//!
//! `T(k) / (k - nu) = A sin(pi h) / h` with `h = k - nu`, so the integrand is
//! entire in `k`; near `h = 0` the quotient is replaced by its Taylor series.

use alloc::vec::Vec;

use super::{check_converged, Mode, QuadratureConfig, TailCutoff};
use crate::math::{cabs, cexp, exp, sin, C64, PI};
use crate::quad::{integrate, CVec, Tolerance};
use crate::{Error, Result};

/// Below this `|h|` the Taylor model is used for `sin(pi h) / h`.
const TAYLOR_RADIUS: f64 = 0.1;

/// `sin(pi h) / h`.
pub(crate) fn sinc_pi(h: f64) -> f64 {
    if h.abs() < TAYLOR_RADIUS {
        // pi * sum_j (-1)^j (pi h)^{2j} / (2j + 1)!, j <= 6
        let w = (PI * h) * (PI * h);
        let mut term = PI;
        let mut sum = PI;
        for j in 1..=6 {
            let n = (2 * j) as f64;
            term *= -w / (n * (n + 1.0));
            sum += term;
        }
        sum
    } else {
        sin(PI * h) / h
    }
}

fn tail_cutoff(mode: &Mode, y: f64, order: usize, split: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if let TailCutoff::Fixed(k) = cfg.tail_cutoff {
        return Ok(k.max(split));
    }
    let ay = -y;
    let amp = cabs(mode.amplitude());
    let nu = mode.nu();
    let target = 0.1 * cfg.abs_tol;
    let d = order as f64;
    let mut k = split + 1.0;
    for _ in 0..400 {
        let slack = ay - d / k;
        if slack > 0.5 * ay {
            let bound = amp * libm::pow(k, d) / (k - nu) * exp(k * y) / slack;
            if bound < target {
                return Ok(k);
            }
        }
        k = 1.2 * k + 1.0;
    }
    Err(Error::InvalidParameter(
        "no tail cutoff found; point too close to y = 0",
    ))
}

/// `F^{(d)}(x + i y)`, `y < 0`, by direct quadrature.
pub(super) fn jet(mode: &Mode, x: f64, y: f64, order: usize, cfg: &QuadratureConfig) -> Result<[C64; 3]> {
    debug_assert!(y < 0.0);
    let nu = mode.nu();
    let split = cfg.split_factor * nu;
    let kmax = tail_cutoff(mode, y, order, split, cfg)?;

    let mut breaks: Vec<f64> = Vec::new();
    breaks.push(0.0);
    if nu - TAYLOR_RADIUS > 0.0 {
        breaks.push(nu - TAYLOR_RADIUS);
    }
    breaks.push(nu + TAYLOR_RADIUS);
    if split > nu + TAYLOR_RADIUS {
        breaks.push(split);
    }
    let start = *breaks.last().unwrap_or(&0.0);
    // one period of the fastest oscillation, e^{i k (pi + |x|)}
    let period = 2.0 * PI / (PI + x.abs());
    let n = libm::ceil((kmax - start) / period).max(1.0) as usize;
    let step = (kmax - start) / n as f64;
    for j in 1..=n {
        breaks.push(if j == n { kmax } else { start + step * j as f64 });
    }

    let amp = mode.amplitude();
    // Derivative integrands grow like k^d up to k ~ 1/|y|; they are scaled by
    // |y|^d during integration so that one error norm serves all orders.
    let w = (-y).min(1.0);
    let f = |k: f64| {
        let s = sinc_pi(k - nu) * exp(k * y);
        let base = amp * cexp(C64::new(0.0, -k * x)) * s;
        let mut out = CVec([C64::new(0.0, 0.0); 3]);
        out.0[0] = base;
        let mik = C64::new(0.0, -k * w);
        if order >= 1 {
            out.0[1] = base * mik;
        }
        if order >= 2 {
            out.0[2] = out.0[1] * mik;
        }
        out
    };
    let tol = Tolerance::new(0.9 * cfg.abs_tol, cfg.rel_tol).with_max_panels(4 * breaks.len() + 10_000);
    let r = integrate(f, &breaks, tol);
    check_converged(r.value.0[0], r.error, r.converged)?;
    let mut out = r.value.0;
    out[1] /= w;
    out[2] /= w * w;
    Ok(out)
}

const ABEL_EPS0: f64 = 0.02;
const ABEL_LEVELS: usize = 6;

/// Boundary values as `lim_{eps -> 0} F(x - i eps)`, each `F(x - i eps)`
/// being the trace integral with an `e^{-eps k}` factor, extrapolated by
/// Neville's scheme.
pub(super) fn regularized_jet(mode: &Mode, x: f64, order: usize, cfg: &QuadratureConfig) -> Result<[C64; 3]> {
    // The smallest levels integrate out to k ~ 1e5, where the derivative
    // integrands are large and cancel; ask only for what they can deliver.
    let cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol * 100.0,
        ..*cfg
    };
    let mut eps = [0.0; ABEL_LEVELS];
    let mut vals = [[C64::new(0.0, 0.0); 3]; ABEL_LEVELS];
    for j in 0..ABEL_LEVELS {
        eps[j] = ABEL_EPS0 / (1u32 << j) as f64;
        vals[j] = jet(mode, x, -eps[j], order, &cfg)?;
    }
    let mut out = [C64::new(0.0, 0.0); 3];
    for d in 0..=order {
        let mut p: [C64; ABEL_LEVELS] = core::array::from_fn(|j| vals[j][d]);
        for m in 1..ABEL_LEVELS {
            for j in 0..ABEL_LEVELS - m {
                // extrapolate to eps = 0
                p[j] = (p[j + 1] * eps[j] - p[j] * eps[j + m]) / (eps[j] - eps[j + m]);
            }
        }
        out[d] = p[0];
    }
    Ok(out)
}
