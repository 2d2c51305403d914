//! Bracketed scalar root finding.
//!
//! Roots are certified: every [`Bracketed`] result carries an interval whose
//! endpoints have function values of opposite sign (or an exact zero).

use alloc::vec::Vec;

use crate::{Error, Result};

/// Width below which a bracket counts as a certified root location.
pub const CERTIFIED_WIDTH: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracketed {
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Bracketed {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_certified(&self) -> bool {
        self.width() <= CERTIFIED_WIDTH
    }
}

/// Brent's method (bisection safeguarding inverse-quadratic and secant steps)
/// on `[a, b]`. Stops when the bracket is narrower than `xtol` or an exact
/// zero is hit.
pub fn brent<F>(f: F, a: f64, b: f64, xtol: f64) -> Result<Bracketed>
where
    F: FnMut(f64) -> Result<f64>,
{
    brent_with_values(f, a, b, None, xtol)
}

/// As [`brent`] but reuses already known endpoint values.
pub fn brent_with_values<F>(mut f: F, a: f64, b: f64, known: Option<(f64, f64)>, xtol: f64) -> Result<Bracketed>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut fa, mut fb) = match known {
        Some(v) => v,
        None => (f(a)?, f(b)?),
    };
    let (mut a, mut b) = (a, b);
    if fa == 0.0 {
        return Ok(Bracketed { root: a, lo: a, hi: a });
    }
    if fb == 0.0 {
        return Ok(Bracketed { root: b, lo: b, hi: b });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange { a, b });
    }

    // b is the best estimate, a the previous one, c the contrapoint.
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            let (lo, hi) = if fb == 0.0 {
                (b, b)
            } else if b < c {
                (b, c)
            } else {
                (c, b)
            };
            return Ok(Bracketed { root: b, lo, hi });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::NoConvergence { iterations: 200 })
}

/// Sample `f` on `n + 1` equispaced points of `[a, b]` and return the
/// sub-intervals where it changes sign, with their endpoint values.
pub fn scan_sign_changes<F>(mut f: F, a: f64, b: f64, n: usize) -> Result<Vec<(f64, f64, f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let n = n.max(1);
    let h = (b - a) / n as f64;
    let mut out = Vec::new();
    let mut x_prev = a;
    let mut f_prev = f(a)?;
    for i in 1..=n {
        let x = if i == n { b } else { a + h * i as f64 };
        let fx = f(x)?;
        if f_prev == 0.0 && i == 1 {
            // a root exactly at the left end is reported with the first cell
            out.push((x_prev, x, f_prev, fx));
        } else if fx == 0.0 || (f_prev != 0.0 && f_prev.signum() != fx.signum()) {
            out.push((x_prev, x, f_prev, fx));
        }
        x_prev = x;
        f_prev = fx;
    }
    Ok(out)
}

/// All sign-change roots of `f` in `[a, b]` found by a uniform scan with `n`
/// cells, each refined with Brent to `xtol`.
pub fn all_roots<F>(mut f: F, a: f64, b: f64, n: usize, xtol: f64) -> Result<Vec<Bracketed>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let cells = scan_sign_changes(&mut f, a, b, n)?;
    let mut roots: Vec<Bracketed> = Vec::with_capacity(cells.len());
    for (lo, hi, flo, fhi) in cells {
        let r = brent_with_values(&mut f, lo, hi, Some((flo, fhi)), xtol)?;
        if roots.last().is_none_or(|prev| (r.root - prev.root).abs() > xtol) {
            roots.push(r);
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent(|x| Ok(x * x * x - 2.0 * x - 5.0), 2.0, 3.0, 1e-14).unwrap();
        assert!((r.root - 2.094_551_481_542_327).abs() < 1e-13);
        assert!(r.is_certified());
        let g = |x: f64| x * x * x - 2.0 * x - 5.0;
        assert!(g(r.lo) * g(r.hi) <= 0.0);
    }

    #[test]
    fn brent_rejects_same_sign() {
        assert!(matches!(
            brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn scan_finds_every_root_of_sine() {
        let roots = all_roots(|x| Ok(libm::sin(x)), 0.5, 10.0, 100, 1e-13).unwrap();
        assert_eq!(roots.len(), 3);
        for (k, r) in roots.iter().enumerate() {
            assert!((r.root - (k as f64 + 1.0) * core::f64::consts::PI).abs() < 1e-12);
        }
    }
}
