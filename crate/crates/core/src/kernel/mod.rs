//! Evaluation of the conjugate pair `u + i v = F(z)`, `z = x + i y`, `y <= 0`.
//!
//! Two families are supported. With `T(k) = 2 cos(k pi)` (sum family) or
//! `T(k) = 2 i sin(k pi)` (difference family),
//!
//! ```text
//! F(z) = int_0^inf T(k) / (k - nu) * e^{-i k z} dk
//! ```
//!
//! whose real part is the velocity potential `u` and imaginary part the
//! stream function `v`. `T(nu) = 0` for the admissible `nu`, so the integrand
//! is regular. On `y = 0` the integral converges only conditionally and the
//! points `(+-pi, 0)` are singular.
//!
//! The default evaluation path rotates each exponential term of the integrand
//! onto its steepest-descent ray in the complex `k` plane (picking up half a
//! residue at `k = nu`), which leaves absolutely convergent, non-oscillatory
//! integrals valid in the whole closed lower half-plane. On `y = 0` it reduces
//! to the classical trace formula
//!
//! ```text
//! u(x, 0) = -2 pi sin(nu pi) cos(nu x)
//!           + int_0^inf [e^{-(pi - x) k nu} + e^{-(pi + x) k nu}] k / (1 + k^2) dk.
//! ```
//!
//! The literal integral along the real `k` axis ([`InteriorMethod::Direct`])
//! and an Abel-regularized boundary limit ([`TraceMethod::Regularized`]) are
//! kept as independent routes.

mod direct;
mod ray;
mod split;

use core::fmt;

use crate::math::{cabs, cos, hypot, sin, C64, PI};
use crate::{Error, Result};

/// Radius of the excluded neighbourhood of `(+-pi, 0)`.
pub const SINGULAR_GUARD: f64 = 1e-9;

const ADMISSIBLE_TRIG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `cos k(x - pi) + cos k(x + pi)`; requires half-odd-integer `nu`.
    Sum,
    /// `cos k(x - pi) - cos k(x + pi)`; requires integer `nu`.
    Diff,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Sum => "sum",
            Family::Diff => "diff",
        }
    }

    /// `+1` when `u` is even in `x` (sum), `-1` when it is odd (diff).
    pub fn parity(self) -> f64 {
        match self {
            Family::Sum => 1.0,
            Family::Diff => -1.0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated spectral parameter and integral family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    nu: f64,
    family: Family,
    /// `sin(nu pi)` (sum) or `cos(nu pi)` (diff), rounded to its exact value +-1.
    unit: f64,
}

impl Mode {
    /// Accepts `nu` only when the family's trigonometric factor vanishes at
    /// `k = nu`, i.e. the pole of the integrand is removable.
    pub fn new(nu: f64, family: Family) -> Result<Mode> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidParameter("nu must be positive and finite"));
        }
        let (vanishing, other) = match family {
            Family::Sum => (cos(nu * PI), sin(nu * PI)),
            Family::Diff => (sin(nu * PI), cos(nu * PI)),
        };
        if vanishing.abs() >= ADMISSIBLE_TRIG_TOL {
            return Err(Error::NonRemovableSingularity {
                nu,
                family: family.name(),
            });
        }
        Ok(Mode {
            nu,
            family,
            unit: other.signum(),
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// `e^{i nu pi}` computed exactly.
    pub(crate) fn phase(&self) -> C64 {
        match self.family {
            Family::Sum => C64::new(0.0, self.unit),
            Family::Diff => C64::new(self.unit, 0.0),
        }
    }

    /// Sign in front of the `(x + pi)` term.
    pub(crate) fn sigma(&self) -> f64 {
        match self.family {
            Family::Sum => 1.0,
            Family::Diff => -1.0,
        }
    }

    /// The numerator as `amplitude * kappa * sin(pi (k - nu))`.
    pub(crate) fn amplitude(&self) -> C64 {
        match self.family {
            Family::Sum => C64::new(-2.0 * self.unit, 0.0),
            Family::Diff => C64::new(0.0, 2.0 * self.unit),
        }
    }
}

/// `make_mode` under its operational name.
pub fn make_mode(nu: f64, family: Family) -> Result<Mode> {
    Mode::new(nu, family)
}

/// A point of the closed lower half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(&self, other: Point2) -> f64 {
        hypot(self.x - other.x, self.y - other.y)
    }

    pub fn mirrored(&self) -> Self {
        Point2::new(-self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Gradient2 {
    pub dx: f64,
    pub dy: f64,
}

impl Gradient2 {
    pub fn norm(&self) -> f64 {
        hypot(self.dx, self.dy)
    }
}

/// Symmetric 2x2 matrix of second derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Hessian2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Hessian2 {
    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }
}

/// `F`, `F'` and `F''` at one point. Derivatives not requested are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub f: C64,
    pub df: C64,
    pub d2f: C64,
}

impl Jet {
    pub fn u(&self) -> f64 {
        self.f.re
    }

    pub fn v(&self) -> f64 {
        self.f.im
    }

    /// `(v_x, v_y)`; `F' = u_x + i v_x` and `v_y = u_x`.
    pub fn grad_v(&self) -> Gradient2 {
        Gradient2 {
            dx: self.df.im,
            dy: self.df.re,
        }
    }

    /// `(u_x, u_y) = (v_y, -v_x)`.
    pub fn grad_u(&self) -> Gradient2 {
        Gradient2 {
            dx: self.df.re,
            dy: -self.df.im,
        }
    }

    pub fn hessian_v(&self) -> Hessian2 {
        Hessian2 {
            xx: self.d2f.im,
            xy: self.d2f.re,
            yy: -self.d2f.im,
        }
    }

    pub fn hessian_u(&self) -> Hessian2 {
        Hessian2 {
            xx: self.d2f.re,
            xy: -self.d2f.im,
            yy: -self.d2f.re,
        }
    }

    fn from_array(a: [C64; 3]) -> Self {
        Jet {
            f: a[0],
            df: a[1],
            d2f: a[2],
        }
    }
}

/// How the boundary trace `y = 0` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceMethod {
    /// Absolutely convergent contour-rotated representation.
    #[default]
    Rotated,
    /// Limit `eps -> 0` of the integral with an `e^{-eps k}` factor,
    /// Richardson-extrapolated. Slow; an independent check.
    Regularized,
}

/// How points with `y < 0` are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InteriorMethod {
    /// Steepest-descent rays; cost independent of the distance to `y = 0`.
    #[default]
    Rotated,
    /// The defining integral along the real axis, split at `split_factor * nu`
    /// and truncated where `e^{k y}` is negligible. Cost grows like `1 / |y|`.
    Direct,
}

/// Truncation of the direct integral for `y < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TailCutoff {
    /// Cut where an upper bound of the remaining tail drops below `abs_tol / 10`.
    #[default]
    Bound,
    /// Fixed upper limit in `k`.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// The direct integral is split at `split_factor * nu`.
    pub split_factor: f64,
    pub tail_cutoff: TailCutoff,
    pub trace_method: TraceMethod,
    pub interior_method: InteriorMethod,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-11,
            rel_tol: 1e-11,
            split_factor: 2.0,
            tail_cutoff: TailCutoff::Bound,
            trace_method: TraceMethod::Rotated,
            interior_method: InteriorMethod::Rotated,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive"));
        }
        if !(self.split_factor > 1.0) {
            return Err(Error::InvalidParameter("split point must exceed nu"));
        }
        if let TailCutoff::Fixed(k) = self.tail_cutoff {
            if !(k.is_finite() && k > 0.0) {
                return Err(Error::InvalidParameter("fixed tail cutoff must be positive"));
            }
        }
        Ok(())
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn direct() -> Self {
        QuadratureConfig {
            interior_method: InteriorMethod::Direct,
            ..Default::default()
        }
    }
}

/// Stateless evaluator of one mode under one quadrature configuration.
///
/// All methods are pure: identical inputs give bitwise-identical outputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluator {
    mode: Mode,
    cfg: QuadratureConfig,
}

impl Evaluator {
    pub fn new(mode: Mode, cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Evaluator { mode, cfg })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn nu(&self) -> f64 {
        self.mode.nu
    }

    pub fn family(&self) -> Family {
        self.mode.family
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    /// `F` and its first `order` (at most 2) derivatives at `p`.
    pub fn jet(&self, p: Point2, order: usize) -> Result<Jet> {
        let order = order.min(2);
        if !(p.x.is_finite() && p.y.is_finite()) || p.y > 0.0 {
            return Err(Error::OutOfRange { x: p.x, y: p.y });
        }
        let ax = p.x.abs();
        if hypot(ax - PI, p.y) < SINGULAR_GUARD {
            return Err(Error::SingularPoint { x: p.x, y: p.y });
        }
        if p.y == 0.0 && ax >= PI {
            return Err(Error::OutOfRange { x: p.x, y: p.y });
        }
        let raw = if p.y == 0.0 {
            match self.cfg.trace_method {
                TraceMethod::Rotated => ray::jet(&self.mode, ax, 0.0, order, &self.cfg)?,
                TraceMethod::Regularized => direct::regularized_jet(&self.mode, ax, order, &self.cfg)?,
            }
        } else {
            match self.cfg.interior_method {
                InteriorMethod::Rotated => ray::jet(&self.mode, ax, p.y, order, &self.cfg)?,
                InteriorMethod::Direct => direct::jet(&self.mode, ax, p.y, order, &self.cfg)?,
            }
        };
        Ok(Jet::from_array(self.reflect(raw, p.x)))
    }

    /// Values at `x < 0` from the mirror point: `F(z) = p conj(F(-conj z))`
    /// with `p = +1` (sum) or `-1` (diff); derivatives pick up `(-1)^d`.
    fn reflect(&self, g: [C64; 3], x: f64) -> [C64; 3] {
        let parity = self.mode.family.parity();
        let image = |d: usize, z: C64| {
            let s = if d.is_multiple_of(2) { parity } else { -parity };
            z.conj() * s
        };
        let mut out = g;
        if x < 0.0 {
            for (d, z) in out.iter_mut().enumerate() {
                *z = image(d, *z);
            }
        } else if x == 0.0 {
            for (d, z) in out.iter_mut().enumerate() {
                *z = (*z + image(d, *z)) * 0.5;
            }
        }
        out
    }

    /// Velocity potential `u(x, y)`.
    pub fn u(&self, p: Point2) -> Result<f64> {
        Ok(self.jet(p, 0)?.u())
    }

    /// Stream function `v(x, y)`.
    pub fn v(&self, p: Point2) -> Result<f64> {
        Ok(self.jet(p, 0)?.v())
    }

    pub fn value(&self, p: Point2) -> Result<C64> {
        Ok(self.jet(p, 0)?.f)
    }

    /// `(v_x, v_y)` by differentiation under the integral.
    pub fn grad_v(&self, p: Point2) -> Result<Gradient2> {
        Ok(self.jet(p, 1)?.grad_v())
    }

    /// `(u_x, u_y)`.
    pub fn grad_u(&self, p: Point2) -> Result<Gradient2> {
        Ok(self.jet(p, 1)?.grad_u())
    }

    pub fn hessian_v(&self, p: Point2) -> Result<Hessian2> {
        Ok(self.jet(p, 2)?.hessian_v())
    }

    fn check_trace_x(x: f64) -> Result<()> {
        if !(x.abs() < PI) || PI - x.abs() < SINGULAR_GUARD {
            return Err(Error::OutOfRange { x, y: 0.0 });
        }
        Ok(())
    }

    /// Jet on the free surface, `|x| < pi`.
    pub fn trace_jet(&self, x: f64, order: usize) -> Result<Jet> {
        Self::check_trace_x(x)?;
        self.jet(Point2::new(x, 0.0), order)
    }

    /// `u(x, 0)` for `|x| < pi`.
    pub fn trace_u(&self, x: f64) -> Result<f64> {
        Ok(self.trace_jet(x, 0)?.u())
    }

    /// `v(x, 0)` for `|x| < pi`.
    pub fn trace_v(&self, x: f64) -> Result<f64> {
        Ok(self.trace_jet(x, 0)?.v())
    }

    /// `v(x, y)` reconstructed from the trace `v(x, 0)` through the
    /// first-order relation `(d/dy - nu) v = 2 x (pi^2 - x^2 - y^2) / D`
    /// (sum family only).
    pub fn v_split(&self, x: f64, y: f64) -> Result<f64> {
        if self.mode.family != Family::Sum {
            return Err(Error::WrongFamily { expected: "sum" });
        }
        if !(y <= 0.0) {
            return Err(Error::OutOfRange { x, y });
        }
        Self::check_trace_x(x)?;
        let trace = self.trace_v(x)?;
        split::v_from_trace(self.mode.nu, x, y, trace, &self.cfg)
    }
}

/// `u(p)` for a mode; see [`Evaluator::u`].
pub fn eval_u(mode: &Mode, p: Point2, cfg: &QuadratureConfig) -> Result<f64> {
    Evaluator::new(*mode, *cfg)?.u(p)
}

/// `v(p)` for a mode; see [`Evaluator::v`].
pub fn eval_v(mode: &Mode, p: Point2, cfg: &QuadratureConfig) -> Result<f64> {
    Evaluator::new(*mode, *cfg)?.v(p)
}

pub fn eval_trace_u(mode: &Mode, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Evaluator::new(*mode, *cfg)?.trace_u(x)
}

pub fn eval_trace_v(mode: &Mode, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Evaluator::new(*mode, *cfg)?.trace_v(x)
}

pub fn eval_v_split(mode: &Mode, x: f64, y: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Evaluator::new(*mode, *cfg)?.v_split(x, y)
}

pub fn eval_grad_v(mode: &Mode, p: Point2, cfg: &QuadratureConfig) -> Result<Gradient2> {
    Evaluator::new(*mode, *cfg)?.grad_v(p)
}

pub fn eval_hessian_v(mode: &Mode, p: Point2, cfg: &QuadratureConfig) -> Result<Hessian2> {
    Evaluator::new(*mode, *cfg)?.hessian_v(p)
}

pub(crate) fn check_converged(value: C64, error: f64, converged: bool) -> Result<()> {
    if converged {
        Ok(())
    } else {
        Err(Error::QuadratureFailure {
            estimate: cabs(value),
            error,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(nu: f64, family: Family) -> Evaluator {
        Evaluator::new(Mode::new(nu, family).unwrap(), QuadratureConfig::default()).unwrap()
    }

    #[test]
    fn mode_validation() {
        assert!(Mode::new(1.5, Family::Sum).is_ok());
        assert!(Mode::new(3.5, Family::Sum).is_ok());
        assert!(Mode::new(3.0, Family::Diff).is_ok());
        assert!(Mode::new(2.0, Family::Diff).is_ok());
        assert!(matches!(
            Mode::new(1.7, Family::Sum),
            Err(Error::NonRemovableSingularity { .. })
        ));
        assert!(matches!(
            Mode::new(2.5, Family::Diff),
            Err(Error::NonRemovableSingularity { .. })
        ));
        assert!(matches!(
            Mode::new(2.0, Family::Sum),
            Err(Error::NonRemovableSingularity { .. })
        ));
        assert!(matches!(Mode::new(-1.5, Family::Sum), Err(Error::InvalidParameter(_))));
        assert!(matches!(
            Mode::new(f64::NAN, Family::Sum),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn guards_and_ranges() {
        let e = ev(1.5, Family::Sum);
        assert!(matches!(e.u(Point2::new(PI, 0.0)), Err(Error::SingularPoint { .. })));
        assert!(matches!(
            e.v(Point2::new(-PI, -1e-10)),
            Err(Error::SingularPoint { .. })
        ));
        assert!(matches!(e.u(Point2::new(1.0, 0.5)), Err(Error::OutOfRange { .. })));
        assert!(matches!(e.u(Point2::new(3.5, 0.0)), Err(Error::OutOfRange { .. })));
        assert!(matches!(e.trace_u(PI), Err(Error::OutOfRange { .. })));
        // just outside the guard radius the evaluator still answers
        assert!(e.u(Point2::new(PI, -1e-6)).unwrap().is_finite());
    }

    #[test]
    fn odd_stream_vanishes_on_axis() {
        let e = ev(1.5, Family::Sum);
        assert_eq!(e.v(Point2::new(0.0, -2.0)).unwrap(), 0.0);
        assert_eq!(e.trace_v(0.0).unwrap(), 0.0);
        assert_eq!(e.grad_v(Point2::new(0.0, -1.0)).unwrap().dy, 0.0);
        let e = ev(2.0, Family::Diff);
        assert_eq!(e.u(Point2::new(0.0, -1.3)).unwrap(), 0.0);
    }

    #[test]
    fn wrong_family_for_split() {
        let e = ev(3.0, Family::Diff);
        assert!(matches!(e.v_split(1.0, -0.5), Err(Error::WrongFamily { .. })));
    }

    #[test]
    fn invalid_config_is_rejected() {
        let mode = Mode::new(1.5, Family::Sum).unwrap();
        let cfg = QuadratureConfig {
            split_factor: 0.5,
            ..QuadratureConfig::default()
        };
        assert!(Evaluator::new(mode, cfg).is_err());
        let cfg = QuadratureConfig::default().with_tolerances(0.0, 1e-10);
        assert!(Evaluator::new(mode, cfg).is_err());
    }
}
