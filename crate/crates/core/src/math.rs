//! Thin wrappers over `libm` so that every build, with or without `std`,
//! evaluates the same elementary functions.

use num_complex::Complex;

pub type C64 = Complex<f64>;

pub const PI: f64 = core::f64::consts::PI;

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn cexp(z: C64) -> C64 {
    let m = exp(z.re);
    C64::new(m * cos(z.im), m * sin(z.im))
}

#[inline]
pub fn cabs(z: C64) -> f64 {
    hypot(z.re, z.im)
}

/// `e^{i theta}`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::new(cos(theta), sin(theta))
}
