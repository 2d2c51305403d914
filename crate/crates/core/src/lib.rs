//! Conjugate potential/stream pairs for two-dimensional sloshing, and the
//! fluid domains they generate.
//!
//! The crate is `no_std` (it needs `alloc`). It is organised in three layers:
//!
//! * [`kernel`] evaluates the velocity potential `u`, the stream function `v`
//!   and their derivatives anywhere in the closed lower half-plane;
//! * [`geometry`] traces level lines of `v` and `u`, locates stagnation points
//!   and free-surface critical points, and assembles sloshing domains;
//! * [`verify`] checks the governing equations on those domains and compares
//!   computed quantities with published reference values.
//!
//! ```
//! use sloshspot_core::kernel::{Evaluator, Family, Mode, QuadratureConfig};
//! use sloshspot_core::geometry::find_surface_zero;
//!
//! let mode = Mode::new(1.5, Family::Sum).unwrap();
//! let ev = Evaluator::new(mode, QuadratureConfig::default()).unwrap();
//! let x0 = find_surface_zero(&ev, 0.0, (0.1, 3.1)).unwrap();
//! assert!((x0 - 2.132704).abs() < 1e-6);
//! ```
#![no_std]
#![allow(clippy::too_many_arguments, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod geometry;
pub mod kernel;
mod math;
pub mod quad;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
pub use math::C64;
