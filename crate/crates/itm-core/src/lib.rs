//! Solver for the similarity boundary-layer problem
//!
//! ```text
//!     f''' + f f'' - beta (f')^2 = 0,   f(0) = 0,  f'(0) = 1,  f'(inf) -> 0
//! ```
//!
//! studied by Liao and Pop, posed on a truncated domain `[0, eta_inf]`. The
//! boundary value problem is solved by an iterative transformation method:
//! the missing curvature f''(0) is never shot on directly. Instead an
//! extended scaling group
//!
//! ```text
//!     f* = lambda f,   eta* = lambda^delta eta,   h* = lambda^sigma h
//! ```
//!
//! embeds the problem in a one-parameter family, a single initial value
//! problem in the starred variables is integrated per candidate h*, and a
//! scalar transformation function Gamma(h*) is driven to zero by a
//! root-finder. At the root the group parameter lambda rescales the starred
//! solution onto the physical one, yielding f''(0) = -lambda^-3 with no
//! re-integration.
//!
//! Modules follow the pipeline: [`ode`] integrates initial value problems,
//! [`model`] owns the right-hand sides and the scaling algebra, [`root`]
//! finds the zero of Gamma, [`solver`] wires the three into full solves and
//! beta-sweeps, and [`shooting`] is an independent classic-shooting oracle
//! used for cross-validation.
//!
//! The crate is `no_std` when built without the `std` feature; enable `libm`
//! there so the f64 intrinsics have an implementation.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("itm-core requires either the `std` or the `libm` feature");

pub mod model;
pub mod ode;
pub mod root;
pub mod shooting;
pub mod solver;

/// f64 math routed through std or libm depending on the build.
pub(crate) mod num {
    #[cfg(feature = "std")]
    #[inline]
    pub(crate) fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }

    #[cfg(feature = "std")]
    #[inline]
    pub(crate) fn abs(x: f64) -> f64 {
        x.abs()
    }

    #[cfg(feature = "std")]
    #[inline]
    pub(crate) fn powf(x: f64, y: f64) -> f64 {
        x.powf(y)
    }

    #[cfg(all(not(feature = "std"), feature = "libm"))]
    #[inline]
    pub(crate) fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }

    #[cfg(all(not(feature = "std"), feature = "libm"))]
    #[inline]
    pub(crate) fn abs(x: f64) -> f64 {
        libm::fabs(x)
    }

    #[cfg(all(not(feature = "std"), feature = "libm"))]
    #[inline]
    pub(crate) fn powf(x: f64, y: f64) -> f64 {
        libm::pow(x, y)
    }
}
