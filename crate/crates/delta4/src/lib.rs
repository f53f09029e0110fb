//! Differential uniformity of polynomial functions over binary fields.
//!
//! The library measures delta(f) = max over nonzero alpha and all beta of
//! the number of solutions to f(x + alpha) + f(x) = beta on F_{2^m},
//! and connects the measurement to two other views of the same quantity:
//!
//! * a geometric criterion — delta(f) <= 4 exactly when the rational
//!   points of the surface intersection X attached to the quotient
//!   polynomial P_f(x,y,z) = (f(x)+f(y)+f(z)+f(x+y+z)) / ((x+y)(x+z)(y+z))
//!   all lie in a fixed union V of seven hyperplanes ([`geometry`]);
//! * explicit numeric thresholds — exact integer inequalities in q = 2^m
//!   that certify delta > 4 for functions of degree 2^r - 1 ([`bounds`]).
//!
//! Module map: [`gf2m`] field arithmetic, [`funcspace`] univariate
//! functions and normal forms, [`uniformity`] difference-distribution
//! scans, [`mvpoly`] the trivariate quotient polynomial, [`geometry`]
//! containment and curve counts, [`bounds`] the threshold formulas,
//! [`verify`] named acceptance suites. The `delta4` binary exposes all of
//! it on the command line.

pub mod bounds;
pub mod error;
pub mod funcspace;
pub mod geometry;
pub mod gf2m;
pub mod mvpoly;
pub mod rng;
pub mod uniformity;
pub mod verify;

pub use error::{Error, Result};
pub use funcspace::{NormalizedPolyFunc, PolyFunc};
pub use gf2m::{Elt, Field};
pub use uniformity::{delta_exhaustive, delta_monomial, delta_sampled, DdtReport};
