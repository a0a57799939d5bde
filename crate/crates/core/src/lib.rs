//! Flowers of expanding circle maps and deck-shuffler interval exchanges.
//!
//! A *flower* for the expanding map `E_d(x) = dx mod 1` is a finite union of
//! closed arcs whose translates by `1/d` tile the circle; the maximal
//! `E_d`-invariant subset of a flower is a low-complexity attractor. A *deck
//! shuffler* is the interval exchange that riffles `2m` intervals together.
//! This crate implements both sides and the correspondence between them:
//!
//! * [`exact`]: rational points on the circle,
//! * [`symbolic`]: words, Lyndon enumeration, complexity counts,
//! * [`orbits`]: periodic orbits of `E_d` and interlacing numbers,
//! * [`flower`]: flowers, validation, maximal invariant sets,
//! * [`iet`]: interval exchanges, deck shufflers, binary codings,
//! * [`bridge`]: flower measures, CDF conjugacies, round trips,
//! * [`ergopt`]: trigonometric polynomials and pseudo-maximizer sampling.

pub mod bridge;
pub mod ergopt;
pub mod exact;
pub mod flower;
pub mod iet;
pub mod orbits;
pub mod symbolic;

pub use exact::{CirclePoint, Rational};
