//! Exact-arithmetic dynamics of piecewise-linear liftings of circle maps.
//!
//! Every quantity is a [`Rational`], so coverings, orderings and fixed-point
//! equations are decided exactly. The crate provides
//!
//! - [`PLLift`]: construction, evaluation, iteration, composition and powers;
//! - [`rotation`]: upper/lower envelope maps, rotation numbers of monotone
//!   liftings, rotation intervals and the periods they force;
//! - [`periodic`]: exact solutions of `F^n(x) = x + k`, orbits and period sets;
//! - [`markov`]: interval partitions, covering graphs, loop counting and the
//!   horseshoe construction for degree `>= 2`;
//! - [`theorem`]: end-to-end verifiers for the large-orbit period theorem,
//!   the two non-positive-degree counterexample families, and a fuzz generator.

mod branch;
pub mod error;
pub mod format;
pub mod markov;
pub mod periodic;
pub mod pl_map;
pub mod rational;
pub mod rotation;
pub mod theorem;

pub use error::{Error, Result};
pub use markov::{CoverGraph, Loop, Partition};
pub use periodic::{Orbit, PeriodicSolutions};
pub use pl_map::{make_lift, PLLift};
pub use rational::{int, rat, Interval, Rational};
pub use rotation::RotationBound;
pub use theorem::{Status, VerificationReport};
