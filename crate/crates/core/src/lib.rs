//! Arithmetic of the quadratic twist family E^(n): y^2 = x(x - a^2 n)(x + b^2 n).
//!
//! The crate computes, with exact arithmetic and cross-validating oracles:
//!
//! - 2-Selmer groups of the twists via a generalized Monsky matrix over GF(2),
//!   together with an independent brute-force 2-descent ([`selmer`]);
//! - Gauss genus theory for Q(sqrt(-n)): the Rédei matrix, the 4- and 8-ranks
//!   of the class group, and a reduced-forms class-group oracle ([`genus`]);
//! - closed-form Cassels pairing values on the pure 2-Selmer group and the
//!   resulting rank-zero / Sha = (Z/2)^2 predicate ([`cassels`]);
//! - torsion verification through Ono's criteria and division polynomials
//!   ([`torsion`]);
//! - exact counts of symmetric GF(2) matrices by rank and empirical density
//!   sweeps against the predicted constants ([`distribution`]).

pub mod arith;
pub mod cassels;
pub mod distribution;
pub mod f2linalg;
pub mod family;
pub mod genus;
pub mod selmer;
pub mod torsion;

mod error;

pub use error::{Error, Result};
