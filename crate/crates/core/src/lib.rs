//! Average analytic rank of elliptic curves via explicit formulas: curve
//! families `y^2 = x^3 + rx + s`, character-sum Frobenius traces,
//! explicit-formula rank bounds, moment-based density bounds, quadratic
//! twist experiments, and brute-force oracles for the combinatorial
//! identities they rest on.

pub mod arith;
pub mod curves;
pub mod error;
pub mod families;
pub mod moments;
pub mod oracles;
pub mod quad;
pub mod sum;
pub mod twists;
pub mod weights;

pub use arith::PrimeTable;
pub use curves::{Curve, TraceData};
pub use error::{Error, Result};
pub use families::{FamilyParams, RankBound, TraceProvider};
pub use moments::VTable;
pub use twists::{TwistClass, TwistFamily};
pub use weights::SmoothWeight;
