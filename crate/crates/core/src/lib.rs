//! Linear program schemas over the Herbrand domain and the two dynamic
//! slicing criteria for them: path-faithful dynamic slices, checked in
//! polynomial time, and general dynamic slices, checked by bounded
//! enumeration of compatible paths.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: schema syntax, linearity, quotients and the path alphabet.
//! * [`syntax`]: textual formats for schemas, paths and criteria.
//! * [`herbrand`]: hash-consed terms, states, consequences and executability.
//! * [`paths`]: path validity, enumeration, projection and l-reductions.
//! * [`slicer`]: slice checkers and quotient-lattice searches.
//! * [`gadgets`]: the 3SAT reduction, a brute-force SAT oracle and the
//!   worked example fixtures.

pub mod gadgets;
pub mod herbrand;
pub mod model;
pub mod paths;
pub mod random;
pub mod slicer;
pub mod symbol;
pub mod syntax;

pub use model::{Letter, Path, Schema, SiteId};
pub use symbol::{Symbol, Var};
