//! Exact arithmetic on additive bases of `Z_m`, Ruzsa numbers, and the
//! analytic/combinatorial machinery needed to compute and certify them.
//!
//! The crate is organised as:
//!
//! * [`zm`]: residue sets, representation functions, profiles;
//! * [`bounds`]: exact-rational inequality filters on `(m, k)` pairs;
//! * [`symmetry`]: the affine group `x -> l*x + t` and canonical forms;
//! * [`diffset`]: cyclic difference sets and Baumert's Test C;
//! * [`search`]: exhaustive witness search with pruning and checkpoints;
//! * [`pipeline`]: staged reproduction reports and the embedded value table.

pub mod bounds;
pub mod diffset;
pub mod error;
pub mod pipeline;
pub mod search;
pub mod symmetry;
pub mod zm;

pub use error::Error;
pub use zm::{Modulus, RepProfile, RepVector, ResidueSet};
