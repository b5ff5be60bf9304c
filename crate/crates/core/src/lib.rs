//! Skew little cubes over dilation groups, finite set operads and the
//! combinatorics of symmetric sequences, with seeded law suites.

pub mod conf;
pub mod cubes;
pub mod error;
pub mod linalg;
pub mod operad;
pub mod perm;
pub mod retraction;
pub mod rng;
pub mod suite;
pub mod symseq;

pub use error::{Error, Result};
pub use perm::Permutation;
