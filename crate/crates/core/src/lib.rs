//! Combinatorial, braid-theoretic and numerical machinery for effective
//! finiteness bounds of holomorphic maps into the twice punctured plane and
//! of holomorphic bundles with three-point fibers.
//!
//! * [`word`]: reduced words on `a1, a2`, syllables, `L-` / `L+`, conjugacy
//!   canonical forms, enumeration under an `L-` budget.
//! * [`braid`]: the braid group `B3` and `B3/Z3`, normal forms, the `theta`
//!   map, extremal-length brackets and the census of braids.
//! * [`config3`]: three-point configurations, the collinearity locus and
//!   loop decoders.
//! * [`conformal`]: extremal length of annuli and rectangles, certified upper
//!   bounds for the torus-with-hole family and a grid solver.
//! * [`dbar`]: lattice kernels and the doubly periodic dbar construction.
//! * [`bounds`]: log-space evaluation of the headline counting bounds.

// `!(x > 0.0)` style checks reject NaN on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod braid;
pub mod config3;
pub mod conformal;
pub mod dbar;
pub mod error;
pub mod lognum;
pub mod par;
pub mod word;

pub use error::{Error, Result};
pub use lognum::LogNumber;
pub use word::FreeWord;
