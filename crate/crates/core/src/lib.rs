//! Pattern-avoiding permutations and their permuton limits.
//!
//! The crate covers the full chain used to study uniform permutations from
//! `Av(J_k1 ⊕ I_k2 ⊕ J_k3)`: exact samplers for `Av(I_{d+1})`, the
//! Backelin-West-Xin bijections that carry those samples over, and
//! measure-level diagnostics against the anti-diagonal permuton.

pub mod bwx;
pub mod error;
pub mod growth;
pub mod layers;
pub mod measure;
pub mod perm;
pub mod sampler;
pub mod shape;

pub use error::{Error, Result};
pub use perm::{ClassSpec, Monotone, PatternSet, Permutation, Stage};
