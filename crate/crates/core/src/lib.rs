//! Finite-scale machinery for dual Ramsey theory over varieties of algebras.
//!
//! The crate is `no_std` and only needs `alloc`. It is organised bottom-up:
//!
//! - [`chains`]: finite chains, ordinal sums, lexicographic powers and the
//!   calculus of rigid surjections.
//! - [`terms`]: terms over a ranked alphabet, shapes, the neat well-ordering
//!   of a term algebra, substitution, flattening and the unit.
//! - [`algebras`]: finite algebras given by operation tables, homomorphism
//!   enumeration, products, subalgebras, and free algebras of finitely
//!   generated varieties.
//! - [`ordered`]: linearly ordered algebras, rigid epimorphisms, neat-ordered
//!   free algebras, reflection and joint factoring.
//! - [`ramsey`]: dual partition arrows, Graham–Rothschild witness search,
//!   coloring transport along the term/chain pre-adjunction, and the
//!   segment-by-segment induction for free algebras.
//!
//! Everything here is pure: values are immutable after construction and
//! randomized routines take an explicit seed.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebras;
pub mod chains;
mod error;
pub mod ordered;
pub mod ramsey;
pub mod terms;

pub use error::{Error, Result};
