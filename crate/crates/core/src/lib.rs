//! Exact linear-algebra invariants of degenerating polarized Hodge structures.
//!
//! Everything structural is computed in exact arithmetic over the Gaussian
//! rationals: weight filtrations and gradings of a nilpotent monodromy
//! operator, Hodge decompositions against a hermitian pairing, mixed Hodge
//! structures and their Deligne splittings, sl2-equivariant Hodge structures,
//! limit filtrations, and the coefficient series of the rescaling element.
//! Floating point enters only in the `asymptotics` layer, where metrics are
//! sampled and growth or decay exponents are fitted against exact data.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod exact;
pub mod hodge;
pub mod mhs;
pub mod monodromy;
pub mod sl2hodge;
