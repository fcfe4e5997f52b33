//! Exact arithmetic over the Gaussian rationals and the subspace calculus
//! built on it: matrices, reduced echelon forms, kernels and images,
//! canonical subspaces, subquotients, and filtrations.
//!
//! Every canonical form here is unique for its input, so structural equality
//! of the types below decides mathematical equality. All pivoting is exact;
//! no tolerance appears anywhere in this module.

mod filtration;
mod mat;
mod pairing;
mod scalar;
mod solve;
mod subspace;

pub use filtration::{Direction, Filtration};
pub use mat::{commutator, nilpotent_exp, Mat};
pub use pairing::Pairing;
pub use scalar::{imag_unit, int, rat, scalar_from_rat, simplest_rational_between, Rat, Scalar};
pub use solve::{
    det, eigenprojections, inverse, is_positive_definite_hermitian, kernel_basis,
    rational_spectrum, rref, solve, solve_matrix,
};
pub use subspace::{is_direct_sum_decomposition, rank_kernel_image, Subquotient, Subspace};

use core::fmt;

/// Failure modes of the exact layer. Shape mismatches are programmer errors
/// and panic instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactError {
    /// `nilpotent_exp` was given a matrix with `A^dim != 0`.
    NotNilpotent,
    /// A filtration constructor was given steps that are not nested.
    NotNested { index: i64 },
    /// A matrix that the contract requires to be invertible is singular.
    Singular,
    /// A matrix expected to be semisimple with a known spectrum is not.
    NotSemisimple,
    /// A pairing matrix is not hermitian.
    NotHermitian,
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::NotNilpotent => write!(f, "matrix is not nilpotent"),
            ExactError::NotNested { index } => {
                write!(f, "filtration steps are not nested at index {index}")
            }
            ExactError::Singular => write!(f, "matrix is singular"),
            ExactError::NotSemisimple => {
                write!(f, "matrix is not semisimple with the expected spectrum")
            }
            ExactError::NotHermitian => write!(f, "pairing matrix is not hermitian"),
        }
    }
}
