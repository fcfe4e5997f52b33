//! Nondegenerate hermitian pairings and the adjoints they induce.

use num_traits::Zero;

use super::mat::Mat;
use super::scalar::Scalar;
use super::solve::inverse;
use super::subspace::Subspace;
use super::ExactError;

/// A nondegenerate hermitian pairing `Q(v, w) = w^H Q v`, linear in the
/// first slot and conjugate-linear in the second.
#[derive(Clone, PartialEq, Eq)]
pub struct Pairing {
    mat: Mat,
    inv: Mat,
}

impl Pairing {
    pub fn new(mat: Mat) -> Result<Self, ExactError> {
        assert!(mat.is_square(), "pairing matrix must be square");
        if mat != mat.dagger() {
            return Err(ExactError::NotHermitian);
        }
        let inv = inverse(&mat)?;
        Ok(Pairing { mat, inv })
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &Mat {
        &self.mat
    }

    pub fn inverse_matrix(&self) -> &Mat {
        &self.inv
    }

    pub fn value(&self, v: &[Scalar], w: &[Scalar]) -> Scalar {
        assert!(v.len() == self.dim() && w.len() == self.dim(), "vector length mismatch");
        let qv = self.mat.mul_vec(v);
        let mut acc = Scalar::zero();
        for i in 0..self.dim() {
            acc += w[i].conj() * &qv[i];
        }
        acc
    }

    /// The adjoint `A†` with `Q(Av, w) = Q(v, A†w)`, namely `Q^{-1} A^H Q`.
    pub fn adjoint(&self, a: &Mat) -> Mat {
        assert!(a.is_square() && a.rows() == self.dim(), "endomorphism shape mismatch");
        &(&self.inv * &a.dagger()) * &self.mat
    }

    /// Gram matrix `G_{ij} = Q(b_j, b_i)` of the columns of `basis`, which
    /// represents the restricted pairing in those coordinates.
    pub fn gram(&self, basis: &Mat) -> Mat {
        assert_eq!(basis.rows(), self.dim(), "basis ambient mismatch");
        &basis.dagger() * &(&self.mat * basis)
    }

    /// The pairing restricted to a subspace, in the coordinates of its
    /// canonical basis. Fails if the restriction is degenerate.
    pub fn restrict(&self, sub: &Subspace) -> Result<Pairing, ExactError> {
        Pairing::new(self.gram(sub.basis()))
    }

    /// `{ v : Q(v, u) = 0 for all u in sub }`.
    pub fn orthogonal_complement(&self, sub: &Subspace) -> Subspace {
        let functionals = &sub.basis().dagger() * &self.mat;
        Subspace::from_mat(self.dim(), &super::solve::kernel_basis(&functionals))
    }

    /// True when `Q(u, w) = 0` for all `u` in `a` and `w` in `b`.
    pub fn orthogonal_spaces(&self, a: &Subspace, b: &Subspace) -> bool {
        (&b.basis().dagger() * &(&self.mat * a.basis())).is_zero()
    }
}

impl core::fmt::Debug for Pairing {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Pairing{:?}", self.mat)
    }
}
