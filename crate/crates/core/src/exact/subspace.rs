//! Canonical subspaces of coordinate space and subquotient arithmetic.

use alloc::vec::Vec;

use super::mat::Mat;
use super::scalar::Scalar;
use super::solve::{kernel_basis, rref, solve, solve_matrix};

/// A linear subspace in canonical form: the basis matrix is the reduced
/// column echelon form of any spanning set, so two subspaces are equal as
/// sets exactly when their `basis` matrices are equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Mat,
}

impl Subspace {
    /// Canonicalizes the span of the columns of `m`.
    pub fn from_mat(ambient: usize, m: &Mat) -> Self {
        assert_eq!(m.rows(), ambient, "ambient dimension mismatch");
        let (r, pivots) = rref(&m.transpose());
        // Rows of `r` with pivots span the space; transposed back they form
        // the reduced column echelon basis.
        let basis = Mat::from_fn(ambient, pivots.len(), |i, j| r.at(j, i).clone());
        Subspace { ambient, basis }
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        Subspace::from_mat(ambient, &Mat::from_columns(ambient, vectors))
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: Mat::identity(ambient) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Basis matrix in reduced column echelon form, one column per basis
    /// vector.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.columns()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        solve(&self.basis, v).is_some()
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the space.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        solve(&self.basis, v)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        solve_matrix(&self.basis, &other.basis).is_some()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        Subspace::from_mat(self.ambient, &Mat::hstack(&[&self.basis, &other.basis]))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        // v = A x = B y exactly when (x, y) kills [A | -B].
        let paired = Mat::hstack(&[&self.basis, &other.basis.map(|s| -s.clone())]);
        let ker = kernel_basis(&paired);
        let mut vectors = Vec::new();
        for j in 0..ker.cols() {
            let x: Vec<Scalar> = (0..self.dim()).map(|i| ker.at(i, j).clone()).collect();
            vectors.push(self.basis.mul_vec(&x));
        }
        Subspace::from_vectors(self.ambient, &vectors)
    }

    /// Image of the space under a linear map.
    pub fn image_under(&self, m: &Mat) -> Subspace {
        assert_eq!(m.cols(), self.ambient, "map domain mismatch");
        Subspace::from_mat(m.rows(), &(m * &self.basis))
    }

    /// Preimage `{ v : m v in self }`.
    pub fn preimage_under(&self, m: &Mat) -> Subspace {
        assert_eq!(m.rows(), self.ambient, "map codomain mismatch");
        let domain = m.cols();
        if self.is_full() {
            return Subspace::full(domain);
        }
        let paired = Mat::hstack(&[m, &self.basis.map(|s| -s.clone())]);
        let ker = kernel_basis(&paired);
        let mut vectors = Vec::new();
        for j in 0..ker.cols() {
            vectors.push((0..domain).map(|i| ker.at(i, j).clone()).collect());
        }
        Subspace::from_vectors(domain, &vectors)
    }

    /// Extends this space to `larger` by columns of `larger`'s canonical
    /// basis, chosen greedily in order. The result is a deterministic
    /// complement of `self` inside `larger`.
    pub fn complement_in(&self, larger: &Subspace) -> Vec<Vec<Scalar>> {
        assert!(larger.contains(self), "complement target does not contain the space");
        let mut kept: Vec<Vec<Scalar>> = Vec::new();
        let mut span = self.clone();
        for j in 0..larger.dim() {
            let candidate = larger.basis.column(j);
            if !span.contains_vector(&candidate) {
                kept.push(candidate.clone());
                span = span.sum(&Subspace::from_vectors(self.ambient, &[candidate]));
            }
        }
        assert_eq!(kept.len(), larger.dim() - self.dim(), "complement dimension mismatch");
        kept
    }
}

impl core::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Subspace(dim {} of {}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

/// The quotient `total / sub` of two nested subspaces, with a deterministic
/// complement basis giving coordinates on the quotient.
#[derive(Clone)]
pub struct Subquotient {
    sub: Subspace,
    total: Subspace,
    /// Columns form a basis of a complement of `sub` in `total`, selected
    /// from `total`'s canonical basis.
    complement: Mat,
    /// `[sub.basis | complement]`, the solver for quotient coordinates.
    decomposition: Mat,
}

impl Subquotient {
    pub fn new(total: &Subspace, sub: &Subspace) -> Self {
        assert!(total.contains(sub), "subquotient requires nested spaces");
        let complement_vectors = sub.complement_in(total);
        let complement = Mat::from_columns(total.ambient_dim(), &complement_vectors);
        let decomposition = Mat::hstack(&[sub.basis(), &complement]);
        Subquotient { sub: sub.clone(), total: total.clone(), complement, decomposition }
    }

    pub fn dim(&self) -> usize {
        self.total.dim() - self.sub.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.total.ambient_dim()
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn total(&self) -> &Subspace {
        &self.total
    }

    /// Quotient coordinates of a vector of `total`.
    pub fn project_vector(&self, v: &[Scalar]) -> Vec<Scalar> {
        let coords = solve(&self.decomposition, v).expect("vector lies outside the subquotient");
        coords[self.sub.dim()..].to_vec()
    }

    /// Image of `u` in the quotient: `((u ∩ total) + sub) / sub` in quotient
    /// coordinates.
    pub fn project_subspace(&self, u: &Subspace) -> Subspace {
        let inside = u.intersect(&self.total);
        let mut vectors = Vec::new();
        for v in inside.basis_vectors() {
            vectors.push(self.project_vector(&v));
        }
        Subspace::from_vectors(self.dim(), &vectors)
    }

    /// The vector of `total` with the given quotient coordinates and zero
    /// component along `sub`'s canonical complement decomposition.
    pub fn lift_vector(&self, coords: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coords.len(), self.dim(), "coordinate length mismatch");
        self.complement.mul_vec(coords)
    }

    /// Preimage in `total` of a subspace of the quotient.
    pub fn preimage_subspace(&self, q: &Subspace) -> Subspace {
        assert_eq!(q.ambient_dim(), self.dim(), "quotient dimension mismatch");
        let mut vectors: Vec<Vec<Scalar>> =
            q.basis_vectors().iter().map(|c| self.lift_vector(c)).collect();
        vectors.extend(self.sub.basis_vectors());
        Subspace::from_vectors(self.ambient_dim(), &vectors)
    }

    /// Matrix of the map this endomorphism induces from `self` to `target`,
    /// in quotient coordinates. Requires `a` to map `total` into
    /// `target.total` and `sub` into `target.sub`.
    pub fn induced_map(&self, a: &Mat, target: &Subquotient) -> Mat {
        let mut columns = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let image = a.mul_vec(&self.complement.column(j));
            columns.push(target.project_vector(&image));
        }
        assert!(
            {
                let mapped_sub = self.sub.image_under(a);
                target.sub.contains(&mapped_sub)
            },
            "map does not respect the subquotient"
        );
        Mat::from_columns(target.dim(), &columns)
    }
}

/// Rank, kernel, and image of a matrix, all exact.
pub fn rank_kernel_image(a: &Mat) -> (usize, Subspace, Subspace) {
    let image = Subspace::from_mat(a.rows(), a);
    let kernel = Subspace::from_mat(a.cols(), &kernel_basis(a));
    (image.dim(), kernel, image)
}

/// True when the given subspaces are independent and together span the
/// whole ambient space.
pub fn is_direct_sum_decomposition(ambient: usize, parts: &[&Subspace]) -> bool {
    let total: usize = parts.iter().map(|p| p.dim()).sum();
    if total != ambient {
        return false;
    }
    let mut sum = Subspace::zero(ambient);
    for p in parts {
        sum = sum.sum(p);
    }
    sum.is_full()
}

impl core::fmt::Debug for Subquotient {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "Subquotient(dim {} = {}/{})", self.dim(), self.total.dim(), self.sub.dim())
    }
}
