//! Polarized complex Hodge structures: the conjugate filtration cut out by
//! the pairing, the bigraded decomposition with its sign conditions, Hodge
//! inner products, and the induced weight-zero structure on endomorphisms.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::exact::{
    int, inverse, is_positive_definite_hermitian, Direction, Filtration, Mat, Pairing, Scalar,
    Subspace,
};

/// The two ways a filtration can fail to define a polarized structure.
/// Membership in the period domain is exactly `build_hodge_structure`
/// succeeding; the two failure modes are kept apart because orbit scans
/// need to distinguish them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HodgeError {
    /// The candidate pieces do not decompose the space, or fail to add
    /// back up to the filtrations.
    DecompositionFails,
    /// The decomposition exists but `(-1)^q Q` is not positive definite
    /// on the named piece, or distinct pieces are not orthogonal.
    NotPolarized { p: i64, q: i64 },
}

impl fmt::Display for HodgeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HodgeError::DecompositionFails => {
                write!(f, "filtrations do not induce a bigraded decomposition")
            }
            HodgeError::NotPolarized { p, q } => {
                write!(f, "sign condition fails on the ({p},{q}) piece")
            }
        }
    }
}

/// A weight-n Hodge structure: the bigraded pieces `V^{p,q} = F^p ∩ F̄^q`,
/// both filtrations, and optionally the polarization. Unpolarized values
/// arise as weight-graded quotients of mixed structures; every operation
/// that needs the pairing says so.
#[derive(Clone)]
pub struct HodgeStructure {
    weight: i64,
    q: Option<Pairing>,
    f: Filtration,
    fbar: Filtration,
    pieces: BTreeMap<(i64, i64), Subspace>,
    decomposition: Mat,
    decomposition_inv: Mat,
}

/// The conjugate Hodge filtration determined by F and the pairing:
/// `F̄^q = {v : Q(v, x) = 0 for all x in F^{n-q+1}}`.
pub fn conjugate_filtration(f: &Filtration, q: &Pairing, n: i64) -> Filtration {
    assert_eq!(f.direction(), Direction::Decreasing, "F must be decreasing");
    assert_eq!(f.ambient_dim(), q.dim(), "F and Q dimensions differ");
    let jumps = f.jump_indices();
    let mut indices: Vec<i64> = jumps.clone();
    if let Some(first) = jumps.first() {
        indices.push(first - 1);
    }
    let steps: Vec<(i64, Subspace)> =
        indices.into_iter().map(|p| (n + 1 - p, q.orthogonal_complement(f.step(p)))).collect();
    Filtration::from_steps(Direction::Decreasing, f.ambient_dim(), steps)
        .expect("orthogonal complements of a nested family are nested")
}

impl HodgeStructure {
    /// Builds and fully validates the structure cut out by two filtrations,
    /// checking the sign conditions when a pairing is supplied.
    fn assemble(
        weight: i64,
        q: Option<Pairing>,
        f: Filtration,
        fbar: Filtration,
    ) -> Result<Self, HodgeError> {
        let dim = f.ambient_dim();
        assert_eq!(fbar.ambient_dim(), dim, "filtration dimensions differ");

        // Pieces can be nonzero only strictly between the vanishing index
        // of F̄ (via q = n - p) and the vanishing index of F.
        let f_top = *f.jump_indices().last().expect("nonempty filtration");
        let fbar_top = *fbar.jump_indices().last().expect("nonempty filtration");
        let mut pieces = BTreeMap::new();
        for p in (weight + 1 - fbar_top)..=(f_top - 1) {
            let piece = f.step(p).intersect(fbar.step(weight - p));
            if !piece.is_zero() {
                pieces.insert((p, weight - p), piece);
            }
        }

        let parts: Vec<&Subspace> = pieces.values().collect();
        if !crate::exact::is_direct_sum_decomposition(dim, &parts) {
            return Err(HodgeError::DecompositionFails);
        }
        // The decomposition must recover both filtrations.
        for index in f.jump_indices() {
            let mut sum = Subspace::zero(dim);
            for ((p, _), piece) in &pieces {
                if *p >= index {
                    sum = sum.sum(piece);
                }
            }
            if &sum != f.step(index) {
                return Err(HodgeError::DecompositionFails);
            }
        }
        for index in fbar.jump_indices() {
            let mut sum = Subspace::zero(dim);
            for ((_, qq), piece) in &pieces {
                if *qq >= index {
                    sum = sum.sum(piece);
                }
            }
            if &sum != fbar.step(index) {
                return Err(HodgeError::DecompositionFails);
            }
        }

        if let Some(pairing) = &q {
            for ((p1, q1), a) in &pieces {
                for ((p2, _), b) in &pieces {
                    if p1 != p2 && !pairing.orthogonal_spaces(a, b) {
                        return Err(HodgeError::NotPolarized { p: *p1, q: *q1 });
                    }
                }
            }
            for ((p, qq), piece) in &pieces {
                let mut gram = pairing.gram(piece.basis());
                if qq.rem_euclid(2) == 1 {
                    gram = gram.scale(&int(-1));
                }
                if !is_positive_definite_hermitian(&gram) {
                    return Err(HodgeError::NotPolarized { p: *p, q: *qq });
                }
            }
        }

        let bases: Vec<&Mat> = pieces.values().map(|s| s.basis()).collect();
        let decomposition = Mat::hstack(&bases);
        let decomposition_inv =
            inverse(&decomposition).expect("direct sum decomposition is invertible");
        Ok(HodgeStructure { weight, q, f, fbar, pieces, decomposition, decomposition_inv })
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.f.ambient_dim()
    }

    pub fn pairing(&self) -> Option<&Pairing> {
        self.q.as_ref()
    }

    pub fn filtration(&self) -> &Filtration {
        &self.f
    }

    pub fn conjugate(&self) -> &Filtration {
        &self.fbar
    }

    pub fn pieces(&self) -> &BTreeMap<(i64, i64), Subspace> {
        &self.pieces
    }

    pub fn piece(&self, p: i64, q: i64) -> Option<&Subspace> {
        self.pieces.get(&(p, q))
    }

    /// Hodge numbers `h^{p,q}` in lexicographic (p,q) order.
    pub fn hodge_numbers(&self) -> Vec<((i64, i64), usize)> {
        self.pieces.iter().map(|(k, s)| (*k, s.dim())).collect()
    }

    /// The components of a vector along the bigraded pieces, in map order.
    pub fn components(&self, v: &[Scalar]) -> Vec<((i64, i64), Vec<Scalar>)> {
        let coords = self.decomposition_inv.mul_vec(v);
        let mut out = Vec::new();
        let mut offset = 0;
        for (key, piece) in &self.pieces {
            let segment = &coords[offset..offset + piece.dim()];
            let mut component = alloc::vec![Scalar::zero(); self.dim()];
            for (basis_vector, c) in piece.basis_vectors().iter().zip(segment) {
                for (slot, entry) in component.iter_mut().zip(basis_vector) {
                    *slot = slot.clone() + entry * c;
                }
            }
            out.push((*key, component));
            offset += piece.dim();
        }
        out
    }
}

impl PartialEq for HodgeStructure {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight
            && self.pieces == other.pieces
            && self.q.as_ref().map(Pairing::matrix) == other.q.as_ref().map(Pairing::matrix)
    }
}

impl fmt::Debug for HodgeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HodgeStructure(weight {}, h = {:?})", self.weight, self.hodge_numbers())
    }
}

/// Builds the polarized Hodge structure with Hodge filtration F, deriving
/// the conjugate filtration from the pairing and validating every axiom.
pub fn build_hodge_structure(
    f: &Filtration,
    q: &Pairing,
    n: i64,
) -> Result<HodgeStructure, HodgeError> {
    let fbar = conjugate_filtration(f, q, n);
    HodgeStructure::assemble(n, Some(q.clone()), f.clone(), fbar)
}

/// Builds the structure cut out by an explicitly given pair (F, F̄), with
/// no pairing and hence no sign conditions. Weight-graded quotients of
/// mixed structures enter this way.
pub fn build_unpolarized_structure(
    f: &Filtration,
    fbar: &Filtration,
    n: i64,
) -> Result<HodgeStructure, HodgeError> {
    HodgeStructure::assemble(n, None, f.clone(), fbar.clone())
}

/// The Hodge inner product `⟨v,w⟩ = Σ (-1)^q Q(v^{p,q}, w^{p,q})`.
pub fn hodge_inner_product(v: &[Scalar], w: &[Scalar], hs: &HodgeStructure) -> Scalar {
    let pairing = hs.pairing().expect("inner product needs a polarization");
    let vc = hs.components(v);
    let wc = hs.components(w);
    let mut total = Scalar::zero();
    for (((_, qq), vp), (_, wp)) in vc.iter().zip(&wc) {
        let mut value = pairing.value(vp, wp);
        if qq.rem_euclid(2) == 1 {
            value = -value;
        }
        total += value;
    }
    total
}

/// The Gram matrix of the Hodge inner product over the standard basis,
/// as a positive definite pairing.
pub fn hodge_gram(hs: &HodgeStructure) -> Pairing {
    let dim = hs.dim();
    let pairing = hs.pairing().expect("Hodge norm needs a polarization");
    // ⟨v,w⟩ = Σ (-1)^q (Π_q v)^H-paired pieces; assemble via projections.
    let mut gram = Mat::zeros(dim, dim);
    let mut offset = 0;
    for ((_, qq), piece) in hs.pieces() {
        let rows = hs.decomposition_inv.row_range(offset, offset + piece.dim());
        let projection = piece.basis() * &rows;
        let mut term = &projection.dagger() * &(pairing.matrix() * &projection);
        if qq.rem_euclid(2) == 1 {
            term = term.scale(&int(-1));
        }
        gram = &gram + &term;
        offset += piece.dim();
    }
    Pairing::new(gram).expect("Hodge Gram matrix is hermitian nondegenerate")
}

/// The induced weight-zero polarized structure on endomorphisms, with
/// pieces `End^{j,-j} = {A : A V^{p,q} ⊆ V^{p+j,q-j}}`, in column-major
/// matrix coordinates, polarized by the trace pairing `tr(A B†)`.
pub fn induced_end_structure(hs: &HodgeStructure) -> HodgeStructure {
    let dim = hs.dim();
    let cells = dim * dim;
    let pairing = hs.pairing().expect("End structure needs a polarization");

    // Matrix units adapted to the decomposition: the unit taking the b-th
    // basis vector of one piece to the a-th of another has pure type.
    let adapted = &hs.decomposition;
    let adapted_inv = &hs.decomposition_inv;
    let mut piece_columns: BTreeMap<i64, Vec<Vec<Scalar>>> = BTreeMap::new();
    let mut offset_a = 0;
    for ((p_a, _), piece_a) in hs.pieces() {
        let mut offset_b = 0;
        for ((p_b, _), piece_b) in hs.pieces() {
            let j = p_a - p_b;
            for a in offset_a..offset_a + piece_a.dim() {
                for b in offset_b..offset_b + piece_b.dim() {
                    // vec(P E_{a,b} P^{-1}) = column a of P times row b of
                    // P^{-1}, flattened column-major.
                    let col = adapted.column(a);
                    let mut unit = alloc::vec![Scalar::zero(); cells];
                    for jj in 0..dim {
                        for ii in 0..dim {
                            unit[jj * dim + ii] = &col[ii] * adapted_inv.at(b, jj);
                        }
                    }
                    piece_columns.entry(j).or_default().push(unit);
                }
            }
            offset_b += piece_b.dim();
        }
        offset_a += piece_a.dim();
    }

    let mut steps: Vec<(i64, Subspace)> = Vec::new();
    let js: Vec<i64> = piece_columns.keys().copied().collect();
    let lowest = *js.first().expect("nonzero space");
    let highest = *js.last().expect("nonzero space");
    for k in lowest..=highest + 1 {
        let mut sum = Subspace::zero(cells);
        for (j, columns) in &piece_columns {
            if *j >= k {
                sum = sum.sum(&Subspace::from_vectors(cells, columns));
            }
        }
        steps.push((k, sum));
    }
    let f = Filtration::from_steps(Direction::Decreasing, cells, steps)
        .expect("graded pieces assemble to a filtration");

    // Trace pairing tr(A B†) in column-major coordinates.
    let q_inv = pairing.inverse_matrix();
    let q_mat = pairing.matrix();
    let trace = Mat::from_fn(cells, cells, |row, col| {
        let (d, c) = (row % dim, row / dim);
        let (a, b) = (col % dim, col / dim);
        q_inv.at(b, c) * q_mat.at(d, a)
    });
    let trace_pairing = Pairing::new(trace).expect("trace pairing is hermitian");
    build_hodge_structure(&f, &trace_pairing, 0)
        .expect("endomorphisms of a polarized structure are polarized")
}
