//! Monodromy data of a degeneration: the weight filtration of the nilpotent
//! part, gradings compatible with the pairing and the semisimple part, the
//! completed sl2-triple, and its isotypical decomposition.

mod splitting;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::exact::{
    commutator, eigenprojections, kernel_basis, solve_matrix, Direction, Filtration, Mat, Pairing,
    Rat, Scalar, Subspace,
};

pub use splitting::grading_splitting;

/// Failure modes of this module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonodromyError {
    /// `weight_filtration` or a datum was given a non-nilpotent N.
    NotNilpotent,
    /// A `DegenerationDatum` invariant failed; the message names it.
    DatumInvariant(&'static str),
    /// `sl2_complete` found no X with `[H,X] = 2X` and `[X,Y] = H`.
    InconsistentTriple,
    /// The Casimir operator has an eigenvalue that is not of the form
    /// `(m+1)^2`, so the input is not a representation.
    CasimirSpectrum,
    /// A matrix expected to act semisimply with integer eigenvalues does not.
    NotSemisimple,
}

impl fmt::Display for MonodromyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonodromyError::NotNilpotent => write!(f, "operator is not nilpotent"),
            MonodromyError::DatumInvariant(what) => {
                write!(f, "degeneration datum invariant failed: {what}")
            }
            MonodromyError::InconsistentTriple => {
                write!(f, "no X completes (H, -N) to an sl2-triple")
            }
            MonodromyError::CasimirSpectrum => {
                write!(f, "Casimir eigenvalue is not a perfect square of the form (m+1)^2")
            }
            MonodromyError::NotSemisimple => {
                write!(f, "operator is not semisimple with integer eigenvalues")
            }
        }
    }
}

/// Monodromy data of a one-parameter degeneration: the pairing, the
/// semisimple part of the monodromy given by rational angles and their
/// eigenspaces, the nilpotent logarithm N, an optional limit Hodge
/// filtration, and the weight.
///
/// Validated invariants: the eigenspaces decompose the whole space and are
/// pairwise Q-orthogonal (so the unitary semisimple part preserves Q), N is
/// nilpotent, preserves each eigenspace, and is self-adjoint for Q.
#[derive(Clone)]
pub struct DegenerationDatum {
    q: Pairing,
    ts_spectrum: Vec<(Rat, Subspace)>,
    n: Mat,
    f: Option<Filtration>,
    weight: i64,
}

impl DegenerationDatum {
    pub fn new(
        q: Mat,
        ts_spectrum: Vec<(Rat, Subspace)>,
        n: Mat,
        f: Option<Filtration>,
        weight: i64,
    ) -> Result<Self, MonodromyError> {
        let dim = n.rows();
        assert!(n.is_square(), "N must be square");
        let q = Pairing::new(q)
            .map_err(|_| MonodromyError::DatumInvariant("Q is not hermitian nondegenerate"))?;
        if q.dim() != dim {
            return Err(MonodromyError::DatumInvariant("Q and N dimensions differ"));
        }
        if let Some(filtration) = &f {
            if filtration.ambient_dim() != dim {
                return Err(MonodromyError::DatumInvariant("F ambient dimension differs"));
            }
            if filtration.direction() != Direction::Decreasing {
                return Err(MonodromyError::DatumInvariant("F must be decreasing"));
            }
        }

        let mut total = 0;
        for (i, (alpha, space)) in ts_spectrum.iter().enumerate() {
            if alpha.is_negative() || *alpha >= Rat::one() {
                return Err(MonodromyError::DatumInvariant("angle outside [0, 1)"));
            }
            if space.is_zero() || space.ambient_dim() != dim {
                return Err(MonodromyError::DatumInvariant("bad eigenspace"));
            }
            total += space.dim();
            for (alpha_other, _) in &ts_spectrum[..i] {
                if alpha == alpha_other {
                    return Err(MonodromyError::DatumInvariant("repeated angle"));
                }
            }
        }
        if total != dim {
            return Err(MonodromyError::DatumInvariant("eigenspaces do not decompose the space"));
        }
        let mut sum = Subspace::zero(dim);
        for (_, space) in &ts_spectrum {
            sum = sum.sum(space);
        }
        if !sum.is_full() {
            return Err(MonodromyError::DatumInvariant("eigenspaces do not decompose the space"));
        }
        // Distinct unit-circle eigenvalues must pair to zero; this is what
        // preservation of Q by the semisimple part means in rational terms.
        for (i, (_, a)) in ts_spectrum.iter().enumerate() {
            for (_, b) in &ts_spectrum[..i] {
                if !q.orthogonal_spaces(a, b) {
                    return Err(MonodromyError::DatumInvariant(
                        "distinct eigenspaces are not Q-orthogonal",
                    ));
                }
            }
        }
        for (_, space) in &ts_spectrum {
            if !space.contains(&space.image_under(&n)) {
                return Err(MonodromyError::DatumInvariant("N does not preserve an eigenspace"));
            }
        }
        if nilpotency_index(&n).is_none() {
            return Err(MonodromyError::NotNilpotent);
        }
        if q.adjoint(&n) != n {
            return Err(MonodromyError::DatumInvariant("N is not self-adjoint for Q"));
        }
        Ok(DegenerationDatum { q, ts_spectrum, n, f, weight })
    }

    /// Datum with trivial semisimple part.
    pub fn unipotent(
        q: Mat,
        n: Mat,
        f: Option<Filtration>,
        weight: i64,
    ) -> Result<Self, MonodromyError> {
        let dim = n.rows();
        DegenerationDatum::new(q, alloc::vec![(Rat::zero(), Subspace::full(dim))], n, f, weight)
    }

    pub fn dim(&self) -> usize {
        self.n.rows()
    }

    pub fn pairing(&self) -> &Pairing {
        &self.q
    }

    pub fn nilpotent(&self) -> &Mat {
        &self.n
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn limit_filtration(&self) -> Option<&Filtration> {
        self.f.as_ref()
    }

    pub fn ts_spectrum(&self) -> &[(Rat, Subspace)] {
        &self.ts_spectrum
    }

    /// True when a subspace is preserved by the semisimple part, i.e. splits
    /// into its intersections with the eigenspaces.
    pub fn ts_stable(&self, u: &Subspace) -> bool {
        let mut pieces = 0;
        for (_, space) in &self.ts_spectrum {
            pieces += u.intersect(space).dim();
        }
        pieces == u.dim()
    }

    /// True when every step of a filtration is preserved by the semisimple
    /// part.
    pub fn ts_stable_filtration(&self, f: &Filtration) -> bool {
        f.jump_indices().iter().all(|&k| self.ts_stable(f.step(k)))
    }
}

/// The largest `m` with `N^m != 0`, or `None` if N is not nilpotent.
/// Zero maps have index 0.
pub fn nilpotency_index(n: &Mat) -> Option<usize> {
    assert!(n.is_square(), "nilpotency of non-square matrix");
    let dim = n.rows();
    let mut power = Mat::identity(dim);
    for m in 0..=dim {
        let next = &power * n;
        if next.is_zero() {
            return Some(m);
        }
        power = next;
    }
    None
}

/// The monodromy weight filtration of a nilpotent operator, centered at
/// zero: the unique increasing filtration with `N W_k ⊆ W_{k-2}` and
/// `N^k : gr_k ≅ gr_{-k}`, computed by the closed formula
/// `W_k = Σ_j N^j ker N^{k+2j+1}`.
pub fn weight_filtration(n: &Mat) -> Result<Filtration, MonodromyError> {
    let dim = n.rows();
    let m = nilpotency_index(n).ok_or(MonodromyError::NotNilpotent)? as i64;
    let mut steps = Vec::new();
    for k in -m..=m {
        let mut w = Subspace::zero(dim);
        for j in 0..=(m as usize) {
            let exponent = k + 2 * (j as i64) + 1;
            if exponent < 1 {
                continue;
            }
            let kernel = Subspace::from_mat(dim, &kernel_basis(&n.pow(exponent as usize)));
            w = w.sum(&kernel.image_under(&n.pow(j)));
        }
        steps.push((k, w));
    }
    Filtration::from_steps(Direction::Increasing, dim, steps)
        .map_err(|_| MonodromyError::NotNilpotent)
}

/// An sl2-triple acting on coordinate space, with the standard relations
/// `[H,X] = 2X`, `[H,Y] = -2Y`, `[X,Y] = H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Triple {
    h: Mat,
    x: Mat,
    y: Mat,
}

impl Sl2Triple {
    pub fn new(h: Mat, x: Mat, y: Mat) -> Result<Self, MonodromyError> {
        let two_x = x.scale(&crate::exact::int(2));
        let minus_two_y = y.scale(&crate::exact::int(-2));
        if commutator(&h, &x) != two_x
            || commutator(&h, &y) != minus_two_y
            || commutator(&x, &y) != h
        {
            return Err(MonodromyError::InconsistentTriple);
        }
        Ok(Sl2Triple { h, x, y })
    }

    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    pub fn h(&self) -> &Mat {
        &self.h
    }

    pub fn x(&self) -> &Mat {
        &self.x
    }

    pub fn y(&self) -> &Mat {
        &self.y
    }

    /// The Casimir operator `2(XY + YX) + H^2 + id`, which acts on the
    /// `S_m`-isotypical component as `(m+1)^2`.
    pub fn casimir(&self) -> Mat {
        let two = crate::exact::int(2);
        let mixed = (&(&self.x * &self.y) + &(&self.y * &self.x)).scale(&two);
        &(&mixed + &(&self.h * &self.h)) + &Mat::identity(self.dim())
    }
}

/// Completes a grading and a nilpotent operator to an sl2-triple with
/// `Y = -N`, solving `[H,X] = 2X`, `[X,Y] = H` as an exact linear system.
pub fn sl2_complete(h: &Mat, n: &Mat) -> Result<Sl2Triple, MonodromyError> {
    assert!(h.is_square() && n.is_square() && h.rows() == n.rows(), "shape mismatch");
    let dim = h.rows();
    let y = -n;
    let two = crate::exact::int(2);

    // Unknown vec(X), column-major; rows list the entries of [H,X] - 2X
    // followed by the entries of [X,Y] - H.
    let cells = dim * dim;
    let mut system = Mat::zeros(2 * cells, cells);
    let mut rhs = Mat::zeros(2 * cells, 1);
    let index = |i: usize, j: usize| j * dim + i;
    for i in 0..dim {
        for j in 0..dim {
            let row1 = index(i, j);
            let row2 = cells + index(i, j);
            for k in 0..dim {
                // (HX)_{ij} contributes H_{ik} X_{kj}.
                let mut c = system.at(row1, index(k, j)) + h.at(i, k);
                system.set(row1, index(k, j), c);
                // -(XH)_{ij} contributes -X_{ik} H_{kj}.
                c = system.at(row1, index(i, k)) - h.at(k, j);
                system.set(row1, index(i, k), c);
                // (XY)_{ij} contributes X_{ik} Y_{kj}.
                c = system.at(row2, index(i, k)) + y.at(k, j);
                system.set(row2, index(i, k), c);
                // -(YX)_{ij} contributes -Y_{ik} X_{kj}.
                c = system.at(row2, index(k, j)) - y.at(i, k);
                system.set(row2, index(k, j), c);
            }
            let c = system.at(row1, index(i, j)) - &two;
            system.set(row1, index(i, j), c);
            rhs.set(row2, 0, h.at(i, j).clone());
        }
    }
    let solution = solve_matrix(&system, &rhs).ok_or(MonodromyError::InconsistentTriple)?;
    let x = Mat::from_vec_columns(dim, dim, &solution.column(0));
    Sl2Triple::new(h.clone(), x, y)
}

/// Splits a representation into Casimir eigenspaces. Returns the list of
/// `(m, component)` with the component of highest weight `m` nonzero, or an
/// error if the Casimir spectrum is not of the shape `(m+1)^2`.
pub fn isotypical_decompose(t: &Sl2Triple) -> Result<Vec<(usize, Subspace)>, MonodromyError> {
    let dim = t.dim();
    let omega = t.casimir();
    let mut components = Vec::new();
    let mut covered = 0;
    for m in 0..dim {
        let eigenvalue = crate::exact::int(((m + 1) * (m + 1)) as i64);
        let shifted = &omega - &Mat::identity(dim).scale(&eigenvalue);
        let space = Subspace::from_mat(dim, &kernel_basis(&shifted));
        if space.is_zero() {
            continue;
        }
        if !space.dim().is_multiple_of(m + 1) {
            return Err(MonodromyError::CasimirSpectrum);
        }
        for op in [t.h(), t.x(), t.y()] {
            if !space.contains(&space.image_under(op)) {
                return Err(MonodromyError::CasimirSpectrum);
            }
        }
        covered += space.dim();
        components.push((m, space));
    }
    if covered != dim {
        return Err(MonodromyError::CasimirSpectrum);
    }
    Ok(components)
}

/// δ(T), m(N), and C_0 of a datum: the minimal circular gap between the
/// rational monodromy angles (1 when there is a single eigenvalue), the
/// largest power with `N^m != 0`, and `C_0 = sqrt(binom(r+1,3)) / 2`.
pub fn monodromy_constants(d: &DegenerationDatum) -> (Rat, usize, f64) {
    let mut angles: Vec<Rat> = d.ts_spectrum().iter().map(|(a, _)| a.clone()).collect();
    angles.sort();
    let delta = if angles.len() <= 1 {
        Rat::one()
    } else {
        let mut min_gap: Option<Rat> = None;
        for i in 0..angles.len() {
            let next = if i + 1 == angles.len() {
                angles[0].clone() + Rat::one()
            } else {
                angles[i + 1].clone()
            };
            let gap = next - angles[i].clone();
            if min_gap.as_ref().is_none_or(|g| gap < *g) {
                min_gap = Some(gap);
            }
        }
        min_gap.expect("at least two angles")
    };
    let m_n = nilpotency_index(d.nilpotent()).expect("datum N is nilpotent");
    let r = d.dim() as u64;
    let binom = if r + 1 >= 3 {
        let n = r + 1;
        (n * (n - 1) * (n - 2) / 6) as f64
    } else {
        0.0
    };
    let c0 = 0.5 * num_traits::Float::sqrt(binom);
    (delta, m_n, c0)
}

/// The integer eigenvalues of a semisimple matrix together with their
/// eigenspaces, sorted by eigenvalue. Fails unless the eigenspaces for
/// integer eigenvalues in `[-dim, dim]` fill the whole space.
pub fn integer_spectrum(h: &Mat) -> Result<Vec<(i64, Subspace)>, MonodromyError> {
    assert!(h.is_square(), "spectrum of non-square matrix");
    let dim = h.rows();
    let bound = dim as i64;
    let mut spectrum = Vec::new();
    let mut covered = 0;
    for k in -bound..=bound {
        let shifted = h - &Mat::identity(dim).scale(&crate::exact::int(k));
        let space = Subspace::from_mat(dim, &kernel_basis(&shifted));
        if !space.is_zero() {
            covered += space.dim();
            spectrum.push((k, space));
        }
    }
    if covered != dim {
        return Err(MonodromyError::NotSemisimple);
    }
    // Kernel computations alone do not rule out nontrivial Jordan blocks;
    // the projection identity does.
    let eigenvalues: Vec<Scalar> = spectrum.iter().map(|(k, _)| crate::exact::int(*k)).collect();
    eigenprojections(h, &eigenvalues).map_err(|_| MonodromyError::NotSemisimple)?;
    Ok(spectrum)
}

/// Eigenprojections of a semisimple matrix with integer spectrum, keyed by
/// eigenvalue.
pub fn integer_eigenprojections(h: &Mat) -> Result<Vec<(i64, Mat)>, MonodromyError> {
    let spectrum = integer_spectrum(h)?;
    let eigenvalues: Vec<Scalar> = spectrum.iter().map(|(k, _)| crate::exact::int(*k)).collect();
    let projections =
        eigenprojections(h, &eigenvalues).map_err(|_| MonodromyError::NotSemisimple)?;
    Ok(spectrum.iter().map(|(k, _)| *k).zip(projections).collect())
}

impl fmt::Debug for DegenerationDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let angles: Vec<String> =
            self.ts_spectrum.iter().map(|(a, s)| alloc::format!("{a} (dim {})", s.dim())).collect();
        write!(
            f,
            "DegenerationDatum(dim {}, weight {}, angles [{}])",
            self.dim(),
            self.weight,
            angles.join(", ")
        )
    }
}
