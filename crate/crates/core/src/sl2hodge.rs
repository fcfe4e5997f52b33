//! Representations of sl2 whose weight spaces carry polarized Hodge
//! structures: recognition of the bigrading from a single filtration, the
//! Weil element, the associated pure structure on `exp(Y) F`, the Hodge
//! components of the triple, and the model degenerations obtained by
//! twisting the monodromy with a commuting semisimple operator.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::exact::{
    commutator, int, inverse, is_direct_sum_decomposition, is_positive_definite_hermitian,
    nilpotent_exp, rat, rational_spectrum, scalar_from_rat, Direction, Filtration, Mat, Pairing,
    Rat, Scalar, Subspace,
};
use crate::hodge::{
    build_hodge_structure, conjugate_filtration, hodge_gram, induced_end_structure, HodgeStructure,
};
use crate::monodromy::{integer_spectrum, sl2_complete, DegenerationDatum, Sl2Triple};

/// How recognition or model assembly rejects its input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sl2HodgeError {
    /// A stated precondition on the input data fails; the message names it.
    PreconditionFails(&'static str),
    /// The preconditions hold but the intersections `E_k(H) ∩ F^i ∩ F̄^j`
    /// do not reassemble the space and its filtrations. Genuine inputs
    /// never reach this; it guards the construction itself.
    RecognitionFails,
}

impl fmt::Display for Sl2HodgeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sl2HodgeError::PreconditionFails(what) => {
                write!(f, "sl2-Hodge precondition failed: {what}")
            }
            Sl2HodgeError::RecognitionFails => {
                write!(f, "bigraded pieces do not reassemble the filtrations")
            }
        }
    }
}

/// A polarized sl2-Hodge structure of weight `n`: a representation
/// `(H, X, Y)` together with a pairing `Q` and a bigrading
/// `V = ⊕ V_k^{i,j}` over `i + j = n + k`, keyed `(k, i, j)`, such that
/// each weight space `E_k(H)` is a Hodge structure of weight `n + k` that
/// `Q` polarizes against the Weil element, `X` raises bigraded type by
/// `(1, 1)`, and `Y` lowers it.
#[derive(Clone, PartialEq, Eq)]
pub struct Sl2HodgeStructure {
    weight: i64,
    triple: Sl2Triple,
    q: Pairing,
    pieces: BTreeMap<(i64, i64, i64), Subspace>,
    f_total: Filtration,
    fbar_total: Filtration,
}

impl Sl2HodgeStructure {
    /// Weight of the structure.
    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        self.triple.dim()
    }

    /// The acting sl2-triple.
    pub fn triple(&self) -> &Sl2Triple {
        &self.triple
    }

    /// The polarizing pairing.
    pub fn pairing(&self) -> &Pairing {
        &self.q
    }

    /// The bigraded pieces, keyed `(k, i, j)` with `i + j = weight + k`.
    pub fn pieces(&self) -> &BTreeMap<(i64, i64, i64), Subspace> {
        &self.pieces
    }

    /// One bigraded piece, if occupied.
    pub fn piece(&self, k: i64, i: i64, j: i64) -> Option<&Subspace> {
        self.pieces.get(&(k, i, j))
    }

    /// The total Hodge filtration `F^p = ⊕_{i >= p} V_k^{i,j}`.
    pub fn total_filtration(&self) -> &Filtration {
        &self.f_total
    }

    /// The conjugate total filtration cut out by the pairing.
    pub fn conjugate_total_filtration(&self) -> &Filtration {
        &self.fbar_total
    }

    /// The occupied eigenvalues of `H`, ascending.
    pub fn weights(&self) -> Vec<i64> {
        // Keys sort lexicographically, so equal weights are adjacent.
        let mut out: Vec<i64> = self.pieces.keys().map(|&(k, _, _)| k).collect();
        out.dedup();
        out
    }

    /// The eigenspace `E_k(H)` as the sum of its bigraded pieces.
    pub fn weight_space(&self, k: i64) -> Subspace {
        let mut space = Subspace::zero(self.dim());
        for (&(kk, _, _), piece) in &self.pieces {
            if kk == k {
                space = space.sum(piece);
            }
        }
        space
    }

    /// The axioms recognition does not check directly. They follow from
    /// the checked preconditions, so a failure here is a bug in the
    /// construction, not bad input.
    fn assert_axioms(&self) {
        let x = self.triple.x();
        let y = self.triple.y();
        for (&(k, i, j), piece) in &self.pieces {
            let up = piece.image_under(x);
            assert!(
                up.is_zero()
                    || self.pieces.get(&(k + 2, i + 1, j + 1)).is_some_and(|t| t.contains(&up)),
                "X raises bigraded type by (1, 1)"
            );
            let down = piece.image_under(y);
            assert!(
                down.is_zero()
                    || self.pieces.get(&(k - 2, i - 1, j - 1)).is_some_and(|t| t.contains(&down)),
                "Y lowers bigraded type by (1, 1)"
            );
        }
        assert_eq!(self.q.adjoint(x), x.clone(), "the completed X is self-adjoint for Q");
        // The pairing twisted by the Weil element is definite of sign
        // (-1)^j on each piece and zero between distinct pieces.
        let w = weil_action(self);
        let twisted = Pairing::new(&w.dagger() * self.q.matrix())
            .expect("the pairing twisted by the Weil element is hermitian nondegenerate");
        for (&(_, _, j), piece) in &self.pieces {
            let gram = twisted.gram(piece.basis());
            let signed = if j.rem_euclid(2) == 1 { gram.scale(&int(-1)) } else { gram };
            assert!(
                is_positive_definite_hermitian(&signed),
                "the twisted pairing is (-1)^j definite on each piece"
            );
        }
        let parts: Vec<&Subspace> = self.pieces.values().collect();
        for (a, first) in parts.iter().enumerate() {
            for second in &parts[a + 1..] {
                assert!(
                    twisted.orthogonal_spaces(first, second),
                    "distinct pieces are orthogonal under the twisted pairing"
                );
            }
        }
    }
}

impl fmt::Debug for Sl2HodgeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<((i64, i64, i64), usize)> =
            self.pieces.iter().map(|(&key, s)| (key, s.dim())).collect();
        write!(f, "Sl2HodgeStructure(weight {}, pieces {:?})", self.weight, dims)
    }
}

/// Recovers the polarized sl2-Hodge structure of weight `n` determined by
/// `(Q, H, Y, F)`. The checked preconditions are exactly: `Q` hermitian
/// nondegenerate, `H` skew-adjoint and `Y` self-adjoint for `Q`,
/// `[H, Y] = -2Y` with `(H, Y)` extending to a representation,
/// `Y(F^p) ⊆ F^{p-1}` and `H(F^p) ⊆ F^p`, and `exp(Y) F` the filtration
/// of a weight-`n` structure polarized by `Q`. The bigrading is then
/// `V_k^{i,j} = E_k(H) ∩ F^i ∩ F̄^j`, and the axioms recognition does not
/// check hold on theoretical grounds, so they are asserted rather than
/// reported as errors.
pub fn recognize_sl2_filtration(
    q: &Mat,
    h: &Mat,
    y: &Mat,
    f: &Filtration,
    n: i64,
) -> Result<Sl2HodgeStructure, Sl2HodgeError> {
    let dim = h.rows();
    assert!(h.is_square() && y.is_square() && y.rows() == dim, "operator shapes differ");
    assert_eq!(f.ambient_dim(), dim, "filtration lives in a different space");
    assert_eq!(f.direction(), Direction::Decreasing, "Hodge filtrations decrease");

    let pairing = Pairing::new(q.clone()).map_err(|_| {
        Sl2HodgeError::PreconditionFails("Q is not a nondegenerate hermitian pairing")
    })?;
    if pairing.adjoint(h) != h.scale(&int(-1)) {
        return Err(Sl2HodgeError::PreconditionFails("H is not skew-adjoint for Q"));
    }
    if pairing.adjoint(y) != *y {
        return Err(Sl2HodgeError::PreconditionFails("Y is not self-adjoint for Q"));
    }
    if commutator(h, y) != y.scale(&int(-2)) {
        return Err(Sl2HodgeError::PreconditionFails("H and Y do not satisfy [H, Y] = -2Y"));
    }
    let triple = sl2_complete(h, &y.scale(&int(-1))).map_err(|_| {
        Sl2HodgeError::PreconditionFails("H and Y do not extend to an sl2 representation")
    })?;

    // A filtration constant across a gap of indices must be preserved by Y
    // there, so the shift condition needs checking one index above each
    // jump as well.
    let mut shift_indices = f.jump_indices();
    shift_indices.extend(f.jump_indices().iter().map(|k| k + 1));
    shift_indices.sort_unstable();
    shift_indices.dedup();
    for p in shift_indices {
        let step = f.step(p);
        if !f.step(p - 1).contains(&step.image_under(y)) {
            return Err(Sl2HodgeError::PreconditionFails(
                "Y does not shift the filtration down by one",
            ));
        }
    }
    for p in f.jump_indices() {
        let step = f.step(p);
        if !step.contains(&step.image_under(h)) {
            return Err(Sl2HodgeError::PreconditionFails("H does not preserve the filtration"));
        }
    }

    let exp_y = nilpotent_exp(triple.y(), &int(1)).expect("Y acts nilpotently");
    let f_sharp = f.apply(&exp_y).expect("exp(Y) is invertible");
    if build_hodge_structure(&f_sharp, &pairing, n).is_err() {
        return Err(Sl2HodgeError::PreconditionFails(
            "exp(Y) F is not the Hodge filtration of a structure polarized by Q",
        ));
    }

    assemble(triple, pairing, f, n)
}

/// Cuts out the bigraded pieces and certifies that they decompose the
/// space and reassemble both total filtrations.
fn assemble(
    triple: Sl2Triple,
    q: Pairing,
    f: &Filtration,
    n: i64,
) -> Result<Sl2HodgeStructure, Sl2HodgeError> {
    let dim = triple.dim();
    let fbar = conjugate_filtration(f, &q, n);
    let spectrum = integer_spectrum(triple.h())
        .expect("the grading operator of a representation is semisimple with integer eigenvalues");

    // A piece with Hodge index i makes F jump at i + 1, so the candidate
    // indices sit one below the jumps.
    let types: Vec<i64> = f.jump_indices().iter().map(|k| k - 1).collect();
    let mut pieces: BTreeMap<(i64, i64, i64), Subspace> = BTreeMap::new();
    for (k, space) in &spectrum {
        for &i in &types {
            let j = n + k - i;
            let piece = space.intersect(f.step(i)).intersect(fbar.step(j));
            if !piece.is_zero() {
                pieces.insert((*k, i, j), piece);
            }
        }
    }

    let parts: Vec<&Subspace> = pieces.values().collect();
    if !is_direct_sum_decomposition(dim, &parts) {
        return Err(Sl2HodgeError::RecognitionFails);
    }
    for p in f.jump_indices() {
        let mut sum = Subspace::zero(dim);
        for (&(_, i, _), piece) in &pieces {
            if i >= p {
                sum = sum.sum(piece);
            }
        }
        if &sum != f.step(p) {
            return Err(Sl2HodgeError::RecognitionFails);
        }
    }
    for p in fbar.jump_indices() {
        let mut sum = Subspace::zero(dim);
        for (&(_, _, j), piece) in &pieces {
            if j >= p {
                sum = sum.sum(piece);
            }
        }
        if &sum != fbar.step(p) {
            return Err(Sl2HodgeError::RecognitionFails);
        }
    }

    let structure =
        Sl2HodgeStructure { weight: n, triple, q, pieces, f_total: f.clone(), fbar_total: fbar };
    structure.assert_axioms();
    Ok(structure)
}

/// The Weil element `w = exp(X) exp(-Y) exp(X)` of the representation. It
/// is self-adjoint for the pairing, squares to `(-1)^k` on `E_k(H)`, and
/// reflects the bigrading by `w(V_k^{i,j}) = V_{-k}^{i-k,j-k}`.
pub fn weil_action(s: &Sl2HodgeStructure) -> Mat {
    let ex = nilpotent_exp(s.triple.x(), &int(1)).expect("X acts nilpotently");
    let ey = nilpotent_exp(s.triple.y(), &int(-1)).expect("Y acts nilpotently");
    let w = &(&ex * &ey) * &ex;
    assert_eq!(s.q.adjoint(&w), w, "the Weil element is self-adjoint for Q");
    let ww = &w * &w;
    for k in s.weights() {
        let basis = s.weight_space(k);
        let sign = int(if k.rem_euclid(2) == 0 { 1 } else { -1 });
        assert_eq!(
            &ww * basis.basis(),
            basis.basis().scale(&sign),
            "the Weil element squares to (-1)^k on E_k"
        );
    }
    for (&(k, i, j), piece) in &s.pieces {
        let image = piece.image_under(&w);
        let target = s.piece(-k, i - k, j - k).expect("the Weil element pairs opposite weights");
        assert_eq!(&image, target, "the Weil element reflects the bigrading");
    }
    w
}

/// The polarized pure structure of the same weight on `exp(Y) F`, returned
/// as its filtration, the structure, and its Weil operator, which factors
/// as the Weil element composed with the involution `(-1)^j` of the
/// bigrading. The Hodge inner product of the pure structure makes `H`
/// self-adjoint and sends `Y` to `X` under the adjoint.
pub fn associated_pure_structure(s: &Sl2HodgeStructure) -> (Filtration, HodgeStructure, Mat) {
    let dim = s.dim();
    let exp_y = nilpotent_exp(s.triple.y(), &int(1)).expect("Y acts nilpotently");
    let f_sharp = s.f_total.apply(&exp_y).expect("exp(Y) is invertible");
    let hs = build_hodge_structure(&f_sharp, &s.q, s.weight)
        .expect("recognition already validated the transported filtration");
    let exp_y_inv = nilpotent_exp(s.triple.y(), &int(-1)).expect("Y acts nilpotently");
    assert_eq!(
        hs.conjugate(),
        &s.fbar_total.apply(&exp_y_inv).expect("exp(-Y) is invertible"),
        "the conjugate filtration transports by exp(-Y)"
    );

    let graded: Vec<(&Subspace, i64)> =
        s.pieces.iter().map(|(&(_, _, j), piece)| (piece, j)).collect();
    let c = sign_involution(dim, &graded);
    let w = weil_action(s);
    let c_sharp = &w * &c;
    let sharp_graded: Vec<(&Subspace, i64)> =
        hs.pieces().iter().map(|(&(_, qq), piece)| (piece, qq)).collect();
    assert_eq!(
        c_sharp,
        sign_involution(dim, &sharp_graded),
        "the Weil element composed with (-1)^j is the Weil operator of the pure structure"
    );

    let gram = hodge_gram(&hs);
    assert_eq!(
        gram.adjoint(s.triple.h()),
        s.triple.h().clone(),
        "H is self-adjoint for the Hodge inner product"
    );
    assert_eq!(gram.adjoint(s.triple.y()), s.triple.x().clone(), "the Hodge adjoint of Y is X");
    (f_sharp, hs, c_sharp)
}

/// Splits `Y` into the Hodge components of the associated pure structure,
/// returned ascending: `Y = Y_{-1} + Y_0 + Y_1` with `Y_e` of endomorphism
/// type `(e, -e)`. The rest of the triple decomposes over the same parts,
/// `X = -Y_{-1} + Y_0 - Y_1` and `H = -2 Y_{-1} + 2 Y_1`, and the Casimir
/// operator factors as `(2 Y_0 + 1)^2 - 16 Y_{-1} Y_1`.
pub fn hxy_hodge_components(s: &Sl2HodgeStructure) -> (Mat, Mat, Mat) {
    let h = s.triple.h();
    let x = s.triple.x();
    let y = s.triple.y();
    let quarter = scalar_from_rat(rat(1, 4));
    let half = scalar_from_rat(rat(1, 2));
    let y_lower = (&(y - h) - x).scale(&quarter);
    let y_level = (y + x).scale(&half);
    let y_raise = (&(y + h) - x).scale(&quarter);
    assert_eq!(&(&y_lower + &y_level) + &y_raise, y.clone(), "the components sum to Y");

    let (_, hs, _) = associated_pure_structure(s);
    let end = induced_end_structure(&hs);
    for (e, part) in [(-1i64, &y_lower), (0, &y_level), (1, &y_raise)] {
        if part.is_zero() {
            continue;
        }
        let piece = end.piece(e, -e).expect("the component type is occupied");
        assert!(
            piece.contains_vector(&part.vec_columns()),
            "each component has pure endomorphism type"
        );
    }

    let shifted = &y_level.scale(&int(2)) + &Mat::identity(s.dim());
    assert_eq!(
        &(&shifted * &shifted) - &(&y_lower * &y_raise).scale(&int(16)),
        s.triple.casimir(),
        "the Casimir operator is (2 Y_0 + 1)^2 - 16 Y_minus Y_plus"
    );
    (y_lower, y_level, y_raise)
}

/// A model degeneration over the punctured disk: the monodromy is
/// `exp(2 pi i S) exp(-2 pi i Y)` for a semisimple twist `S`, so the
/// degeneration datum records `N = -Y`, the twist's eigenvalue classes
/// mod 1 as angles, and the total filtration as the limit.
#[derive(Clone)]
pub struct ModelVariation {
    base: Sl2HodgeStructure,
    twist: Mat,
    datum: DegenerationDatum,
}

impl ModelVariation {
    /// The underlying sl2-Hodge structure.
    pub fn base(&self) -> &Sl2HodgeStructure {
        &self.base
    }

    /// The semisimple twist.
    pub fn twist(&self) -> &Mat {
        &self.twist
    }

    /// The exact degeneration invariants of the model.
    pub fn datum(&self) -> &DegenerationDatum {
        &self.datum
    }
}

impl fmt::Debug for ModelVariation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModelVariation(weight {}, {:?})", self.base.weight, self.datum)
    }
}

/// Assembles the model degeneration twisted by `twist`. The twist must be
/// self-adjoint for the pairing, commute with `H` and `Y`, preserve the
/// total filtration, and act semisimply with rational eigenvalues. Only
/// the eigenvalue classes mod 1 enter the monodromy, so eigenspaces whose
/// eigenvalues differ by integers merge into one angle space.
pub fn build_model_variation(
    s: &Sl2HodgeStructure,
    twist: &Mat,
) -> Result<ModelVariation, Sl2HodgeError> {
    assert!(twist.is_square() && twist.rows() == s.dim(), "twist shape differs");
    if s.q.adjoint(twist) != *twist {
        return Err(Sl2HodgeError::PreconditionFails("the twist is not self-adjoint for Q"));
    }
    if !commutator(s.triple.h(), twist).is_zero() {
        return Err(Sl2HodgeError::PreconditionFails("the twist does not commute with H"));
    }
    if !commutator(s.triple.y(), twist).is_zero() {
        return Err(Sl2HodgeError::PreconditionFails("the twist does not commute with Y"));
    }
    for p in s.f_total.jump_indices() {
        let step = s.f_total.step(p);
        if !step.contains(&step.image_under(twist)) {
            return Err(Sl2HodgeError::PreconditionFails(
                "the twist does not preserve the total filtration",
            ));
        }
    }
    let Some(spectrum) = rational_spectrum(twist) else {
        return Err(Sl2HodgeError::PreconditionFails(
            "the twist does not act semisimply with certified rational eigenvalues",
        ));
    };

    let mut angles: BTreeMap<Rat, Subspace> = BTreeMap::new();
    for (value, space) in spectrum {
        let angle = &value - &value.floor();
        if let Some(existing) = angles.get_mut(&angle) {
            *existing = existing.sum(&space);
        } else {
            angles.insert(angle, space);
        }
    }
    let datum = DegenerationDatum::new(
        s.q.matrix().clone(),
        angles.into_iter().collect(),
        s.triple.y().scale(&int(-1)),
        Some(s.f_total.clone()),
        s.weight,
    )
    .expect("model data satisfies every degeneration axiom");
    assert!(
        datum.ts_stable_filtration(&s.f_total),
        "the semisimple monodromy preserves the limit filtration"
    );
    Ok(ModelVariation { base: s.clone(), twist: twist.clone(), datum })
}

/// The irreducible model of dimension `m + 1`: the degree-`m` symmetric
/// power of the standard representation in the basis `v_0, ..., v_m`, with
/// `H v_k = (m - 2k) v_k`, `X v_k = k v_{k-1}`, `Y v_k = (m - k) v_{k+1}`,
/// pairing `Q(v_k, v_{m-k}) = 1 / binom(m, k)`, weight `m`, and `v_k` of
/// bigraded type `(m - k, m - k)`, so `F^p` is spanned by `v_0` through
/// `v_{m-p}`.
pub fn irreducible_model(m: usize) -> Sl2HodgeStructure {
    let dim = m + 1;
    let mut h = Mat::zeros(dim, dim);
    let mut y = Mat::zeros(dim, dim);
    let mut q = Mat::zeros(dim, dim);
    for k in 0..=m {
        h.set(k, k, int(m as i64 - 2 * k as i64));
        if k < m {
            y.set(k + 1, k, int((m - k) as i64));
        }
        q.set(m - k, k, scalar_from_rat(inverse_binomial(m, k)));
    }
    let mut steps = Vec::with_capacity(dim + 1);
    steps.push((m as i64 + 1, Subspace::zero(dim)));
    for p in 0..=m as i64 {
        let count = dim - p as usize;
        steps.push((p, Subspace::from_mat(dim, &Mat::identity(dim).column_range(0, count))));
    }
    let f = Filtration::from_steps(Direction::Decreasing, dim, steps)
        .expect("the coordinate flag is nested");
    recognize_sl2_filtration(&q, &h, &y, &f, m as i64)
        .expect("the irreducible model satisfies every precondition")
}

/// Twists by the one-dimensional structure of type `(a, b)`: every piece
/// moves from `(k, i, j)` to `(k, i + a, j + b)`, the weight grows by
/// `a + b`, the filtration shifts by `a`, and the pairing changes sign
/// when `b` is odd, which keeps the polarization signs intact.
pub fn type_twist(s: &Sl2HodgeStructure, a: i64, b: i64) -> Sl2HodgeStructure {
    let q = if b.rem_euclid(2) == 1 { s.q.matrix().scale(&int(-1)) } else { s.q.matrix().clone() };
    recognize_sl2_filtration(&q, s.triple.h(), s.triple.y(), &s.f_total.shift(a), s.weight + a + b)
        .expect("type twists preserve every precondition")
}

/// The orthogonal direct sum of two structures of equal weight, with the
/// summands embedded as the leading and trailing blocks of coordinates.
pub fn direct_sum(left: &Sl2HodgeStructure, right: &Sl2HodgeStructure) -> Sl2HodgeStructure {
    assert_eq!(left.weight, right.weight, "summands must share a weight");
    let dim = left.dim() + right.dim();
    let h = block_diag(left.triple.h(), right.triple.h());
    let y = block_diag(left.triple.y(), right.triple.y());
    let q = block_diag(left.q.matrix(), right.q.matrix());
    let mut indices = left.f_total.jump_indices();
    indices.extend(right.f_total.jump_indices());
    indices.sort_unstable();
    indices.dedup();
    let steps: Vec<(i64, Subspace)> = indices
        .into_iter()
        .map(|p| {
            let l = embedded(left.f_total.step(p), dim, 0);
            let r = embedded(right.f_total.step(p), dim, left.dim());
            (p, l.sum(&r))
        })
        .collect();
    let f = Filtration::from_steps(Direction::Decreasing, dim, steps)
        .expect("blockwise sums of nested flags stay nested");
    recognize_sl2_filtration(&q, &h, &y, &f, left.weight)
        .expect("direct sums preserve every precondition")
}

/// Transports the structure through the coordinate change `v -> p^{-1} v`:
/// the operators conjugate, the pairing pulls back to `p^H Q p`, and every
/// piece moves to its preimage.
pub fn change_basis(s: &Sl2HodgeStructure, p: &Mat) -> Sl2HodgeStructure {
    let p_inv = inverse(p).expect("a change of basis is invertible");
    let h = &(&p_inv * s.triple.h()) * p;
    let y = &(&p_inv * s.triple.y()) * p;
    let q = &(&p.dagger() * s.q.matrix()) * p;
    let f = s.f_total.apply(&p_inv).expect("the inverse change of basis is invertible");
    recognize_sl2_filtration(&q, &h, &y, &f, s.weight)
        .expect("conjugated data preserves every precondition")
}

/// `1 / binom(m, k)` as an exact rational, built as a telescoping product
/// so no factorial is ever materialized.
fn inverse_binomial(m: usize, k: usize) -> Rat {
    let mut c = Rat::one();
    for i in 1..=k {
        c *= rat(i as i64, (m - k + i) as i64);
    }
    c
}

/// The involution acting by `(-1)^e` on each part of a decomposition of
/// coordinate space into the listed `(part, e)` pairs.
fn sign_involution(dim: usize, parts: &[(&Subspace, i64)]) -> Mat {
    if parts.is_empty() {
        return Mat::identity(dim);
    }
    let bases: Vec<&Mat> = parts.iter().map(|(space, _)| space.basis()).collect();
    let basis = Mat::hstack(&bases);
    let basis_inv = inverse(&basis).expect("the parts decompose the space");
    let mut result = Mat::zeros(dim, dim);
    let mut offset = 0;
    for (space, e) in parts {
        let cols = basis.column_range(offset, offset + space.dim());
        let rows = basis_inv.row_range(offset, offset + space.dim());
        let projector = &cols * &rows;
        result = if e.rem_euclid(2) == 1 { &result - &projector } else { &result + &projector };
        offset += space.dim();
    }
    result
}

/// Block-diagonal assembly of two square matrices.
fn block_diag(a: &Mat, b: &Mat) -> Mat {
    let first = a.rows();
    Mat::from_fn(first + b.rows(), first + b.cols(), |i, j| {
        if i < first && j < first {
            a.at(i, j).clone()
        } else if i >= first && j >= first {
            b.at(i - first, j - first).clone()
        } else {
            Scalar::zero()
        }
    })
}

/// A subspace re-embedded in a larger space at a coordinate offset.
fn embedded(sub: &Subspace, dim: usize, offset: usize) -> Subspace {
    let vectors: Vec<Vec<Scalar>> = sub
        .basis_vectors()
        .iter()
        .map(|v| {
            let mut w: Vec<Scalar> = (0..dim).map(|_| Scalar::zero()).collect();
            w[offset..offset + v.len()].clone_from_slice(v);
            w
        })
        .collect();
    Subspace::from_vectors(dim, &vectors)
}
