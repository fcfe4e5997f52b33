//! Complex mixed Hodge structures: validation of the graded pieces, the
//! Deligne splitting with its semisimple grading operator, the functorial
//! constructions (dual, tensor product, endomorphisms, Tate twist), real
//! splittings for structures paired against their own conjugate dual, and
//! the canonical complements `R(W_{-2})` and `Σ F̄^{n+1} W_n`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::exact::{
    int, inverse, is_direct_sum_decomposition, kernel_basis, rat, scalar_from_rat, solve,
    Direction, Filtration, Mat, Pairing, Scalar, Subquotient, Subspace,
};
use crate::hodge::{build_unpolarized_structure, conjugate_filtration, HodgeError, HodgeStructure};
use crate::monodromy::integer_spectrum;

/// How a candidate mixed structure gets rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MhsError {
    /// The filtrations induced on the weight-`weight` graded quotient do
    /// not form a Hodge structure of that weight.
    NotMixed { weight: i64, reason: HodgeError },
    /// The pairing fails one of the two duality conditions that a real
    /// splitting requires; the message names the failing one.
    IncompatiblePairing(&'static str),
}

impl fmt::Display for MhsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MhsError::NotMixed { weight, reason } => {
                write!(f, "graded quotient at weight {weight} is not a Hodge structure: {reason}")
            }
            MhsError::IncompatiblePairing(what) => write!(f, "incompatible pairing: {what}"),
        }
    }
}

/// A mixed Hodge structure: an increasing weight filtration W and two
/// decreasing filtrations F, F̄ that induce a weight-n Hodge structure on
/// every graded quotient `gr_n^W`. Each graded structure is stored in the
/// coordinates of `Subquotient::new(W_n, W_{n-1})`.
#[derive(Clone)]
pub struct MixedHodgeStructure {
    w: Filtration,
    f: Filtration,
    fbar: Filtration,
    graded: BTreeMap<i64, HodgeStructure>,
}

impl MixedHodgeStructure {
    pub fn dim(&self) -> usize {
        self.w.ambient_dim()
    }

    pub fn weight_filtration(&self) -> &Filtration {
        &self.w
    }

    pub fn hodge_filtration(&self) -> &Filtration {
        &self.f
    }

    pub fn conjugate_filtration(&self) -> &Filtration {
        &self.fbar
    }

    /// The Hodge structure on `gr_n^W`, present exactly when the quotient
    /// is nonzero.
    pub fn graded(&self, n: i64) -> Option<&HodgeStructure> {
        self.graded.get(&n)
    }

    /// The weights with nonzero graded quotient, in increasing order.
    pub fn graded_weights(&self) -> Vec<i64> {
        self.graded.keys().copied().collect()
    }
}

impl PartialEq for MixedHodgeStructure {
    fn eq(&self, other: &Self) -> bool {
        self.w == other.w && self.f == other.f && self.fbar == other.fbar
    }
}

impl fmt::Debug for MixedHodgeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MixedHodgeStructure[dim {}; ", self.dim())?;
        for (n, hs) in &self.graded {
            write!(f, "gr_{n}: {:?}, ", hs.hodge_numbers())?;
        }
        write!(f, "]")
    }
}

/// Checks that the filtrations form a mixed Hodge structure by building
/// the Hodge structure on every nonzero weight-graded quotient.
pub fn validate_mhs(
    w: &Filtration,
    f: &Filtration,
    fbar: &Filtration,
) -> Result<MixedHodgeStructure, MhsError> {
    assert_eq!(w.direction(), Direction::Increasing, "weight filtration must increase");
    assert_eq!(f.direction(), Direction::Decreasing, "Hodge filtration must decrease");
    assert_eq!(fbar.direction(), Direction::Decreasing, "conjugate filtration must decrease");
    assert_eq!(w.ambient_dim(), f.ambient_dim(), "ambient dimension mismatch");
    assert_eq!(w.ambient_dim(), fbar.ambient_dim(), "ambient dimension mismatch");
    let mut graded = BTreeMap::new();
    for &n in &w.jump_indices() {
        let sq = Subquotient::new(w.step(n), w.step(n - 1));
        let hs = build_unpolarized_structure(&f.induce_on(&sq), &fbar.induce_on(&sq), n)
            .map_err(|reason| MhsError::NotMixed { weight: n, reason })?;
        graded.insert(n, hs);
    }
    Ok(MixedHodgeStructure { w: w.clone(), f: f.clone(), fbar: fbar.clone(), graded })
}

/// The bigraded splitting of a mixed Hodge structure: pieces `I^{i,j}`
/// with `W_n = ⊕_{i+j≤n} I^{i,j}` and `F^p = ⊕_{i≥p} I^{i,j}`, and the
/// grading operator acting as `i+j` on the `(i,j)` piece.
#[derive(Clone)]
pub struct DeligneSplitting {
    pieces: BTreeMap<(i64, i64), Subspace>,
    h: Mat,
}

impl DeligneSplitting {
    pub fn pieces(&self) -> &BTreeMap<(i64, i64), Subspace> {
        &self.pieces
    }

    pub fn piece(&self, i: i64, j: i64) -> Option<&Subspace> {
        self.pieces.get(&(i, j))
    }

    /// The semisimple operator with `I^{i,j}` in its `(i+j)`-eigenspace.
    pub fn h(&self) -> &Mat {
        &self.h
    }

    /// The weights `i+j` of the nonzero pieces, in increasing order.
    pub fn weights(&self) -> Vec<i64> {
        let mut out: Vec<i64> = self.pieces.keys().map(|&(i, j)| i + j).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The sum of the pieces of total weight n, an eigenspace of `h`.
    pub fn weight_space(&self, n: i64) -> Subspace {
        let mut acc = Subspace::zero(self.h.rows());
        for (&(i, j), s) in &self.pieces {
            if i + j == n {
                acc = acc.sum(s);
            }
        }
        acc
    }
}

impl fmt::Debug for DeligneSplitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DeligneSplitting[")?;
        for (&(i, j), s) in &self.pieces {
            write!(f, "({i},{j}): dim {}, ", s.dim())?;
        }
        write!(f, "]")
    }
}

/// The series `G^j ∩ W_n + G^{j-1} ∩ W_{n-2} + G^{j-2} ∩ W_{n-3} + …`
/// shared by the splitting formula and the membership tests; terms vanish
/// once the weight index drops below the bottom of W.
fn filtered_series(g: &Filtration, w: &Filtration, j: i64, n: i64) -> Subspace {
    let mut acc = g.step(j).intersect(w.step(n));
    if let Some(&lowest) = w.jump_indices().first() {
        let mut k = 1;
        while n - 1 - k >= lowest {
            acc = acc.sum(&g.step(j - k).intersect(w.step(n - 1 - k)));
            k += 1;
        }
    }
    acc
}

/// Computes the splitting `I^{i,j} = F^i ∩ W_{i+j} ∩ (F̄^j ∩ W_{i+j} +
/// F̄^{j-1} ∩ W_{i+j-2} + …)`, checks that the pieces recover both
/// filtrations, and assembles the grading operator from the projections
/// onto the pieces. Every check is an internal consistency assertion:
/// failures signal a bug, not bad input.
pub fn deligne_splitting(m: &MixedHodgeStructure) -> DeligneSplitting {
    let r = m.dim();
    let (w, f, fbar) = (&m.w, &m.f, &m.fbar);
    let f_top = f.jump_indices().last().copied().unwrap_or(0);
    let fbar_top = fbar.jump_indices().last().copied().unwrap_or(0);
    let mut pieces: BTreeMap<(i64, i64), Subspace> = BTreeMap::new();
    for &n in &w.jump_indices() {
        // Pieces with F^i = 0 or F̄^j = 0 vanish, which bounds the range.
        for i in (n - fbar_top + 1)..=(f_top - 1) {
            let j = n - i;
            let space = f.step(i).intersect(w.step(n)).intersect(&filtered_series(fbar, w, j, n));
            if !space.is_zero() {
                pieces.insert((i, j), space);
            }
        }
    }

    let refs: Vec<&Subspace> = pieces.values().collect();
    assert!(is_direct_sum_decomposition(r, &refs), "splitting pieces fail to decompose the space");
    let mut w_checks: Vec<i64> = w.jump_indices();
    w_checks.extend(pieces.keys().map(|&(i, j)| i + j));
    for &n in &w_checks {
        let mut sum = Subspace::zero(r);
        for (&(i, j), s) in &pieces {
            if i + j <= n {
                sum = sum.sum(s);
            }
        }
        assert!(sum == *w.step(n), "splitting fails to recover the weight filtration at {n}");
    }
    let mut f_checks: Vec<i64> = f.jump_indices();
    f_checks.extend(pieces.keys().map(|&(i, _)| i));
    for &p in &f_checks {
        let mut sum = Subspace::zero(r);
        for (&(i, _), s) in &pieces {
            if i >= p {
                sum = sum.sum(s);
            }
        }
        assert!(sum == *f.step(p), "splitting fails to recover the Hodge filtration at {p}");
    }

    let h = if r == 0 {
        Mat::zeros(0, 0)
    } else {
        let blocks: Vec<&Mat> = pieces.values().map(|s| s.basis()).collect();
        let basis = Mat::hstack(&blocks);
        let basis_inv = inverse(&basis).expect("splitting pieces assemble to a basis");
        let mut h = Mat::zeros(r, r);
        let mut offset = 0;
        for (&(i, j), s) in &pieces {
            let projection = &basis.column_range(offset, offset + s.dim())
                * &basis_inv.row_range(offset, offset + s.dim());
            h = &h + &projection.scale(&int(i + j));
            offset += s.dim();
        }
        h
    };

    if r > 0 {
        // The grading operator preserves F and W, and lies in the
        // conjugate-side series of degree (0, 0).
        let (we, fe, fbare) = end_filtrations(m);
        let hvec = h.vec_columns();
        assert!(
            fe.step(0).intersect(we.step(0)).contains_vector(&hvec),
            "grading operator leaves F^0 W_0 of the endomorphisms"
        );
        assert!(
            filtered_series(&fbare, &we, 0, 0).contains_vector(&hvec),
            "grading operator leaves the conjugate series of the endomorphisms"
        );
    }
    DeligneSplitting { pieces, h }
}

/// Functionals vanishing on the subspace, in dual-basis coordinates.
fn annihilator(sub: &Subspace) -> Subspace {
    Subspace::from_mat(sub.ambient_dim(), &kernel_basis(&sub.basis().transpose()))
}

/// Endomorphisms carrying `source` into `target`, as a subspace of the
/// column-major vec coordinates.
fn transporter(source: &Subspace, target: &Subspace) -> Subspace {
    let r = source.ambient_dim();
    let sources = source.basis_vectors();
    let functionals = annihilator(target).basis_vectors();
    let rows = sources.len() * functionals.len();
    let constraints = Mat::from_fn(rows, r * r, |row, col| {
        let f = &functionals[row % functionals.len()];
        let s = &sources[row / functionals.len()];
        let (v, u) = (col / r, col % r);
        &f[u] * &s[v]
    });
    Subspace::from_mat(r * r, &kernel_basis(&constraints))
}

/// The filtration `{A : A step(j) ⊆ step(j+k) for all j}` on operators.
fn operator_filtration(filt: &Filtration) -> Filtration {
    let cells = filt.ambient_dim() * filt.ambient_dim();
    let jumps = filt.jump_indices();
    if jumps.is_empty() {
        return Filtration::from_steps(filt.direction(), cells, [])
            .expect("zero-dimensional filtrations are stable");
    }
    let (lo, hi) = (jumps[0], *jumps.last().unwrap());
    // For a decreasing filtration the condition one index below the
    // lowest jump, where the step is the full space, is not implied by
    // the jump conditions; it also pushes the zero step into the range.
    let mut sources = jumps.clone();
    let extra = match filt.direction() {
        Direction::Increasing => 0,
        Direction::Decreasing => {
            sources.push(lo - 1);
            1
        }
    };
    let mut steps = Vec::new();
    for k in (lo - hi)..=(hi - lo + extra) {
        let mut space = Subspace::full(cells);
        for &j in &sources {
            space = space.intersect(&transporter(filt.step(j), filt.step(j + k)));
        }
        steps.push((k, space));
    }
    Filtration::from_steps(filt.direction(), cells, steps)
        .expect("operator filtration inherits nesting")
}

/// The weight, Hodge, and conjugate filtrations induced on `End(V)` in
/// column-major vec coordinates.
pub fn end_filtrations(m: &MixedHodgeStructure) -> (Filtration, Filtration, Filtration) {
    (operator_filtration(&m.w), operator_filtration(&m.f), operator_filtration(&m.fbar))
}

/// The dual structure on functionals in dual-basis coordinates:
/// `W_n = {f : f(W_{-n-1}) = 0}` and `F^p = {f : f(F^{-p+1}) = 0}`.
pub fn dual_mhs(m: &MixedHodgeStructure) -> Result<MixedHodgeStructure, MhsError> {
    validate_mhs(&dual_filtration(&m.w), &dual_filtration(&m.f), &dual_filtration(&m.fbar))
}

fn dual_filtration(filt: &Filtration) -> Filtration {
    // Annihilating step(j-1) jumps the dual exactly at the reflected index.
    let steps: Vec<(i64, Subspace)> = filt
        .jump_indices()
        .iter()
        .map(|&j| {
            let reflected = match filt.direction() {
                Direction::Increasing => -j,
                Direction::Decreasing => 2 - j,
            };
            (reflected, annihilator(filt.step(j - 1)))
        })
        .collect();
    Filtration::from_steps(filt.direction(), filt.ambient_dim(), steps)
        .expect("duality reverses nesting")
}

/// Span of the pairwise tensors of two subspaces, with `e_a ⊗ e_b` at
/// index `a·r₂ + b`.
fn product_space(a: &Subspace, b: &Subspace) -> Subspace {
    let ambient = a.ambient_dim() * b.ambient_dim();
    let mut vectors = Vec::new();
    for u in a.basis_vectors() {
        for v in b.basis_vectors() {
            let mut t = Vec::with_capacity(ambient);
            for ua in &u {
                for vb in &v {
                    t.push(ua * vb);
                }
            }
            vectors.push(t);
        }
    }
    Subspace::from_vectors(ambient, &vectors)
}

fn tensor_filtration(a: &Filtration, b: &Filtration) -> Filtration {
    let ambient = a.ambient_dim() * b.ambient_dim();
    let direction = a.direction();
    assert_eq!(direction, b.direction(), "tensor factors must share direction");
    let extend = |filt: &Filtration| -> Vec<i64> {
        let mut out = filt.jump_indices();
        if direction == Direction::Decreasing {
            // One index below the lowest jump the step is full, and that
            // term is not dominated by any jump term.
            if let Some(&lowest) = out.first() {
                out.insert(0, lowest - 1);
            }
        }
        out
    };
    let a_sources = extend(a);
    let b_sources = extend(b);
    if a_sources.is_empty() || b_sources.is_empty() {
        return Filtration::from_steps(direction, ambient, [])
            .expect("zero-dimensional filtrations are stable");
    }
    let mut steps = Vec::new();
    for &x in &a_sources {
        for &y in &b_sources {
            let n = x + y;
            let mut space = Subspace::zero(ambient);
            for &xa in &a_sources {
                space = space.sum(&product_space(a.step(xa), b.step(n - xa)));
            }
            steps.push((n, space));
        }
    }
    Filtration::from_steps(direction, ambient, steps).expect("tensor filtration inherits nesting")
}

/// The tensor product structure on `ℂ^{r₁ r₂}` with `e_a ⊗ e_b` at index
/// `a·r₂ + b`: every filtration step is the sum of products of steps
/// whose indices add up.
pub fn tensor_mhs(
    a: &MixedHodgeStructure,
    b: &MixedHodgeStructure,
) -> Result<MixedHodgeStructure, MhsError> {
    validate_mhs(
        &tensor_filtration(&a.w, &b.w),
        &tensor_filtration(&a.f, &b.f),
        &tensor_filtration(&a.fbar, &b.fbar),
    )
}

/// The endomorphism structure on column-major vec coordinates, with
/// `W_k End = {A : A W_j ⊆ W_{j+k}}` and likewise for F and F̄.
pub fn end_mhs(m: &MixedHodgeStructure) -> Result<MixedHodgeStructure, MhsError> {
    let (w, f, fbar) = end_filtrations(m);
    validate_mhs(&w, &f, &fbar)
}

/// The Tate twist: weights drop by 2k and both Hodge indices by k, so
/// twisting by one tensors with a line of weight -2 and type (-1,-1).
/// Twisting relabels without moving subspaces, hence cannot fail.
pub fn tate_twist(m: &MixedHodgeStructure, k: i64) -> MixedHodgeStructure {
    validate_mhs(&m.w.shift(-2 * k), &m.f.shift(-k), &m.fbar.shift(-k))
        .expect("twisting preserves the graded structures")
}

/// The canonical subspace `R(W_{-2})`: the intersection of the series
/// `F^{-1}W_{-2} + F^{-2}W_{-3} + …` with its conjugate counterpart.
fn lower_corner(w: &Filtration, f: &Filtration, fbar: &Filtration) -> Subspace {
    let side = |g: &Filtration| {
        let mut acc = Subspace::zero(w.ambient_dim());
        if let Some(&lowest) = w.jump_indices().first() {
            let mut k = 1;
            while -1 - k >= lowest {
                acc = acc.sum(&g.step(-k).intersect(w.step(-1 - k)));
                k += 1;
            }
        }
        acc
    };
    side(f).intersect(&side(fbar))
}

/// The two canonical complements of a mixed Hodge structure: `R(W_{-2})`,
/// which collects the splitting pieces with both indices negative and
/// completes `F^0 W_{-1} ⊕ F̄^0 W_{-1}` to `W_{-1}`, and the complement
/// `Σ_n F̄^{n+1} W_n` of `F^0`. Both are cross-checked against their
/// descriptions in terms of the splitting.
pub fn canonical_complements(m: &MixedHodgeStructure) -> (Subspace, Subspace) {
    let r = m.dim();
    let corner = lower_corner(&m.w, &m.f, &m.fbar);
    let splitting = deligne_splitting(m);
    let mut both_negative = Subspace::zero(r);
    let mut negative_row = Subspace::zero(r);
    for (&(i, j), s) in splitting.pieces() {
        if i <= -1 && j <= -1 {
            both_negative = both_negative.sum(s);
        }
        if i <= -1 {
            negative_row = negative_row.sum(s);
        }
    }
    assert!(corner == both_negative, "series and splitting forms of R(W_{{-2}}) disagree");

    let w_minus_one = m.w.step(-1);
    let f_part = m.f.step(0).intersect(w_minus_one);
    let fbar_part = m.fbar.step(0).intersect(w_minus_one);
    assert!(
        f_part.dim() + fbar_part.dim() + corner.dim() == w_minus_one.dim()
            && f_part.sum(&fbar_part).sum(&corner) == *w_minus_one,
        "R(W_{{-2}}) fails to complete the filtration parts of W_{{-1}}"
    );

    let mut complement = Subspace::zero(r);
    for &n in &m.w.jump_indices() {
        complement = complement.sum(&m.fbar.step(n + 1).intersect(m.w.step(n)));
    }
    assert!(
        complement == negative_row,
        "filtration and splitting forms of the F^0 complement disagree"
    );
    assert!(
        is_direct_sum_decomposition(r, &[m.f.step(0), &complement]),
        "F^0 and its canonical complement fail to decompose the space"
    );
    (corner, complement)
}

/// The real splitting `H_ℝ = (H - H†)/2` of a structure that the pairing
/// identifies with its conjugate dual in weight n. Both compatibility
/// conditions are checked up front; the postconditions (anti-self-adjoint,
/// splits the shifted weight filtration, differs from the centered
/// grading inside `R(W_{-2}End)`) are asserted.
pub fn real_splitting(m: &MixedHodgeStructure, q: &Pairing, n: i64) -> Result<Mat, MhsError> {
    let r = m.dim();
    assert_eq!(q.dim(), r, "pairing dimension mismatch");
    let mut checks: Vec<i64> = m.w.jump_indices();
    checks.extend(m.w.jump_indices().iter().map(|&j| 2 * n - 1 - j));
    for &k in &checks {
        if *m.w.step(k) != q.orthogonal_complement(m.w.step(2 * n - k - 1)) {
            return Err(MhsError::IncompatiblePairing(
                "weight filtration is not its own pairing dual around the given weight",
            ));
        }
    }
    if m.fbar != conjugate_filtration(&m.f, q, n) {
        return Err(MhsError::IncompatiblePairing(
            "conjugate filtration is not cut out by the pairing",
        ));
    }

    let h = deligne_splitting(m).h;
    let hr = (&h - &q.adjoint(&h)).scale(&scalar_from_rat(rat(1, 2)));
    assert!(q.adjoint(&hr) == -&hr, "real splitting is not anti-self-adjoint");
    if r > 0 {
        let spectrum =
            integer_spectrum(&hr).expect("real splitting is semisimple with integer spectrum");
        for (k, eigenspace) in spectrum {
            assert!(
                eigenspace.intersect(m.w.step(n + k - 1)).is_zero()
                    && eigenspace.sum(m.w.step(n + k - 1)) == *m.w.step(n + k),
                "real splitting fails to split the shifted weight filtration at {k}"
            );
        }
        let (we, fe, fbare) = end_filtrations(m);
        let delta = &hr - &(&h - &Mat::identity(r).scale(&int(n)));
        assert!(
            lower_corner(&we, &fe, &fbare).contains_vector(&delta.vec_columns()),
            "real splitting differs from the centered grading outside R(W_{{-2}}End)"
        );
    }
    Ok(hr)
}

/// The same structure with the roles of F and F̄ exchanged.
pub fn conjugate_mhs(m: &MixedHodgeStructure) -> MixedHodgeStructure {
    validate_mhs(&m.w, &m.fbar, &m.f).expect("exchanging the filtrations preserves the structure")
}

/// The unique change of basis `g` carrying the splitting to the conjugate
/// splitting: it maps every eigenspace of the grading operator H onto the
/// same-weight eigenspace of the conjugate operator H̄ without moving
/// weight-graded images, so that `H̄ = g H g⁻¹` and `g - id` lies in
/// `R(W_{-2}End)`. Both identities are asserted.
pub fn conjugation_transfer(m: &MixedHodgeStructure) -> Mat {
    let r = m.dim();
    if r == 0 {
        return Mat::identity(0);
    }
    let splitting = deligne_splitting(m);
    let conjugate = deligne_splitting(&conjugate_mhs(m));
    let mut sources: Vec<Vec<Scalar>> = Vec::new();
    let mut targets: Vec<Vec<Scalar>> = Vec::new();
    for n in splitting.weights() {
        let e = splitting.weight_space(n);
        let ebar = conjugate.weight_space(n);
        assert_eq!(e.dim(), ebar.dim(), "conjugate eigenspace dimensions disagree at {n}");
        let mix = Mat::hstack(&[ebar.basis(), m.w.step(n - 1).basis()]);
        for v in e.basis_vectors() {
            let coords = solve(&mix, &v)
                .expect("conjugate eigenspace matches the eigenspace through the graded quotient");
            targets.push(ebar.basis().mul_vec(&coords[..ebar.dim()]));
            sources.push(v);
        }
    }
    let source = Mat::from_columns(r, &sources);
    let target = Mat::from_columns(r, &targets);
    let g = &target * &inverse(&source).expect("eigenspaces assemble to a basis");

    let hbar = conjugate.h();
    assert!((hbar * &g) == (&g * splitting.h()), "transfer fails to conjugate the gradings");
    let (we, fe, fbare) = end_filtrations(m);
    let delta = &g - &Mat::identity(r);
    assert!(
        lower_corner(&we, &fe, &fbare).contains_vector(&delta.vec_columns()),
        "transfer differs from the identity outside R(W_{{-2}}End)"
    );
    g
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use num_traits::{One, Zero};

    use super::*;
    use crate::exact::{imag_unit, scalar_from_rat, Rat};
    use crate::hodge::{build_hodge_structure, induced_end_structure};

    fn e(n: usize, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); n];
        v[i] = Scalar::one();
        v
    }

    fn vector(entries: &[Scalar]) -> Vec<Scalar> {
        entries.to_vec()
    }

    fn span(ambient: usize, vectors: &[Vec<Scalar>]) -> Subspace {
        Subspace::from_vectors(ambient, vectors)
    }

    fn incr(ambient: usize, steps: &[(i64, Subspace)]) -> Filtration {
        Filtration::from_steps(Direction::Increasing, ambient, steps.iter().cloned()).unwrap()
    }

    fn decr(ambient: usize, steps: &[(i64, Subspace)]) -> Filtration {
        Filtration::from_steps(Direction::Decreasing, ambient, steps.iter().cloned()).unwrap()
    }

    /// A weight-0 line spanned by e1 next to a weight-1 line spanned by
    /// e2, of types (0,0) and (1,0).
    fn split_pair() -> MixedHodgeStructure {
        let w = incr(2, &[(0, span(2, &[e(2, 0)])), (1, Subspace::full(2))]);
        let f = decr(2, &[(1, span(2, &[e(2, 1)])), (2, Subspace::zero(2))]);
        let fbar = decr(2, &[(1, Subspace::zero(2))]);
        validate_mhs(&w, &f, &fbar).unwrap()
    }

    /// The non-split extension of a type (0,0) line by a type (-1,-1)
    /// line: the conjugate filtration is tilted into the lower weight.
    fn tilted_extension() -> MixedHodgeStructure {
        let w = incr(2, &[(-2, span(2, &[e(2, 1)])), (0, Subspace::full(2))]);
        let f = decr(2, &[(0, span(2, &[e(2, 0)])), (1, Subspace::zero(2))]);
        let mixed = vector(&[int(1), int(1)]);
        let fbar = decr(2, &[(0, span(2, &[mixed])), (1, Subspace::zero(2))]);
        validate_mhs(&w, &f, &fbar).unwrap()
    }

    /// A pure unpolarized structure of weight 1 with lines of type (1,0)
    /// and (0,1).
    fn pure_weight_one() -> MixedHodgeStructure {
        let w = incr(2, &[(0, Subspace::zero(2)), (1, Subspace::full(2))]);
        let f = decr(2, &[(1, span(2, &[e(2, 0)])), (2, Subspace::zero(2))]);
        let fbar = decr(2, &[(1, span(2, &[e(2, 1)])), (2, Subspace::zero(2))]);
        validate_mhs(&w, &f, &fbar).unwrap()
    }

    #[test]
    fn split_sum_of_pure_lines_validates() {
        let m = split_pair();
        assert_eq!(m.graded_weights(), vec![0, 1]);
        assert_eq!(m.graded(0).unwrap().hodge_numbers(), vec![((0, 0), 1)]);
        assert_eq!(m.graded(1).unwrap().hodge_numbers(), vec![((1, 0), 1)]);
    }

    #[test]
    fn pure_structure_is_mixed() {
        let m = pure_weight_one();
        assert_eq!(m.graded_weights(), vec![1]);
        assert_eq!(m.graded(1).unwrap().hodge_numbers(), vec![((0, 1), 1), ((1, 0), 1)]);
    }

    #[test]
    fn coinciding_flags_fail_at_the_named_weight() {
        let w = incr(2, &[(0, Subspace::full(2))]);
        let flag = decr(2, &[(1, span(2, &[e(2, 0)])), (2, Subspace::zero(2))]);
        let result = validate_mhs(&w, &flag, &flag);
        assert_eq!(
            result.unwrap_err(),
            MhsError::NotMixed { weight: 0, reason: HodgeError::DecompositionFails }
        );
    }

    #[test]
    fn tilted_extension_splitting() {
        let m = tilted_extension();
        let d = deligne_splitting(&m);
        assert_eq!(d.pieces().len(), 2);
        assert_eq!(*d.piece(0, 0).unwrap(), span(2, &[e(2, 0)]));
        assert_eq!(*d.piece(-1, -1).unwrap(), span(2, &[e(2, 1)]));
        assert_eq!(*d.h(), Mat::from_int_rows(&[&[0, 0], &[0, -2]]));
        // The naive intersection misses the (0,0) piece, so the
        // extension is genuinely non-split.
        let naive = m.hodge_filtration().step(0).intersect(m.conjugate_filtration().step(0));
        assert!(naive.is_zero());
    }

    #[test]
    fn split_structure_uses_plain_intersections() {
        let m = split_pair();
        let d = deligne_splitting(&m);
        for (&(i, j), s) in d.pieces() {
            let plain = m
                .hodge_filtration()
                .step(i)
                .intersect(m.weight_filtration().step(i + j))
                .intersect(m.conjugate_filtration().step(j));
            assert_eq!(*s, plain);
        }
        assert_eq!(*d.h(), Mat::from_int_rows(&[&[0, 0], &[0, 1]]));
    }

    #[test]
    fn pure_splitting_is_the_hodge_decomposition() {
        let m = pure_weight_one();
        let d = deligne_splitting(&m);
        assert_eq!(*d.piece(1, 0).unwrap(), span(2, &[e(2, 0)]));
        assert_eq!(*d.piece(0, 1).unwrap(), span(2, &[e(2, 1)]));
        assert_eq!(*d.h(), Mat::identity(2));
        for ((i, j), s) in m.graded(1).unwrap().pieces() {
            assert_eq!(d.piece(*i, *j).unwrap(), s);
        }
    }

    #[test]
    fn membership_spaces_obey_the_grading() {
        for m in [split_pair(), tilted_extension(), pure_weight_one()] {
            let h = deligne_splitting(&m).h().clone();
            for p in -3..=3 {
                for q in -3..=3 {
                    let space = m
                        .hodge_filtration()
                        .step(p)
                        .intersect(m.weight_filtration().step(p + q))
                        .intersect(m.conjugate_filtration().step(q));
                    for v in space.basis_vectors() {
                        let image = h.mul_vec(&v);
                        let scaled: Vec<Scalar> = v.iter().map(|c| c * &int(p + q)).collect();
                        assert_eq!(image, scaled, "grading fails at ({p},{q})");
                    }
                }
            }
        }
    }

    #[test]
    fn overweight_intersections_vanish() {
        for m in [split_pair(), tilted_extension(), pure_weight_one()] {
            let (w, f, fbar) =
                (m.weight_filtration(), m.hodge_filtration(), m.conjugate_filtration());
            for n in -3..=3 {
                for p in -3..=3 {
                    for q in -3..=3 {
                        if p + q <= n {
                            continue;
                        }
                        let overweight = f
                            .step(p)
                            .intersect(w.step(n))
                            .intersect(&filtered_series(fbar, w, q, n));
                        assert!(overweight.is_zero(), "nonzero overlap at ({p},{q},{n})");
                    }
                }
            }
        }
    }

    #[test]
    fn graded_pieces_project_isomorphically() {
        for m in [split_pair(), tilted_extension()] {
            let d = deligne_splitting(&m);
            for (&(i, j), s) in d.pieces() {
                let n = i + j;
                let sq = Subquotient::new(
                    m.weight_filtration().step(n),
                    m.weight_filtration().step(n - 1),
                );
                let projected = sq.project_subspace(s);
                assert_eq!(projected.dim(), s.dim());
                assert_eq!(projected, *m.graded(n).unwrap().piece(i, j).unwrap());
            }
        }
    }

    #[test]
    fn tate_twist_by_zero_is_the_identity() {
        let m = tilted_extension();
        assert_eq!(tate_twist(&m, 0), m);
    }

    #[test]
    fn tate_twist_shifts_weights_and_types() {
        let twisted = tate_twist(&pure_weight_one(), 1);
        assert_eq!(twisted.graded_weights(), vec![-1]);
        let d = deligne_splitting(&twisted);
        assert_eq!(*d.piece(0, -1).unwrap(), span(2, &[e(2, 0)]));
        assert_eq!(*d.piece(-1, 0).unwrap(), span(2, &[e(2, 1)]));
    }

    #[test]
    fn double_dual_restores_the_structure() {
        for m in [split_pair(), tilted_extension(), pure_weight_one()] {
            let double = dual_mhs(&dual_mhs(&m).unwrap()).unwrap();
            assert_eq!(double, m);
        }
    }

    #[test]
    fn dual_splitting_negates_the_grading() {
        for m in [split_pair(), tilted_extension(), pure_weight_one()] {
            let h = deligne_splitting(&m).h().clone();
            let dual = dual_mhs(&m).unwrap();
            let dual_h = deligne_splitting(&dual).h().clone();
            assert_eq!(dual_h, -&h.transpose());
        }
        let dual = dual_mhs(&tilted_extension()).unwrap();
        assert_eq!(dual.graded_weights(), vec![0, 2]);
    }

    fn kron(a: &Mat, b: &Mat) -> Mat {
        Mat::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
            a.at(i / b.rows(), j / b.cols()) * b.at(i % b.rows(), j % b.cols())
        })
    }

    #[test]
    fn tensor_grading_is_the_sum_of_gradings() {
        let a = tilted_extension();
        let b = pure_weight_one();
        let t = tensor_mhs(&a, &b).unwrap();
        assert_eq!(t.graded_weights(), vec![-1, 1]);
        let ha = deligne_splitting(&a).h().clone();
        let hb = deligne_splitting(&b).h().clone();
        let ht = deligne_splitting(&t).h().clone();
        let expected = &kron(&ha, &Mat::identity(2)) + &kron(&Mat::identity(2), &hb);
        assert_eq!(ht, expected);
    }

    #[test]
    fn evaluation_is_a_morphism_to_the_trivial_structure() {
        // Contracting V ⊗ V* against itself lands in the weight-zero
        // point, whose grading is zero; a morphism intertwines gradings.
        let m = tilted_extension();
        let t = tensor_mhs(&m, &dual_mhs(&m).unwrap()).unwrap();
        let ht = deligne_splitting(&t).h().clone();
        let r = m.dim();
        let ev = Mat::from_fn(1, r * r, |_, col| if col / r == col % r { int(1) } else { int(0) });
        assert!((&ev * &ht).is_zero());
    }

    #[test]
    fn end_of_a_pure_structure_has_weight_zero() {
        let m = end_mhs(&pure_weight_one()).unwrap();
        assert_eq!(m.graded_weights(), vec![0]);
        assert_eq!(
            m.graded(0).unwrap().hodge_numbers(),
            vec![((-1, 1), 1), ((0, 0), 2), ((1, -1), 1)]
        );
    }

    #[test]
    fn end_filtrations_match_the_pure_construction() {
        // For a pure polarized structure the operator filtrations agree
        // with the ones built from the bigraded endomorphism pieces.
        let q = Pairing::new(Mat::from_int_rows(&[&[0, 1], &[1, 0]])).unwrap();
        let one_one = vector(&[int(1), int(1)]);
        let f = decr(2, &[(1, span(2, &[one_one])), (2, Subspace::zero(2))]);
        let hs = build_hodge_structure(&f, &q, 1).unwrap();
        let w = incr(2, &[(0, Subspace::zero(2)), (1, Subspace::full(2))]);
        let m = validate_mhs(&w, hs.filtration(), hs.conjugate()).unwrap();
        let (we, fe, fbare) = end_filtrations(&m);
        let end_hs = induced_end_structure(&hs);
        assert_eq!(fe, *end_hs.filtration());
        assert_eq!(fbare, *end_hs.conjugate());
        assert_eq!(we.dims(), vec![(0, 4)]);
    }

    #[test]
    fn canonical_complements_of_the_tilted_extension() {
        let m = tilted_extension();
        let (corner, complement) = canonical_complements(&m);
        assert_eq!(corner, span(2, &[e(2, 1)]));
        assert_eq!(complement, span(2, &[e(2, 1)]));
    }

    #[test]
    fn canonical_complements_vanish_for_nonnegative_types() {
        for m in [split_pair(), pure_weight_one()] {
            let (corner, complement) = canonical_complements(&m);
            assert!(corner.is_zero());
            assert!(complement.is_zero());
        }
    }

    #[test]
    fn conjugate_grading_differs_inside_the_corner() {
        let m = tilted_extension();
        let h = deligne_splitting(&m).h().clone();
        let hbar = deligne_splitting(&conjugate_mhs(&m)).h().clone();
        assert_eq!(hbar, Mat::from_int_rows(&[&[0, 0], &[2, -2]]));
        let (we, fe, fbare) = end_filtrations(&m);
        let difference = &hbar - &h;
        assert!(lower_corner(&we, &fe, &fbare).contains_vector(&difference.vec_columns()));
        // A split structure has equal gradings.
        let split = split_pair();
        let h_split = deligne_splitting(&split).h().clone();
        assert_eq!(deligne_splitting(&conjugate_mhs(&split)).h().clone(), h_split);
        assert_eq!(conjugate_mhs(&conjugate_mhs(&m)), m);
    }

    #[test]
    fn conjugation_transfer_of_the_tilted_extension() {
        let g = conjugation_transfer(&tilted_extension());
        assert_eq!(g, Mat::from_int_rows(&[&[1, 0], &[1, 1]]));
        assert_eq!(conjugation_transfer(&split_pair()), Mat::identity(2));
    }

    /// The split weight (0, -2) pair polarized by the antidiagonal
    /// pairing, self-dual around weight -1.
    fn split_self_dual() -> (MixedHodgeStructure, Pairing) {
        let w = incr(2, &[(-2, span(2, &[e(2, 1)])), (0, Subspace::full(2))]);
        let f = decr(2, &[(0, span(2, &[e(2, 0)])), (1, Subspace::zero(2))]);
        let m = validate_mhs(&w, &f, &f).unwrap();
        let q = Pairing::new(Mat::from_int_rows(&[&[0, 1], &[1, 0]])).unwrap();
        (m, q)
    }

    #[test]
    fn real_splitting_of_a_split_self_dual_pair() {
        let (m, q) = split_self_dual();
        let hr = real_splitting(&m, &q, -1).unwrap();
        let h = deligne_splitting(&m).h().clone();
        assert_eq!(hr, &h + &Mat::identity(2));
        assert_eq!(hr, Mat::from_int_rows(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn real_splitting_of_a_pure_polarized_structure_is_zero() {
        let q = Pairing::new(Mat::from_int_rows(&[&[0, 1], &[1, 0]])).unwrap();
        let one_one = vector(&[int(1), int(1)]);
        let f = decr(2, &[(1, span(2, &[one_one])), (2, Subspace::zero(2))]);
        let hs = build_hodge_structure(&f, &q, 1).unwrap();
        let w = incr(2, &[(0, Subspace::zero(2)), (1, Subspace::full(2))]);
        let m = validate_mhs(&w, hs.filtration(), hs.conjugate()).unwrap();
        assert_eq!(real_splitting(&m, &q, 1).unwrap(), Mat::zeros(2, 2));
    }

    #[test]
    fn real_splitting_rejects_an_unbalanced_pairing() {
        let (m, _) = split_self_dual();
        let id = Pairing::new(Mat::identity(2)).unwrap();
        assert_eq!(
            real_splitting(&m, &id, -1).unwrap_err(),
            MhsError::IncompatiblePairing(
                "weight filtration is not its own pairing dual around the given weight"
            )
        );
    }

    /// The limit pair tilted by ε: the Hodge line is bent off the weight
    /// axis by ε times the nilpotent direction, with the antidiagonal
    /// pairing cutting out the conjugate filtration.
    fn tilted_limit_pair(eps: Rat) -> (MixedHodgeStructure, Pairing) {
        let q = Pairing::new(Mat::from_int_rows(&[&[0, 1], &[1, 0]])).unwrap();
        let w = incr(2, &[(0, span(2, &[e(2, 1)])), (2, Subspace::full(2))]);
        let bent = vector(&[int(1), scalar_from_rat(eps)]);
        let f = decr(2, &[(1, span(2, &[bent])), (2, Subspace::zero(2))]);
        let fbar = conjugate_filtration(&f, &q, 1);
        (validate_mhs(&w, &f, &fbar).unwrap(), q)
    }

    #[test]
    fn tilted_limit_pair_real_splitting() {
        let eps = Rat::new(1.into(), 3.into());
        let (m, q) = tilted_limit_pair(eps.clone());
        let h = deligne_splitting(&m).h().clone();
        let two_eps = scalar_from_rat(eps) * int(2);
        let mut expected_h = Mat::zeros(2, 2);
        expected_h.set(0, 0, int(2));
        expected_h.set(1, 0, two_eps);
        assert_eq!(h, expected_h);
        // The tilt cancels out of the real splitting entirely.
        let hr = real_splitting(&m, &q, 1).unwrap();
        assert_eq!(hr, Mat::from_int_rows(&[&[1, 0], &[0, -1]]));
        // The conjugate grading is the reflection of the adjoint.
        let hbar = deligne_splitting(&conjugate_mhs(&m)).h().clone();
        assert_eq!(hbar, &Mat::identity(2).scale(&int(2)) - &q.adjoint(&h));
    }

    #[test]
    fn zero_dimensional_structure_is_accepted() {
        let w = Filtration::from_steps(Direction::Increasing, 0, []).unwrap();
        let f = Filtration::from_steps(Direction::Decreasing, 0, []).unwrap();
        let m = validate_mhs(&w, &f, &f).unwrap();
        assert_eq!(m.graded_weights(), Vec::<i64>::new());
        let d = deligne_splitting(&m);
        assert!(d.pieces().is_empty());
        assert_eq!(d.h().rows(), 0);
        assert_eq!(dual_mhs(&m).unwrap(), m);
        assert_eq!(tate_twist(&m, 3), m);
        assert_eq!(tensor_mhs(&m, &split_pair()).unwrap().dim(), 0);
        assert_eq!(end_mhs(&m).unwrap().dim(), 0);
        let (corner, complement) = canonical_complements(&m);
        assert!(corner.is_zero() && complement.is_zero());
        assert_eq!(conjugation_transfer(&m), Mat::identity(0));
    }

    #[test]
    fn complex_coefficients_are_handled_exactly() {
        // Tilting the conjugate line by i exercises nonreal arithmetic in
        // the splitting formula.
        let w = incr(2, &[(-2, span(2, &[e(2, 1)])), (0, Subspace::full(2))]);
        let f = decr(2, &[(0, span(2, &[e(2, 0)])), (1, Subspace::zero(2))]);
        let mixed = vector(&[int(1), imag_unit()]);
        let fbar = decr(2, &[(0, span(2, core::slice::from_ref(&mixed))), (1, Subspace::zero(2))]);
        let m = validate_mhs(&w, &f, &fbar).unwrap();
        let d = deligne_splitting(&m);
        assert_eq!(*d.piece(0, 0).unwrap(), span(2, &[e(2, 0)]));
        let g = conjugation_transfer(&m);
        assert_eq!(*g.at(1, 0), imag_unit());
    }
}
