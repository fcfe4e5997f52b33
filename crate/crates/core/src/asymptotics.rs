//! Limit filtrations of a degeneration and floating-point verification of
//! the growth, decay, and curvature bounds they predict.
//!
//! The exact half computes, for a degeneration datum, the limit filtration
//! `F_lim`, its semisimple straightening `F_H` along a grading, the twisted
//! limit `F_♯ = exp(-N) F_H`, and the coefficient series of the comparison
//! `exp(-N) exp(-(log u) H) F_lim = exp(B(u)) F_♯` with `B(u)` an
//! infinitesimal isometry series and `exp(C(u))` the gauge fixing `F_♯`.
//! The numeric half samples Hodge metrics of model variations on grids and
//! fits growth and decay exponents against the exact predictions. Floats
//! cross back into exact arithmetic only through a continued-fraction
//! bridge with a hard denominator cap, so every membership decision is
//! made by the exact layer.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Float, One, ToPrimitive, Zero};

use crate::exact::{
    commutator, int, inverse, nilpotent_exp, rat, scalar_from_rat, simplest_rational_between,
    Filtration, Mat, Pairing, Rat, Scalar, Subspace,
};
use crate::hodge::{build_hodge_structure, conjugate_filtration, hodge_gram, HodgeError};
use crate::mhs::{deligne_splitting, validate_mhs};
use crate::monodromy::{
    grading_splitting, integer_eigenprojections, integer_spectrum, isotypical_decompose,
    monodromy_constants, nilpotency_index, sl2_complete, weight_filtration, DegenerationDatum,
};
use crate::sl2hodge::{
    associated_pure_structure, hxy_hodge_components, recognize_sl2_filtration, ModelVariation,
};

/// How the asymptotic layer rejects its input. Postconditions of the exact
/// constructions are theorems and panic when violated; these errors report
/// data the theory does not cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AsymptoticsError {
    /// The listed eigenspaces do not decompose the ambient space.
    SpectrumNotDecomposition,
    /// The datum cannot carry limit filtrations, for the stated reason.
    InvalidLimitDatum(&'static str),
    /// The series construction could not split the input, for the stated
    /// reason.
    SplitFails(&'static str),
    /// A sample grid is empty, collapsed, or out of range.
    DegenerateGrid(&'static str),
    /// The evaluation point does not have negative real part.
    OutsideLeftHalfPlane,
    /// The operator is not nilpotent (for numeric input: not nilpotent to
    /// working precision).
    NotNilpotent,
}

impl fmt::Display for AsymptoticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticsError::SpectrumNotDecomposition => {
                write!(f, "eigenspaces do not decompose the space")
            }
            AsymptoticsError::InvalidLimitDatum(why) => write!(f, "invalid limit datum: {}", why),
            AsymptoticsError::SplitFails(why) => write!(f, "series split fails: {}", why),
            AsymptoticsError::DegenerateGrid(why) => write!(f, "degenerate grid: {}", why),
            AsymptoticsError::OutsideLeftHalfPlane => {
                write!(f, "evaluation point needs negative real part")
            }
            AsymptoticsError::NotNilpotent => write!(f, "operator is not nilpotent"),
        }
    }
}

/// Which end of the real axis the semisimple flow runs to. `Plus` is the
/// limit of `exp(x S) F` as `x -> +infinity`, so eigenvalues accumulate in
/// increasing order; `Minus` runs to `-infinity` and accumulates them in
/// decreasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitSign {
    Plus,
    Minus,
}

/// Projectors onto the listed subspaces along each other, in the given
/// order, or `None` when the subspaces do not decompose the ambient space.
fn spectral_projectors(parts: &[(Rat, Subspace)]) -> Option<Vec<Mat>> {
    let dim = parts.first()?.1.ambient_dim();
    let blocks: Vec<&Mat> = parts.iter().map(|(_, s)| s.basis()).collect();
    let stacked = Mat::hstack(&blocks);
    if stacked.cols() != dim {
        return None;
    }
    let stacked_inv = inverse(&stacked).ok()?;
    let mut projectors = Vec::with_capacity(parts.len());
    let mut offset = 0;
    for (_, space) in parts {
        let columns = stacked.column_range(offset, offset + space.dim());
        let rows = stacked_inv.row_range(offset, offset + space.dim());
        projectors.push(&columns * &rows);
        offset += space.dim();
    }
    Some(projectors)
}

/// The limit of `exp(x S) F` as `x` runs to the chosen end of the real
/// axis, for `S` semisimple with the given eigenspace decomposition. Per
/// step the limit is the sum over eigenvalues `a` of `P_a(F ∩ G_a)`, where
/// `G_a` accumulates the eigenspaces in the order fixed by the sign and
/// `P_a` projects onto the `a`-eigenspace along the others. The result has
/// the same step dimensions as `F` and every step splits into its slices
/// along the eigenspaces.
pub fn semisimple_limit(
    spectrum: &[(Rat, Subspace)],
    f: &Filtration,
    sign: LimitSign,
) -> Result<Filtration, AsymptoticsError> {
    let dim = f.ambient_dim();
    let mut parts: Vec<(Rat, Subspace)> = spectrum.to_vec();
    if parts.is_empty() {
        return Err(AsymptoticsError::SpectrumNotDecomposition);
    }
    for (_, space) in &parts {
        if space.ambient_dim() != dim {
            return Err(AsymptoticsError::SpectrumNotDecomposition);
        }
    }
    parts.sort_by(|a, b| a.0.cmp(&b.0));
    if sign == LimitSign::Minus {
        parts.reverse();
    }
    if parts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(AsymptoticsError::SpectrumNotDecomposition);
    }
    let projectors =
        spectral_projectors(&parts).ok_or(AsymptoticsError::SpectrumNotDecomposition)?;
    let mut accumulated = Vec::with_capacity(parts.len());
    let mut running = Subspace::zero(dim);
    for (_, space) in &parts {
        running = running.sum(space);
        accumulated.push(running.clone());
    }

    let mut steps = Vec::new();
    for p in f.jump_indices() {
        let original = f.step(p);
        let mut limit = Subspace::zero(dim);
        let mut previous = 0;
        for (projector, grown) in projectors.iter().zip(&accumulated) {
            let slice = original.intersect(grown);
            let image = slice.image_under(projector);
            assert_eq!(
                image.dim(),
                slice.dim() - previous,
                "the eigenprojection is injective on each graded slice"
            );
            previous = slice.dim();
            limit = limit.sum(&image);
        }
        assert_eq!(limit.dim(), original.dim(), "the limit keeps every step dimension");
        let split: usize = parts.iter().map(|(_, space)| limit.intersect(space).dim()).sum();
        assert_eq!(split, limit.dim(), "each limit step splits along the eigenspaces");
        steps.push((p, limit));
    }
    Ok(Filtration::from_steps(f.direction(), dim, steps)
        .expect("limits of nested steps stay nested"))
}

/// `A F^p ⊆ F^{p-shift}` for every `p`. Checking at the jump indices and
/// their translates by `shift` suffices: between them both sides are
/// constant or only the target grows.
fn maps_into_shifted(a: &Mat, f: &Filtration, shift: i64) -> bool {
    let mut points = f.jump_indices();
    let translated: Vec<i64> = points.iter().map(|p| p + shift).collect();
    points.extend(translated);
    points.sort_unstable();
    points.dedup();
    points.iter().all(|&p| f.step(p - shift).contains(&f.step(p).image_under(a)))
}

/// The exact limit data of a degeneration: the limit filtration `F_lim`,
/// its straightening `F_H` along the grading, the twisted limit
/// `F_♯ = exp(-N) F_H`, and, once `cheap_sl2_series` has run, the
/// coefficients of the comparison series indexed by the power of `u` they
/// multiply.
#[derive(Clone)]
pub struct LimitPackage {
    weight: i64,
    pairing: Pairing,
    grading: Mat,
    f_lim: Filtration,
    f_h: Filtration,
    f_sharp: Filtration,
    h_coeffs: BTreeMap<usize, Mat>,
    b_coeffs: BTreeMap<usize, Mat>,
    c_coeffs: BTreeMap<usize, Mat>,
}

impl LimitPackage {
    /// Weight of the underlying structure.
    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// The polarizing pairing.
    pub fn pairing(&self) -> &Pairing {
        &self.pairing
    }

    /// The grading `H` used to straighten the limit filtration.
    pub fn grading(&self) -> &Mat {
        &self.grading
    }

    /// The limit filtration.
    pub fn f_lim(&self) -> &Filtration {
        &self.f_lim
    }

    /// The straightened filtration, fixed by the semisimple flow of the
    /// grading.
    pub fn f_h(&self) -> &Filtration {
        &self.f_h
    }

    /// The twisted limit `exp(-N) F_H`, the filtration of a polarized pure
    /// structure.
    pub fn f_sharp(&self) -> &Filtration {
        &self.f_sharp
    }

    /// Graded coefficients of the comparison `F_lim = h F_H`: the entry at
    /// `k` lowers the grading by `k`. Empty until `cheap_sl2_series` runs.
    pub fn h_coeffs(&self) -> &BTreeMap<usize, Mat> {
        &self.h_coeffs
    }

    /// Coefficients of the rescaling series `B(u)`, each an infinitesimal
    /// isometry of the pairing. Empty until `cheap_sl2_series` runs.
    pub fn b_coeffs(&self) -> &BTreeMap<usize, Mat> {
        &self.b_coeffs
    }

    /// Coefficients of the gauge series `C(u)`, each preserving `F_♯`.
    /// Empty until `cheap_sl2_series` runs.
    pub fn c_coeffs(&self) -> &BTreeMap<usize, Mat> {
        &self.c_coeffs
    }
}

impl fmt::Debug for LimitPackage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LimitPackage(weight {}, dim {}, series order {})",
            self.weight,
            self.pairing.dim(),
            self.b_coeffs.keys().next_back().copied().unwrap_or(0)
        )
    }
}

/// Shared construction of the limit package for a chosen grading.
fn build_limit_package(
    d: &DegenerationDatum,
    grading: Mat,
) -> Result<LimitPackage, AsymptoticsError> {
    let f_lim = d
        .limit_filtration()
        .ok_or(AsymptoticsError::InvalidLimitDatum("the datum carries no limit filtration"))?
        .clone();
    let q = d.pairing().clone();
    let n = d.nilpotent().clone();
    let weight = d.weight();
    if !maps_into_shifted(&n, &f_lim, 1) {
        return Err(AsymptoticsError::InvalidLimitDatum(
            "the nilpotent operator does not shift the limit filtration by one step",
        ));
    }
    if !d.ts_stable_filtration(&f_lim) {
        return Err(AsymptoticsError::InvalidLimitDatum(
            "the semisimple monodromy does not preserve the limit filtration",
        ));
    }

    let spectrum: Vec<(Rat, Subspace)> = integer_spectrum(&grading)
        .expect("the grading acts with integer eigenvalues")
        .into_iter()
        .map(|(a, space)| (rat(a, 1), space))
        .collect();
    let f_h = semisimple_limit(&spectrum, &f_lim, LimitSign::Plus)
        .expect("an eigenspace decomposition always has limits");
    // The straightening inherits the stabilities of the limit filtration.
    assert!(d.ts_stable_filtration(&f_h), "the semisimple monodromy preserves the straightening");
    assert!(maps_into_shifted(&n, &f_h, 1), "N shifts the straightening by one step");

    let f_sharp = f_h
        .apply(&nilpotent_exp(&n, &int(-1)).expect("the datum nilpotent is nilpotent"))
        .expect("the exponential is invertible");
    build_hodge_structure(&f_sharp, &q, weight).map_err(|e| {
        AsymptoticsError::InvalidLimitDatum(match e {
            HodgeError::DecompositionFails => {
                "the twisted limit filtration does not split into Hodge pieces"
            }
            HodgeError::NotPolarized { .. } => "the twisted limit filtration is not polarized",
        })
    })?;

    let w_rel = weight_filtration(&n).expect("the datum nilpotent is nilpotent");
    let w_abs = w_rel.shift(weight);
    let fbar_lim = conjugate_filtration(&f_lim, &q, weight);
    validate_mhs(&w_abs, &f_lim, &fbar_lim).map_err(|_| {
        AsymptoticsError::InvalidLimitDatum(
            "the limit filtrations do not form a mixed Hodge structure",
        )
    })?;
    // N twists the mixed structure down and the semisimple monodromy is an
    // automorphism of it; both follow from the datum axioms.
    assert!(maps_into_shifted(&n, &w_rel, 2), "N lowers the weight filtration by two");
    assert!(maps_into_shifted(&n, &fbar_lim, 1), "N shifts the conjugate filtration by one");
    assert!(d.ts_stable_filtration(&fbar_lim), "T_s preserves the conjugate filtration");
    assert!(d.ts_stable_filtration(&w_abs), "T_s preserves the weight filtration");

    recognize_sl2_filtration(q.matrix(), &grading, &n.scale(&int(-1)), &f_h, weight)
        .expect("the straightened filtration is an sl2-Hodge filtration");

    Ok(LimitPackage {
        weight,
        pairing: q,
        grading,
        f_lim,
        f_h,
        f_sharp,
        h_coeffs: BTreeMap::new(),
        b_coeffs: BTreeMap::new(),
        c_coeffs: BTreeMap::new(),
    })
}

/// Limit filtrations of a degeneration datum, straightened along the
/// canonical grading of its weight filtration.
pub fn limit_filtrations(d: &DegenerationDatum) -> Result<LimitPackage, AsymptoticsError> {
    build_limit_package(d, grading_splitting(d))
}

/// Limit filtrations of a model variation, straightened along the model's
/// own grading so that the straightening fixes the total filtration.
pub fn model_limit_filtrations(m: &ModelVariation) -> Result<LimitPackage, AsymptoticsError> {
    build_limit_package(m.datum(), m.base().triple().h().clone())
}

/// Kronecker product in the convention `vec(A X B) = (Bᵀ ⊗ A) vec(X)` for
/// column-major `vec`.
fn kronecker(a: &Mat, b: &Mat) -> Mat {
    Mat::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
        a.at(i / b.rows(), j / b.cols()) * b.at(i % b.rows(), j % b.cols())
    })
}

/// Product of matrix polynomials, truncated to the given degree.
fn poly_mul(a: &[Mat], b: &[Mat], order: usize, dim: usize) -> Vec<Mat> {
    let mut out = vec![Mat::zeros(dim, dim); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    out
}

/// Exponential of a matrix polynomial with zero constant term, truncated
/// to the given degree. Exact: the sum terminates because the `m`-th power
/// starts in degree `m`.
fn poly_exp(series: &[Mat], order: usize, dim: usize) -> Vec<Mat> {
    if let Some(head) = series.first() {
        assert!(head.is_zero(), "the exponent needs zero constant term");
    }
    let mut out = vec![Mat::zeros(dim, dim); order + 1];
    out[0] = Mat::identity(dim);
    let mut power: Vec<Mat> = series.iter().take(order + 1).cloned().collect();
    power.resize(order + 1, Mat::zeros(dim, dim));
    let base = power.clone();
    let mut factorial = Rat::one();
    for m in 1..=order {
        factorial *= rat(m as i64, 1);
        let coefficient = scalar_from_rat(Rat::one() / &factorial);
        for (acc, term) in out.iter_mut().zip(&power) {
            if !term.is_zero() {
                *acc = &*acc + &term.scale(&coefficient);
            }
        }
        if m < order {
            power = poly_mul(&power, &base, order, dim);
        }
    }
    out
}

/// Projectors onto the Hodge pieces of the twisted limit structure, keyed
/// by the holomorphic degree `p`.
fn hodge_projectors(pieces: &BTreeMap<(i64, i64), Subspace>) -> BTreeMap<i64, Mat> {
    let blocks: Vec<&Mat> = pieces.values().map(|s| s.basis()).collect();
    let stacked = Mat::hstack(&blocks);
    let stacked_inv = inverse(&stacked).expect("the Hodge pieces decompose the space");
    let mut out = BTreeMap::new();
    let mut offset = 0;
    for (&(p, _), piece) in pieces {
        let columns = stacked.column_range(offset, offset + piece.dim());
        let rows = stacked_inv.row_range(offset, offset + piece.dim());
        out.insert(p, &columns * &rows);
        offset += piece.dim();
    }
    out
}

/// The degree-`j` component of an endomorphism for the Hodge grading:
/// the part mapping the degree-`p` piece into the degree-`p+j` piece.
fn end_component(a: &Mat, j: i64, projectors: &BTreeMap<i64, Mat>, dim: usize) -> Mat {
    let mut out = Mat::zeros(dim, dim);
    for (p, lower) in projectors {
        if let Some(upper) = projectors.get(&(p + j)) {
            out = &out + &(&(upper * a) * lower);
        }
    }
    out
}

/// The component of `A` in the complement of the nonnegative-degree
/// subalgebra: `Σ_{j<0} (A_j - A_j†)`, an infinitesimal isometry of the
/// pairing. The remainder `A` minus this part has only nonnegative Hodge
/// degrees, since the adjoint flips the degree sign.
fn transverse_part(a: &Mat, projectors: &BTreeMap<i64, Mat>, q: &Pairing, dim: usize) -> Mat {
    let lowest = *projectors.keys().next().expect("at least one Hodge piece");
    let highest = *projectors.keys().next_back().expect("at least one Hodge piece");
    let mut out = Mat::zeros(dim, dim);
    for j in (lowest - highest)..0 {
        let component = end_component(a, j, projectors, dim);
        if !component.is_zero() {
            out = &out + &(&component - &q.adjoint(&component));
        }
    }
    out
}

/// Default truncation degree for the comparison series: twice the
/// nilpotency index plus two.
pub fn default_series_order(n_op: &Mat) -> usize {
    2 * nilpotency_index(n_op).expect("the operator must be nilpotent") + 2
}

/// Computes the comparison series of the package: the unique `h` with
/// `F_lim = h F_H`, `h - 1` strictly grading-lowering, and `[N, h] = 0`,
/// then the coefficients of `(1 + Σ u^k h_k) exp(C(u)) = exp(B(u))` with
/// every `B` coefficient an infinitesimal isometry of the pairing and
/// every `C` coefficient preserving `F_♯`. Consequently
/// `exp(-N) exp(-(log u) H) F_lim = exp(B(u)) F_♯ + O(u^{order+1})`.
/// The coefficients of both exponentials in each degree are isotypical for
/// the adjoint sl2-action, with highest weights of the same parity as the
/// degree and bounded by it.
pub fn cheap_sl2_series(
    pkg: &LimitPackage,
    q: &Mat,
    n_op: &Mat,
    order: usize,
) -> Result<LimitPackage, AsymptoticsError> {
    assert!(order >= 1, "the series needs at least the linear term");
    assert_eq!(q, pkg.pairing.matrix(), "the pairing differs from the package");
    let dim = pkg.f_h.ambient_dim();
    assert!(n_op.is_square() && n_op.rows() == dim, "operator shape differs from the package");

    let shrink = nilpotent_exp(n_op, &int(-1))
        .map_err(|_| AsymptoticsError::SplitFails("the operator is not nilpotent"))?;
    let transported = pkg
        .f_h
        .apply(&shrink)
        .map_err(|_| AsymptoticsError::SplitFails("the operator does not act invertibly"))?;
    if transported != pkg.f_sharp {
        return Err(AsymptoticsError::SplitFails(
            "the operator does not carry the straightening to the twisted limit",
        ));
    }
    let s = recognize_sl2_filtration(q, &pkg.grading, &n_op.scale(&int(-1)), &pkg.f_h, pkg.weight)
        .map_err(|_| {
            AsymptoticsError::SplitFails("the straightening is not an sl2-Hodge filtration")
        })?;
    let (f_sharp, hs_sharp, _) = associated_pure_structure(&s);
    assert_eq!(f_sharp, pkg.f_sharp, "both descriptions of the twisted limit agree");

    let w_rel = weight_filtration(n_op).expect("the operator is nilpotent");
    let fbar_lim = conjugate_filtration(&pkg.f_lim, &pkg.pairing, pkg.weight);
    let mixed = validate_mhs(&w_rel.shift(pkg.weight), &pkg.f_lim, &fbar_lim)
        .expect("the package was built from a valid mixed Hodge structure");
    let splitting = deligne_splitting(&mixed);

    // h sends each bigraded basis vector to its canonical representative:
    // the unique vector of the matching Deligne piece congruent to it
    // modulo the next lower weight step.
    let mut domain_cols: Vec<Vec<Scalar>> = Vec::new();
    let mut image_cols: Vec<Vec<Scalar>> = Vec::new();
    for (&(k, i, j), piece) in s.pieces() {
        assert_eq!(i + j, pkg.weight + k, "bigraded types sit on the shifted diagonal");
        let deligne =
            splitting.piece(i, j).expect("the Deligne splitting realizes every bigraded piece");
        assert_eq!(deligne.dim(), piece.dim(), "matching pieces have equal dimension");
        let lower = w_rel.step(k - 1);
        let stacked = Mat::hstack(&[deligne.basis(), lower.basis()]);
        for v in piece.basis_vectors() {
            let coefficients = crate::exact::solve(&stacked, &v)
                .expect("the Deligne piece covers the graded piece");
            let image = deligne.basis().mul_vec(&coefficients[..deligne.dim()]);
            domain_cols.push(v);
            image_cols.push(image);
        }
    }
    let domain = Mat::from_columns(dim, &domain_cols);
    let images = Mat::from_columns(dim, &image_cols);
    let h = &images * &inverse(&domain).expect("the bigraded pieces span the space");
    assert_eq!(
        pkg.f_h.apply(&h).expect("h is invertible"),
        pkg.f_lim,
        "h carries the straightening to the limit filtration"
    );
    assert!(commutator(n_op, &h).is_zero(), "h commutes with the nilpotent operator");

    // Graded coefficients: h = 1 + Σ_k h_k with h_k lowering the grading
    // by k >= 1 and commuting with N.
    let grading_projectors =
        integer_eigenprojections(&pkg.grading).expect("the grading has integer spectrum");
    let delta = &h - &Mat::identity(dim);
    let mut h_coeffs: BTreeMap<usize, Mat> = BTreeMap::new();
    for (a, pa) in &grading_projectors {
        for (b, pb) in &grading_projectors {
            let component = &(pb * &delta) * pa;
            if component.is_zero() {
                continue;
            }
            assert!(b < a, "h differs from the identity by grading-lowering terms");
            let drop = (a - b) as usize;
            let entry = h_coeffs.entry(drop).or_insert_with(|| Mat::zeros(dim, dim));
            *entry = &*entry + &component;
        }
    }
    for coefficient in h_coeffs.values() {
        assert!(
            commutator(n_op, coefficient).is_zero(),
            "each graded coefficient of h commutes with the nilpotent operator"
        );
    }

    // Degree-by-degree split of (1 + Σ u^k h_k) exp(C) = exp(B): in degree
    // k the equation reads B_k - C_k = R_k with R_k known from lower
    // degrees, and the transverse/nonnegative split fixes both sides.
    let projectors = hodge_projectors(hs_sharp.pieces());
    let zero = Mat::zeros(dim, dim);
    let mut h_poly = vec![Mat::identity(dim)];
    for m in 1..=order {
        h_poly.push(h_coeffs.get(&m).cloned().unwrap_or_else(|| zero.clone()));
    }
    let mut b_poly = vec![zero.clone(); order + 1];
    let mut c_poly = vec![zero.clone(); order + 1];
    for k in 1..=order {
        let exp_b = poly_exp(&b_poly[..k], k, dim);
        let exp_c = poly_exp(&c_poly[..k], k, dim);
        let mut remainder = &(&h_poly[k] + &exp_c[k]) - &exp_b[k];
        for m in 1..k {
            if !h_poly[m].is_zero() && !exp_c[k - m].is_zero() {
                remainder = &remainder + &(&h_poly[m] * &exp_c[k - m]);
            }
        }
        let b_k = transverse_part(&remainder, &projectors, &pkg.pairing, dim);
        c_poly[k] = &b_k - &remainder;
        b_poly[k] = b_k;
    }

    let exp_b = poly_exp(&b_poly, order, dim);
    let exp_c = poly_exp(&c_poly, order, dim);
    assert_eq!(
        poly_mul(&h_poly, &exp_c, order, dim),
        exp_b,
        "the split solves the comparison identity degree by degree"
    );
    for k in 1..=order {
        assert_eq!(
            pkg.pairing.adjoint(&b_poly[k]),
            -&b_poly[k],
            "the rescaling coefficients are infinitesimal isometries"
        );
        assert!(
            maps_into_shifted(&c_poly[k], &pkg.f_sharp, 0),
            "the gauge coefficients preserve the twisted limit"
        );
    }

    // Isotypical bound: the degree-k coefficients live in the sum of the
    // irreducible components of the adjoint action with highest weights
    // k, k-2, k-4, ...
    let identity = Mat::identity(dim);
    let ad_h =
        &kronecker(&identity, &pkg.grading) - &kronecker(&pkg.grading.transpose(), &identity);
    let ad_n = &kronecker(&identity, n_op) - &kronecker(&n_op.transpose(), &identity);
    let triple = sl2_complete(&ad_h, &ad_n).expect("the adjoint action extends to sl2");
    let components = isotypical_decompose(&triple).expect("the adjoint action splits");
    for k in 1..=order {
        let mut allowed = Subspace::zero(dim * dim);
        for (m, component) in &components {
            if *m <= k && (k - m) % 2 == 0 {
                allowed = allowed.sum(component);
            }
        }
        for coefficient in [&b_poly[k], &c_poly[k]] {
            if !coefficient.is_zero() {
                assert!(
                    allowed.contains_vector(&coefficient.vec_columns()),
                    "degree {} coefficients are isotypical of weights k, k-2, ...",
                    k
                );
            }
        }
    }

    let mut filled = pkg.clone();
    filled.h_coeffs = h_coeffs;
    filled.b_coeffs = (1..=order).map(|k| (k, b_poly[k].clone())).collect();
    filled.c_coeffs = (1..=order).map(|k| (k, c_poly[k].clone())).collect();
    Ok(filled)
}

/// Double-precision complex value. Conversion from the exact scalars
/// rounds each rational coordinate once.
pub type NumericScalar = Complex<f64>;

/// One-rounding conversion: scales the fraction by a power of two until
/// the integer quotient carries 63 significant bits, then rounds it.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let numer_bits = r.numer().bits() as i64;
    let denom_bits = r.denom().bits() as i64;
    let shift = denom_bits + 63 - numer_bits;
    let scaled: BigInt =
        if shift >= 0 { r.numer() << (shift as u64) } else { r.numer() >> ((-shift) as u64) };
    let quotient = &scaled / r.denom();
    let base = quotient.to_f64().expect("a 64-bit quotient converts");
    let exponent = (-shift).clamp(-3000, 3000) as i32;
    base * Float::powi(2.0f64, exponent)
}

/// Rounds both coordinates once.
pub fn to_numeric(s: &Scalar) -> NumericScalar {
    Complex::new(rat_to_f64(&s.re), rat_to_f64(&s.im))
}

/// The simplest rational within `1e-9` of `x`, widened to `1e-7` when the
/// closer candidate's denominator exceeds `10^6`; `None` when even the
/// wide window only contains fractions past the cap. This is the only
/// bridge from floats back into exact arithmetic.
fn rationalize(x: f64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let exact = Rat::from_float(x)?;
    let cap = BigInt::from(1_000_000);
    for tolerance in [1e-9, 1e-7] {
        let radius = Rat::from_float(tolerance)?;
        let candidate = simplest_rational_between(&(&exact - &radius), &(&exact + &radius));
        if candidate.denom() <= &cap {
            return Some(candidate);
        }
    }
    None
}

/// A dense double-precision complex matrix for the verification layer.
/// Row-major; shapes are programmer errors and panic.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericMat {
    rows: usize,
    cols: usize,
    data: Vec<NumericScalar>,
}

impl NumericMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        NumericMat { rows, cols, data: vec![Complex::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = NumericMat::zeros(n, n);
        for i in 0..n {
            out.set(i, i, Complex::new(1.0, 0.0));
        }
        out
    }

    /// Entrywise rounding of an exact matrix.
    pub fn from_exact(m: &Mat) -> Self {
        NumericMat {
            rows: m.rows(),
            cols: m.cols(),
            data: (0..m.rows() * m.cols())
                .map(|i| to_numeric(m.at(i / m.cols(), i % m.cols())))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> NumericScalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: NumericScalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.data[i * self.cols + j] = value;
    }

    pub fn dagger(&self) -> NumericMat {
        let mut out = NumericMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).conj());
            }
        }
        out
    }

    pub fn scale(&self, s: NumericScalar) -> NumericMat {
        NumericMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_entry_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr().sqrt()).fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[NumericScalar]) -> Vec<NumericScalar> {
        assert_eq!(v.len(), self.cols, "vector length differs");
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.at(i, j) * v[j]).sum()).collect()
    }
}

impl core::ops::Add for &NumericMat {
    type Output = NumericMat;
    fn add(self, other: &NumericMat) -> NumericMat {
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch");
        NumericMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl core::ops::Sub for &NumericMat {
    type Output = NumericMat;
    fn sub(self, other: &NumericMat) -> NumericMat {
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch");
        NumericMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl core::ops::Mul for &NumericMat {
    type Output = NumericMat;
    fn mul(self, other: &NumericMat) -> NumericMat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = NumericMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let left = self.at(i, k);
                if left.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let sum = out.at(i, j) + left * other.at(k, j);
                    out.set(i, j, sum);
                }
            }
        }
        out
    }
}

impl core::ops::Neg for &NumericMat {
    type Output = NumericMat;
    fn neg(self) -> NumericMat {
        self.scale(Complex::new(-1.0, 0.0))
    }
}

/// Matrix exponential by scaling and squaring; accurate to roughly machine
/// precision for moderate norms.
fn numeric_exp(a: &NumericMat) -> NumericMat {
    assert!(a.rows == a.cols, "exponential needs a square matrix");
    let norm = a.frobenius_norm();
    assert!(norm.is_finite(), "exponential needs finite entries");
    let mut halvings = 0u32;
    let mut factor = 1.0f64;
    while norm * factor > 0.5 {
        factor *= 0.5;
        halvings += 1;
    }
    let scaled = a.scale(Complex::new(factor, 0.0));
    let mut result = NumericMat::identity(a.rows);
    let mut term = NumericMat::identity(a.rows);
    for m in 1..=16 {
        term = &term * &scaled;
        term = term.scale(Complex::new(1.0 / m as f64, 0.0));
        result = &result + &term;
    }
    for _ in 0..halvings {
        result = &result * &result;
    }
    result
}

/// Orthonormal basis of the column span, by modified Gram-Schmidt with one
/// re-orthogonalization pass; near-dependent columns are dropped.
fn orthonormal_columns(m: &NumericMat) -> NumericMat {
    let mut kept: Vec<Vec<NumericScalar>> = Vec::new();
    for j in 0..m.cols {
        let mut v: Vec<NumericScalar> = (0..m.rows).map(|i| m.at(i, j)).collect();
        let original: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if original == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for u in &kept {
                let overlap: NumericScalar = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ui) in v.iter_mut().zip(u) {
                    *vi -= overlap * ui;
                }
            }
        }
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-9 * original {
            let inv = Complex::new(1.0 / norm, 0.0);
            kept.push(v.iter().map(|x| x * inv).collect());
        }
    }
    let mut out = NumericMat::zeros(m.rows, kept.len());
    for (j, u) in kept.iter().enumerate() {
        for (i, x) in u.iter().enumerate() {
            out.set(i, j, *x);
        }
    }
    out
}

/// Frobenius distance between the orthogonal projectors onto the column
/// spans; zero exactly when the spans agree.
pub fn span_distance(a: &NumericMat, b: &NumericMat) -> f64 {
    assert_eq!(a.rows, b.rows, "spans live in different spaces");
    let ua = orthonormal_columns(a);
    let ub = orthonormal_columns(b);
    let pa = &ua * &ua.dagger();
    let pb = &ub * &ub.dagger();
    (&pa - &pb).frobenius_norm()
}

/// Hermitian up to roundoff and positive definite, decided by a Cholesky
/// factorization.
fn is_hermitian_positive(g: &NumericMat) -> bool {
    let n = g.rows;
    if n != g.cols {
        return false;
    }
    let scale = g.max_entry_norm();
    for i in 0..n {
        for j in 0..n {
            if (g.at(i, j) - g.at(j, i).conj()).norm_sqr().sqrt() > 1e-9 * (1.0 + scale) {
                return false;
            }
        }
    }
    let mut lower = NumericMat::zeros(n, n);
    for j in 0..n {
        let mut pivot = g.at(j, j).re;
        for k in 0..j {
            pivot -= lower.at(j, k).norm_sqr();
        }
        if pivot.is_nan() || pivot <= 0.0 {
            return false;
        }
        let root = pivot.sqrt();
        lower.set(j, j, Complex::new(root, 0.0));
        for i in (j + 1)..n {
            let mut value = g.at(i, j);
            for k in 0..j {
                value -= lower.at(i, k) * lower.at(j, k).conj();
            }
            lower.set(i, j, value / root);
        }
    }
    true
}

/// Gram matrix of the Hodge metric of the model at `z`, over the standard
/// basis, with the value of the metric at `(v, w)` given by `w^H G v`. The
/// metric at `z` is the pullback of the metric of the twisted limit
/// structure along `exp((log|x|/2) H) exp(i y Y)` for `z = x + i y`, so
/// `G(z) = B^H G_♯ B`. The result is asserted hermitian positive definite.
pub fn metric_at(model: &ModelVariation, z: NumericScalar) -> Result<NumericMat, AsymptoticsError> {
    let x = z.re;
    let y = z.im;
    if x.is_nan() || x >= 0.0 {
        return Err(AsymptoticsError::OutsideLeftHalfPlane);
    }
    let base = model.base();
    let dim = base.dim();
    let (_, hs_sharp, _) = associated_pure_structure(base);
    let gram = NumericMat::from_exact(hodge_gram(&hs_sharp).matrix());

    let projectors =
        integer_eigenprojections(base.triple().h()).expect("the grading has integer spectrum");
    let sqrt_modulus = x.abs().sqrt();
    let mut stretch = NumericMat::zeros(dim, dim);
    for (k, projector) in &projectors {
        let factor = Complex::new(Float::powi(sqrt_modulus, *k as i32), 0.0);
        stretch = &stretch + &NumericMat::from_exact(projector).scale(factor);
    }

    let y_numeric = NumericMat::from_exact(base.triple().y());
    let mut rotate = NumericMat::identity(dim);
    let mut power = NumericMat::identity(dim);
    let mut coefficient = Complex::new(1.0, 0.0);
    for m in 1..dim {
        power = &power * &y_numeric;
        if power.frobenius_norm() == 0.0 {
            break;
        }
        coefficient = coefficient * Complex::new(0.0, y) / (m as f64);
        rotate = &rotate + &power.scale(coefficient);
    }

    let b = &stretch * &rotate;
    let g = &(&b.dagger() * &gram) * &b;
    assert!(is_hermitian_positive(&g), "the sampled Gram matrix is hermitian positive definite");
    Ok(g)
}

/// A least-squares line through log-log samples: the fitted slope and the
/// largest absolute deviation of a sample from the fitted line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub residual: f64,
}

fn fit_line(points: &[(f64, f64)]) -> SlopeFit {
    let n = points.len() as f64;
    assert!(points.len() >= 2, "a fit needs two points");
    let sum_t: f64 = points.iter().map(|p| p.0).sum();
    let sum_v: f64 = points.iter().map(|p| p.1).sum();
    let sum_tt: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sum_tv: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denominator = n * sum_tt - sum_t * sum_t;
    assert!(denominator > 1e-12 * (1.0 + sum_tt.abs()), "the sample abscissae must differ");
    let slope = (n * sum_tv - sum_t * sum_v) / denominator;
    let intercept = (sum_v - slope * sum_t) / n;
    let residual =
        points.iter().map(|(t, v)| (v - intercept - slope * t).abs()).fold(0.0, f64::max);
    SlopeFit { slope, residual }
}

/// Samples of `h(v,v)` along a horizontal ray together with the fitted
/// exponent of `|Re z|`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthCheck {
    pub fit: SlopeFit,
    pub samples: Vec<(f64, f64)>,
}

/// Samples `h(v,v)(x + i y)` on the grid and fits `log h` against
/// `log |x|`. For `v` in the relative weight-`k` step but not the one
/// below, the slope approaches `k`.
pub fn growth_exponent(
    model: &ModelVariation,
    v: &[Scalar],
    x_grid: &[f64],
    y: f64,
) -> Result<GrowthCheck, AsymptoticsError> {
    assert_eq!(v.len(), model.base().dim(), "vector length differs");
    let numeric: Vec<NumericScalar> = v.iter().map(to_numeric).collect();
    assert!(
        numeric.iter().any(|c| c.norm_sqr() > 0.0),
        "the growth exponent needs a nonzero vector"
    );
    if x_grid.len() < 2 {
        return Err(AsymptoticsError::DegenerateGrid("the fit needs at least two sample points"));
    }
    let mut samples = Vec::with_capacity(x_grid.len());
    let mut points = Vec::with_capacity(x_grid.len());
    for &x in x_grid {
        let gram = metric_at(model, Complex::new(x, y))?;
        let image = gram.mul_vec(&numeric);
        let value: NumericScalar = numeric.iter().zip(&image).map(|(a, b)| a.conj() * b).sum();
        assert!(value.re > 0.0, "the Hodge metric is positive on nonzero vectors");
        samples.push((x, value.re));
        points.push((x.abs().ln(), value.re.ln()));
    }
    let spread = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)
        - points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    if spread <= 1e-9 {
        return Err(AsymptoticsError::DegenerateGrid("the sample moduli must differ"));
    }
    Ok(GrowthCheck { fit: fit_line(&points), samples })
}

/// The squared metric norm of the derivative of the model period mapping
/// at `z`, its ceiling, and their gap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HiggsCheck {
    pub value: f64,
    pub bound: f64,
    pub equality_gap: f64,
}

/// Checks the curvature-type bound on the derivative of the period map:
/// its squared Hilbert-Schmidt norm at `z` equals `|x|^{-2}` times the
/// squared norm of the lowering component of `Y` in the twisted limit
/// metric, and is bounded by `C_0^2 / x^2` where `4 C_0^2` is the number
/// of triples from `dim + 1` letters. The gap is asserted nonnegative.
pub fn higgs_norm_check(
    model: &ModelVariation,
    z: NumericScalar,
) -> Result<HiggsCheck, AsymptoticsError> {
    let x = z.re;
    if x.is_nan() || x >= 0.0 {
        return Err(AsymptoticsError::OutsideLeftHalfPlane);
    }
    let base = model.base();
    let (_, hs_sharp, _) = associated_pure_structure(base);
    let gram = hodge_gram(&hs_sharp);
    let (y_lower, _, _) = hxy_hodge_components(base);
    // Squared Hilbert-Schmidt norm tr(G^{-1} A^H G A), exactly.
    let conjugated = &(gram.inverse_matrix() * &y_lower.dagger()) * &(gram.matrix() * &y_lower);
    let squared = conjugated.trace();
    assert!(squared.im.is_zero(), "a squared norm is real");
    let value = rat_to_f64(&squared.re) / (x * x);
    let (_, _, c_zero) = monodromy_constants(model.datum());
    let bound = (c_zero * c_zero) / (x * x);
    let equality_gap = bound - value;
    assert!(equality_gap >= -1e-12 * (1.0 + bound), "the derivative norm exceeds its ceiling");
    Ok(HiggsCheck { value, bound, equality_gap })
}

/// Membership of one grid point of a flowed filtration in the polarized
/// period domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    /// `exp(z N) F` is the filtration of a Hodge structure polarized by Q.
    InDomain,
    /// The flowed filtration does not split into Hodge pieces.
    DecompositionFails,
    /// The pieces exist but a polarization sign fails.
    NotPolarized,
    /// The grid point has no rational representative under the cap, so no
    /// exact decision was made.
    Indeterminate,
}

/// One scanned grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitSample {
    pub x: f64,
    pub y: f64,
    pub status: OrbitStatus,
}

/// Decides membership of `exp(z N) F` in the polarized period domain at
/// every grid point `z = x + i y`. Each coordinate is rounded to a
/// rational once; the flow, the filtration, and the membership test are
/// exact from there on. Grid points are mutually independent, so callers
/// may shard the grid.
pub fn nilpotent_orbit_scan(
    f_lim: &Filtration,
    n_op: &Mat,
    q: &Pairing,
    weight: i64,
    x_grid: &[f64],
    y_grid: &[f64],
) -> Result<Vec<OrbitSample>, AsymptoticsError> {
    if x_grid.is_empty() || y_grid.is_empty() {
        return Err(AsymptoticsError::DegenerateGrid("the scan grid is empty"));
    }
    if x_grid.iter().any(|&x| x.is_nan() || x >= 0.0) {
        return Err(AsymptoticsError::DegenerateGrid("scan points need negative real parts"));
    }
    nilpotency_index(n_op).ok_or(AsymptoticsError::NotNilpotent)?;
    let mut out = Vec::with_capacity(x_grid.len() * y_grid.len());
    for &x in x_grid {
        for &y in y_grid {
            let status = match (rationalize(x), rationalize(y)) {
                (Some(xr), Some(yr)) => {
                    let flow =
                        nilpotent_exp(n_op, &Scalar::new(xr, yr)).expect("nilpotency was checked");
                    let moved = f_lim.apply(&flow).expect("the exponential is invertible");
                    match build_hodge_structure(&moved, q, weight) {
                        Ok(_) => OrbitStatus::InDomain,
                        Err(HodgeError::DecompositionFails) => OrbitStatus::DecompositionFails,
                        Err(HodgeError::NotPolarized { .. }) => OrbitStatus::NotPolarized,
                    }
                }
                _ => OrbitStatus::Indeterminate,
            };
            out.push(OrbitSample { x, y, status });
        }
    }
    Ok(out)
}

/// Samples of a rescaled inner product along `u`, the expected decay rate,
/// and the fitted rate when enough samples rise above the noise floor.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayCheck {
    pub expected_rate: i64,
    pub fit: Option<SlopeFit>,
    pub samples: Vec<(f64, f64)>,
}

/// The integer eigenvalue of `h` on `v`, or `None` when `v` is not an
/// exact eigenvector with integer eigenvalue.
fn grading_weight(h: &Mat, v: &[Scalar]) -> Option<i64> {
    let image = h.mul_vec(v);
    let position = v.iter().position(|c| !c.is_zero())?;
    let eigenvalue = &image[position] / &v[position];
    if !eigenvalue.im.is_zero() || !eigenvalue.re.is_integer() {
        return None;
    }
    for (lhs, rhs) in image.iter().zip(v) {
        if *lhs != rhs * &eigenvalue {
            return None;
        }
    }
    eigenvalue.re.to_integer().to_i64()
}

/// Checks the decay of the twisted-limit inner product of two grading
/// eigenvectors under the rescaling flow: with `g(u) = exp(-B(u))`, the
/// product `⟨g(u) v, g(u) w⟩` in the twisted limit metric is `O(u^{|k-l|})`
/// for eigenvalues `k` and `l`, so the fitted slope is at least `|k-l|`.
/// Samples below the relative noise floor are excluded from the fit; `fit`
/// is `None` when fewer than two remain.
pub fn rescaled_decay_check(
    pkg: &LimitPackage,
    v: &[Scalar],
    w: &[Scalar],
    u_grid: &[f64],
) -> Result<DecayCheck, AsymptoticsError> {
    assert!(!pkg.b_coeffs.is_empty(), "the comparison series has not been computed");
    let dim = pkg.pairing.dim();
    assert!(v.len() == dim && w.len() == dim, "vector length differs");
    let k_v = grading_weight(&pkg.grading, v)
        .expect("the decay check needs exact eigenvectors of the grading");
    let k_w = grading_weight(&pkg.grading, w)
        .expect("the decay check needs exact eigenvectors of the grading");
    let expected_rate = (k_v - k_w).abs();
    if u_grid.is_empty() || u_grid.iter().any(|&u| !u.is_finite() || u <= 0.0) {
        return Err(AsymptoticsError::DegenerateGrid("the rescaling parameters must be positive"));
    }

    let hs_sharp = build_hodge_structure(&pkg.f_sharp, &pkg.pairing, pkg.weight)
        .expect("the package carries a polarized twisted limit");
    let gram = NumericMat::from_exact(hodge_gram(&hs_sharp).matrix());
    let coefficients: Vec<(usize, NumericMat)> =
        pkg.b_coeffs.iter().map(|(k, m)| (*k, NumericMat::from_exact(m))).collect();
    let v_numeric: Vec<NumericScalar> = v.iter().map(to_numeric).collect();
    let w_numeric: Vec<NumericScalar> = w.iter().map(to_numeric).collect();
    let v_norm: f64 = v_numeric.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let w_norm: f64 = w_numeric.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let floor = 1e-13 * gram.frobenius_norm() * v_norm * w_norm;

    let mut samples = Vec::with_capacity(u_grid.len());
    let mut points = Vec::new();
    for &u in u_grid {
        let mut series = NumericMat::zeros(dim, dim);
        for (k, coefficient) in &coefficients {
            let power = Complex::new(Float::powi(u, *k as i32), 0.0);
            series = &series + &coefficient.scale(power);
        }
        let rescaling = numeric_exp(&-&series);
        let left = rescaling.mul_vec(&v_numeric);
        let right = rescaling.mul_vec(&w_numeric);
        let through = gram.mul_vec(&left);
        let value: NumericScalar = right.iter().zip(&through).map(|(a, b)| a.conj() * b).sum();
        let magnitude = value.norm_sqr().sqrt();
        samples.push((u, magnitude));
        if magnitude > floor {
            points.push((u.ln(), magnitude.ln()));
        }
    }
    let spread = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)
        - points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let fit = if points.len() >= 2 && spread > 1e-9 { Some(fit_line(&points)) } else { None };
    Ok(DecayCheck { expected_rate, fit, samples })
}

/// Evaluates both sides of the commutator inequality for a nilpotent
/// matrix `A` of size `r`: returns
/// `(‖[A*,A]‖², 2‖A‖⁴, binom(r+1,3)·‖[A*,A]‖²)`, which is a nondecreasing
/// chain, in Frobenius norms with `A*` the conjugate transpose. When
/// `assert_nilpotent` is set, nilpotency is required to working precision
/// and the chain is asserted; without it the numbers are only reported,
/// since the chain can fail for non-nilpotent input.
pub fn commutator_inequality_check(
    a: &NumericMat,
    assert_nilpotent: bool,
) -> Result<(f64, f64, f64), AsymptoticsError> {
    assert!(a.rows == a.cols, "the check needs a square matrix");
    let r = a.rows;
    let norm = a.frobenius_norm();
    if assert_nilpotent && norm > 0.0 {
        let unit = a.scale(Complex::new(1.0 / norm, 0.0));
        let mut power = unit.clone();
        for _ in 1..r {
            power = &power * &unit;
        }
        if power.frobenius_norm() > 1e-8 {
            return Err(AsymptoticsError::NotNilpotent);
        }
    }
    let adjoint = a.dagger();
    let bracket = &(&adjoint * a) - &(a * &adjoint);
    let lhs = bracket.frobenius_norm().powi(2);
    let mid = 2.0 * norm.powi(4);
    let cap = ((r + 1) * r * r.saturating_sub(1)) as f64 / 6.0;
    let rhs = cap * lhs;
    if assert_nilpotent {
        let tolerance = 1e-9 * (1.0 + mid);
        assert!(lhs <= mid + tolerance, "the bracket norm is bounded by twice the fourth power");
        assert!(mid <= rhs + tolerance, "the fourth power is bounded by the triple count");
    }
    Ok((lhs, mid, rhs))
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use num_traits::{One, Zero};

    use super::*;
    use crate::exact::kernel_basis;
    use crate::sl2hodge::{build_model_variation, direct_sum, irreducible_model, type_twist};

    fn e(n: usize, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); n];
        v[i] = Scalar::one();
        v
    }

    fn span(vectors: &[Vec<Scalar>]) -> Subspace {
        Subspace::from_vectors(vectors[0].len(), vectors)
    }

    fn untwisted(m: usize) -> ModelVariation {
        let base = irreducible_model(m);
        let twist = Mat::zeros(base.dim(), base.dim());
        build_model_variation(&base, &twist).expect("the zero twist is admissible")
    }

    fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        (0..count)
            .map(|i| -Float::powf(10.0f64, lo + (hi - lo) * i as f64 / (count - 1) as f64))
            .collect()
    }

    #[test]
    fn rational_to_float_rounds_once() {
        assert_eq!(rat_to_f64(&rat(1, 2)), 0.5);
        assert_eq!(rat_to_f64(&rat(-7, 4)), -1.75);
        assert!((rat_to_f64(&rat(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
        let big = rat(1, 1) * Rat::from_float(1e300).unwrap() * rat(3, 7);
        assert!((rat_to_f64(&big) / (3e300 / 7.0) - 1.0).abs() < 1e-15);
        assert_eq!(rat_to_f64(&Rat::zero()), 0.0);
    }

    #[test]
    fn rationalization_respects_cap_and_tolerance() {
        assert_eq!(rationalize(0.5), Some(rat(1, 2)));
        assert_eq!(rationalize(1.0 / 3.0), Some(rat(1, 3)));
        assert_eq!(rationalize(-2.0), Some(rat(-2, 1)));
        // Within 1e-7 of pi the simplest fraction still has a modest
        // denominator; the result must land in the wide window.
        let pi = rationalize(core::f64::consts::PI).expect("pi rounds under the cap");
        let gap = rat_to_f64(&pi) - core::f64::consts::PI;
        assert!(gap.abs() <= 1e-7);
        assert!(pi.denom() <= &BigInt::from(1_000_000));
        // Just past a simple fraction, every candidate in both windows
        // needs a denominator beyond the cap.
        assert_eq!(rationalize(0.5 + 2e-7), None);
        assert_eq!(rationalize(f64::NAN), None);
    }

    #[test]
    fn semisimple_limit_matches_the_flow() {
        // S = [[1,1],[0,2]]: eigenvalue 1 on e_0, eigenvalue 2 on (1,1).
        let s = Mat::from_int_rows(&[&[1, 1], &[0, 2]]);
        let spectrum =
            vec![(rat(1, 1), span(&[e(2, 0)])), (rat(2, 1), span(&[vec![int(1), int(1)]]))];
        let f = Filtration::from_steps(
            crate::exact::Direction::Decreasing,
            2,
            vec![
                (0, Subspace::full(2)),
                (1, span(&[vec![int(1), int(2)]])),
                (2, Subspace::zero(2)),
            ],
        )
        .unwrap();

        let plus = semisimple_limit(&spectrum, &f, LimitSign::Plus).unwrap();
        assert_eq!(plus.step(1), &span(&[vec![int(1), int(1)]]));
        let minus = semisimple_limit(&spectrum, &f, LimitSign::Minus).unwrap();
        assert_eq!(minus.step(1), &span(&[e(2, 0)]));
        // Idempotence: the limits are fixed by the flow.
        assert_eq!(semisimple_limit(&spectrum, &plus, LimitSign::Plus).unwrap(), plus);
        assert_eq!(semisimple_limit(&spectrum, &minus, LimitSign::Minus).unwrap(), minus);

        // Numeric oracle: exp(x S) applied to the step basis converges to
        // the computed limit span as x grows.
        for (sign, limit) in [(40.0, &plus), (-40.0, &minus)] {
            let flow = numeric_exp(&NumericMat::from_exact(&s).scale(Complex::new(sign, 0.0)));
            let moved = &flow * &NumericMat::from_exact(f.step(1).basis());
            let target = NumericMat::from_exact(limit.step(1).basis());
            assert!(span_distance(&moved, &target) < 1e-10);
        }

        let overlapping =
            vec![(rat(0, 1), span(&[e(2, 0)])), (rat(1, 1), span(&[e(2, 0), e(2, 1)]))];
        assert_eq!(
            semisimple_limit(&overlapping, &f, LimitSign::Plus),
            Err(AsymptoticsError::SpectrumNotDecomposition)
        );
    }

    #[test]
    fn model_limits_fix_the_total_filtration() {
        let model = untwisted(2);
        let pkg = model_limit_filtrations(&model).unwrap();
        assert_eq!(pkg.grading(), model.base().triple().h());
        assert_eq!(pkg.f_lim(), model.base().total_filtration());
        assert_eq!(pkg.f_h(), model.base().total_filtration());
        let (f_sharp, _, _) = associated_pure_structure(model.base());
        assert_eq!(pkg.f_sharp(), &f_sharp);
        assert!(pkg.b_coeffs().is_empty());

        // The canonical grading of the datum agrees for an irreducible
        // model, where the grading is unique.
        let from_datum = limit_filtrations(model.datum()).unwrap();
        assert_eq!(from_datum.grading(), pkg.grading());
        assert_eq!(from_datum.f_h(), pkg.f_h());
    }

    #[test]
    fn negated_pairing_is_rejected_as_unpolarized() {
        let base = irreducible_model(2);
        let q = base.pairing().matrix().scale(&int(-1));
        let n = base.triple().y().scale(&int(-1));
        let datum =
            DegenerationDatum::unipotent(q, n, Some(base.total_filtration().clone()), 2).unwrap();
        assert_eq!(
            limit_filtrations(&datum).err(),
            Some(AsymptoticsError::InvalidLimitDatum(
                "the twisted limit filtration is not polarized"
            ))
        );
    }

    fn nilpotent_shift_datum() -> (ModelVariation, DegenerationDatum) {
        // The limit filtration exp(N) F_total of the irreducible model of
        // weight 2: straightening recovers F_total, and the comparison is
        // h = 1 + N with the single graded coefficient h_2 = N.
        let model = untwisted(2);
        let base = model.base();
        let n = base.triple().y().scale(&int(-1));
        let flow = nilpotent_exp(&n, &int(1)).unwrap();
        let f_lim = base.total_filtration().apply(&flow).unwrap();
        let datum =
            DegenerationDatum::unipotent(base.pairing().matrix().clone(), n, Some(f_lim), 2)
                .unwrap();
        (model, datum)
    }

    #[test]
    fn comparison_series_of_a_shifted_model() {
        let (model, datum) = nilpotent_shift_datum();
        let base = model.base();
        let n = base.triple().y().scale(&int(-1));
        let pkg = limit_filtrations(&datum).unwrap();
        assert_eq!(pkg.grading(), base.triple().h());
        assert_eq!(pkg.f_h(), base.total_filtration());
        assert_ne!(pkg.f_lim(), pkg.f_h());

        let pkg = cheap_sl2_series(&pkg, base.pairing().matrix(), &n, 6).unwrap();
        // h is exp(N) itself: the canonical representatives of the graded
        // pieces are their images under the flow.
        assert_eq!(pkg.h_coeffs().len(), 2);
        assert_eq!(pkg.h_coeffs()[&2], n);
        assert_eq!(pkg.h_coeffs()[&4], (&n * &n).scale(&scalar_from_rat(rat(1, 2))));
        assert!(pkg.b_coeffs()[&1].is_zero());
        assert!(pkg.c_coeffs()[&1].is_zero());
        // In degree two the remainder is N itself and the transverse part
        // keeps only the lowering Hodge component and its mirror.
        let (y_lower, _, _) = hxy_hodge_components(base);
        let expected = &base.pairing().adjoint(&y_lower) - &y_lower;
        assert!(!expected.is_zero());
        assert_eq!(pkg.b_coeffs()[&2], expected);
        assert_eq!(pkg.c_coeffs()[&2], &expected - &n);
    }

    #[test]
    fn rescaling_tracks_the_straightened_flow() {
        // exp(-N) exp(-(log u) H) F_lim agrees with exp(B(u)) F_♯ up to
        // the truncation order.
        let (model, datum) = nilpotent_shift_datum();
        let base = model.base();
        let n = base.triple().y().scale(&int(-1));
        let pkg = limit_filtrations(&datum).unwrap();
        let pkg = cheap_sl2_series(&pkg, base.pairing().matrix(), &n, 12).unwrap();
        let dim = base.dim();

        let shrink = NumericMat::from_exact(&nilpotent_exp(&n, &int(-1)).unwrap());
        let projectors = integer_eigenprojections(pkg.grading()).unwrap();
        for &u in &[0.1f64, 0.05] {
            let mut unstretch = NumericMat::zeros(dim, dim);
            for (k, projector) in &projectors {
                let factor = Complex::new(Float::powi(u, -(*k) as i32), 0.0);
                unstretch = &unstretch + &NumericMat::from_exact(projector).scale(factor);
            }
            let mut series = NumericMat::zeros(dim, dim);
            for (k, coefficient) in pkg.b_coeffs() {
                let power = Complex::new(Float::powi(u, *k as i32), 0.0);
                series = &series + &NumericMat::from_exact(coefficient).scale(power);
            }
            let gauge = numeric_exp(&series);
            for p in pkg.f_lim().jump_indices() {
                let left =
                    &(&shrink * &unstretch) * &NumericMat::from_exact(pkg.f_lim().step(p).basis());
                let right = &gauge * &NumericMat::from_exact(pkg.f_sharp().step(p).basis());
                assert!(span_distance(&left, &right) < 1e-8);
            }
        }
    }

    // A weight-2 sum with grading parities 1 and 0, with limit filtration
    // moved off the total filtration by a degree-one lowering operator
    // mixing the summands: the comparison series starts in degree one.
    fn mixed_parity_datum() -> (crate::sl2hodge::Sl2HodgeStructure, DegenerationDatum) {
        let left = type_twist(&irreducible_model(1), 1, 0);
        let right = irreducible_model(2);
        let s = direct_sum(&left, &right);
        let dim = s.dim();
        let h = s.triple().h().clone();
        let n = s.triple().y().scale(&int(-1));
        let identity = Mat::identity(dim);

        // A grading-lowering operator of degree one commuting with N, with
        // a component mapping the first summand into the second so that it
        // moves the total filtration.
        let ad_h = &kronecker(&identity, &h) - &kronecker(&h.transpose(), &identity);
        let ad_n = &kronecker(&identity, &n) - &kronecker(&n.transpose(), &identity);
        let constraints = Mat::vstack(&[&(&ad_h + &Mat::identity(dim * dim)), &ad_n]);
        let kernel = kernel_basis(&constraints);
        let mut lowering = None;
        for column in 0..kernel.cols() {
            let candidate = Mat::from_vec_columns(dim, dim, &kernel.column(column));
            let crosses =
                (left.dim()..dim).any(|i| (0..left.dim()).any(|j| !candidate.at(i, j).is_zero()));
            if crosses {
                lowering = Some(candidate);
                break;
            }
        }
        let lowering = lowering.expect("a lowering operator crosses the summands");

        let f_lim = s.total_filtration().apply(&(&identity + &lowering)).unwrap();
        let datum =
            DegenerationDatum::unipotent(s.pairing().matrix().clone(), n, Some(f_lim), 2).unwrap();
        (s, datum)
    }

    #[test]
    fn first_order_coefficients_split_the_first_graded_piece() {
        let (s, datum) = mixed_parity_datum();
        let n = s.triple().y().scale(&int(-1));
        let pkg = limit_filtrations(&datum).unwrap();
        assert_eq!(pkg.grading(), s.triple().h());
        assert_ne!(pkg.f_lim(), pkg.f_h());

        let pkg = cheap_sl2_series(&pkg, s.pairing().matrix(), &n, 4).unwrap();
        let h_1 = pkg.h_coeffs().get(&1).expect("the comparison has a degree-one term");
        assert!(!h_1.is_zero());
        assert_eq!(pkg.b_coeffs()[&1], h_1 + &pkg.c_coeffs()[&1]);
    }

    #[test]
    fn metric_of_the_weight_one_model_in_closed_form() {
        // G(z) = [[|x| + y^2/|x|, -i y/|x|], [i y/|x|, 1/|x|]].
        let model = untwisted(1);
        for (x, y) in [(-3.0f64, 0.7f64), (-100.0, core::f64::consts::PI)] {
            let g = metric_at(&model, Complex::new(x, y)).unwrap();
            let modulus = x.abs();
            assert!(
                (g.at(0, 0) - Complex::new(modulus + y * y / modulus, 0.0)).norm_sqr().sqrt()
                    < 1e-12 * modulus
            );
            assert!((g.at(0, 1) - Complex::new(0.0, -y / modulus)).norm_sqr().sqrt() < 1e-12);
            assert!((g.at(1, 0) - Complex::new(0.0, y / modulus)).norm_sqr().sqrt() < 1e-12);
            assert!((g.at(1, 1) - Complex::new(1.0 / modulus, 0.0)).norm_sqr().sqrt() < 1e-12);
        }
        assert_eq!(
            metric_at(&model, Complex::new(0.5, 0.0)),
            Err(AsymptoticsError::OutsideLeftHalfPlane)
        );
    }

    #[test]
    fn growth_exponents_recover_relative_weights() {
        let grid = log_grid(2.0, 6.0, 25);
        let model = untwisted(2);
        let cases: [(usize, f64); 3] = [(0, 2.0), (1, 0.0), (2, -2.0)];
        for (index, expected) in cases {
            for y in [0.0, 1.0, core::f64::consts::PI] {
                let check = growth_exponent(&model, &e(3, index), &grid, y).unwrap();
                assert!(
                    (check.fit.slope - expected).abs() < 0.05,
                    "slope {} for index {}",
                    check.fit.slope,
                    index
                );
            }
        }
        // A mixed vector grows like its top weight component.
        let mixed: Vec<Scalar> = vec![int(1), Scalar::zero(), int(1)];
        let check = growth_exponent(&model, &mixed, &grid, 1.0).unwrap();
        assert!((check.fit.slope - 2.0).abs() < 0.05);

        assert_eq!(
            growth_exponent(&model, &e(3, 0), &[-10.0], 0.0),
            Err(AsymptoticsError::DegenerateGrid("the fit needs at least two sample points"))
        );
    }

    #[test]
    fn derivative_bound_is_sharp_for_irreducible_models() {
        for m in [1usize, 2] {
            let model = untwisted(m);
            let check = higgs_norm_check(&model, Complex::new(-5.0, 2.0)).unwrap();
            assert!(check.equality_gap.abs() < 1e-12 * (1.0 + check.bound));
            let expected = match m {
                1 => 0.25,
                _ => 1.0,
            };
            assert!((check.value * 25.0 - expected).abs() < 1e-12);
        }
        // A reducible model stays strictly below the ceiling.
        let sum = direct_sum(&type_twist(&irreducible_model(1), 1, 0), &irreducible_model(2));
        let twist = Mat::zeros(sum.dim(), sum.dim());
        let model = build_model_variation(&sum, &twist).unwrap();
        let check = higgs_norm_check(&model, Complex::new(-2.0, 0.0)).unwrap();
        assert!(check.equality_gap > 1e-3);
    }

    fn inverse_monodromy(d: &DegenerationDatum) -> NumericMat {
        // T^{-1} = Σ_α e^{-2πiα} P_α · exp(-2πi N), from the exact angle
        // projectors.
        let dim = d.dim();
        let projectors = spectral_projectors(d.ts_spectrum()).expect("angles decompose");
        let mut semisimple = NumericMat::zeros(dim, dim);
        for ((angle, _), projector) in d.ts_spectrum().iter().zip(&projectors) {
            let theta = 2.0 * core::f64::consts::PI * rat_to_f64(angle);
            let phase = Complex::new(theta.cos(), -theta.sin());
            semisimple = &semisimple + &NumericMat::from_exact(projector).scale(phase);
        }
        let unipotent = numeric_exp(
            &NumericMat::from_exact(d.nilpotent())
                .scale(Complex::new(0.0, -2.0 * core::f64::consts::PI)),
        );
        &semisimple * &unipotent
    }

    #[test]
    fn gram_matrices_translate_by_the_monodromy() {
        // G(z + 2πi) agrees with the pullback of G(z) along T^{-1}.
        let plain = untwisted(1);
        let sum = direct_sum(&irreducible_model(1), &irreducible_model(1));
        let mut twist = Mat::zeros(4, 4);
        twist.set(0, 0, scalar_from_rat(rat(1, 3)));
        twist.set(1, 1, scalar_from_rat(rat(1, 3)));
        let twisted = build_model_variation(&sum, &twist).unwrap();
        for model in [&plain, &twisted] {
            let z = Complex::new(-3.0, 0.7);
            let shifted = z + Complex::new(0.0, 2.0 * core::f64::consts::PI);
            let before = metric_at(model, z).unwrap();
            let after = metric_at(model, shifted).unwrap();
            let back = inverse_monodromy(model.datum());
            let pulled = &(&back.dagger() * &before) * &back;
            let gap = (&after - &pulled).max_entry_norm();
            assert!(gap < 1e-9 * (1.0 + after.max_entry_norm()), "translation gap {}", gap);
        }
    }

    #[test]
    fn orbit_scan_separates_the_domain_boundary() {
        // Flowing exp(N) F_total: at z = -1 the flow lands back on the
        // total filtration, which is not pure; further left it enters the
        // domain.
        let base = irreducible_model(2);
        let n = base.triple().y().scale(&int(-1));
        let flow = nilpotent_exp(&n, &int(1)).unwrap();
        let f = base.total_filtration().apply(&flow).unwrap();
        let q = base.pairing();
        let samples = nilpotent_orbit_scan(&f, &n, q, 2, &[-1.0, -3.0], &[0.0]).unwrap();
        assert_eq!(samples[0].status, OrbitStatus::DecompositionFails);
        assert_eq!(samples[1].status, OrbitStatus::InDomain);

        // A negated pairing flips every polarization sign.
        let negated = Pairing::new(q.matrix().scale(&int(-1))).unwrap();
        let samples = nilpotent_orbit_scan(&f, &n, &negated, 2, &[-3.0], &[0.0]).unwrap();
        assert_eq!(samples[0].status, OrbitStatus::NotPolarized);

        // Grid points without a representative under the cap stay open.
        let samples = nilpotent_orbit_scan(&f, &n, q, 2, &[-(0.5 + 2e-7)], &[0.0]).unwrap();
        assert_eq!(samples[0].status, OrbitStatus::Indeterminate);

        // The model orbit lies in the domain on the whole left half plane.
        let f_total = base.total_filtration();
        let samples =
            nilpotent_orbit_scan(f_total, &n, q, 2, &[-0.5, -2.0, -40.0], &[0.0, 1.0]).unwrap();
        assert!(samples.iter().all(|s| s.status == OrbitStatus::InDomain));

        assert_eq!(
            nilpotent_orbit_scan(f_total, &n, q, 2, &[1.0], &[0.0]),
            Err(AsymptoticsError::DegenerateGrid("scan points need negative real parts"))
        );
    }

    #[test]
    fn rescaled_products_decay_at_the_expected_rate() {
        let (s, datum) = mixed_parity_datum();
        let n = s.triple().y().scale(&int(-1));
        let pkg = limit_filtrations(&datum).unwrap();
        let pkg = cheap_sl2_series(&pkg, s.pairing().matrix(), &n, 8).unwrap();
        let grid = [0.1f64, 0.05, 0.02, 0.01];

        // Grading weights on the sum are (1, -1, 2, 0, -2); on this datum
        // the decay bound is attained, so the slope matches the gap.
        for (i, j, rate) in [(2usize, 4usize, 4i64), (0, 4, 3), (1, 0, 2), (0, 2, 1)] {
            let check = rescaled_decay_check(&pkg, &e(5, i), &e(5, j), &grid).unwrap();
            assert_eq!(check.expected_rate, rate);
            let fit = check.fit.expect("the product does not vanish identically");
            assert!((fit.slope - rate as f64).abs() < 0.1, "slope {} for rate {}", fit.slope, rate);
        }

        // Orthogonal weight spaces of an untouched model pair to zero for
        // every u, so no rate can be fitted.
        let model = untwisted(2);
        let n = model.base().triple().y().scale(&int(-1));
        let plain = model_limit_filtrations(&model).unwrap();
        let plain = cheap_sl2_series(&plain, model.base().pairing().matrix(), &n, 4).unwrap();
        let silent = rescaled_decay_check(&plain, &e(3, 0), &e(3, 2), &grid).unwrap();
        assert!(silent.fit.is_none());

        assert_eq!(
            rescaled_decay_check(&pkg, &e(5, 0), &e(5, 2), &[]),
            Err(AsymptoticsError::DegenerateGrid("the rescaling parameters must be positive"))
        );
    }

    #[test]
    fn commutator_chain_and_its_equality_cases() {
        // The irreducible pattern with |a_{k,k+1}|^2 = k(r-k) makes both
        // inequalities sharp for r = 2 and the second sharp for r = 3.
        let mut two = NumericMat::zeros(2, 2);
        two.set(0, 1, Complex::new(1.0, 0.0));
        let (lhs, mid, rhs) = commutator_inequality_check(&two, true).unwrap();
        assert!((lhs - 2.0).abs() < 1e-12 && (mid - 2.0).abs() < 1e-12);
        assert!((rhs - 2.0).abs() < 1e-12);

        let mut three = NumericMat::zeros(3, 3);
        three.set(0, 1, Complex::new(2.0f64.sqrt(), 0.0));
        three.set(1, 2, Complex::new(2.0f64.sqrt(), 0.0));
        let (lhs, mid, rhs) = commutator_inequality_check(&three, true).unwrap();
        assert!((lhs - 8.0).abs() < 1e-10);
        assert!((mid - 32.0).abs() < 1e-10);
        assert!((rhs - 32.0).abs() < 1e-10);

        // A strictly upper triangular matrix passes the nilpotency gate.
        let mut upper = NumericMat::zeros(4, 4);
        upper.set(0, 1, Complex::new(0.3, -1.2));
        upper.set(0, 3, Complex::new(-2.0, 0.4));
        upper.set(1, 2, Complex::new(0.0, 5.0));
        upper.set(2, 3, Complex::new(1.0, 1.0));
        let (lhs, mid, rhs) = commutator_inequality_check(&upper, true).unwrap();
        assert!(lhs <= mid && mid <= rhs);

        assert_eq!(
            commutator_inequality_check(&NumericMat::identity(3), true),
            Err(AsymptoticsError::NotNilpotent)
        );
        // Without the gate the numbers are reported even when the chain
        // fails, as it does for the identity.
        let (lhs, mid, rhs) = commutator_inequality_check(&NumericMat::identity(3), false).unwrap();
        assert_eq!(lhs, 0.0);
        assert!(mid > rhs);
    }

    #[test]
    fn span_distance_separates_spans() {
        let mut a = NumericMat::zeros(3, 1);
        a.set(0, 0, Complex::new(1.0, 0.0));
        let mut b = NumericMat::zeros(3, 1);
        b.set(0, 0, Complex::new(0.0, 5.0));
        assert!(span_distance(&a, &b) < 1e-14);
        let mut c = NumericMat::zeros(3, 1);
        c.set(1, 0, Complex::new(1.0, 0.0));
        assert!((span_distance(&a, &c) - 2.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn default_order_follows_the_nilpotency_index() {
        let n = irreducible_model(3).triple().y().scale(&int(-1));
        assert_eq!(default_series_order(&n), 8);
        assert_eq!(default_series_order(&Mat::zeros(2, 2)), 2);
    }
}
