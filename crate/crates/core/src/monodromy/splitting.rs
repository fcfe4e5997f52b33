//! The grading splitting H of the weight filtration: semisimple with
//! integer eigenvalues, `[H,N] = -2N`, `W_k = E_k(H) ⊕ W_{k-1}`, `H† = -H`,
//! and `[H,T_s] = 0`.
//!
//! Construction: a deterministic Jordan basis of N yields an initial
//! grading H_0; the unique `B` in negative ad-H_0 degrees with
//! `e^B H_0 e^{-B} = -H_0†` is solved degree by degree; then
//! `H = e^{B/2} H_0 e^{-B/2}` is balanced. The whole procedure runs inside
//! each eigenspace of the semisimple part so that H commutes with it.

use alloc::vec::Vec;

use crate::exact::{
    commutator, int, inverse, nilpotent_exp, rat, scalar_from_rat, solve_matrix, Mat, Pairing,
    Scalar, Subspace,
};

use super::{integer_eigenprojections, nilpotency_index, weight_filtration, DegenerationDatum};

/// Computes the grading splitting of a datum. All postconditions are
/// asserted exactly; a splitting exists for every valid datum, so a
/// failure here means the datum invariants were violated.
pub fn grading_splitting(d: &DegenerationDatum) -> Mat {
    let dim = d.dim();
    let bases: Vec<&Mat> = d.ts_spectrum().iter().map(|(_, s)| s.basis()).collect();
    let change = Mat::hstack(&bases);
    let change_inv = inverse(&change).expect("eigenspaces decompose the space");

    let mut blocks = Mat::zeros(dim, dim);
    let mut offset = 0;
    for (_, space) in d.ts_spectrum() {
        let basis = space.basis();
        let block_dim = basis.cols();
        let n_local =
            solve_matrix(basis, &(d.nilpotent() * basis)).expect("N preserves each eigenspace");
        let q_local = d.pairing().restrict(space).expect("Q restricts nondegenerately");
        let h_local = splitting_for_block(&n_local, &q_local);
        for i in 0..block_dim {
            for j in 0..block_dim {
                blocks.set(offset + i, offset + j, h_local.at(i, j).clone());
            }
        }
        offset += block_dim;
    }
    let h = &(&change * &blocks) * &change_inv;

    assert_eq!(
        commutator(&h, d.nilpotent()),
        d.nilpotent().scale(&int(-2)),
        "splitting must satisfy [H,N] = -2N"
    );
    assert_eq!(d.pairing().adjoint(&h), -&h, "splitting must satisfy H† = -H");
    for (_, space) in d.ts_spectrum() {
        assert!(
            space.contains(&space.image_under(&h)),
            "splitting must commute with the semisimple part"
        );
    }
    assert_splits_weight_filtration(&h, d.nilpotent());
    h
}

/// The construction on a single block, where the semisimple part is scalar.
fn splitting_for_block(n: &Mat, q: &Pairing) -> Mat {
    let h0 = jordan_grading(n);
    let target = -&q.adjoint(&h0);
    let b = solve_degreewise(&h0, &target);
    assert!(
        commutator(&b, n).is_zero(),
        "grading correction fails to commute with N; the construction's \
         commutation assumption is violated for this input"
    );
    let half = scalar_from_rat(rat(1, 2));
    let minus_half = scalar_from_rat(rat(-1, 2));
    let g = nilpotent_exp(&b, &half).expect("correction is nilpotent");
    let g_inv = nilpotent_exp(&b, &minus_half).expect("correction is nilpotent");
    &(&g * &h0) * &g_inv
}

/// Initial grading from a deterministic Jordan basis: chains are selected
/// from largest block size down, and within a stage the canonical echelon
/// basis of `ker N^s` is scanned in pivot order. Each chain vector `N^j t`
/// of a size-s chain gets weight `s - 1 - 2j`.
fn jordan_grading(n: &Mat) -> Mat {
    let dim = n.rows();
    if dim == 0 {
        return n.clone();
    }
    let m = nilpotency_index(n).expect("block operator is nilpotent");
    let kernels: Vec<Subspace> = (0..=m + 1)
        .map(|s| {
            let power = n.pow(s);
            Subspace::from_mat(dim, &crate::exact::kernel_basis(&power))
        })
        .collect();

    let mut columns: Vec<Vec<Scalar>> = Vec::new();
    let mut weights: Vec<Scalar> = Vec::new();
    for s in (1..=m + 1).rev() {
        // Chain tops of size s complement K_{s-1} + N K_{s+1} inside K_s.
        let above = kernels[core::cmp::min(s + 1, m + 1)].clone();
        let mut spanned = kernels[s - 1].sum(&above.image_under(n));
        for candidate in kernels[s].basis_vectors() {
            if spanned.contains_vector(&candidate) {
                continue;
            }
            spanned = spanned.sum(&Subspace::from_vectors(dim, core::slice::from_ref(&candidate)));
            let mut vector = candidate;
            for j in 0..s {
                columns.push(vector.clone());
                weights.push(int((s - 1) as i64 - 2 * j as i64));
                vector = n.mul_vec(&vector);
            }
        }
    }
    assert_eq!(columns.len(), dim, "Jordan chains must form a basis");
    let basis = Mat::from_columns(dim, &columns);
    let basis_inv = inverse(&basis).expect("Jordan chains must be independent");
    &(&basis * &Mat::from_diag(&weights)) * &basis_inv
}

/// Solves `e^{ad B}(H_0) = target` for B supported in negative ad-H_0
/// degrees, one degree at a time: the degree-k component of the remaining
/// difference equals `-k B_k` once all higher degrees are matched.
fn solve_degreewise(h0: &Mat, target: &Mat) -> Mat {
    let dim = h0.rows();
    let projections = integer_eigenprojections(h0).expect("initial grading is semisimple");
    let min_weight = projections.iter().map(|(k, _)| *k).min().expect("nonempty spectrum");
    let max_weight = projections.iter().map(|(k, _)| *k).max().expect("nonempty spectrum");

    let component = |m: &Mat, degree: i64| -> Mat {
        let mut out = Mat::zeros(dim, dim);
        for (a, pa) in &projections {
            for (b, pb) in &projections {
                if a - b == degree {
                    out = &out + &(&(pa * m) * pb);
                }
            }
        }
        out
    };

    let mut b = Mat::zeros(dim, dim);
    let mut degree = -1;
    while degree >= min_weight - max_weight {
        let residual = target - &exp_ad(&b, h0);
        let delta = component(&residual, degree);
        if !delta.is_zero() {
            let coeff = scalar_from_rat(rat(1, -degree));
            b = &b + &delta.scale(&coeff);
        }
        degree -= 1;
    }
    assert_eq!(exp_ad(&b, h0), *target, "degreewise solve must reach the adjoint-balanced grading");
    b
}

/// `e^{ad b}(m)` as a finite sum; `b` must act nilpotently by commutators.
fn exp_ad(b: &Mat, m: &Mat) -> Mat {
    let mut sum = m.clone();
    let mut term = m.clone();
    let mut i = 1i64;
    loop {
        term = commutator(b, &term).scale(&scalar_from_rat(rat(1, i)));
        if term.is_zero() {
            return sum;
        }
        assert!(i <= 4 * (b.rows() as i64) + 4, "ad-series failed to terminate");
        sum = &sum + &term;
        i += 1;
    }
}

/// Asserts `W_k(N) = E_k(H) ⊕ W_{k-1}(N)` for every eigenvalue k of H.
fn assert_splits_weight_filtration(h: &Mat, n: &Mat) {
    let w = weight_filtration(n).expect("N is nilpotent");
    let projections = integer_eigenprojections(h).expect("splitting is semisimple");
    for (k, projection) in &projections {
        let eigenspace = Subspace::from_mat(h.rows(), projection);
        let previous = w.step(k - 1);
        assert!(
            eigenspace.intersect(previous).is_zero(),
            "eigenspace E_{k} must meet W_{} trivially",
            k - 1
        );
        assert_eq!(
            &eigenspace.sum(previous),
            w.step(*k),
            "E_{k} plus W_{} must equal W_{k}",
            k - 1
        );
    }
}
