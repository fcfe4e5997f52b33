//! Exact elimination: echelon forms, kernels, linear solves, determinants,
//! and eigenprojections of semisimple matrices with known spectrum.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::mat::Mat;
use super::scalar::{rat, scalar_from_rat, simplest_rational_between, Rat, Scalar};
use super::subspace::Subspace;
use super::ExactError;

/// Reduced row echelon form together with the pivot column indices.
/// The form is unique, pivots are the first nonzero entry of each surviving
/// row, and pivot columns are strictly increasing.
pub fn rref(a: &Mat) -> (Mat, Vec<usize>) {
    let mut m = a.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        // Find the first row at or below `row` with a nonzero entry in `col`.
        let pivot_row = (row..rows).find(|&r| !m.at(r, col).is_zero());
        let Some(pivot_row) = pivot_row else { continue };
        if pivot_row != row {
            for j in 0..cols {
                let upper = m.at(row, j).clone();
                let lower = m.at(pivot_row, j).clone();
                m.set(row, j, lower);
                m.set(pivot_row, j, upper);
            }
        }
        let inv = Scalar::one() / m.at(row, col).clone();
        for j in col..cols {
            let v = m.at(row, j) * &inv;
            m.set(row, j, v);
        }
        for r in 0..rows {
            if r != row && !m.at(r, col).is_zero() {
                let factor = m.at(r, col).clone();
                for j in col..cols {
                    let v = m.at(r, j) - &(m.at(row, j) * &factor);
                    m.set(r, j, v);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

/// Basis of the kernel of `a`, one column per free variable of the echelon
/// form, each with a 1 in its free position. Columns are ordered by free
/// column index, so the output is itself in column echelon form.
pub fn kernel_basis(a: &Mat) -> Mat {
    let (r, pivots) = rref(a);
    let cols = a.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Mat::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis.set(f, k, Scalar::one());
        for (row, &p) in pivots.iter().enumerate() {
            basis.set(p, k, -r.at(row, f).clone());
        }
    }
    basis
}

/// A particular solution of `a x = b`, or `None` if the system is
/// inconsistent. Free variables are set to zero.
pub fn solve(a: &Mat, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let rhs = Mat::from_columns(b.len(), &[b.to_vec()]);
    solve_matrix(a, &rhs).map(|x| x.column(0))
}

/// A particular solution of `a X = B`, column by column, or `None` if any
/// column is inconsistent.
pub fn solve_matrix(a: &Mat, b: &Mat) -> Option<Mat> {
    assert_eq!(a.rows(), b.rows(), "shape mismatch in solve");
    let (r, pivots) = rref(&Mat::hstack(&[a, b]));
    if pivots.iter().any(|&p| p >= a.cols()) {
        return None;
    }
    let mut x = Mat::zeros(a.cols(), b.cols());
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(p, j, r.at(row, a.cols() + j).clone());
        }
    }
    Some(x)
}

/// Exact determinant by Gaussian elimination with row swaps.
pub fn det(a: &Mat) -> Scalar {
    assert!(a.is_square(), "determinant of non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut result = Scalar::one();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m.at(r, col).is_zero());
        let Some(pivot_row) = pivot_row else { return Scalar::zero() };
        if pivot_row != col {
            result = -result;
            for j in 0..n {
                let upper = m.at(col, j).clone();
                let lower = m.at(pivot_row, j).clone();
                m.set(col, j, lower);
                m.set(pivot_row, j, upper);
            }
        }
        let pivot = m.at(col, col).clone();
        result *= &pivot;
        for r in col + 1..n {
            if !m.at(r, col).is_zero() {
                let factor = m.at(r, col) / &pivot;
                for j in col..n {
                    let v = m.at(r, j) - &(m.at(col, j) * &factor);
                    m.set(r, j, v);
                }
            }
        }
    }
    result
}

/// Exact inverse, or `Singular`.
pub fn inverse(a: &Mat) -> Result<Mat, ExactError> {
    assert!(a.is_square(), "inverse of non-square matrix");
    let x = solve_matrix(a, &Mat::identity(a.rows())).ok_or(ExactError::Singular)?;
    if (a * &x) != Mat::identity(a.rows()) {
        return Err(ExactError::Singular);
    }
    Ok(x)
}

/// Sylvester's criterion: `m` is hermitian and every leading principal minor
/// is a positive rational.
pub fn is_positive_definite_hermitian(m: &Mat) -> bool {
    if !m.is_square() || *m != m.dagger() {
        return false;
    }
    for k in 1..=m.rows() {
        let minor = det(&Mat::from_fn(k, k, |i, j| m.at(i, j).clone()));
        if !minor.im.is_zero() || minor.re <= num_traits::Zero::zero() {
            return false;
        }
    }
    true
}

/// Spectral projections of a semisimple matrix with the given pairwise
/// distinct eigenvalues: `P_k = prod_{j != k} (A - e_j) / (e_k - e_j)`.
/// Verifies `(A - e_k) P_k = 0` for each `k` and `sum P_k = id`; failure of
/// either means `a` is not semisimple with spectrum inside `eigenvalues`.
pub fn eigenprojections(a: &Mat, eigenvalues: &[Scalar]) -> Result<Vec<Mat>, ExactError> {
    assert!(a.is_square(), "eigenprojection of non-square matrix");
    let n = a.rows();
    for (i, e) in eigenvalues.iter().enumerate() {
        for f in &eigenvalues[..i] {
            assert!(e != f, "repeated eigenvalue in spectrum list");
        }
    }
    let mut projections = Vec::with_capacity(eigenvalues.len());
    for (k, ek) in eigenvalues.iter().enumerate() {
        let mut p = Mat::identity(n);
        for (j, ej) in eigenvalues.iter().enumerate() {
            if j != k {
                let shifted = a - &Mat::identity(n).scale(ej);
                let denom = ek - ej;
                p = &p * &shifted.scale(&(Scalar::one() / denom));
            }
        }
        if !(&(a - &Mat::identity(n).scale(ek)) * &p).is_zero() {
            return Err(ExactError::NotSemisimple);
        }
        projections.push(p);
    }
    let mut sum = Mat::zeros(n, n);
    for p in &projections {
        sum = &sum + p;
    }
    if sum != Mat::identity(n) {
        return Err(ExactError::NotSemisimple);
    }
    Ok(projections)
}

// Dense univariate rational polynomials, coefficients low to high with a
// nonzero leading coefficient (the zero polynomial is the empty list).
// Support for `rational_spectrum` only, hence private.

fn poly_trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().map(Zero::is_zero).unwrap_or(false) {
        p.pop();
    }
    p
}

fn poly_eval(p: &[Rat], x: &Rat) -> Rat {
    let mut value = Rat::zero();
    for c in p.iter().rev() {
        value = value * x + c;
    }
    value
}

fn poly_derivative(p: &[Rat]) -> Vec<Rat> {
    poly_trim(p.iter().enumerate().skip(1).map(|(k, c)| c * Rat::from_integer(k.into())).collect())
}

/// Quotient and remainder with `deg rem < deg divisor`.
fn poly_divrem(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    assert!(!den.is_empty(), "division by the zero polynomial");
    let mut rem: Vec<Rat> = num.to_vec();
    let mut quot = alloc::vec![Rat::zero(); num.len().saturating_sub(den.len() - 1)];
    let lead = den.last().unwrap();
    while rem.len() >= den.len() {
        let shift = rem.len() - den.len();
        let factor = rem.last().unwrap() / lead;
        for (k, c) in den.iter().enumerate() {
            let v = &rem[shift + k] - &(c * &factor);
            rem[shift + k] = v;
        }
        rem = poly_trim(rem);
        quot[shift] = factor;
        debug_assert!(rem.len() < shift + den.len(), "leading term cancels");
    }
    (poly_trim(quot), rem)
}

fn poly_monic(p: Vec<Rat>) -> Vec<Rat> {
    let Some(lead) = p.last().cloned() else { return p };
    p.into_iter().map(|c| c / &lead).collect()
}

fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b);
        a = b;
        b = r;
    }
    poly_monic(a)
}

/// Sturm chain: p, p', then negated remainders until a constant.
fn sturm_chain(p: Vec<Rat>) -> Vec<Vec<Rat>> {
    let mut chain = alloc::vec![p.clone(), poly_derivative(&p)];
    while chain.last().map(|q| q.len() > 1).unwrap_or(false) {
        let k = chain.len();
        let (_, r) = poly_divrem(&chain[k - 2], &chain[k - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

/// Sign variations of the chain at `x`; zero values are skipped, so
/// `variations(a) - variations(b)` counts distinct real roots in `(a, b]`.
fn sign_variations(chain: &[Vec<Rat>], x: &Rat) -> usize {
    let mut variations = 0;
    let mut last_positive: Option<bool> = None;
    for p in chain {
        let v = poly_eval(p, x);
        if v.is_zero() {
            continue;
        }
        let positive = v.is_positive();
        if let Some(last) = last_positive {
            if last != positive {
                variations += 1;
            }
        }
        last_positive = Some(positive);
    }
    variations
}

/// All eigenvalues of `a` with their eigenspaces, sorted by eigenvalue,
/// when `a` is semisimple with purely rational spectrum; `None` otherwise.
/// Roots of the minimal polynomial are isolated by Sturm bisection and
/// named by continued-fraction rationalization, which bounds the search at
/// denominators around 10^6; the answer is then certified exactly, so a
/// returned spectrum is always correct and `None` means no certifiable
/// rational spectrum was found.
pub fn rational_spectrum(a: &Mat) -> Option<Vec<(Rat, Subspace)>> {
    assert!(a.is_square(), "spectrum of non-square matrix");
    let dim = a.rows();
    if dim == 0 {
        return Some(Vec::new());
    }

    // Minimal polynomial: the first power of `a` that depends linearly on
    // the lower ones. Cayley-Hamilton bounds the loop.
    let mut powers = alloc::vec![Mat::identity(dim)];
    let mut mu: Vec<Rat> = Vec::new();
    for degree in 1..=dim {
        let next = powers.last().unwrap() * a;
        let mut flat = Mat::zeros(dim * dim, degree);
        for (k, p) in powers.iter().enumerate() {
            for (idx, v) in p.vec_columns().into_iter().enumerate() {
                flat.set(idx, k, v);
            }
        }
        let mut target = Mat::zeros(dim * dim, 1);
        for (idx, v) in next.vec_columns().into_iter().enumerate() {
            target.set(idx, 0, v);
        }
        if let Some(c) = solve_matrix(&flat, &target) {
            let mut coeffs = Vec::with_capacity(degree + 1);
            for k in 0..degree {
                let v = c.at(k, 0);
                if !v.im.is_zero() {
                    return None;
                }
                coeffs.push(-v.re.clone());
            }
            coeffs.push(Rat::one());
            mu = coeffs;
            break;
        }
        powers.push(next);
    }
    assert!(!mu.is_empty(), "minimal polynomial always exists");

    // Distinct eigenvalues are the roots of the squarefree part.
    let gcd = poly_gcd(&mu, &poly_derivative(&mu));
    let (squarefree, rem) = poly_divrem(&mu, &gcd);
    assert!(rem.is_empty(), "gcd divides");
    let mut current = poly_monic(squarefree);

    let width = rat(1, 2_000_000_000_000);
    let half = rat(1, 2);
    let mut roots: Vec<Rat> = Vec::new();
    while current.len() > 1 {
        if current.len() == 2 {
            roots.push(-(&current[0] / &current[1]));
            break;
        }
        let bound = Rat::one()
            + current.iter().fold(Rat::zero(), |acc, c| if c.abs() > acc { c.abs() } else { acc });
        let chain = sturm_chain(current.clone());
        let mut lo = -bound.clone();
        let mut hi = bound.clone();
        if sign_variations(&chain, &lo) - sign_variations(&chain, &hi) < current.len() - 1 {
            // Fewer real roots than the degree: a complex pair exists.
            return None;
        }
        let root = loop {
            if &hi - &lo <= width {
                let candidate = simplest_rational_between(&lo, &hi);
                if !poly_eval(&current, &candidate).is_zero() {
                    return None;
                }
                break candidate;
            }
            let mid = (&lo + &hi) * &half;
            if poly_eval(&current, &mid).is_zero() {
                break mid;
            }
            if sign_variations(&chain, &lo) > sign_variations(&chain, &mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        };
        let linear = alloc::vec![-root.clone(), Rat::one()];
        let (quotient, rem) = poly_divrem(&current, &linear);
        assert!(rem.is_empty(), "verified root divides");
        current = quotient;
        roots.push(root);
    }

    let mut spectrum: Vec<(Rat, Subspace)> = Vec::with_capacity(roots.len());
    let mut total = 0;
    for root in roots {
        let shifted = a - &Mat::identity(dim).scale(&scalar_from_rat(root.clone()));
        let space = Subspace::from_mat(dim, &kernel_basis(&shifted));
        if space.is_zero() {
            return None;
        }
        total += space.dim();
        spectrum.push((root, space));
    }
    if total != dim {
        return None;
    }
    spectrum.sort_by(|(a, _), (b, _)| a.cmp(b));
    Some(spectrum)
}
