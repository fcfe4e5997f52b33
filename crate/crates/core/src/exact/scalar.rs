//! The scalar field: complex numbers with rational real and imaginary parts.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// Element of the Gaussian rationals, the coefficient field of every exact
/// computation in this crate.
pub type Scalar = Complex<Rat>;

/// The rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::new(rat(n, 1), rat(0, 1))
}

/// A rational as a scalar with zero imaginary part.
pub fn scalar_from_rat(r: Rat) -> Scalar {
    Scalar::new(r, rat(0, 1))
}

/// The imaginary unit.
pub fn imag_unit() -> Scalar {
    Scalar::new(rat(0, 1), rat(1, 1))
}

/// A rational of minimal denominator in the closed interval `[lo, hi]`:
/// the least integer in range when one exists, otherwise the Stern-Brocot
/// descent into the inverted fractional interval. Panics if `lo > hi`.
pub fn simplest_rational_between(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo <= hi, "interval is empty");
    let n = lo.ceil();
    if &n <= hi {
        return n;
    }
    // No integer in range, so both endpoints share a floor and neither is
    // an integer; inverting the fractional parts swaps the endpoints.
    let a = lo.floor();
    let inv_hi = (lo - &a).recip();
    let inv_lo = (hi - &a).recip();
    a + simplest_rational_between(&inv_lo, &inv_hi).recip()
}
