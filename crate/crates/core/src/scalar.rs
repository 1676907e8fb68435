//! Coefficient scalars for the series and matrix code.
//!
//! Two modes are supported: `f64` (the default, needed for schemes whose
//! coefficients are irrational, such as Forest-Ruth) and [`BigRational`]
//! for schemes whose coefficients are exact fractions.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Tolerance under which a float coefficient counts as zero for parity and
/// leading-term queries.
pub const FLOAT_ZERO_TOL: f64 = 1e-14;

/// Largest denominator considered when recovering an exact fraction from a
/// float coefficient.
pub const MAX_RECOVERED_DENOMINATOR: i64 = 1_000_000;

/// Field operations needed by truncated series and 2x2 map products.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Converts a scheme coefficient. Returns `None` when the mode cannot
    /// represent it exactly (irrational coefficients in rational mode).
    fn from_coefficient(x: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    /// Exactly zero in rational mode, below [`FLOAT_ZERO_TOL`] in float mode.
    fn is_negligible(&self) -> bool;
    fn is_positive(&self) -> bool;
    /// Principal square root, `None` for negative input or when the root is
    /// not representable (irrational roots of rationals).
    fn sqrt(&self) -> Option<Self>;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_coefficient(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= FLOAT_ZERO_TOL
    }

    fn is_positive(&self) -> bool {
        *self > 0.0
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_coefficient(x: f64) -> Option<Self> {
        recover_rational(x, MAX_RECOVERED_DENOMINATOR)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn sqrt(&self) -> Option<Self> {
        if Signed::is_negative(self) {
            return None;
        }
        let num = exact_isqrt(self.numer())?;
        let den = exact_isqrt(self.denom())?;
        Some(BigRational::new(num, den))
    }
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Finds the fraction with the smallest denominator (up to `max_den`) whose
/// nearest double is exactly `x`.
///
/// Walks the continued-fraction convergents of the exact binary value of
/// `x`. Returns `None` for non-finite input or when no convergent within the
/// denominator bound round-trips.
pub fn recover_rational(x: f64, max_den: i64) -> Option<BigRational> {
    let exact = BigRational::from_float(x)?;
    if exact.is_integer() {
        return Some(exact);
    }
    let max_den = BigInt::from(max_den);
    // convergents h_k / k_k
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rem = exact;
    loop {
        let a = rem.floor().to_integer();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if k_next > max_den {
            return None;
        }
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let candidate = BigRational::new(h.clone(), k.clone());
        if ToPrimitive::to_f64(&candidate) == Some(x) {
            return Some(candidate);
        }
        let frac = &rem - BigRational::from_integer(a);
        if frac.is_zero() {
            return None;
        }
        rem = frac.recip();
    }
}

/// Rounds toward negative infinity onto the grid `2^-bits`, bounding the
/// size of intermediate rationals in long computations.
pub fn round_to_bits(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits;
    let scaled = (x * BigRational::from_integer(scale.clone())).floor().to_integer();
    BigRational::new(scaled, scale)
}

/// Square root of a nonnegative rational to roughly `bits` bits by Newton
/// iteration, rounding after every step.
pub fn sqrt_to_bits(x: &BigRational, bits: u32) -> BigRational {
    if x.is_zero() {
        return <BigRational as Zero>::zero();
    }
    let start = ToPrimitive::to_f64(x).unwrap_or(1.0).sqrt();
    let mut y = BigRational::from_float(start).unwrap_or_else(<BigRational as One>::one);
    let two = BigRational::from_integer(BigInt::from(2));
    // f64 start gives ~50 bits; each step doubles
    let mut good = 40u32;
    while good < bits + 8 {
        y = round_to_bits(&((&y + x / &y) / &two), bits + 16);
        good *= 2;
    }
    round_to_bits(&((&y + x / &y) / &two), bits + 16)
}
