//! Truncated power series in the dimensionless step `x = εω`.
//!
//! A [`Series`] of truncation order `K` holds exactly `K + 1` coefficients
//! and every operation works in the ring of polynomials modulo `x^(K+1)`:
//! nothing beyond index `K` is ever read or produced.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("series needs at least one coefficient")]
    Empty,
    #[error("reciprocal of a series with zero constant term")]
    ZeroConstant,
    #[error("square root needs a positive, representable constant term")]
    NonPositiveConstant,
    #[error("operation needs a zero constant term")]
    NonZeroConstant,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series<S = f64> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Series<S> {
    pub fn from_coeffs(coeffs: Vec<S>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { coeffs })
    }

    /// Builds a series of the given order from a (possibly shorter) list of
    /// leading coefficients, padding with zeros and truncating extras.
    pub fn from_leading(leading: &[S], order: usize) -> Self {
        let mut coeffs: Vec<S> = leading.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, S::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![S::zero(); order + 1],
        }
    }

    pub fn constant(value: S, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(S::one(), order)
    }

    /// `coef · x^power`, or zero when `power > order`.
    pub fn monomial(coef: S, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = coef;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&S> {
        self.coeffs.get(i)
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() == other.order() {
            Ok(())
        } else {
            Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Self { coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(Self { coeffs })
    }

    /// Cauchy product truncated at the common order.
    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let k = self.order();
        let mut out = vec![S::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_negligible() && *a == S::zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=k - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Ok(Self { coeffs: out })
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * factor.clone()).collect(),
        }
    }

    /// `b` with `a·b = 1` up to truncation.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_negligible() {
            return Err(SeriesError::ZeroConstant);
        }
        let inv0 = S::one() / a0.clone();
        let mut out: Vec<S> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..=self.order() {
            let mut acc = S::zero();
            for i in 1..=n {
                acc = acc + self.coeffs[i].clone() * out[n - i].clone();
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(Self { coeffs: out })
    }

    /// Principal square root (`b_0 = +√a_0`).
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if !a0.is_positive() {
            return Err(SeriesError::NonPositiveConstant);
        }
        let b0 = a0.sqrt().ok_or(SeriesError::NonPositiveConstant)?;
        let two_b0 = b0.clone() + b0.clone();
        let mut out: Vec<S> = Vec::with_capacity(self.coeffs.len());
        out.push(b0);
        for n in 1..=self.order() {
            let mut acc = self.coeffs[n].clone();
            for i in 1..n {
                acc = acc - out[i].clone() * out[n - i].clone();
            }
            out.push(acc / two_b0.clone());
        }
        Ok(Self { coeffs: out })
    }

    /// `arcsin(u)` by composing the Maclaurin series
    /// `Σ C(2k,k) u^(2k+1) / (4^k (2k+1))` with `u`. Requires `u_0 = 0`.
    pub fn asin(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_negligible() {
            return Err(SeriesError::NonZeroConstant);
        }
        let mut u = self.clone();
        u.coeffs[0] = S::zero();
        let k = self.order();
        let u2 = &u * &u;
        let mut power = u.clone(); // u^(2j+1)
        let mut weight = S::one(); // C(2j,j) / (4^j (2j+1))
        let mut out = u.scale(&weight);
        let mut j: i64 = 0;
        // u^(2j+1) vanishes to order K once 2j+1 > K
        while 2 * (j + 1) < k as i64 {
            // a_{j+1} = a_j (2j+1)^2 / ((2j+2)(2j+3))
            weight = weight * S::from_ratio((2 * j + 1) * (2 * j + 1), (2 * j + 2) * (2 * j + 3));
            power = &power * &u2;
            out = &out + &power.scale(&weight);
            j += 1;
        }
        Ok(out)
    }

    /// Divides by `x`; the constant term must vanish and the order drops by one.
    pub fn div_x(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_negligible() {
            return Err(SeriesError::NonZeroConstant);
        }
        if self.order() == 0 {
            return Err(SeriesError::Empty);
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Multiplies by `x`, raising the order by one (no information is lost).
    pub fn mul_x(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(S::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_leading(&self.coeffs, order)
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Scalar::is_negligible)
    }

    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(Scalar::is_negligible)
    }

    /// Partial sum `Σ_{i≤K} a_i x^i` in floating point.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * x + a.to_f64())
    }

    pub fn to_f64(&self) -> Series<f64> {
        Series {
            coeffs: self.coeffs.iter().map(Scalar::to_f64).collect(),
        }
    }
}

// The operator impls panic on mismatched orders; the `try_*` methods are the
// fallible API. Matrix products only ever combine series built at one order.
impl<S: Scalar> Add for Series<S> {
    type Output = Series<S>;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("series truncation order mismatch")
    }
}

impl<S: Scalar> Add for &Series<S> {
    type Output = Series<S>;
    fn add(self, rhs: Self) -> Series<S> {
        self.try_add(rhs).expect("series truncation order mismatch")
    }
}

impl<S: Scalar> Sub for Series<S> {
    type Output = Series<S>;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("series truncation order mismatch")
    }
}

impl<S: Scalar> Mul for Series<S> {
    type Output = Series<S>;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("series truncation order mismatch")
    }
}

impl<S: Scalar> Mul for &Series<S> {
    type Output = Series<S>;
    fn mul(self, rhs: Self) -> Series<S> {
        self.try_mul(rhs).expect("series truncation order mismatch")
    }
}

impl<S: Scalar> Neg for Series<S> {
    type Output = Series<S>;
    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(|a| -a).collect(),
        }
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Series<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_negligible() && *a == S::zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})x")?,
                _ => write!(f, "({a})x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}
