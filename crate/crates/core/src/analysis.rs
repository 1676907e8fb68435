//! Benchmark quantities of reversible schemes: the modified-frequency
//! series, effective mass and spring constant, phase error, order
//! coefficient `c_n`, cost-normalized `c*`, stability limit and the
//! convergence of the frequency series.
//!
//! Series results are in `x = εω` with `ω = 1`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::phasemap::{scheme_matrix, scheme_matrix_exact, scheme_matrix_series, spectral, PhaseMapError};
use crate::scalar::{round_to_bits, sqrt_to_bits, Scalar};
use crate::scheme::Scheme;
use crate::series::{Series, SeriesError};

/// Truncation order used when none is requested.
pub const DEFAULT_ORDER: usize = 10;

/// Relative agreement required between the series and Richardson values
/// of `c_n`.
pub const CROSS_CHECK_TOL: f64 = 1e-6;

/// Sample points of the Richardson cross-check, as `1/denominator`.
const RICHARDSON_DENOMINATORS: [i64; 3] = [100, 200, 400];

/// Working precision (bits) of the high-precision frequency evaluation.
const PRECISE_BITS: u32 = 224;

pub const STABILITY_BRACKET: f64 = 10.0;
pub const STABILITY_TOL: f64 = 1e-10;
const STABILITY_GRID: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("scheme {0} is not time-reversible; series extraction assumes equal diagonal entries")]
    NotSymmetric(String),
    #[error("scheme {0}: leading coefficient of ντ/x² is not positive")]
    NegativeLeadingProduct(String),
    #[error("scheme {scheme}: order exceeds truncation (no nonzero coefficient through x^{truncation})")]
    OrderExceedsTruncation { scheme: String, truncation: usize },
    #[error("scheme {scheme} has order {order}; normalization is defined for fourth-order schemes only")]
    NotFourthOrder { scheme: String, order: usize },
    #[error("scheme {scheme}: series c_n = {series} disagrees with numeric extrapolation {numeric}")]
    NumericMismatch { scheme: String, series: f64, numeric: f64 },
    #[error(transparent)]
    PhaseMap(#[from] PhaseMapError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// `τ/x` and `ν/x` at order `K`, for a symmetric scheme.
fn reduced_off_diagonals<S: Scalar>(
    scheme: &Scheme,
    order: usize,
) -> Result<(Series<S>, Series<S>), AnalysisError> {
    if !scheme.is_symmetric() {
        return Err(AnalysisError::NotSymmetric(scheme.name().to_string()));
    }
    let m = scheme_matrix_series::<S>(scheme, order + 1)?;
    Ok((m.tau.div_x()?, m.nu.div_x()?))
}

/// `ω_A/ω` as a series in `x` through `x^order`.
///
/// With equal diagonals `sin θ = ξ = √(ντ)`, so `θ = asin(x·√(τν/x²))`.
pub fn omega_a_series<S: Scalar>(scheme: &Scheme, order: usize) -> Result<Series<S>, AnalysisError> {
    let (tau_x, nu_x) = reduced_off_diagonals::<S>(scheme, order)?;
    omega_from_parts(scheme, &tau_x, &nu_x)
}

fn omega_from_parts<S: Scalar>(
    scheme: &Scheme,
    tau_x: &Series<S>,
    nu_x: &Series<S>,
) -> Result<Series<S>, AnalysisError> {
    let prod = tau_x.try_mul(nu_x)?;
    if !prod.coeffs()[0].is_positive() {
        return Err(AnalysisError::NegativeLeadingProduct(scheme.name().to_string()));
    }
    let xi = prod.sqrt()?.mul_x();
    Ok(xi.asin()?.div_x()?)
}

/// `(1/m*, k*/ω²)` as series in `x`.
pub fn effective_param_series<S: Scalar>(
    scheme: &Scheme,
    order: usize,
) -> Result<(Series<S>, Series<S>), AnalysisError> {
    let (tau_x, nu_x) = reduced_off_diagonals::<S>(scheme, order)?;
    let w = omega_from_parts(scheme, &tau_x, &nu_x)?;
    let ratio = tau_x.try_mul(&nu_x.reciprocal()?)?.sqrt()?;
    let inv_mass = w.try_mul(&ratio)?;
    let k_star = w.try_mul(&ratio.reciprocal()?)?;
    Ok((inv_mass, k_star))
}

/// Phase error per period `2π(ω_A/ω - 1)` from the closed form at `εω = x`.
pub fn phase_error(scheme: &Scheme, x: f64) -> Result<f64, AnalysisError> {
    let sd = spectral(&scheme_matrix(scheme, x, 1.0))?;
    Ok(2.0 * PI * (sd.omega_a - 1.0))
}

/// Leading error order `n` and coefficient `c_n` of `ω_A/ω - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderCoefficient {
    pub order: usize,
    pub coefficient: f64,
    /// Richardson-extrapolated value from high-precision point evaluations.
    pub numeric: f64,
}

/// First nonzero coefficient beyond the constant term.
pub fn leading_error_term<S: Scalar>(series: &Series<S>) -> Option<(usize, S)> {
    series
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, c)| !c.is_negligible())
        .map(|(i, c)| (i, c.clone()))
}

/// Series value of `c_n`, cross-checked against Richardson extrapolation of
/// `(ω_A/ω - 1)/xⁿ` at `x ∈ {1e-2, 5e-3, 2.5e-3}`. A disagreement beyond
/// [`CROSS_CHECK_TOL`] is an error.
pub fn order_coefficient(scheme: &Scheme) -> Result<OrderCoefficient, AnalysisError> {
    let truncation = DEFAULT_ORDER.max(scheme.order() as usize + 4);
    let series = omega_a_series::<f64>(scheme, truncation)?;
    let (order, coefficient) =
        leading_error_term(&series).ok_or_else(|| AnalysisError::OrderExceedsTruncation {
            scheme: scheme.name().to_string(),
            truncation,
        })?;
    let numeric = richardson_coefficient(scheme, order)?;
    if (numeric - coefficient).abs() > CROSS_CHECK_TOL * coefficient.abs() {
        return Err(AnalysisError::NumericMismatch {
            scheme: scheme.name().to_string(),
            series: coefficient,
            numeric,
        });
    }
    Ok(OrderCoefficient {
        order,
        coefficient,
        numeric,
    })
}

/// Extrapolates `f(x) = (ω_A/ω - 1)/xⁿ` to `x → 0` from three halving
/// steps, fitting `f = a/x² + c + b·x²` and returning `c`.
///
/// The `a/x²` term absorbs the residual `c_{n-2}` left by rounding of
/// stored coefficients; the `b·x²` term is the usual first Richardson
/// correction.
pub fn richardson_coefficient(scheme: &Scheme, n: usize) -> Result<f64, AnalysisError> {
    let mut f = [0.0; 3];
    for (slot, den) in f.iter_mut().zip(RICHARDSON_DENOMINATORS) {
        let x = BigRational::new(BigInt::one(), BigInt::from(den));
        let excess = omega_ratio_excess(scheme, &x)?;
        *slot = excess * (den as f64).powi(n as i32);
    }
    // rows (1/u, 1, u) with u = (x_i/x_0)² = 1, 1/4, 1/16
    let rows = RICHARDSON_DENOMINATORS.map(|d| {
        let u = (RICHARDSON_DENOMINATORS[0] as f64 / d as f64).powi(2);
        [1.0 / u, 1.0, u]
    });
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let mut with_f = rows;
    for (row, fi) in with_f.iter_mut().zip(f) {
        row[1] = fi;
    }
    Ok(det(&with_f) / det(&rows))
}

/// `ω_A/ω - 1` at `εω = x`, evaluated from the exact rational map with
/// about 200 bits of working precision before rounding to `f64`.
///
/// Uses `θ = 2 asin(s)`, `s² = (1 - Tr M/2)/2`, so that
/// `θ/x = 2 (s/x) · asin(s)/s` with the arcsine ratio summed as a power
/// series in `s²`.
pub fn omega_ratio_excess(scheme: &Scheme, x: &BigRational) -> Result<f64, AnalysisError> {
    let m = scheme_matrix_exact(scheme, x);
    let one = <BigRational as One>::one();
    let two = BigRational::from_integer(BigInt::from(2));
    let half_trace = (&m.g + &m.h) / &two;
    let s2 = (&one - &half_trace) / &two;
    if !Signed::is_positive(&s2) || s2 >= BigRational::from_ratio(1, 2) {
        // the series below needs θ < π/2
        let map = scheme_matrix(scheme, ToPrimitive::to_f64(x).unwrap_or(f64::NAN), 1.0);
        return Err(AnalysisError::PhaseMap(PhaseMapError::NotElliptic {
            regime: map.matrix.regime(),
            half_trace: ToPrimitive::to_f64(&half_trace).unwrap_or(f64::NAN),
        }));
    }
    let bound = BigRational::new(BigInt::one(), BigInt::one() << (PRECISE_BITS + 8));
    let mut sum = <BigRational as One>::one();
    let mut term = <BigRational as One>::one();
    let mut k: i64 = 0;
    loop {
        // a_{k+1}/a_k = (2k+1)² / ((2k+2)(2k+3))
        let ratio = BigRational::from_ratio((2 * k + 1) * (2 * k + 1), (2 * k + 2) * (2 * k + 3));
        term = round_to_bits(&(term * ratio * &s2), PRECISE_BITS + 16);
        sum += &term;
        k += 1;
        if term.abs() < bound {
            break;
        }
    }
    let s_over_x = sqrt_to_bits(&(&s2 / (x * x)), PRECISE_BITS);
    let excess = two * s_over_x * sum - one;
    Ok(ToPrimitive::to_f64(&excess).unwrap_or(f64::NAN))
}

/// Cost-normalized fourth-order coefficient
/// `c* = c₄ (force_evals/3)⁴ / |c₄(reference)|`, sign preserved.
pub fn normalized_coefficient(scheme: &Scheme, reference: &Scheme) -> Result<f64, AnalysisError> {
    let own = fourth_order(scheme)?;
    let base = fourth_order(reference)?;
    let weight = (scheme.force_evals() as f64 / 3.0).powi(4);
    Ok(own * weight / base.abs())
}

fn fourth_order(scheme: &Scheme) -> Result<f64, AnalysisError> {
    let oc = order_coefficient(scheme)?;
    if oc.order != 4 {
        return Err(AnalysisError::NotFourthOrder {
            scheme: scheme.name().to_string(),
            order: oc.order,
        });
    }
    Ok(oc.coefficient)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityLimit {
    /// Largest `εω` with `|Tr M/2| < 1` on `(0, limit)`.
    pub limit: f64,
    /// False when no crossing was found in `(0, 10]`; `limit` is then 10.
    pub bounded: bool,
}

/// First crossing of `|Tr M(x)/2| = 1`, located on a `1e-3` grid and
/// refined by bisection to `1e-10`.
pub fn stability_limit(scheme: &Scheme) -> StabilityLimit {
    let unstable = |x: f64| scheme_matrix(scheme, x, 1.0).matrix.half_trace().abs() >= 1.0;
    let steps = (STABILITY_BRACKET / STABILITY_GRID).round() as usize;
    let mut lo = 0.0;
    for i in 1..=steps {
        let x = i as f64 * STABILITY_GRID;
        if unstable(x) {
            let mut hi = x;
            while hi - lo > STABILITY_TOL {
                let mid = 0.5 * (lo + hi);
                if unstable(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return StabilityLimit {
                limit: 0.5 * (lo + hi),
                bounded: true,
            };
        }
        lo = x;
    }
    StabilityLimit {
        limit: STABILITY_BRACKET,
        bounded: false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub k: usize,
    /// `c_k x^k`.
    pub term: f64,
    /// Partial sum of `ω_A/ω` through `x^k`.
    pub partial_sum: f64,
    /// `|partial_sum - ω_A/ω|`, absent outside the elliptic regime.
    pub abs_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub x: f64,
    /// Closed-form `ω_A/ω`, absent outside the elliptic regime.
    pub closed_form: Option<f64>,
    pub rows: Vec<ConvergenceRow>,
    /// Ratio-test estimate of the radius of convergence in `x`.
    pub radius_estimate: Option<f64>,
}

/// Partial sums of the `ω_A/ω` series at `εω = x` against the closed form.
///
/// The series is built in rational mode when every coefficient of the
/// scheme is an exact fraction, since float-mode coefficients degrade past
/// roughly `x^40`.
pub fn convergence_study(scheme: &Scheme, x: f64, order: usize) -> Result<ConvergenceStudy, AnalysisError> {
    let series = match omega_a_series::<BigRational>(scheme, order) {
        Ok(exact) => exact.to_f64(),
        Err(AnalysisError::PhaseMap(PhaseMapError::InexactCoefficient { .. })) => {
            omega_a_series::<f64>(scheme, order)?
        }
        Err(e) => return Err(e),
    };
    let closed_form = spectral(&scheme_matrix(scheme, x, 1.0)).ok().map(|sd| sd.omega_a);
    let mut partial = 0.0;
    let mut xk = 1.0;
    let rows = series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let term = c * xk;
            partial += term;
            xk *= x;
            ConvergenceRow {
                k,
                term,
                partial_sum: partial,
                abs_error: closed_form.map(|w| (partial - w).abs()),
            }
        })
        .collect();
    Ok(ConvergenceStudy {
        x,
        closed_form,
        rows,
        radius_estimate: ratio_test_radius(&series),
    })
}

/// `|c_a / c_b|^(1/(b-a))` over the first and last of the last four
/// nonzero coefficients beyond the constant term.
pub fn ratio_test_radius(series: &Series<f64>) -> Option<f64> {
    let nonzero: Vec<(usize, f64)> = series
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_negligible())
        .map(|(i, c)| (i, *c))
        .collect();
    if nonzero.len() < 2 {
        return None;
    }
    let tail = &nonzero[nonzero.len().saturating_sub(4)..];
    let (a, ca) = tail[0];
    let (b, cb) = tail[tail.len() - 1];
    Some((ca / cb).abs().powf(1.0 / (b - a) as f64))
}

/// Everything the `analyze` report prints for one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseErrorReport {
    pub scheme: String,
    pub order: usize,
    pub c_n: f64,
    pub c_n_numeric: f64,
    /// Present for fourth-order schemes.
    pub c_star: Option<f64>,
    pub stability: StabilityLimit,
    pub omega_a_series: Series<f64>,
    pub inv_mass_series: Series<f64>,
    pub k_star_series: Series<f64>,
}

pub fn phase_error_report(
    scheme: &Scheme,
    order: usize,
    reference: &Scheme,
) -> Result<PhaseErrorReport, AnalysisError> {
    let oc = order_coefficient(scheme)?;
    let c_star = if oc.order == 4 {
        Some(normalized_coefficient(scheme, reference)?)
    } else {
        None
    };
    let omega = omega_a_series::<f64>(scheme, order)?;
    let (inv_mass, k_star) = effective_param_series::<f64>(scheme, order)?;
    Ok(PhaseErrorReport {
        scheme: scheme.name().to_string(),
        order: oc.order,
        c_n: oc.coefficient,
        c_n_numeric: oc.numeric,
        c_star,
        stability: stability_limit(scheme),
        omega_a_series: omega,
        inv_mass_series: inv_mass,
        k_star_series: k_star,
    })
}
