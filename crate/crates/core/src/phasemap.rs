//! Exact one-step maps of a scheme on the harmonic oscillator.
//!
//! Every factor of a scheme is a shear of the `(q, p)` plane, so a whole
//! step is the 2x2 matrix `[[g, τ], [-ν, h]]`. The entries can be plain
//! numbers or truncated series in `x = εω` (with `ω = 1`).

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::scalar::{recover_rational, Scalar, MAX_RECOVERED_DENOMINATOR};
use crate::scheme::{Scheme, Step, StepKind};
use crate::series::{Series, SeriesError};

/// Relative cancellation of the discriminant `ντ - (g-h)²/4` below which a
/// map is treated as parabolic.
pub const PARABOLIC_TOL: f64 = 1e-12;

/// Largest `|g - h|` still treated as a reversible (equal-diagonal) map.
pub const REVERSIBLE_TOL: f64 = 1e-12;

pub type Mat2 = [[f64; 2]; 2];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhaseMapError {
    #[error("map is {regime} (half trace {half_trace}); spectral quantities need the elliptic regime")]
    NotElliptic { regime: Regime, half_trace: f64 },
    #[error("effective mass and spring constant are undefined (ντ = {nu_tau} ≤ 0)")]
    UndefinedEffectiveParameters { nu_tau: f64 },
    #[error("map is not time-reversible (g - h = {g_minus_h})")]
    NotReversible { g_minus_h: f64 },
    #[error("scheme {scheme}: step {index} has a coefficient with no exact representation in this scalar mode")]
    InexactCoefficient { scheme: String, index: usize },
    #[error("scheme {0} has no active steps")]
    NoSteps(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Elliptic => "elliptic",
            Regime::Parabolic => "parabolic",
            Regime::Hyperbolic => "hyperbolic",
        })
    }
}

/// `[[g, τ], [-ν, h]]` acting on the column `(q, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMatrix<T> {
    pub g: T,
    pub tau: T,
    pub nu: T,
    pub h: T,
}

impl<T> PhaseMatrix<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    /// `self · first`: the map that applies `first`, then `self`.
    pub fn after(&self, first: &Self) -> Self {
        let (a, b) = (self, first);
        PhaseMatrix {
            g: a.g.clone() * b.g.clone() - a.tau.clone() * b.nu.clone(),
            tau: a.g.clone() * b.tau.clone() + a.tau.clone() * b.h.clone(),
            nu: a.nu.clone() * b.g.clone() + a.h.clone() * b.nu.clone(),
            h: a.h.clone() * b.h.clone() - a.nu.clone() * b.tau.clone(),
        }
    }

    pub fn det(&self) -> T {
        self.g.clone() * self.h.clone() + self.tau.clone() * self.nu.clone()
    }

    pub fn trace(&self) -> T {
        self.g.clone() + self.h.clone()
    }
}

impl PhaseMatrix<f64> {
    pub fn identity() -> Self {
        PhaseMatrix {
            g: 1.0,
            tau: 0.0,
            nu: 0.0,
            h: 1.0,
        }
    }

    pub fn to_array(&self) -> Mat2 {
        [[self.g, self.tau], [-self.nu, self.h]]
    }

    pub fn apply(&self, q: f64, p: f64) -> (f64, f64) {
        (self.g * q + self.tau * p, -self.nu * q + self.h * p)
    }

    pub fn half_trace(&self) -> f64 {
        0.5 * (self.g + self.h)
    }

    /// `ντ - (g-h)²/4`, the squared imaginary part of the eigenvalues.
    pub fn discriminant(&self) -> f64 {
        let d = 0.5 * (self.g - self.h);
        self.nu * self.tau - d * d
    }

    pub fn regime(&self) -> Regime {
        let d = 0.5 * (self.g - self.h);
        let nt = self.nu * self.tau;
        let disc = nt - d * d;
        let scale = nt.abs() + d * d;
        if disc.abs() <= PARABOLIC_TOL * scale {
            Regime::Parabolic
        } else if disc > 0.0 {
            Regime::Elliptic
        } else {
            Regime::Hyperbolic
        }
    }
}

/// Numeric one-step map together with the step size and frequency that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMap {
    pub matrix: PhaseMatrix<f64>,
    pub eps: f64,
    pub omega: f64,
}

/// Drift `c` → `[[1, cε], [0, 1]]`; kick `c` → `[[1, 0], [-cεω², 1]]`;
/// gradient kick `(c, u)` → `[[1, 0], [-(cεω² + uε³ω⁴), 1]]`.
pub fn step_matrix(step: &Step, eps: f64, omega: f64) -> PhaseMatrix<f64> {
    let w2 = omega * omega;
    match step.kind() {
        StepKind::Drift => PhaseMatrix {
            g: 1.0,
            tau: step.c() * eps,
            nu: 0.0,
            h: 1.0,
        },
        StepKind::Kick | StepKind::GradientKick => PhaseMatrix {
            g: 1.0,
            tau: 0.0,
            nu: step.c() * eps * w2 + step.u() * eps.powi(3) * w2 * w2,
            h: 1.0,
        },
    }
}

fn compose_all<T, I>(mats: I) -> Option<PhaseMatrix<T>>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
    I: IntoIterator<Item = PhaseMatrix<T>>,
{
    // the first step ends up rightmost
    mats.into_iter()
        .fold(None, |acc: Option<PhaseMatrix<T>>, m| {
            Some(match acc {
                None => m,
                Some(a) => m.after(&a),
            })
        })
}

/// Product of the step matrices, first step rightmost.
pub fn scheme_matrix(scheme: &Scheme, eps: f64, omega: f64) -> PhaseMap {
    let matrix = compose_all(scheme.active_steps().map(|s| step_matrix(s, eps, omega)))
        .unwrap_or_else(PhaseMatrix::identity);
    PhaseMap { matrix, eps, omega }
}

/// Step matrix with entries as series in `x = εω` at the given order.
pub fn step_matrix_series<S: Scalar>(
    step: &Step,
    order: usize,
) -> Option<PhaseMatrix<Series<S>>> {
    let c = S::from_coefficient(step.c())?;
    let one = Series::one(order);
    let zero = Series::zero(order);
    Some(match step.kind() {
        StepKind::Drift => PhaseMatrix {
            g: one.clone(),
            tau: Series::monomial(c, 1, order),
            nu: zero,
            h: one,
        },
        StepKind::Kick | StepKind::GradientKick => {
            let u = S::from_coefficient(step.u())?;
            let nu = Series::monomial(c, 1, order) + Series::monomial(u, 3, order);
            PhaseMatrix {
                g: one.clone(),
                tau: zero,
                nu,
                h: one,
            }
        }
    })
}

/// Series-mode scheme matrix (`ω = 1`, variable `x = ε`).
pub fn scheme_matrix_series<S: Scalar>(
    scheme: &Scheme,
    order: usize,
) -> Result<PhaseMatrix<Series<S>>, PhaseMapError> {
    let mut mats = Vec::new();
    for (index, st) in scheme.steps().iter().enumerate() {
        if st.is_identity() {
            continue;
        }
        let m = step_matrix_series::<S>(st, order).ok_or_else(|| {
            PhaseMapError::InexactCoefficient {
                scheme: scheme.name().to_string(),
                index,
            }
        })?;
        mats.push(m);
    }
    compose_all(mats).ok_or_else(|| PhaseMapError::NoSteps(scheme.name().to_string()))
}

/// Exact rational scheme matrix at `ε = x`, `ω = 1`.
///
/// Coefficients are recovered as small fractions where possible and taken
/// at their exact binary value otherwise; drift and kick weights are then
/// rescaled to sum to exactly one, so rounding in the stored coefficients
/// does not masquerade as a first-order error.
pub fn scheme_matrix_exact(scheme: &Scheme, x: &BigRational) -> PhaseMatrix<BigRational> {
    let exact = |v: f64| {
        recover_rational(v, MAX_RECOVERED_DENOMINATOR)
            .or_else(|| BigRational::from_float(v))
            .expect("validated coefficients are finite")
    };
    let total = |kind: fn(StepKind) -> bool| {
        scheme
            .active_steps()
            .filter(|st| kind(st.kind()))
            .fold(<BigRational as Zero>::zero(), |acc, st| acc + exact(st.c()))
    };
    let drift_sum = total(|k| k == StepKind::Drift);
    let kick_sum = total(|k| k != StepKind::Drift);
    let x3 = x * x * x;
    let mats = scheme.active_steps().map(|st| match st.kind() {
        StepKind::Drift => PhaseMatrix {
            g: Scalar::one(),
            tau: exact(st.c()) / &drift_sum * x,
            nu: <BigRational as Zero>::zero(),
            h: Scalar::one(),
        },
        StepKind::Kick | StepKind::GradientKick => PhaseMatrix {
            g: Scalar::one(),
            tau: <BigRational as Zero>::zero(),
            nu: exact(st.c()) / &kick_sum * x + exact(st.u()) * &x3,
            h: Scalar::one(),
        },
    });
    compose_all(mats).unwrap_or(PhaseMatrix {
        g: Scalar::one(),
        tau: <BigRational as Zero>::zero(),
        nu: <BigRational as Zero>::zero(),
        h: Scalar::one(),
    })
}

/// Rotation angle, frequency and effective parameters of an elliptic map.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    /// Rotation angle per step, principal branch in `(0, π)`.
    pub theta: f64,
    pub xi: f64,
    /// `θ / ε`.
    pub omega_a: f64,
    /// Effective mass; `None` when `ντ ≤ 0`.
    pub m_star: Option<f64>,
    /// Effective spring constant; `None` when `ντ ≤ 0`.
    pub k_star: Option<f64>,
    pub regime: Regime,
    pub reversible: bool,
    pub g_minus_h: f64,
    pub nu_tau: f64,
}

pub fn spectral(map: &PhaseMap) -> Result<SpectralData, PhaseMapError> {
    let m = &map.matrix;
    let regime = m.regime();
    if regime != Regime::Elliptic {
        return Err(PhaseMapError::NotElliptic {
            regime,
            half_trace: m.half_trace(),
        });
    }
    let xi = m.discriminant().sqrt();
    // atan2 agrees with arccos((g+h)/2) here and stays accurate as θ → 0
    let theta = xi.atan2(m.half_trace());
    let omega_a = theta / map.eps;
    let (m_star, k_star) = if m.nu * m.tau > 0.0 {
        let r = (m.tau / m.nu).sqrt();
        (Some(1.0 / (omega_a * r)), Some(omega_a / r))
    } else {
        (None, None)
    };
    Ok(SpectralData {
        theta,
        xi,
        omega_a,
        m_star,
        k_star,
        regime,
        reversible: (m.g - m.h).abs() <= REVERSIBLE_TOL,
        g_minus_h: m.g - m.h,
        nu_tau: m.nu * m.tau,
    })
}

/// `M^{t/ε} = R + Σ` for continuous `t`.
pub fn propagate_closed_form(map: &PhaseMap, t: f64) -> Result<Mat2, PhaseMapError> {
    let sd = spectral(map)?;
    let m = &map.matrix;
    let phi = sd.theta * t / map.eps;
    let (s, c) = phi.sin_cos();
    let sigma = (m.g - m.h) / (2.0 * sd.xi) * s;
    Ok([
        [c + sigma, m.tau / sd.xi * s],
        [-m.nu / sd.xi * s, c - sigma],
    ])
}

/// Amplitude `(g - h)/(2ξ)` of the translation part `Σ`.
pub fn sigma_amplitude(map: &PhaseMap) -> Result<f64, PhaseMapError> {
    let sd = spectral(map)?;
    Ok((map.matrix.g - map.matrix.h) / (2.0 * sd.xi))
}

/// `H_A = p²/(2m*) + k* q²/2`, conserved exactly by a reversible map.
pub fn modified_hamiltonian(sd: &SpectralData, q: f64, p: f64) -> Result<f64, PhaseMapError> {
    let (m_star, k_star) = match (sd.m_star, sd.k_star) {
        (Some(m), Some(k)) => (m, k),
        _ => {
            return Err(PhaseMapError::UndefinedEffectiveParameters {
                nu_tau: sd.nu_tau,
            })
        }
    };
    if !sd.reversible {
        return Err(PhaseMapError::NotReversible {
            g_minus_h: sd.g_minus_h,
        });
    }
    Ok(p * p / (2.0 * m_star) + 0.5 * k_star * q * q)
}

/// Symmetric `Q = [[ν, (g-h)/2], [(g-h)/2, τ]]` with `MᵀQM = Q`.
///
/// The level sets of `(q, p) Q (q, p)ᵀ` are the invariant ellipses of the
/// map, reversible or not.
pub fn invariant_quadratic_form(m: &PhaseMatrix<f64>) -> Result<Mat2, PhaseMapError> {
    let regime = m.regime();
    if regime != Regime::Elliptic {
        return Err(PhaseMapError::NotElliptic {
            regime,
            half_trace: m.half_trace(),
        });
    }
    let off = 0.5 * (m.g - m.h);
    Ok([[m.nu, off], [off, m.tau]])
}

/// Principal axes of the ellipse `rᵀ Q r = const`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseAxes {
    /// Angle of the major axis from the q axis, degrees in `(-90, 90]`.
    pub tilt_deg: f64,
    /// Major over minor semi-axis.
    pub axis_ratio: f64,
}

/// Axes of a definite symmetric form (the sign of `Q` is ignored).
pub fn ellipse_axes(q: &Mat2) -> EllipseAxes {
    let sign = if q[0][0] + q[1][1] < 0.0 { -1.0 } else { 1.0 };
    let (a, b, c) = (sign * q[0][0], sign * 0.5 * (q[0][1] + q[1][0]), sign * q[1][1]);
    let mean = 0.5 * (a + c);
    let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let (lmax, lmin) = (mean + rad, mean - rad);
    // largest eigenvalue direction is the minor axis
    let minor = 0.5 * (2.0 * b).atan2(a - c);
    let mut major = (minor + 0.5 * PI).to_degrees();
    while major > 90.0 {
        major -= 180.0;
    }
    while major <= -90.0 {
        major += 180.0;
    }
    EllipseAxes {
        tilt_deg: major,
        axis_ratio: (lmax / lmin).sqrt(),
    }
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{first_order, forest_ruth, stormer_verlet};
    use approx::assert_abs_diff_eq;

    fn brute_power(m: &Mat2, n: usize) -> Mat2 {
        let mut acc = [[1.0, 0.0], [0.0, 1.0]];
        for _ in 0..n {
            acc = mat_mul(m, &acc);
        }
        acc
    }

    #[test]
    fn step_matrix_examples() {
        let d = step_matrix(&Step::drift(1.0), 0.1, 1.0);
        assert_eq!(d.to_array(), [[1.0, 0.1], [0.0, 1.0]]);
        let k = step_matrix(&Step::kick(0.5), 0.1, 1.0);
        assert_eq!(k.to_array(), [[1.0, 0.0], [-0.05, 1.0]]);
        // -(2/3·0.3 + (1/36)·0.027) = -0.20075
        let gk = step_matrix(&Step::gradient_kick(2.0 / 3.0, 1.0 / 36.0), 0.3, 1.0);
        assert_abs_diff_eq!(gk.to_array()[1][0], -0.20075, epsilon = 1e-15);
    }

    #[test]
    fn verlet_anchor_at_unit_step() {
        let m = scheme_matrix(&stormer_verlet(), 1.0, 1.0).matrix;
        assert_eq!(m.to_array(), [[0.5, 1.0], [-0.75, 0.5]]);
    }

    #[test]
    fn zero_step_is_identity() {
        for s in [stormer_verlet(), forest_ruth(), first_order()] {
            assert_eq!(scheme_matrix(&s, 0.0, 1.0).matrix, PhaseMatrix::identity());
        }
    }

    #[test]
    fn ordering_puts_first_step_rightmost() {
        // drift then kick: M = K·D = [[1, ε], [-ε, 1 - ε²]]
        let m = scheme_matrix(&first_order(), 0.5, 1.0).matrix;
        assert_eq!(m.to_array(), [[1.0, 0.5], [-0.5, 0.75]]);
    }

    #[test]
    fn spectral_examples() {
        let sd = spectral(&scheme_matrix(&stormer_verlet(), 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(sd.theta, PI / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sd.omega_a, PI / 3.0, epsilon = 1e-15);
        assert!(sd.reversible);

        let err = spectral(&scheme_matrix(&stormer_verlet(), 2.5, 1.0)).unwrap_err();
        assert!(matches!(
            err,
            PhaseMapError::NotElliptic {
                regime: Regime::Hyperbolic,
                ..
            }
        ));

        let sd = spectral(&scheme_matrix(&stormer_verlet(), 1e-8, 1.0)).unwrap();
        assert_abs_diff_eq!(sd.omega_a, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn stability_edge_is_parabolic() {
        let m = scheme_matrix(&stormer_verlet(), 2.0, 1.0).matrix;
        assert_eq!(m.regime(), Regime::Parabolic);
        assert_eq!(PhaseMatrix::identity().regime(), Regime::Parabolic);
        assert_eq!(
            scheme_matrix(&stormer_verlet(), 1.999, 1.0).matrix.regime(),
            Regime::Elliptic
        );
        assert_eq!(
            scheme_matrix(&stormer_verlet(), 2.001, 1.0).matrix.regime(),
            Regime::Hyperbolic
        );
    }

    #[test]
    fn closed_form_matches_power() {
        let map = scheme_matrix(&stormer_verlet(), 0.3, 1.0);
        assert_eq!(
            propagate_closed_form(&map, 0.0).unwrap(),
            [[1.0, 0.0], [0.0, 1.0]]
        );
        let n = 1000;
        let cf = propagate_closed_form(&map, n as f64 * 0.3).unwrap();
        let bf = brute_power(&map.matrix.to_array(), n);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(cf[i][j], bf[i][j], epsilon = 1e-9);
            }
        }
        assert!(propagate_closed_form(&scheme_matrix(&stormer_verlet(), 2.5, 1.0), 1.0).is_err());
    }

    #[test]
    fn first_order_has_translation_part() {
        let x = 0.5;
        let map = scheme_matrix(&first_order(), x, 1.0);
        let sd = spectral(&map).unwrap();
        assert!(!sd.reversible);
        let m = &map.matrix;
        assert_abs_diff_eq!((m.g - m.h).abs(), x * x, epsilon = 1e-15);
        let amp = sigma_amplitude(&map).unwrap();
        assert_abs_diff_eq!(amp, (m.g - m.h) / (2.0 * sd.xi), epsilon = 1e-15);
        assert!(amp.abs() > 0.1);
        // closed form still reproduces the power
        let cf = propagate_closed_form(&map, 37.0 * x).unwrap();
        let bf = brute_power(&m.to_array(), 37);
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(cf[i][j], bf[i][j], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn modified_hamiltonian_examples() {
        let sd = spectral(&scheme_matrix(&stormer_verlet(), 1e-4, 1.0)).unwrap();
        assert_abs_diff_eq!(modified_hamiltonian(&sd, 1.0, 0.0).unwrap(), 0.5, epsilon = 1e-8);

        let x = 0.5;
        let sd = spectral(&scheme_matrix(&stormer_verlet(), x, 1.0)).unwrap();
        let k_star = sd.omega_a * (1.0 - x * x / 4.0).sqrt();
        assert_abs_diff_eq!(
            modified_hamiltonian(&sd, 1.0, 0.0).unwrap(),
            k_star / 2.0,
            epsilon = 1e-15
        );

        let sd = spectral(&scheme_matrix(&first_order(), x, 1.0)).unwrap();
        assert!(matches!(
            modified_hamiltonian(&sd, 1.0, 0.0),
            Err(PhaseMapError::NotReversible { .. })
        ));
    }

    #[test]
    fn modified_hamiltonian_is_conserved() {
        let map = scheme_matrix(&stormer_verlet(), 0.5, 1.0);
        let sd = spectral(&map).unwrap();
        let (mut q, mut p) = (1.0, 0.0);
        let h0 = modified_hamiltonian(&sd, q, p).unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..100_000 {
            (q, p) = map.matrix.apply(q, p);
            let h = modified_hamiltonian(&sd, q, p).unwrap();
            worst = worst.max(((h - h0) / h0).abs());
        }
        assert!(worst <= 1e-12, "relative drift {worst}");
    }

    #[test]
    fn invariant_form_examples() {
        let m = scheme_matrix(&stormer_verlet(), 0.4, 1.0).matrix;
        let q = invariant_quadratic_form(&m).unwrap();
        assert_eq!(q[0][1], 0.0);

        let x = 0.2;
        let m = scheme_matrix(&first_order(), x, 1.0).matrix;
        let q = invariant_quadratic_form(&m).unwrap();
        assert_eq!(q[1][1], m.tau);
        // cross term relative to the p² coefficient is εω²/2 in magnitude
        assert_abs_diff_eq!((q[0][1] / q[1][1]).abs(), 0.1, epsilon = 1e-14);
        let a = m.to_array();
        let back = mat_mul(&transpose(&a), &mat_mul(&q, &a));
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(back[i][j], q[i][j], epsilon = 1e-12);
            }
        }
        assert!(invariant_quadratic_form(&scheme_matrix(&stormer_verlet(), 3.0, 1.0).matrix).is_err());
    }

    #[test]
    fn first_order_ellipse_is_tilted() {
        for x in [0.3, 0.1, 0.01] {
            let m = scheme_matrix(&first_order(), x, 1.0).matrix;
            let ax = ellipse_axes(&invariant_quadratic_form(&m).unwrap());
            assert_abs_diff_eq!(ax.tilt_deg, -45.0, epsilon = 0.5);
        }
        let m = scheme_matrix(&stormer_verlet(), 0.3, 1.0).matrix;
        let ax = ellipse_axes(&invariant_quadratic_form(&m).unwrap());
        assert_abs_diff_eq!(ax.tilt_deg, 0.0, epsilon = 1e-12);
        assert!(ax.axis_ratio > 1.0);
    }

    #[test]
    fn series_mode_matches_verlet_closed_form() {
        let m = scheme_matrix_series::<BigRational>(&stormer_verlet(), 5).unwrap();
        let q = |n, d| BigRational::from_ratio(n, d);
        assert_eq!(m.g, Series::from_leading(&[q(1, 1), q(0, 1), q(-1, 2)], 5));
        assert_eq!(m.g, m.h);
        assert_eq!(m.tau, Series::from_leading(&[q(0, 1), q(1, 1)], 5));
        assert_eq!(
            m.nu,
            Series::from_leading(&[q(0, 1), q(1, 1), q(0, 1), q(-1, 4)], 5)
        );
        assert!(matches!(
            scheme_matrix_series::<BigRational>(&forest_ruth(), 5),
            Err(PhaseMapError::InexactCoefficient { .. })
        ));
    }
}
