//! Direct step-by-step iteration of a scheme on the oscillator
//! `H = p²/2 + ω²q²/2`.
//!
//! The shear updates are applied to `(q, p)` one step at a time and never
//! through a precomposed matrix, so trajectories serve as an independent
//! check on the closed-form propagation.

use std::f64::consts::PI;

use thiserror::Error;

use crate::phasemap::{
    ellipse_axes, modified_hamiltonian, scheme_matrix, spectral, Mat2, PhaseMapError, SpectralData,
};
use crate::scheme::{Scheme, StepKind};

/// Fewest points accepted by [`portrait`].
pub const MIN_PORTRAIT_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("phase drift needs a time-reversible map (g - h = {g_minus_h})")]
    NotReversible { g_minus_h: f64 },
    #[error("degenerate point cloud: {points} points, need at least {MIN_PORTRAIT_POINTS} spanning an ellipse")]
    Degenerate { points: usize },
    #[error(transparent)]
    PhaseMap(#[from] PhaseMapError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub step: usize,
    pub t: f64,
    pub q: f64,
    pub p: f64,
    /// `p²/2 + ω²q²/2`.
    pub energy: f64,
    /// Present for reversible elliptic maps.
    pub modified_energy: Option<f64>,
    /// Unwrapped angle in the plane `(√(ν/τ)·q, p)`, increasing with time.
    /// Present for elliptic maps with `ντ > 0`.
    pub phase: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub eps: f64,
    pub omega: f64,
    /// Step 0, every `stride`-th step and the final step, in step order.
    pub samples: Vec<Sample>,
}

impl TrajectoryRecord {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always holds step 0")
    }
}

fn advance(scheme: &Scheme, q: &mut f64, p: &mut f64, eps: f64, omega: f64) {
    let w2 = omega * omega;
    for step in scheme.active_steps() {
        match step.kind() {
            StepKind::Drift => *q += step.c() * eps * *p,
            StepKind::Kick | StepKind::GradientKick => {
                let strength = step.c() * eps * w2 + step.u() * eps.powi(3) * w2 * w2;
                *p -= strength * *q;
            }
        }
    }
}

/// Continuous-angle tracker in the rescaled plane.
struct PhaseTracker {
    scale: f64,
    last: f64,
    turns: f64,
}

impl PhaseTracker {
    fn new(sd: &SpectralData, tau: f64, nu: f64) -> Option<Self> {
        (sd.nu_tau > 0.0).then(|| PhaseTracker {
            scale: (nu / tau).sqrt(),
            last: f64::NAN,
            turns: 0.0,
        })
    }

    fn update(&mut self, q: f64, p: f64) -> f64 {
        let raw = (-p).atan2(self.scale * q);
        if self.last.is_finite() {
            let jump = raw - self.last;
            if jump < -PI {
                self.turns += 2.0 * PI;
            } else if jump > PI {
                self.turns -= 2.0 * PI;
            }
        }
        self.last = raw;
        raw + self.turns
    }
}

/// Iterates `n` steps from `(q0, p0)`, sampling every `stride` steps.
///
/// Divergent trajectories in the hyperbolic regime are returned as is.
pub fn iterate(
    scheme: &Scheme,
    q0: f64,
    p0: f64,
    eps: f64,
    omega: f64,
    n: usize,
    stride: usize,
) -> Result<TrajectoryRecord, SimError> {
    if n == 0 || stride == 0 {
        return Err(SimError::InvalidArgument(format!(
            "step count and stride must be at least 1 (got {n}, {stride})"
        )));
    }
    let map = scheme_matrix(scheme, eps, omega);
    let sd = spectral(&map).ok();
    let mut tracker = sd
        .as_ref()
        .and_then(|sd| PhaseTracker::new(sd, map.matrix.tau, map.matrix.nu));
    let h_a = |q: f64, p: f64| sd.as_ref().and_then(|sd| modified_hamiltonian(sd, q, p).ok());
    let sample = |step: usize, q: f64, p: f64, phase: Option<f64>| Sample {
        step,
        t: step as f64 * eps,
        q,
        p,
        energy: 0.5 * p * p + 0.5 * omega * omega * q * q,
        modified_energy: h_a(q, p),
        phase,
    };

    let (mut q, mut p) = (q0, p0);
    let mut samples = Vec::with_capacity(n / stride + 2);
    let phase = tracker.as_mut().map(|t| t.update(q, p));
    samples.push(sample(0, q, p, phase));
    for step in 1..=n {
        advance(scheme, &mut q, &mut p, eps, omega);
        let phase = tracker.as_mut().map(|t| t.update(q, p));
        if step % stride == 0 || step == n {
            samples.push(sample(step, q, p, phase));
        }
    }
    Ok(TrajectoryRecord {
        eps,
        omega,
        samples,
    })
}

/// Phase lag of the simulated trajectory against the exact solution after
/// `periods` periods at `εω = x` (`ω = 1`), in radians.
///
/// The deviation `φ_n - φ_0 - nεω` is linearly interpolated to the
/// fractional step count `2πk/(εω)`.
pub fn phase_drift(scheme: &Scheme, x: f64, periods: u32) -> Result<f64, SimError> {
    let map = scheme_matrix(scheme, x, 1.0);
    let sd = spectral(&map)?;
    if !sd.reversible {
        return Err(SimError::NotReversible {
            g_minus_h: sd.g_minus_h,
        });
    }
    if sd.nu_tau <= 0.0 {
        return Err(PhaseMapError::UndefinedEffectiveParameters { nu_tau: sd.nu_tau }.into());
    }
    if periods == 0 {
        return Ok(0.0);
    }
    let target = 2.0 * PI * periods as f64 / x;
    let whole = target.floor() as usize;
    let record = iterate(scheme, 1.0, 0.0, x, 1.0, whole + 1, 1)?;
    let phase0 = record.samples[0].phase.unwrap_or(0.0);
    let deviation = |i: usize| {
        let s = &record.samples[i];
        s.phase.unwrap_or(f64::NAN) - phase0 - s.step as f64 * x
    };
    let frac = target - whole as f64;
    Ok(deviation(whole) * (1.0 - frac) + deviation(whole + 1) * frac)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Portrait {
    pub points: Vec<(f64, f64)>,
    /// Major-axis angle from the q axis, degrees in `(-90, 90]`.
    pub tilt_deg: f64,
    /// Major over minor semi-axis.
    pub axis_ratio: f64,
    /// Fitted symmetric form `Q` with `rᵀQr = 1` on the cloud.
    pub conic: Mat2,
}

/// Iterates `n` steps and fits `Aq² + Bqp + Cp² = 1` to the orbit by least
/// squares.
pub fn portrait(
    scheme: &Scheme,
    q0: f64,
    p0: f64,
    eps: f64,
    omega: f64,
    n: usize,
) -> Result<Portrait, SimError> {
    spectral(&scheme_matrix(scheme, eps, omega))?;
    if n < MIN_PORTRAIT_POINTS {
        return Err(SimError::Degenerate { points: n });
    }
    let record = iterate(scheme, q0, p0, eps, omega, n, 1)?;
    let points: Vec<(f64, f64)> = record.samples[1..].iter().map(|s| (s.q, s.p)).collect();
    let [a, b, c] = fit_central_conic(&points).ok_or(SimError::Degenerate { points: points.len() })?;
    let conic = [[a, 0.5 * b], [0.5 * b, c]];
    let axes = ellipse_axes(&conic);
    Ok(Portrait {
        points,
        tilt_deg: axes.tilt_deg,
        axis_ratio: axes.axis_ratio,
        conic,
    })
}

/// Normal equations for `[A, B, C]`, solved by Cramer's rule.
fn fit_central_conic(points: &[(f64, f64)]) -> Option<[f64; 3]> {
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for &(q, p) in points {
        let row = [q * q, q * p, p * p];
        for i in 0..3 {
            atb[i] += row[i];
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let det3 = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det3(&ata);
    let scale: f64 = ata.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).sum();
    if !d.is_finite() || d.abs() <= 1e-14 * scale.powi(3) {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut m = ata;
        for i in 0..3 {
            m[i][k] = atb[i];
        }
        *slot = det3(&m) / d;
    }
    let [a, b, c] = out;
    (a > 0.0 && c > 0.0 && 4.0 * a * c > b * b).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::phase_error;
    use crate::phasemap::{invariant_quadratic_form, propagate_closed_form};
    use crate::scheme::{first_order, forest_ruth, stormer_verlet};
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_step_matches_matrix() {
        let sv = stormer_verlet();
        let rec = iterate(&sv, 0.7, -0.2, 0.3, 1.3, 1, 1).unwrap();
        let (q, p) = scheme_matrix(&sv, 0.3, 1.3).matrix.apply(0.7, -0.2);
        assert_abs_diff_eq!(rec.last().q, q, epsilon = 1e-15);
        assert_abs_diff_eq!(rec.last().p, p, epsilon = 1e-15);
    }

    #[test]
    fn long_run_matches_closed_form() {
        let sv = stormer_verlet();
        let n = 10_000;
        let rec = iterate(&sv, 1.0, 0.0, 0.3, 1.0, n, 1000).unwrap();
        let m = propagate_closed_form(&scheme_matrix(&sv, 0.3, 1.0), n as f64 * 0.3).unwrap();
        assert_abs_diff_eq!(rec.last().q, m[0][0], epsilon = 1e-9);
        assert_abs_diff_eq!(rec.last().p, m[1][0], epsilon = 1e-9);
    }

    #[test]
    fn sampling_layout() {
        let rec = iterate(&stormer_verlet(), 1.0, 0.0, 0.1, 1.0, 25, 10).unwrap();
        let steps: Vec<usize> = rec.samples.iter().map(|s| s.step).collect();
        assert_eq!(steps, [0, 10, 20, 25]);
        assert_abs_diff_eq!(rec.samples[2].t, 2.0, epsilon = 1e-15);
        assert!(iterate(&stormer_verlet(), 1.0, 0.0, 0.1, 1.0, 0, 1).is_err());
        assert!(iterate(&stormer_verlet(), 1.0, 0.0, 0.1, 1.0, 5, 0).is_err());
    }

    #[test]
    fn hyperbolic_growth() {
        let rec = iterate(&stormer_verlet(), 1.0, 0.0, 2.5, 1.0, 100, 1).unwrap();
        let q: Vec<f64> = rec.samples.iter().map(|s| s.q.abs()).collect();
        for w in q[10..].windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!(rec.samples.iter().all(|s| s.modified_energy.is_none() && s.phase.is_none()));
    }

    #[test]
    fn verlet_drift_after_hundred_periods() {
        let got = phase_drift(&stormer_verlet(), 0.1, 100).unwrap();
        let expect = 100.0 * phase_error(&stormer_verlet(), 0.1).unwrap();
        assert_abs_diff_eq!(got, expect, epsilon = 1e-6);
        assert_abs_diff_eq!(got, 0.2621, epsilon = 1e-4);
        assert_eq!(phase_drift(&stormer_verlet(), 0.1, 0).unwrap(), 0.0);
    }

    #[test]
    fn forest_ruth_drift_is_negative() {
        let got = phase_drift(&forest_ruth(), 0.4, 50).unwrap();
        assert!(got < 0.0);
        assert_abs_diff_eq!(got, 50.0 * phase_error(&forest_ruth(), 0.4).unwrap(), epsilon = 1e-6);
    }

    #[test]
    fn drift_rejects_non_reversible() {
        assert!(matches!(
            phase_drift(&first_order(), 0.3, 1),
            Err(SimError::NotReversible { .. })
        ));
        assert!(phase_drift(&stormer_verlet(), 2.5, 1).is_err());
    }

    #[test]
    fn verlet_portrait_is_axis_aligned() {
        let pt = portrait(&stormer_verlet(), 1.0, 0.0, 0.3, 1.0, 200).unwrap();
        assert!(pt.tilt_deg.abs() < 0.5, "{}", pt.tilt_deg);
    }

    #[test]
    fn first_order_portrait_tilt_and_conic() {
        let lf1 = first_order();
        let pt = portrait(&lf1, 1.0, 0.0, 0.3, 1.0, 200).unwrap();
        assert!((pt.tilt_deg.abs() - 45.0).abs() < 1.0, "{}", pt.tilt_deg);
        let q = invariant_quadratic_form(&scheme_matrix(&lf1, 0.3, 1.0).matrix).unwrap();
        let (sf, sq) = (pt.conic[0][0], q[0][0]);
        for (fit_row, q_row) in pt.conic.iter().zip(&q) {
            for (a, b) in fit_row.iter().zip(q_row) {
                assert_abs_diff_eq!(a / sf, b / sq, epsilon = 1e-2);
            }
        }
    }

    #[test]
    fn portrait_needs_enough_points() {
        assert!(matches!(
            portrait(&stormer_verlet(), 1.0, 0.0, 0.3, 1.0, 5),
            Err(SimError::Degenerate { .. })
        ));
        assert!(portrait(&stormer_verlet(), 1.0, 0.0, 0.3, 1.0, 0).is_err());
    }
}
