#![allow(dead_code)]

use proptest::prelude::*;
use symphase::phasemap::{Mat2, PhaseMatrix};
use symphase::scheme::{Scheme, Step};

pub fn mat_close(a: &Mat2, b: &Mat2, tol: f64) -> bool {
    (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).abs() <= tol))
}

pub fn inverse(m: &PhaseMatrix<f64>) -> Mat2 {
    // det = 1
    [[m.h, -m.tau], [m.nu, m.g]]
}

fn palindrome(drifts: &[f64], kicks: &[f64], mid: f64, mid_u: Option<f64>) -> Option<Scheme> {
    let d_total: f64 = 2.0 * drifts.iter().sum::<f64>();
    let k_total: f64 = 2.0 * kicks.iter().sum::<f64>() + mid;
    if d_total.abs() < 0.1 || k_total.abs() < 0.1 {
        return None;
    }
    let mut half = Vec::new();
    for (i, d) in drifts.iter().enumerate() {
        half.push(Step::drift(d / d_total));
        if i + 1 < drifts.len() {
            half.push(Step::kick(kicks[i] / k_total));
        }
    }
    // the innermost kick pair becomes the middle step
    let inner = kicks.last().copied().unwrap_or(0.0) * 2.0 + mid;
    let center = match mid_u {
        Some(u) => Step::gradient_kick(inner / k_total, u),
        None => Step::kick(inner / k_total),
    };
    let mut steps = half.clone();
    steps.push(center);
    steps.extend(half.into_iter().rev());
    Scheme::new("random", steps, 2, drifts.len() as u32, "").ok()
}

/// Random palindromic schemes built from drift/kick weights normalized to
/// sum to one, optionally with a central gradient kick.
pub fn symmetric_scheme() -> impl Strategy<Value = Scheme> {
    (1usize..4)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(0.05f64..1.0, n),
                prop::collection::vec(-1.0f64..1.0, n),
                0.05f64..1.0,
                prop::option::of(-0.1f64..0.1),
            )
        })
        .prop_filter_map("degenerate weights", |(d, k, mid, u)| palindrome(&d, &k, mid, u))
}

/// Random drift/kick sequences with no symmetry imposed.
pub fn any_scheme() -> impl Strategy<Value = Scheme> {
    prop::collection::vec((0.05f64..1.0, -1.0f64..1.0), 1..5).prop_filter_map(
        "degenerate weights",
        |pairs| {
            let d_total: f64 = pairs.iter().map(|p| p.0).sum();
            let k_total: f64 = pairs.iter().map(|p| p.1).sum();
            if k_total.abs() < 0.1 {
                return None;
            }
            let steps = pairs
                .iter()
                .flat_map(|(d, k)| [Step::drift(d / d_total), Step::kick(k / k_total)])
                .collect();
            Scheme::new("random", steps, 1, pairs.len() as u32, "").ok()
        },
    )
}
