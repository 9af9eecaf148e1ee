use std::f64::consts::PI;

use super::entanglement_dynamic;
use crate::model::{beta_coefficients, AmplitudePair, InitialState};

const GRID_STEP: f64 = 1e-3;
const THETA_TOL: f64 = 1e-9;

/// Long-time entanglement `4 (r1 r2)^2 |beta_-|^4` for identical qubits.
///
/// Evaluated through the stationary amplitudes `(r2 beta_-, -r1 beta_-)` so
/// it agrees bit for bit with the dynamic measure of that state.
pub fn entanglement_stationary(r1: f64, theta: f64, phi: f64) -> f64 {
    let r2 = (1.0 - r1 * r1).sqrt();
    let amp0 = InitialState { theta, phi }.amplitudes();
    let minus = beta_coefficients(r1, &amp0).minus;
    entanglement_dynamic(&AmplitudePair::new(minus * r2, -minus * r1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryOptimum {
    pub theta: f64,
    pub entanglement: f64,
}

/// Maximises [`entanglement_stationary`] over `theta in [0, pi]` at fixed
/// `r1` and `phi`: a `1e-3` grid scan, golden-section refinement of the best
/// cell, then a bisection on the derivative of `|beta_-|^2` to full precision.
///
/// Ties on the grid resolve to the smallest `theta`.
pub fn optimize_stationary(r1: f64, phi: f64) -> StationaryOptimum {
    let e = |t: f64| entanglement_stationary(r1, t, phi);
    let n = (PI / GRID_STEP).ceil() as usize;
    let h = PI / n as f64;
    let mut best = 0;
    let mut best_e = e(0.0);
    for k in 1..=n {
        let v = e(k as f64 * h);
        if v > best_e {
            best = k;
            best_e = v;
        }
    }
    let lo = (best as f64 - 1.0).max(0.0) * h;
    let hi = ((best + 1).min(n)) as f64 * h;
    let theta = golden_max(&e, lo, hi);

    // |beta_-|^2 = 1/2 + a cos(theta) + b sin(theta)
    let r2 = (1.0 - r1 * r1).sqrt();
    let a = 0.5 * (r2 * r2 - r1 * r1);
    let b = -r1 * r2 * phi.cos();
    let slope = |t: f64| -a * t.sin() + b * t.cos();
    let theta = polish(&slope, lo, hi).unwrap_or(theta);

    let mut out = StationaryOptimum { theta, entanglement: e(theta) };
    for edge in [0.0, PI] {
        let v = e(edge);
        if v > out.entanglement {
            out = StationaryOptimum { theta: edge, entanglement: v };
        }
    }
    out
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > THETA_TOL {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Root of a decreasing sign change of `slope` in `[lo, hi]`, if bracketed.
fn polish(slope: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    let (s_lo, s_hi) = (slope(lo), slope(hi));
    if !(s_lo > 0.0 && s_hi < 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
