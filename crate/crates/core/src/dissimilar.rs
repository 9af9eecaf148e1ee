//! Inverse-Laplace propagators for qubits with different detunings.
//!
//! Each amplitude obeys `C_j(tau) = G_j1(tau) C_1(0) + G_j2(tau) C_2(0)` where
//! the Laplace-domain propagators are rational with the cubic denominator
//! `s^3 + A_j s^2 + B_j s + C_j`. The time-domain propagators are residue
//! sums over the three roots of that cubic.
//!
//! The cubic for `j = 1` is the characteristic polynomial of the constant
//! coefficient system `(C_1, e^{-i xi21 tau} C_2, b)` with `b` the damped
//! pseudomode, and symmetrically for `j = 2`. The residue sums therefore
//! return the amplitudes in the same interaction picture as the
//! integro-differential equations, with no leftover frame phase.

use num_complex::Complex64 as C64;

use crate::cubic::solve_cubic;
use crate::error::{Error, Result};
use crate::model::{AmplitudePair, InitialState, SystemParams, NORM_TOL};

/// Pairwise root distance below which residue sums switch to divided
/// differences.
pub const CONFLUENCE_TOL: f64 = 1e-6;

/// Numerator and denominator coefficients of the Laplace-domain propagators.
/// Index 0 holds `j = 1`, index 1 holds `j = 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoeffs {
    pub a: [C64; 2],
    pub b: [C64; 2],
    pub c: [C64; 2],
    pub big_a: [C64; 2],
    pub big_b: [C64; 2],
    pub big_c: [C64; 2],
}

/// Coefficients with the loss rate set to 1 and the vacuum Rabi coupling set
/// to `R`. An Ising coupling enters as the shift `delta_L -> delta_L - 4J`.
pub fn cubic_coeffs(p: &SystemParams) -> CubicCoeffs {
    let q = [p.dressed(1), p.dressed(2)];
    let chi = [q[0].chi, q[1].chi];
    let c4 = [q[0].cos2_half().powi(2), q[1].cos2_half().powi(2)];
    let r = [p.r1, p.r2()];
    let r2 = p.coupling * p.coupling;
    let delta_l = p.delta_l - 4.0 * p.j;
    let i = C64::i();

    let cross = -r2 * r[0] * r[1] * q[0].cos2_half() * q[1].cos2_half();
    let total = r2 * (r[0] * r[0] * c4[0] + r[1] * r[1] * c4[1]);
    let mut out = CubicCoeffs {
        a: [C64::default(); 2],
        b: [C64::default(); 2],
        c: [C64::new(cross, 0.0); 2],
        big_a: [C64::default(); 2],
        big_b: [C64::default(); 2],
        big_c: [C64::default(); 2],
    };
    for j in 0..2 {
        let o = 1 - j;
        let a = 1.0 - i * (2.0 * chi[j] - chi[o] + delta_l);
        let mix = (chi[o] - chi[j]) * (i + chi[j] + delta_l);
        out.a[j] = a;
        out.big_a[j] = a;
        out.b[j] = mix + r2 * r[o] * r[o] * c4[o];
        out.big_b[j] = mix + total;
        out.big_c[j] = -i * r2 * r[j] * r[j] * (chi[j] - chi[o]) * c4[j];
    }
    out
}

/// Time-domain propagator matrix at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagators {
    pub g11: C64,
    pub g12: C64,
    pub g21: C64,
    pub g22: C64,
}

/// Roots and coefficients, precomputed for evaluation on a time grid.
#[derive(Debug, Clone, Copy)]
pub struct DissimilarPropagator {
    coeffs: CubicCoeffs,
    roots: [[C64; 3]; 2],
    init: Option<AmplitudePair>,
    ising: f64,
}

impl DissimilarPropagator {
    pub fn new(p: &SystemParams) -> Self {
        let coeffs = cubic_coeffs(p);
        let roots = [0, 1].map(|j| solve_cubic(coeffs.big_a[j], coeffs.big_b[j], coeffs.big_c[j]));
        DissimilarPropagator { coeffs, roots, init: None, ising: p.j }
    }

    pub fn with_initial(p: &SystemParams, init: &InitialState) -> Self {
        DissimilarPropagator { init: Some(init.amplitudes()), ..Self::new(p) }
    }

    pub fn coeffs(&self) -> &CubicCoeffs {
        &self.coeffs
    }

    /// Roots `s_j1, s_j2, s_j3` of the cubic for `j = 1, 2`.
    pub fn roots(&self) -> &[[C64; 3]; 2] {
        &self.roots
    }

    pub fn propagators(&self, tau: f64) -> Propagators {
        let k = &self.coeffs;
        let diag = |j: usize| residue_sum(&self.roots[j], Numerator::Quadratic(k.a[j], k.b[j]), tau);
        let off = |j: usize| residue_sum(&self.roots[j], Numerator::Constant(k.c[j]), tau);
        Propagators { g11: diag(0), g12: off(0), g21: off(1), g22: diag(1) }
    }

    /// Amplitudes at `tau`, including the Ising phase `e^{2iJ tau}`.
    ///
    /// # Panics
    /// If the propagator was built without an initial state.
    pub fn at(&self, tau: f64) -> AmplitudePair {
        let amp0 = self.init.expect("propagator built without an initial state");
        let g = self.propagators(tau);
        let amp = AmplitudePair {
            c1: g.g11 * amp0.c1 + g.g12 * amp0.c2,
            c2: g.g21 * amp0.c1 + g.g22 * amp0.c2,
        };
        if self.ising == 0.0 {
            amp
        } else {
            amp.scale(C64::from_polar(1.0, 2.0 * self.ising * tau))
        }
    }
}

pub fn propagators(tau: f64, p: &SystemParams) -> Propagators {
    DissimilarPropagator::new(p).propagators(tau)
}

pub fn amplitudes_dissimilar(tau: f64, p: &SystemParams, init: &InitialState) -> Result<AmplitudePair> {
    let amp = DissimilarPropagator::with_initial(p, init).at(tau);
    let norm = amp.norm_sqr();
    if !norm.is_finite() || norm > 1.0 + NORM_TOL {
        return Err(Error::NormExceeded { norm });
    }
    Ok(amp)
}

/// Numerator polynomial of a propagator: `s^2 + a s + b` or a constant.
#[derive(Debug, Clone, Copy)]
pub enum Numerator {
    Quadratic(C64, C64),
    Constant(C64),
}

impl Numerator {
    fn eval(&self, s: C64) -> C64 {
        match *self {
            Numerator::Quadratic(a, b) => (s + a) * s + b,
            Numerator::Constant(c) => c,
        }
    }
}

/// Inverse Laplace transform of `N(s) / ((s - s1)(s - s2)(s - s3))` at `tau`.
///
/// Distinct roots use the explicit exponential sums. Near-coincident roots
/// use the second divided difference of `N(s) e^{s tau}`, which is the
/// same quantity and stays finite at confluence.
pub fn residue_sum(roots: &[C64; 3], num: Numerator, tau: f64) -> C64 {
    if is_confluent(roots) {
        divided_difference(roots, num, tau)
    } else {
        explicit_sum(roots, num, tau)
    }
}

fn is_confluent(roots: &[C64; 3]) -> bool {
    let [s1, s2, s3] = *roots;
    let d12 = (s1 - s2).norm();
    let d13 = (s1 - s3).norm();
    let d23 = (s2 - s3).norm();
    let min_pair = d12.min(d13).min(d23);
    // A tight triple cluster is ill-conditioned even when no single pair is.
    let min_product = (d12 * d13).min(d12 * d23).min(d13 * d23);
    min_pair < CONFLUENCE_TOL || min_product < CONFLUENCE_TOL
}

fn explicit_sum(roots: &[C64; 3], num: Numerator, tau: f64) -> C64 {
    let [s1, s2, s3] = *roots;
    let (e1, e2, e3) = ((s1 * tau).exp(), (s2 * tau).exp(), (s3 * tau).exp());
    match num {
        Numerator::Quadratic(..) => {
            num.eval(s1) / ((s1 - s2) * (s1 - s3)) * e1 - num.eval(s2) / ((s1 - s2) * (s2 - s3)) * e2
                + num.eval(s3) / ((s1 - s3) * (s2 - s3)) * e3
        }
        Numerator::Constant(c) => {
            c / ((s1 - s2) * (s1 - s3) * (s2 - s3)) * ((s2 - s3) * e1 - (s1 - s3) * e2 + (s1 - s2) * e3)
        }
    }
}

/// `(N e^{s tau})[s1, s2, s3]` by the Leibniz rule for divided differences.
pub fn divided_difference(roots: &[C64; 3], num: Numerator, tau: f64) -> C64 {
    let [s1, s2, s3] = *roots;
    let e123 = exp_dd2(s1, s2, s3, tau);
    match num {
        Numerator::Quadratic(a, _) => {
            num.eval(s1) * e123 + (s1 + s2 + a) * exp_dd1(s2, s3, tau) + (s3 * tau).exp()
        }
        Numerator::Constant(c) => c * e123,
    }
}

/// `phi1(z) = (e^z - 1) / z`, accurate near zero.
fn phi1_series(z: C64) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for n in 2..24 {
        term *= z / n as f64;
        sum += term;
    }
    sum
}

/// First divided difference of `e^{s tau}`.
fn exp_dd1(x: C64, y: C64, tau: f64) -> C64 {
    let z = (x - y) * tau;
    if z.norm() < 0.5 {
        (y * tau).exp() * tau * phi1_series(z)
    } else {
        ((x * tau).exp() - (y * tau).exp()) / (x - y)
    }
}

/// Second divided difference of `e^{s tau}`.
fn exp_dd2(s1: C64, s2: C64, s3: C64, tau: f64) -> C64 {
    let pairs = [(s1, s2, s3), (s2, s1, s3), (s1, s3, s2)];
    // Label the widest-separated pair as the outer points.
    let (x, z, y) = pairs
        .iter()
        .copied()
        .max_by(|p, q| (p.0 - p.1).norm().partial_cmp(&(q.0 - q.1).norm()).unwrap())
        .unwrap();
    let spread = (x - z).norm();
    if spread * tau.max(1.0) <= 0.5 {
        let centre = (s1 + s2 + s3) / 3.0;
        let u = [(s1 - centre) * tau, (s2 - centre) * tau, (s3 - centre) * tau];
        // e^{c tau} tau^2 sum_m h_m(u) / (m + 2)!, h_m complete homogeneous
        let (mut h1, mut h12, mut h123) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0));
        let mut fact = 2.0;
        let mut sum = h123 / fact;
        for m in 1..40 {
            h1 *= u[0];
            h12 = h12 * u[1] + h1;
            h123 = h123 * u[2] + h12;
            fact *= (m + 2) as f64;
            let term = h123 / fact;
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        (centre * tau).exp() * tau * tau * sum
    } else {
        (exp_dd1(x, y, tau) - exp_dd1(y, z, tau)) / (x - z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::eval_monic;
    use crate::similar::amplitudes_similar;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn roots_poly(r: &[C64; 3]) -> (C64, C64, C64) {
        let a = -(r[0] + r[1] + r[2]);
        let b = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
        let c = -r[0] * r[1] * r[2];
        (a, b, c)
    }

    #[test]
    fn coefficient_block_invariants() {
        let p = SystemParams { coupling: 2.0, omega: 1.5, delta1: -0.3, delta2: 2.0, delta_l: 0.4, r1: 0.3, ..Default::default() };
        let k = cubic_coeffs(&p);
        assert_eq!(k.a, k.big_a);
        assert_eq!(k.c[0], k.c[1]);
        assert!(k.big_c[0].norm() > 0.0);
    }

    #[test]
    fn similar_detunings_factor_out_zero_root() {
        let p = SystemParams { coupling: 3.0, omega: 1.0, delta1: 0.5, delta2: 0.5, delta_l: -1.0, ..Default::default() };
        let k = cubic_coeffs(&p);
        assert_eq!(k.big_c, [C64::new(0.0, 0.0); 2]);
        let prop = DissimilarPropagator::new(&p);
        for j in 0..2 {
            assert!(prop.roots()[j].iter().any(|s| s.norm() < 1e-14));
        }
    }

    #[test]
    fn decoupled_qubit_one() {
        let p = SystemParams { coupling: 1.0, delta2: 1.0, r1: 1e-9, ..Default::default() };
        let k = cubic_coeffs(&p);
        assert!(k.c[0].norm() < 1e-8);
        // B_1 - b_1 is the qubit-1 term R^2 r1^2 cos^4(eta1/2)
        assert!((k.big_b[0] - k.b[0]).norm() < 1e-17);
        assert!(k.big_c[0].norm() < 1e-17);
    }

    #[test]
    fn residue_check_on_example() {
        let p = SystemParams { coupling: 1.0, omega: 0.0, delta1: 0.0, delta2: 1.0, delta_l: 0.0, r1: FRAC_1_SQRT_2, j: 0.0 };
        let prop = DissimilarPropagator::new(&p);
        let k = prop.coeffs();
        for j in 0..2 {
            for s in prop.roots()[j] {
                assert!(eval_monic(k.big_a[j], k.big_b[j], k.big_c[j], s).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn initial_value_theorem() {
        let p = SystemParams { coupling: 10.0, omega: 2.0, delta1: 0.0, delta2: 10.0, delta_l: 1.0, ..Default::default() };
        let g = propagators(0.0, &p);
        assert!((g.g11 - 1.0).norm() < 1e-12);
        assert!((g.g22 - 1.0).norm() < 1e-12);
        assert!(g.g12.norm() < 1e-12 && g.g21.norm() < 1e-12);
    }

    #[test]
    fn reduces_to_similar_closed_form() {
        for (coupling, omega, delta, delta_l) in [(0.1, 1.0, 0.0, 0.0), (10.0, 0.0, 0.0, 0.0), (4.0, 2.0, -1.0, 3.0)] {
            let p = SystemParams { coupling, omega, delta1: delta, delta2: delta, delta_l, r1: 0.4, j: 0.0 };
            let init = InitialState { theta: 1.2, phi: 0.8 };
            let prop = DissimilarPropagator::with_initial(&p, &init);
            for k in 0..50 {
                let tau = k as f64 * 0.37;
                let a = prop.at(tau);
                let b = amplitudes_similar(tau, &p, &init).unwrap();
                assert!((a.c1 - b.c1).norm() < 1e-10 && (a.c2 - b.c2).norm() < 1e-10, "tau={tau}");
            }
        }
    }

    #[test]
    fn no_cross_talk_without_coupling_weight() {
        let p = SystemParams { coupling: 2.0, omega: 1.0, delta1: 0.0, delta2: 1.0, r1: 1e-12, ..Default::default() };
        let init = InitialState { theta: 0.0, phi: 0.0 };
        for k in 0..20 {
            let a = amplitudes_dissimilar(k as f64 * 0.2, &p, &init).unwrap();
            assert!(a.c2.norm() < 1e-10);
        }
    }

    #[test]
    fn divided_difference_matches_explicit_for_distinct_roots() {
        let roots = [C64::new(-0.3, 1.0), C64::new(-1.2, -0.4), C64::new(-0.05, 2.5)];
        for tau in [0.0, 0.1, 1.0, 7.5] {
            for num in [Numerator::Quadratic(C64::new(0.5, -1.0), C64::new(2.0, 0.3)), Numerator::Constant(C64::new(-1.5, 0.5))] {
                let a = explicit_sum(&roots, num, tau);
                let b = divided_difference(&roots, num, tau);
                assert!((a - b).norm() < 1e-13, "{a} {b}");
            }
        }
    }

    #[test]
    fn confluent_limits() {
        // N(s) = s^2 + a s + b over (s - r)^3: e^{r t}(1 + (2r + a) t + N(r) t^2 / 2)
        let r = C64::new(-0.5, 0.7);
        let (a, b) = (C64::new(0.3, 0.1), C64::new(-1.0, 2.0));
        for tau in [0.0, 0.5, 3.0, 40.0] {
            let got = residue_sum(&[r, r, r], Numerator::Quadratic(a, b), tau);
            let n_r = (r + a) * r + b;
            let want = (r * tau).exp() * (1.0 + (2.0 * r + a) * tau + n_r * tau * tau / 2.0);
            assert!((got - want).norm() < 1e-12 * want.norm().max(1.0), "{got} {want}");
            let cross = residue_sum(&[r, r, r], Numerator::Constant(C64::new(1.0, 0.0)), tau);
            let want = (r * tau).exp() * tau * tau / 2.0;
            assert!((cross - want).norm() < 1e-12);
        }
    }

    #[test]
    fn collision_path_is_continuous() {
        let base = C64::new(-0.4, 1.3);
        let far = C64::new(-1.1, -0.6);
        let num = Numerator::Quadratic(C64::new(0.7, -0.2), C64::new(0.4, 0.9));
        let mut prev: Option<C64> = None;
        let mut eps = 1e-3;
        while eps > 1e-10 {
            let roots = [base, base + C64::new(eps, 0.0), far];
            let v = residue_sum(&roots, num, 4.0);
            if let Some(p) = prev {
                // values move smoothly, O(eps), never by a branch jump
                assert!((v - p).norm() < 1e-6 + 10.0 * eps, "eps={eps}: jump {}", (v - p).norm());
            }
            prev = Some(v);
            eps *= 0.8;
        }
        let (a, b, c) = roots_poly(&[base, base, far]);
        assert!(eval_monic(a, b, c, base).norm() < 1e-14);
    }
}
