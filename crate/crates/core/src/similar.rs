//! Closed-form dynamics for qubits with identical detunings.
//!
//! With `delta1 == delta2` the state splits into a sub-radiant component that
//! never decays and a super-radiant component that evolves with the survival
//! amplitude `G(tau) = e^{-M tau/2} (cosh(F tau/2) + (M/F) sinh(F tau/2))`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{beta_coefficients, AmplitudePair, Betas, InitialState, SystemParams};

/// Below this `|F tau|` the survival amplitude switches to its Taylor limit.
const SERIES_THRESHOLD: f64 = 1e-6;

/// Rates entering the survival amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalParams {
    /// `M = 1 - i (chi + delta_L - 4J)`.
    pub big_m: C64,
    /// `F = sqrt(M^2 - (R (1 + cos eta))^2)`, principal branch.
    pub big_f: C64,
    /// Kernel strength `R^2 cos^4(eta / 2)`.
    pub kappa: f64,
}

impl SurvivalParams {
    /// Survival rates without the Ising shift (`J` is ignored).
    pub fn new(p: &SystemParams) -> Result<Self> {
        Self::with_shift(p, 0.0)
    }

    /// Survival rates with `M -> M_J = 1 - i(chi + delta_L - 4J)`.
    pub fn with_ising(p: &SystemParams) -> Result<Self> {
        Self::with_shift(p, 4.0 * p.j)
    }

    fn with_shift(p: &SystemParams, shift: f64) -> Result<Self> {
        p.require_similar()?;
        let q = p.dressed(1);
        let big_m = C64::new(1.0, -(q.chi + p.delta_l - shift));
        let coupling = p.coupling * (1.0 + q.eta.cos());
        let big_f = (big_m * big_m - coupling * coupling).sqrt();
        let c2 = q.cos2_half();
        let kappa = p.coupling * p.coupling * c2 * c2;
        Ok(SurvivalParams { big_m, big_f, kappa })
    }

    /// Survival amplitude at scaled time `tau >= 0`.
    pub fn amplitude(&self, tau: f64) -> C64 {
        let m = self.big_m;
        let f = self.big_f;
        let x = f * (0.5 * tau);
        let half_mt = m * (0.5 * tau);
        if (f * tau).norm() < SERIES_THRESHOLD {
            let x2 = x * x;
            return (-half_mt).exp() * (1.0 + x2 * 0.5 + half_mt * (1.0 + x2 / 6.0));
        }
        if x.norm() < 1.0 {
            return (-half_mt).exp() * (x.cosh() + half_mt * (x.sinh() / x));
        }
        // Two decaying exponentials; never forms cosh * e^{-M tau/2}, which
        // overflows times underflows at long times.
        let (slow, fast, w_slow, w_fast) = self.modes();
        w_slow * (slow * tau).exp() + w_fast * (fast * tau).exp()
    }

    /// Exponents and weights of the two-pole form, with `F` oriented so that
    /// `|F + M| >= |F - M|` and the slow pole computed without cancellation.
    fn modes(&self) -> (C64, C64, C64, C64) {
        let m = self.big_m;
        let f = if (self.big_f + m).norm() >= (self.big_f - m).norm() { self.big_f } else { -self.big_f };
        let sum = f + m;
        let slow = -2.0 * self.kappa / sum;
        let fast = -0.5 * sum;
        (slow, fast, sum / (2.0 * f), slow / f)
    }

    /// Smallest doubling time `tau` at which `|G| < tol` is guaranteed by the
    /// two-pole envelope. `None` when the super-radiant state does not decay.
    pub fn settling_time(&self, tol: f64) -> Option<f64> {
        let m = self.big_m;
        let envelope: Box<dyn Fn(f64) -> f64> = if self.big_f.norm() < 1e-6 * m.norm().max(1.0) {
            let fnorm = self.big_f.norm();
            Box::new(move |t| (-(m.re - fnorm) * t / 2.0).exp() * (1.0 + (m.norm() + fnorm) * t / 2.0))
        } else {
            let (slow, fast, ws, wf) = self.modes();
            Box::new(move |t| ws.norm() * (slow.re * t).exp() + wf.norm() * (fast.re * t).exp())
        };
        let mut tau = 1.0;
        while tau < 1e15 {
            if envelope(tau) < tol {
                return Some(tau);
            }
            tau *= 2.0;
        }
        None
    }
}

/// `G(tau)` for identical detunings, ignoring `J`.
pub fn survival_amplitude(tau: f64, p: &SystemParams) -> Result<C64> {
    Ok(SurvivalParams::new(p)?.amplitude(tau))
}

/// `G_J(tau)`, the survival amplitude with the Ising shift.
pub fn survival_amplitude_j(tau: f64, p: &SystemParams) -> Result<C64> {
    Ok(SurvivalParams::with_ising(p)?.amplitude(tau))
}

/// Precomputed propagator for repeated evaluation on a time grid.
#[derive(Debug, Clone, Copy)]
pub struct SimilarPropagator {
    survival: SurvivalParams,
    betas: Betas,
    r1: f64,
    r2: f64,
    /// Ising coupling for the global phase `e^{2iJ tau}`; zero for the plain form.
    ising: f64,
}

impl SimilarPropagator {
    pub fn new(p: &SystemParams, init: &InitialState) -> Result<Self> {
        Ok(Self::build(SurvivalParams::new(p)?, p, init, 0.0))
    }

    pub fn with_ising(p: &SystemParams, init: &InitialState) -> Result<Self> {
        Ok(Self::build(SurvivalParams::with_ising(p)?, p, init, p.j))
    }

    fn build(survival: SurvivalParams, p: &SystemParams, init: &InitialState, ising: f64) -> Self {
        SimilarPropagator {
            survival,
            betas: beta_coefficients(p.r1, &init.amplitudes()),
            r1: p.r1,
            r2: p.r2(),
            ising,
        }
    }

    pub fn survival(&self) -> &SurvivalParams {
        &self.survival
    }

    pub fn at(&self, tau: f64) -> AmplitudePair {
        let g = self.survival.amplitude(tau);
        let Betas { plus, minus } = self.betas;
        let amp = AmplitudePair {
            c1: minus * self.r2 + g * plus * self.r1,
            c2: -minus * self.r1 + g * plus * self.r2,
        };
        if self.ising == 0.0 {
            amp
        } else {
            amp.scale(C64::from_polar(1.0, 2.0 * self.ising * tau))
        }
    }

    pub fn stationary(&self) -> AmplitudePair {
        let minus = self.betas.minus;
        AmplitudePair { c1: minus * self.r2, c2: -minus * self.r1 }
    }
}

pub fn amplitudes_similar(tau: f64, p: &SystemParams, init: &InitialState) -> Result<AmplitudePair> {
    Ok(SimilarPropagator::new(p, init)?.at(tau))
}

/// Amplitudes with the Ising interaction, including the global phase
/// `e^{2iJ tau}` carried by both single-excitation states.
pub fn amplitudes_j(tau: f64, p: &SystemParams, init: &InitialState) -> Result<AmplitudePair> {
    Ok(SimilarPropagator::with_ising(p, init)?.at(tau))
}

/// Long-time limit: only the sub-radiant projection survives. Depends on
/// `r1` and the initial state alone.
pub fn stationary_amplitudes(p: &SystemParams, init: &InitialState) -> Result<AmplitudePair> {
    p.require_similar()?;
    let b = beta_coefficients(p.r1, &init.amplitudes());
    Ok(AmplitudePair { c1: b.minus * p.r2(), c2: -b.minus * p.r1 })
}

/// Time after which `|G| < tol`, for "long time" checks.
pub fn settling_time(p: &SystemParams, tol: f64) -> Result<f64> {
    SurvivalParams::new(p)?.settling_time(tol).ok_or_else(|| {
        Error::InvalidParams("super-radiant component does not decay for these parameters".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    /// Closed form exactly as written, for a caller-chosen branch of `F`.
    fn literal(tau: f64, m: C64, f: C64) -> C64 {
        (-m * tau / 2.0).exp() * ((f * tau / 2.0).cosh() + m / f * (f * tau / 2.0).sinh())
    }

    fn params(coupling: f64, omega: f64, delta: f64, delta_l: f64) -> SystemParams {
        SystemParams { coupling, omega, delta1: delta, delta2: delta, delta_l, ..Default::default() }
    }

    #[test]
    fn starts_at_one() {
        for p in [params(0.1, 0.0, 0.0, 0.0), params(10.0, 3.0, -2.0, 1.5)] {
            assert_eq!(survival_amplitude(0.0, &p).unwrap(), C64::new(1.0, 0.0));
        }
    }

    #[test]
    fn weak_coupling_value() {
        // mpmath: closed form and direct integration of G'' + G' + 0.01 G = 0
        let g = survival_amplitude(1.0, &params(0.1, 0.0, 0.0, 0.0)).unwrap();
        assert!((g - 0.996_324_052_893_414_3).norm() < 1e-14, "{g}");
    }

    #[test]
    fn kappa_identity() {
        for (omega, delta) in [(0.0, 0.0), (1.0, 0.0), (2.0, 3.0), (5.0, -4.0)] {
            let p = params(3.0, omega, delta, 0.7);
            let s = SurvivalParams::new(&p).unwrap();
            let eta = p.dressed(1).eta;
            let k = (p.coupling * (1.0 + eta.cos()) / 2.0).powi(2);
            assert!((s.kappa - k).abs() < 1e-12);
            let lhs = s.big_f * s.big_f;
            let rhs = s.big_m * s.big_m - (p.coupling * (1.0 + eta.cos())).powi(2);
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn branch_invariance() {
        for p in [params(0.1, 1.0, 0.5, 0.0), params(10.0, 0.0, 0.0, 0.0), params(4.0, 2.0, 1.0, -3.0)] {
            let s = SurvivalParams::new(&p).unwrap();
            for k in 0..40 {
                let tau = 0.25 * k as f64;
                let a = literal(tau, s.big_m, s.big_f);
                let b = literal(tau, s.big_m, -s.big_f);
                assert!((a - b).norm() < 1e-12, "tau={tau}: {a} vs {b}");
                assert!((s.amplitude(tau) - a).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_initial_slope() {
        // central difference through the analytic continuation to tau < 0
        let h = 1e-5;
        for p in [params(0.1, 0.0, 0.0, 0.0), params(10.0, 0.0, 0.0, 0.0), params(10.0, 10.0, 0.0, 0.0)] {
            let s = SurvivalParams::new(&p).unwrap();
            let d = (literal(h, s.big_m, s.big_f) - literal(-h, s.big_m, s.big_f)) / (2.0 * h);
            assert!(d.norm() < 1e-6, "{d}");
            if p.coupling < 1.0 {
                let forward = (s.amplitude(h) - 1.0) / h;
                assert!(forward.norm() < 1e-6, "{forward}");
            }
        }
    }

    #[test]
    fn bounded_in_both_regimes() {
        for coupling in [0.1, 10.0] {
            for omega in [0.0, 1.0, 5.0, 10.0] {
                let p = params(coupling, omega, 0.0, 0.0);
                let s = SurvivalParams::new(&p).unwrap();
                for k in 0..=4000 {
                    let tau = k as f64 * 0.1;
                    assert!(s.amplitude(tau).norm() <= 1.0 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn strong_coupling_oscillates_through_zero() {
        let s = SurvivalParams::new(&params(10.0, 0.0, 0.0, 0.0)).unwrap();
        // M real here, so G is real and crosses zero.
        let mut crossings = 0;
        let mut prev = s.amplitude(0.0).re;
        for k in 1..=800 {
            let g = s.amplitude(k as f64 * 0.005);
            assert!(g.im.abs() < 1e-12);
            if g.re * prev < 0.0 {
                crossings += 1;
            }
            prev = g.re;
        }
        assert!(crossings >= 10, "{crossings}");
    }

    #[test]
    fn degenerate_f_is_continuous() {
        // M = 1, F = 0 exactly when (R (1 + cos eta))^2 = 1, i.e. R = 1/2 undriven.
        let p = params(0.5, 0.0, 0.0, 0.0);
        let s = SurvivalParams::new(&p).unwrap();
        assert!(s.big_f.norm() < 1e-12);
        for tau in [0.0, 0.5, 1.0, 3.0, 10.0] {
            // (1 + tau/2) e^{-tau/2} is the confluent limit.
            let exact = (1.0 + tau / 2.0) * (-tau / 2.0f64).exp();
            assert!((s.amplitude(tau) - exact).norm() < 1e-12);
        }
        let q = params(0.5 + 1e-9, 0.0, 0.0, 0.0);
        let sq = SurvivalParams::new(&q).unwrap();
        for tau in [0.5, 2.0, 7.0] {
            assert!((sq.amplitude(tau) - s.amplitude(tau)).norm() < 1e-7);
        }
    }

    #[test]
    fn long_times_do_not_overflow() {
        let p = params(0.05, 10.0, 0.0, 10.0);
        let s = SurvivalParams::new(&p).unwrap();
        let g = s.amplitude(1e9);
        assert!(g.norm().is_finite() && g.norm() < 1e-8);
    }

    #[test]
    fn tau_zero_reproduces_initial_amplitudes() {
        let p = params(2.0, 1.0, 0.3, -0.4);
        let init = InitialState { theta: 1.1, phi: 2.2 };
        let a = amplitudes_similar(0.0, &p, &init).unwrap();
        let b = init.amplitudes();
        assert!((a.c1 - b.c1).norm() < 1e-12 && (a.c2 - b.c2).norm() < 1e-12);
    }

    #[test]
    fn subradiant_state_is_frozen() {
        let init = InitialState { theta: PI / 2.0, phi: PI };
        let p = params(10.0, 3.0, 1.0, 2.0);
        let a0 = init.amplitudes();
        for k in 0..100 {
            let a = amplitudes_similar(k as f64 * 0.2, &p, &init).unwrap();
            assert!((a.c1 - a0.c1).norm() < 1e-12 && (a.c2 - a0.c2).norm() < 1e-12);
        }
    }

    #[test]
    fn long_time_matches_stationary() {
        let init = InitialState { theta: 0.7, phi: 1.9 };
        let p = params(10.0, 2.0, 1.0, 0.5);
        // strong coupling: |G| <= poly * e^{-Re(M - F) tau / 2} is far below 1e-8 by tau = 50
        let a = amplitudes_similar(50.0, &p, &init).unwrap();
        let s = stationary_amplitudes(&p, &init).unwrap();
        assert!((a.c1 - s.c1).norm() < 1e-6 && (a.c2 - s.c2).norm() < 1e-6);
    }

    #[test]
    fn stationary_examples() {
        let p = params(1.0, 0.0, 0.0, 0.0);
        let plus = InitialState { theta: PI / 2.0, phi: 0.0 };
        let s = stationary_amplitudes(&p, &plus).unwrap();
        assert!(s.c1.norm() < 1e-15 && s.c2.norm() < 1e-15);

        let minus = InitialState { theta: PI / 2.0, phi: PI };
        let s = stationary_amplitudes(&p, &minus).unwrap();
        assert!((s.c1 - FRAC_1_SQRT_2).norm() < 1e-15 && (s.c2 + FRAC_1_SQRT_2).norm() < 1e-15);

        let q = SystemParams { r1: 0.5, ..p };
        let s = stationary_amplitudes(&q, &InitialState { theta: 0.0, phi: 0.0 }).unwrap();
        assert!((s.c1 - 0.75).norm() < 1e-15);
        assert!((s.c2 + 3f64.sqrt() / 4.0).norm() < 1e-15);
        let t = settling_time(&q, 1e-8).unwrap();
        let a = amplitudes_similar(t.max(1e3), &q, &InitialState { theta: 0.0, phi: 0.0 }).unwrap();
        assert!((a.c1 - s.c1).norm() < 1e-8 && (a.c2 - s.c2).norm() < 1e-8);
    }

    #[test]
    fn settling_time_is_honest() {
        for p in [params(0.1, 0.0, 0.0, 0.0), params(0.05, 10.0, 0.0, 10.0), params(10.0, 1.0, 1.0, 1.0), params(0.5, 0.0, 0.0, 0.0)] {
            let s = SurvivalParams::new(&p).unwrap();
            let t = s.settling_time(1e-8).unwrap();
            for k in 0..50 {
                let tau = t * (1.0 + k as f64 * 0.1);
                assert!(s.amplitude(tau).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn decoupled_dressed_state_never_settles() {
        // Omega = 0 with negative detuning: eta = pi, cos^2(eta/2) = 0.
        let p = params(1.0, 0.0, -1.0, 0.0);
        assert!(settling_time(&p, 1e-8).is_err());
    }

    #[test]
    fn ising_reduces_to_plain_form() {
        let p = params(3.0, 1.0, 0.5, 0.2);
        let init = InitialState { theta: 1.0, phi: 0.3 };
        for tau in [0.0, 0.3, 1.7, 5.0] {
            assert_eq!(survival_amplitude_j(tau, &p).unwrap(), survival_amplitude(tau, &p).unwrap());
            assert_eq!(amplitudes_j(tau, &p, &init).unwrap(), amplitudes_similar(tau, &p, &init).unwrap());
        }
    }

    #[test]
    fn ising_can_cancel_phase() {
        let mut p = params(1.0, 1.0, 0.0, 0.5);
        p.j = (p.dressed(1).chi + p.delta_l) / 4.0;
        let s = SurvivalParams::with_ising(&p).unwrap();
        assert!((s.big_m - 1.0).norm() < 1e-15);
        // real M and real F^2: G stays real
        for k in 0..20 {
            assert!(s.amplitude(k as f64 * 0.3).im.abs() < 1e-12);
        }
    }

    #[test]
    fn ising_global_phase_leaves_moduli() {
        let mut p = params(2.0, 1.0, 0.0, 0.0);
        p.j = 1.3;
        let init = InitialState { theta: 0.4, phi: 0.0 };
        let prop = SimilarPropagator::with_ising(&p, &init).unwrap();
        let g = prop.survival().amplitude(2.0);
        let b = beta_coefficients(p.r1, &init.amplitudes());
        let bare = b.minus * p.r2() + g * b.plus * p.r1;
        let a = prop.at(2.0);
        assert!((a.c1.norm() - bare.norm()).abs() < 1e-14);
        assert!((a.c1 - bare * C64::from_polar(1.0, 2.0 * 1.3 * 2.0)).norm() < 1e-14);
    }

    #[test]
    fn requires_identical_detunings() {
        let p = SystemParams { delta1: 0.0, delta2: 1.0, ..Default::default() };
        assert!(matches!(survival_amplitude(1.0, &p), Err(Error::NotSimilar { .. })));
        assert!(stationary_amplitudes(&p, &InitialState { theta: 0.0, phi: 0.0 }).is_err());
    }
}
