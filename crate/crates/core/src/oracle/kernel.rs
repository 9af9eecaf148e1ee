use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::model::SystemParams;

/// Memory kernel of the reduced dynamics.
///
/// Qubit `j` sees `W^2 e^{-tau} e^{i nu_j tau}` with `nu_j = chi_j + delta_L - 4J`
/// and couples to qubit `i` with weight `k_ji = w_j w_i`, where
/// `w_j = alpha_j cos^2(eta_j / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    /// `W^2 = R^2` in units of the loss rate squared.
    pub amplitude_sq: f64,
    pub decay: f64,
    /// Phase rates `nu_1`, `nu_2`.
    pub nu: [f64; 2],
    /// Dressed splittings `chi_1`, `chi_2`.
    pub chi: [f64; 2],
    /// Cross phase rate `xi21 = chi_2 - chi_1`.
    pub xi21: f64,
    /// `w_j = alpha_j cos^2(eta_j / 2)`.
    pub weights: [f64; 2],
    /// Laser-cavity detuning after the Ising shift.
    pub delta_l: f64,
    /// Ising coupling, for the output phase.
    pub ising: f64,
}

impl KernelSpec {
    pub fn new(p: &SystemParams) -> Self {
        let q = [p.dressed(1), p.dressed(2)];
        let delta_l = p.delta_l - 4.0 * p.j;
        KernelSpec {
            amplitude_sq: p.coupling * p.coupling,
            decay: 1.0,
            nu: [q[0].chi + delta_l, q[1].chi + delta_l],
            chi: [q[0].chi, q[1].chi],
            xi21: q[1].chi - q[0].chi,
            weights: [p.r1 * q[0].cos2_half(), p.r2() * q[1].cos2_half()],
            delta_l,
            ising: p.j,
        }
    }

    /// Coupling weight `k_ji` between qubits `j` and `i` (0-based).
    pub fn k(&self, j: usize, i: usize) -> f64 {
        self.weights[j] * self.weights[i]
    }

    /// Kernel seen by qubit `j` (0-based) at lag `tau >= 0`.
    pub fn kernel(&self, j: usize, tau: f64) -> C64 {
        self.amplitude_sq * C64::new(-self.decay, self.nu[j]).scale(tau).exp()
    }

    /// Phase `e^{2iJ tau}` applied to solver output.
    pub fn output_phase(&self, tau: f64) -> C64 {
        C64::from_polar(1.0, 2.0 * self.ising * tau)
    }
}

/// Uniform discretisation of the Lorentzian continuum.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    /// Mode detunings from the cavity centre, spanning `[-cutoff, cutoff]`.
    pub detunings: Vec<f64>,
    /// Couplings `g_k = sqrt(J(omega_k) d_omega)`.
    pub couplings: Vec<f64>,
}

impl ModeGrid {
    /// `n_modes` points on `[-cutoff, cutoff]` for spectral amplitude `W^2`.
    pub fn lorentzian(amplitude_sq: f64, n_modes: usize, cutoff: f64) -> Self {
        assert!(n_modes >= 2, "need at least two modes");
        let spacing = 2.0 * cutoff / (n_modes - 1) as f64;
        let detunings: Vec<f64> = (0..n_modes).map(|k| -cutoff + k as f64 * spacing).collect();
        let couplings = detunings
            .iter()
            .map(|d| (amplitude_sq / PI / (d * d + 1.0) * spacing).sqrt())
            .collect();
        ModeGrid { detunings, couplings }
    }

    /// `sum_k g_k^2`, which tends to `W^2` as the grid grows.
    pub fn total_weight(&self) -> f64 {
        self.couplings.iter().map(|g| g * g).sum()
    }

    pub fn len(&self) -> usize {
        self.detunings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detunings.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_invariants() {
        let p = SystemParams { coupling: 3.0, omega: 1.0, delta1: 0.5, delta2: -2.0, delta_l: 0.3, r1: 0.6, j: 0.0 };
        let k = KernelSpec::new(&p);
        assert_eq!(k.kernel(0, 0.0), C64::new(9.0, 0.0));
        assert_eq!(k.kernel(1, 0.0), C64::new(9.0, 0.0));
        assert_eq!(k.k(0, 1), k.k(1, 0));
        assert!((k.k(0, 0) * k.k(1, 1) - k.k(0, 1).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn ising_shifts_phase_rates() {
        let p = SystemParams { coupling: 1.0, omega: 1.0, j: 0.5, ..Default::default() };
        let k = KernelSpec::new(&p);
        let chi = p.dressed(1).chi;
        assert!((k.nu[0] - (chi - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn mode_weights_approach_kernel_amplitude() {
        let grid = ModeGrid::lorentzian(4.0, 4001, 200.0);
        assert_eq!(grid.len(), 4001);
        let ratio = grid.total_weight() / 4.0;
        assert!((ratio - 1.0).abs() < 0.02, "{ratio}");
        assert_eq!(grid.detunings[2000], 0.0);
    }
}
