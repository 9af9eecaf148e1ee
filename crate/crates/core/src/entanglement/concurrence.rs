use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{AmplitudePair, TwoQubitDensity, PSD_TOL};

/// Wootters concurrence `max(0, m1 - m2 - m3 - m4)`, with `m_i` the square
/// roots of the eigenvalues of `rho (Y rho* Y)`, `Y = sigma_y (x) sigma_y`,
/// sorted in descending order.
///
/// Writing `rho = B B^dagger`, those square roots are the singular values of
/// the complex symmetric matrix `B^T Y B`, which avoids the non-Hermitian
/// eigenproblem.
pub fn concurrence(rho: &TwoQubitDensity) -> Result<f64> {
    let m = rho.matrix();
    let eig = SymmetricEigen::new(*m);
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -PSD_TOL {
        return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
    }
    let mut b = eig.eigenvectors;
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        let w = if lam > 1e-13 * top { lam.sqrt() } else { 0.0 };
        b.column_mut(k).scale_mut(w);
    }
    let t = b.transpose() * spin_flip() * b;
    let mut s: Vec<f64> = t.singular_values().iter().cloned().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// `2 |C1| |C2|`, the concurrence of the reduced state built from `amp`.
pub fn concurrence_x_state(amp: &AmplitudePair) -> f64 {
    2.0 * amp.c1.norm() * amp.c2.norm()
}

fn spin_flip() -> Matrix4<C64> {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    Matrix4::new(
        z, z, z, -one, //
        z, z, one, z, //
        z, one, z, z, //
        -one, z, z, z,
    )
}
