use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::NORM_TOL;

/// Generalised Gell-Mann basis of `su(d)`: `d^2 - 1` traceless Hermitian
/// matrices with `Tr(s_a s_b) = 2 delta_ab`.
///
/// Ordered as all symmetric off-diagonal generators, then the antisymmetric
/// ones, then the diagonal ones, so `d = 2` gives `(sigma_x, sigma_y, sigma_z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    pub dim: usize,
    pub matrices: Vec<DMatrix<C64>>,
}

pub fn generators(d: usize) -> Result<GeneratorSet> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let zero = C64::new(0.0, 0.0);
    let mut sym = Vec::new();
    let mut anti = Vec::new();
    for j in 0..d {
        for k in j + 1..d {
            let mut s = DMatrix::from_element(d, d, zero);
            s[(j, k)] = C64::new(1.0, 0.0);
            s[(k, j)] = C64::new(1.0, 0.0);
            sym.push(s);
            let mut a = DMatrix::from_element(d, d, zero);
            a[(j, k)] = C64::new(0.0, -1.0);
            a[(k, j)] = C64::new(0.0, 1.0);
            anti.push(a);
        }
    }
    let mut diag = Vec::new();
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut m = DMatrix::from_element(d, d, zero);
        for j in 0..l {
            m[(j, j)] = C64::new(norm, 0.0);
        }
        m[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        diag.push(m);
    }
    sym.extend(anti);
    sym.extend(diag);
    Ok(GeneratorSet { dim: d, matrices: sym })
}

impl GeneratorSet {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Squared length of the generalised Bloch vector, `sum_k <s_k>^2`.
    pub fn bloch_norm_sqr(&self, rho: &DMatrix<C64>) -> f64 {
        self.matrices.iter().map(|s| (rho * s).trace().re.powi(2)).sum()
    }
}

/// Sum over subsystems of `2(d-1)/d - sum_k <s_k>^2` for a density matrix on
/// the tensor product of spaces with dimensions `dims`.
///
/// For a pure state every term equals the linear entropy `2(1 - Tr rho_mu^2)`
/// of that subsystem. Applied to mixed states it also counts classical
/// mixing, so it is not an entanglement measure there.
pub fn measure(rho: &DMatrix<C64>, dims: &[usize]) -> Result<f64> {
    check_dims(rho.nrows(), dims)?;
    if rho.ncols() != rho.nrows() {
        return Err(Error::DimensionMismatch { expected: rho.nrows(), found: rho.ncols() });
    }
    let mut total = 0.0;
    for mu in 0..dims.len() {
        let d = dims[mu];
        let reduced = partial_trace(rho, dims, mu);
        let set = generators(d)?;
        total += 2.0 * (d - 1) as f64 / d as f64 - set.bloch_norm_sqr(&reduced);
    }
    Ok(total)
}

/// [`measure`] on the projector of a normalised pure state.
///
/// The generator sum is cross-checked against the purity path
/// [`purity_measure`]; a disagreement above `1e-10` is a bug and panics.
pub fn measure_pure(state: &[C64], dims: &[usize]) -> Result<f64> {
    check_dims(state.len(), dims)?;
    let psi = DVector::from_column_slice(state);
    let norm = psi.norm_squared();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidParams(format!("state norm {norm} is not 1")));
    }
    let rho = &psi * psi.adjoint();
    let e = measure(&rho, dims)?;
    let check = purity_measure(&rho, dims)?;
    assert!((e - check).abs() <= 1e-10, "generator path {e} vs purity path {check}");
    Ok(e)
}

/// `sum_mu 2 (1 - Tr rho_mu^2)`.
pub fn purity_measure(rho: &DMatrix<C64>, dims: &[usize]) -> Result<f64> {
    check_dims(rho.nrows(), dims)?;
    Ok((0..dims.len())
        .map(|mu| {
            let r = partial_trace(rho, dims, mu);
            2.0 * (1.0 - (&r * &r).trace().re)
        })
        .sum())
}

fn check_dims(len: usize, dims: &[usize]) -> Result<()> {
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDimension(d));
    }
    let product: usize = dims.iter().product();
    if dims.is_empty() || product != len {
        return Err(Error::DimensionMismatch { expected: product, found: len });
    }
    Ok(())
}

/// Reduced state of subsystem `keep`, with the first subsystem as the most
/// significant index.
fn partial_trace(rho: &DMatrix<C64>, dims: &[usize], keep: usize) -> DMatrix<C64> {
    let d = dims[keep];
    let inner: usize = dims[keep + 1..].iter().product();
    let outer: usize = dims[..keep].iter().product();
    let mut out = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
    for a in 0..d {
        for b in 0..d {
            let mut s = C64::new(0.0, 0.0);
            for o in 0..outer {
                for i in 0..inner {
                    let row = (o * d + a) * inner + i;
                    let col = (o * d + b) * inner + i;
                    s += rho[(row, col)];
                }
            }
            out[(a, b)] = s;
        }
    }
    out
}
