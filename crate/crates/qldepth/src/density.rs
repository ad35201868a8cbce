//! Density matrices for small subsystems: validation, purity, entropy.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues in [-EIG_CLAMP, 0) are treated as round-off and clamped to 0.
const EIG_CLAMP: f64 = 1e-10;

/// Eigenvalues below this cutoff contribute nothing to entropy.
const ENTROPY_CUTOFF: f64 = 1e-12;

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and positive semidefiniteness.
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::Contract(format!(
                "density matrix must be square and non-empty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let dim = mat.nrows();
        for r in 0..dim {
            for c in r..dim {
                let dev = (mat[(r, c)] - mat[(c, r)].conj()).norm();
                if dev > 1e-10 {
                    return Err(Error::Degenerate(format!(
                        "matrix is not Hermitian: entry ({r},{c}) deviates by {dev}"
                    )));
                }
            }
        }
        let trace: Complex64 = (0..dim).map(|i| mat[(i, i)]).sum();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::Degenerate(format!(
                "matrix trace is {trace}, expected 1"
            )));
        }
        let rho = DensityMatrix { mat };
        if let Some(min) = rho.eigenvalues().iter().cloned().reduce(f64::min)
            && min < -EIG_CLAMP
        {
            return Err(Error::Degenerate(format!(
                "matrix has negative eigenvalue {min}"
            )));
        }
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// Tr(ρ²); equals Σ|ρ_ij|² for Hermitian ρ.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|e| e.norm_sqr()).sum()
    }

    /// Real eigenvalues of the Hermitian matrix, unsorted.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .cloned()
            .collect()
    }

    /// S(ρ) = −Tr(ρ log ρ) in bits.
    pub fn von_neumann_entropy(&self) -> f64 {
        shannon_entropy_bits(&self.eigenvalues())
    }
}

/// Shannon entropy in bits of a set of weights, clamping round-off negatives.
///
/// Weights in [-1e-10, 0) are treated as zero; anything below 1e-12
/// contributes nothing.
pub(crate) fn shannon_entropy_bits(weights: &[f64]) -> f64 {
    let mut bits = 0.0;
    for &w in weights {
        let w = if (-EIG_CLAMP..0.0).contains(&w) {
            0.0
        } else {
            w
        };
        if w > ENTROPY_CUTOFF {
            bits -= w * w.log2();
        }
    }
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diag(values: &[f64]) -> DensityMatrix {
        let dim = values.len();
        let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn purity_of_known_matrices() {
        assert_abs_diff_eq!(diag(&[1.0, 0.0]).purity(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(diag(&[0.5, 0.5]).purity(), 0.5, epsilon = 1e-12);
        // 0.75² + 0.25² = 0.625
        assert_abs_diff_eq!(diag(&[0.75, 0.25]).purity(), 0.625, epsilon = 1e-12);
    }

    #[test]
    fn entropy_of_known_matrices() {
        assert_abs_diff_eq!(
            diag(&[1.0, 0.0]).von_neumann_entropy(),
            0.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            diag(&[0.5, 0.5]).von_neumann_entropy(),
            1.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(diag(&[0.25; 4]).von_neumann_entropy(), 2.0, epsilon = 1e-10);
    }

    #[test]
    fn entropy_handles_off_diagonal_mixing() {
        // |+⟩⟨+| is pure regardless of basis.
        let h = Complex64::new(0.5, 0.0);
        let m = DMatrix::from_row_slice(2, 2, &[h, h, h, h]);
        let rho = DensityMatrix::new(m).unwrap();
        assert_abs_diff_eq!(rho.von_neumann_entropy(), 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn constructor_rejects_invalid_matrices() {
        // Trace 2.
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        assert!(DensityMatrix::new(m).is_err());

        // Not Hermitian.
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5, 0.0),
                Complex64::new(0.3, 0.0),
                Complex64::new(-0.3, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        );
        assert!(DensityMatrix::new(m).is_err());

        // Hermitian, trace 1, but indefinite.
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5, 0.0),
                Complex64::new(0.7, 0.0),
                Complex64::new(0.7, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        );
        assert!(DensityMatrix::new(m).is_err());
    }
}
