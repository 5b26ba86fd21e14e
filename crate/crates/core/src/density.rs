use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = -1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("density matrix must be square with dimension 2, 3 or 4, got {rows}x{cols}")]
    BadShape { rows: usize, cols: usize },
    #[error("density matrix is not Hermitian (max |ρ − ρ†| = {0:e})")]
    NotHermitian(f64),
    #[error("density matrix trace deviates from 1 by {0:e}")]
    BadTrace(f64),
    #[error("density matrix has negative eigenvalue {0:e}")]
    NotPositive(f64),
}

/// Summary of how far a matrix is from being a valid state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateDiagnostics {
    pub hermiticity: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl StateDiagnostics {
    pub fn of(m: &DMatrix<Complex64>) -> Self {
        let hermiticity = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let trace_error = (m.trace() - Complex64::new(1.0, 0.0)).norm();
        let herm = (m + m.adjoint()).scale(0.5);
        let min_eigenvalue = herm.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        Self { hermiticity, trace_error, min_eigenvalue }
    }

    pub fn check(&self) -> Result<(), DensityError> {
        if !(self.hermiticity <= HERMITICITY_TOL) {
            return Err(DensityError::NotHermitian(self.hermiticity));
        }
        if !(self.trace_error <= TRACE_TOL) {
            return Err(DensityError::BadTrace(self.trace_error));
        }
        if !(self.min_eigenvalue >= POSITIVITY_TOL) {
            return Err(DensityError::NotPositive(self.min_eigenvalue));
        }
        Ok(())
    }
}

/// A validated density matrix of dimension 2, 3 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    elements: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(elements: DMatrix<Complex64>) -> Result<Self, DensityError> {
        let (rows, cols) = elements.shape();
        if rows != cols || !(2..=4).contains(&rows) {
            return Err(DensityError::BadShape { rows, cols });
        }
        StateDiagnostics::of(&elements).check()?;
        Ok(Self { elements })
    }

    /// Wraps a matrix whose diagnostics the caller has already checked.
    pub(crate) fn from_checked(elements: DMatrix<Complex64>) -> Self {
        Self { elements }
    }

    /// Projector onto basis state `k`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        Self { elements: m }
    }

    /// |ψ⟩⟨ψ| for a normalized ψ.
    pub fn pure(psi: &DVector<Complex64>) -> Result<Self, DensityError> {
        Self::new(psi * psi.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.elements
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.elements
    }

    /// ρ_mn with 1-based level labels.
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.elements[(m - 1, n - 1)]
    }

    pub fn populations(&self) -> Vec<f64> {
        self.elements.diagonal().iter().map(|z| z.re).collect()
    }

    /// ⟨ψ|ρ|ψ⟩.
    pub fn expectation(&self, psi: &DVector<Complex64>) -> f64 {
        (psi.adjoint() * &self.elements * psi)[(0, 0)].re
    }

    pub fn diagnostics(&self) -> StateDiagnostics {
        StateDiagnostics::of(&self.elements)
    }

    /// Column-stacked vectorization.
    pub fn to_vec(&self) -> DVector<Complex64> {
        let n = self.dim();
        DVector::from_iterator(n * n, self.elements.iter().copied())
    }

    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        (&self.elements - &other.elements).norm()
    }
}

/// Rebuilds a matrix from its column-stacked vector.
pub fn unvec(v: &DVector<Complex64>) -> DMatrix<Complex64> {
    let n = (v.len() as f64).sqrt().round() as usize;
    DMatrix::from_column_slice(n, n, v.as_slice())
}

/// (ρ + ρ†)/2.
pub fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()).scale(0.5)
}
