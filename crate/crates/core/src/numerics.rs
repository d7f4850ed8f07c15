//! Dense complex linear algebra for small walk unitaries.
//!
//! Matrices are stored row-major. Everything here is sized for graphs of at
//! most a few hundred vertices, so plain `Vec` storage and cubic algorithms
//! are used throughout.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
use thiserror::Error;

use crate::tolerance;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Errors raised by the linear-algebra layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not real symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

/// Square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries; `None` if the length is not a square.
    pub fn from_rows(data: Vec<C64>) -> Option<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        (dim * dim == data.len()).then_some(Self { dim, data })
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self, NumericsError> {
        check_dim(self.dim, rhs.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                let out_row = &mut out.data[r * n..(r + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, NumericsError> {
        check_dim(self.dim, other.dim)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// True when `U†U` is within [`tolerance::UNITARITY`] of the identity.
    pub fn is_unitary(&self) -> bool {
        let prod = self.adjoint().matmul(self).expect("same dimension");
        prod.max_abs_diff(&Self::identity(self.dim)).expect("same dimension") <= tolerance::UNITARITY
    }

    /// True when every off-diagonal entry has modulus at most `tol`.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self[(r, c)].norm() <= tol))
    }

    /// Applies the matrix to a state vector.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector, NumericsError> {
        check_dim(self.dim, psi.dim())?;
        let amps = (0..self.dim).map(|r| self.row(r).iter().zip(psi.amplitudes()).map(|(a, b)| a * b).sum()).collect();
        Ok(StateVector::new(amps))
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (a, b) = (self.dim, rhs.dim);
        Self::from_fn(a * b, |r, c| self[(r / b, c / b)] * rhs[(r % b, c % b)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            let cells: Vec<String> = self.row(r).iter().map(|z| format!("{:+.4}{:+.4}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Column state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, NumericsError> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// Eigen-decomposition `A = V diag(λ) Vᵀ` of a real symmetric matrix.
///
/// Eigenvalues are sorted ascending; `vectors` is row-major with column `k`
/// holding the eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
    dim: usize,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector_entry(&self, row: usize, k: usize) -> f64 {
        self.vectors[row * self.dim + k]
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Rebuilds `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for r in 0..n {
            for c in 0..n {
                out[r * n + c] =
                    (0..n).map(|k| self.vector_entry(r, k) * self.values[k] * self.vector_entry(c, k)).sum();
            }
        }
        out
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver for a real symmetric matrix given row-major.
pub fn symmetric_eigh(a: &[f64], dim: usize) -> Result<EigenDecomposition, NumericsError> {
    check_dim(dim * dim, a.len())?;
    let n = dim;
    for r in 0..n {
        for c in r + 1..n {
            let (x, y) = (a[r * n + c], a[c * n + r]);
            if (x - y).abs() > 1e-12 * (1.0 + x.abs().max(y.abs())) {
                return Err(NumericsError::NotSymmetric { row: r, col: c });
            }
        }
    }
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let threshold = (f64::EPSILON * scale).powi(2);

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).map(|(p, q)| m[p * n + q].powi(2)).sum();
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k * n + p], m[k * n + q]);
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p * n + k], m[q * n + k]);
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(NumericsError::NoConvergence { sweeps: JACOBI_MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (k, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + k] = v[r * n + src];
        }
    }
    Ok(EigenDecomposition { values, vectors, dim: n })
}

/// Largest eigenvalue modulus of a real symmetric matrix.
pub fn spectral_norm(a: &[f64], dim: usize) -> Result<f64, NumericsError> {
    Ok(symmetric_eigh(a, dim)?.spectral_norm())
}

/// `exp(-i A t / ‖A‖)` for a real symmetric `A`, with `t` in radians.
///
/// Returns the identity when `‖A‖` is zero.
pub fn evolve_unitary(a: &[f64], dim: usize, t: f64) -> Result<ComplexMatrix, NumericsError> {
    let eig = symmetric_eigh(a, dim)?;
    Ok(unitary_from_eigen(&eig, t))
}

/// `exp(-i A t / ‖A‖)` from a precomputed decomposition.
pub fn unitary_from_eigen(eig: &EigenDecomposition, t: f64) -> ComplexMatrix {
    let n = eig.dim();
    let norm = eig.spectral_norm();
    if norm < tolerance::ZERO_NORM {
        return ComplexMatrix::identity(n);
    }
    let phases: Vec<C64> = eig.values.iter().map(|&l| C64::from_polar(1.0, -(l / norm) * t)).collect();
    ComplexMatrix::from_fn(n, |r, c| {
        (0..n).map(|k| phases[k] * (eig.vector_entry(r, k) * eig.vector_entry(c, k))).sum()
    })
}

/// `1 - |tr(U†V)| / dim`, zero exactly when `V = e^{iφ} U`.
pub fn phase_distance(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64, NumericsError> {
    check_dim(u.dim(), v.dim())?;
    if u.dim() == 0 {
        return Ok(0.0);
    }
    let overlap: C64 = u.as_slice().iter().zip(v.as_slice()).map(|(a, b)| a.conj() * b).sum();
    Ok((1.0 - overlap.norm() / u.dim() as f64).clamp(0.0, 1.0))
}

/// Applies `u` to `psi`.
pub fn apply(u: &ComplexMatrix, psi: &StateVector) -> Result<StateVector, NumericsError> {
    u.apply(psi)
}

fn check_dim(expected: usize, found: usize) -> Result<(), NumericsError> {
    if expected == found {
        Ok(())
    } else {
        Err(NumericsError::DimensionMismatch { expected, found })
    }
}
