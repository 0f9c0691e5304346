//! Dense complex square matrices and a Hermitian eigensolver.
//!
//! Every operator and state in the simulator lives in a Hilbert space of at
//! most four qubits, so matrices are small (2x2 up to 16x16) and dense
//! row-major storage is the right trade-off. The eigensolver is a cyclic
//! Jacobi iteration specialised to Hermitian matrices; at these sizes it
//! converges in a handful of sweeps and delivers near machine-precision
//! spectra, which the exact-dynamics guarantees of this crate rely on.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex64 = Complex<f64>;

/// Max tolerated `|m[i][j] - conj(m[j][i])|` for Hermitian-only operations.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Max tolerated `max|UU' - I|` entry for matrices required to be unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

const MAX_JACOBI_SWEEPS: usize = 64;

/// Dense square matrix of complex numbers, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension (`dim >= 1`).
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build a matrix by evaluating `f(row, col)` on every entry.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from a row-major entry list; `data.len()` must be a perfect square.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Self {
        assert!(dim >= 1 && data.len() == dim * dim, "entry count must be dim^2");
        Self { dim, data }
    }

    /// Projector |v><v| onto a (not necessarily normalised) column vector.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn scaled_real(&self, k: f64) -> Self {
        self.scaled(Complex64::new(k, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference `max|a[i][j] - b[i][j]|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from Hermitian symmetry, `max|m[i][j] - conj(m[j][i])|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Largest deviation from unitarity, `max|(M M†)[i][j] - I[i][j]|`.
    pub fn unitarity_defect(&self) -> f64 {
        let product = self * &self.adjoint();
        product.max_abs_diff(&Self::identity(self.dim))
    }

    /// Kronecker product; `(a ⊗ b)[i*bd + k][j*bd + l] = a[i][j] * b[k][l]`.
    pub fn kron(&self, other: &Self) -> Self {
        let (ad, bd) = (self.dim, other.dim);
        let mut out = Self::zeros(ad * bd);
        for i in 0..ad {
            for j in 0..ad {
                let a_ij = self[(i, j)];
                for k in 0..bd {
                    for l in 0..bd {
                        out[(i * bd + k, j * bd + l)] = a_ij * other[(k, l)];
                    }
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a_ik = self[(i, k)];
                if a_ik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a_ik * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Pauli X.
pub fn sigma_x() -> ComplexMatrix {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    ComplexMatrix::from_vec(2, vec![o, l, l, o])
}

/// Pauli Y.
pub fn sigma_y() -> ComplexMatrix {
    let o = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix::from_vec(2, vec![o, -i, i, o])
}

/// Pauli Z.
pub fn sigma_z() -> ComplexMatrix {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    ComplexMatrix::from_vec(2, vec![l, o, o, -l])
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are real and sorted descending; column `k` of `eigenvectors`
/// is the unit eigenvector paired with `eigenvalues[k]`. No ordering is
/// guaranteed among degenerate eigenvalues beyond the descending sort.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    /// Reassemble `V f(Λ) V†` for a scalar function of the spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        // W = V f(Λ), then W V†.
        let mut w = ComplexMatrix::zeros(n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            for i in 0..n {
                w[(i, k)] = v[(i, k)] * fk;
            }
        }
        &w * &v.adjoint()
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Fails with [`Error::NonHermitian`] if the symmetry defect exceeds
/// [`HERMITICITY_TOL`]; within that tolerance the iteration runs on the
/// exactly Hermitian average `(m + m†)/2`.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<EigenSystem> {
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::NonHermitian { defect });
    }

    let n = m.dim();
    let mut a = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    let norm: f64 = a.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        let stop = norm * (n as f64) * f64::EPSILON;
        for _ in 0..MAX_JACOBI_SWEEPS {
            if off_diagonal_norm(&a) <= stop {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    // Sort descending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[y].partial_cmp(&diag[x]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| diag[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);

    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += 2.0 * a[(i, j)].norm_sqr();
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation zeroing `a[(p, q)]`, applied two-sided to `a` and
/// accumulated into the eigenvector matrix `v`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let b = a[(p, q)];
    let b_abs = b.norm();
    if b_abs == 0.0 {
        return;
    }
    let phase = b / b_abs; // e^{i arg b}
    let theta = 0.5 * (2.0 * b_abs).atan2(a[(q, q)].re - a[(p, p)].re);
    let (s, c) = theta.sin_cos();
    let sp = phase * s;

    let n = a.dim();
    // A <- A G with G = [[c, s e^{i phi}], [-s e^{-i phi}, c]] on (p, q).
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * c - aiq * sp.conj();
        a[(i, q)] = aip * sp + aiq * c;
    }
    // A <- G† A.
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = apj * c - aqj * sp;
        a[(q, j)] = apj * sp.conj() + aqj * c;
    }
    // V <- V G.
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * c - viq * sp.conj();
        v[(i, q)] = vip * sp + viq * c;
    }
}

/// `exp(-i h t)` for Hermitian `h`, via the exact eigendecomposition.
///
/// Never a series or Padé approximation: at 16x16 the spectral route is
/// exact up to roundoff, which the downstream unitarity budget assumes.
pub fn unitary_from_hamiltonian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(h)?;
    Ok(eig.map_spectrum(|lambda| Complex64::from_polar(1.0, -lambda * t)))
}
