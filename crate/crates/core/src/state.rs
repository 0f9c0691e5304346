//! Validated density operators and their spectral functionals.
//!
//! Qubit ordering convention: qubit 1 is the most significant tensor factor,
//! so the basis label |b1 b2 .. bn> maps to index sum(b_k * 2^(n-k)). All
//! index arithmetic in this crate follows that convention.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{eig_hermitian, Complex64, ComplexMatrix, HERMITICITY_TOL};

/// Max tolerated `|tr rho - 1|`.
pub const TRACE_TOL: f64 = 1e-10;

/// Most negative eigenvalue still accepted as positive-semidefinite roundoff.
pub const MIN_EIGENVALUE_FLOOR: f64 = -1e-9;

/// Eigenvalues with `|lambda|` below this are treated as exact zeros by the
/// entropy.
pub const ENTROPY_ZERO_CLAMP: f64 = 1e-12;

/// Negative eigenvalues in `[ENTROPY_NEGATIVE_FLOOR, 0)` are clamped to zero
/// by the entropy; anything more negative is an error.
pub const ENTROPY_NEGATIVE_FLOOR: f64 = -1e-10;

/// A multi-qubit quantum state: Hermitian, unit trace, positive semidefinite
/// (all within fixed tolerances, checked at construction).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validate and wrap a matrix as an `n`-qubit state.
    pub fn new(matrix: ComplexMatrix, qubits: usize) -> Result<Self> {
        let expected = 1usize << qubits;
        if matrix.dim() != expected {
            return Err(Error::WrongDimension {
                expected,
                got: matrix.dim(),
            });
        }
        let defect = matrix.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::NonHermitian { defect });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!(
                "trace is {:+.12e}{:+.12e}i, expected 1",
                trace.re, trace.im
            )));
        }
        let eig = eig_hermitian(&matrix)?;
        let min = *eig.eigenvalues.last().expect("dim >= 1");
        if min < MIN_EIGENVALUE_FLOOR {
            return Err(Error::InvalidDensity(format!(
                "min eigenvalue {min:+.3e} below the PSD floor"
            )));
        }
        Ok(Self { qubits, matrix })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Maximally mixed state `I / 2^n`.
    pub fn maximally_mixed(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        Self {
            qubits,
            matrix: ComplexMatrix::identity(dim).scaled_real(1.0 / dim as f64),
        }
    }

    /// Pure-state projector |psi><psi| from a normalised state vector.
    pub fn from_state_vector(amplitudes: &[Complex64], qubits: usize) -> Result<Self> {
        Self::new(ComplexMatrix::outer(amplitudes), qubits)
    }

    pub fn trace_real(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(rho^2)`; for Hermitian matrices this is the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let eig = eig_hermitian(&self.matrix).expect("validated Hermitian");
        *eig.eigenvalues.last().expect("dim >= 1")
    }
}

/// Which factor of a two-qubit state an operation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

fn check_keep(keep: &[usize], qubits: usize) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::BadSubset("empty keep list".into()));
    }
    for window in keep.windows(2) {
        if window[0] >= window[1] {
            return Err(Error::BadSubset(format!(
                "keep list must be strictly increasing, got {keep:?}"
            )));
        }
    }
    for &k in keep {
        if k < 1 || k > qubits {
            return Err(Error::BadSubset(format!(
                "qubit {k} out of range 1..={qubits}"
            )));
        }
    }
    Ok(())
}

/// Bit position (from the least significant end) of 1-based qubit `k` in an
/// `n`-qubit index.
fn bit_shift(qubit: usize, qubits: usize) -> usize {
    qubits - qubit
}

/// Partial trace keeping the listed qubits, by direct index summation.
///
/// Output qubit order follows `keep`: the first kept qubit becomes the most
/// significant factor of the result.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let n = rho.qubits();
    check_keep(keep, n)?;
    let traced: Vec<usize> = (1..=n).filter(|k| !keep.contains(k)).collect();
    let m = keep.len();
    let out_dim = 1usize << m;
    let traced_count = traced.len();

    let compose = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut full = 0usize;
        for (j, &q) in keep.iter().enumerate() {
            let bit = (kept_idx >> (m - 1 - j)) & 1;
            full |= bit << bit_shift(q, n);
        }
        for (j, &q) in traced.iter().enumerate() {
            let bit = (traced_idx >> (traced_count - 1 - j)) & 1;
            full |= bit << bit_shift(q, n);
        }
        full
    };

    let mut out = ComplexMatrix::zeros(out_dim);
    for r in 0..out_dim {
        for c in 0..out_dim {
            let mut sum = Complex64::new(0.0, 0.0);
            for x in 0..(1usize << traced_count) {
                sum += rho.matrix()[(compose(r, x), compose(c, x))];
            }
            out[(r, c)] = sum;
        }
    }
    DensityOperator::new(out, m)
}

/// Partial trace by sandwiching between explicit tensor-product basis
/// vectors. Deliberately independent of [`partial_trace`]: the basis kets are
/// assembled by Kronecker products of single-qubit unit vectors and the
/// contraction runs over every matrix entry. Kept as a mutual oracle for the
/// index-summation route.
pub fn partial_trace_projector(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let n = rho.qubits();
    check_keep(keep, n)?;
    let traced: Vec<usize> = (1..=n).filter(|k| !keep.contains(k)).collect();
    let m = keep.len();
    let out_dim = 1usize << m;
    let traced_count = traced.len();

    // Bits for all n qubits, assembled from a kept index and a traced index.
    let bits_for = |kept_idx: usize, traced_idx: usize| -> Vec<u8> {
        let mut bits = vec![0u8; n];
        for (j, &q) in keep.iter().enumerate() {
            bits[q - 1] = ((kept_idx >> (m - 1 - j)) & 1) as u8;
        }
        for (j, &q) in traced.iter().enumerate() {
            bits[q - 1] = ((traced_idx >> (traced_count - 1 - j)) & 1) as u8;
        }
        bits
    };

    let mut out = ComplexMatrix::zeros(out_dim);
    for r in 0..out_dim {
        for c in 0..out_dim {
            let mut sum = Complex64::new(0.0, 0.0);
            for x in 0..(1usize << traced_count) {
                let bra = basis_ket(&bits_for(r, x));
                let ket = basis_ket(&bits_for(c, x));
                sum += sandwich(&bra, rho.matrix(), &ket);
            }
            out[(r, c)] = sum;
        }
    }
    DensityOperator::new(out, m)
}

/// |b1 b2 .. bn> as a dense vector via a chain of Kronecker products.
fn basis_ket(bits: &[u8]) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut v = vec![one];
    for &b in bits {
        let factor = if b == 0 { [one, zero] } else { [zero, one] };
        let mut next = Vec::with_capacity(v.len() * 2);
        for &a in &v {
            for &f in &factor {
                next.push(a * f);
            }
        }
        v = next;
    }
    v
}

/// `<u| M |w>`.
fn sandwich(u: &[Complex64], m: &ComplexMatrix, w: &[Complex64]) -> Complex64 {
    let n = m.dim();
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..n {
        if u[i] == Complex64::new(0.0, 0.0) {
            continue;
        }
        let ui = u[i].conj();
        for j in 0..n {
            sum += ui * m[(i, j)] * w[j];
        }
    }
    sum
}

/// Partial transpose of a two-qubit state on the chosen subsystem.
///
/// For the second subsystem, `(rho^T2)[(i,j),(k,l)] = rho[(i,l),(k,j)]`; the
/// first subsystem transposes the other factor. The result is Hermitian with
/// trace 1 but in general not positive.
pub fn partial_transpose(rho: &DensityOperator, subsystem: Subsystem) -> Result<ComplexMatrix> {
    if rho.qubits() != 2 {
        return Err(Error::WrongDimension {
            expected: 4,
            got: rho.dim(),
        });
    }
    let src = rho.matrix();
    let mut out = ComplexMatrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + j, 2 * k + l)] = match subsystem {
                        Subsystem::Second => src[(2 * i + l, 2 * k + j)],
                        Subsystem::First => src[(2 * k + j, 2 * i + l)],
                    };
                }
            }
        }
    }
    Ok(out)
}

/// Von Neumann entropy in bits, `-sum(lambda log2 lambda)`.
///
/// Eigenvalues with magnitude below [`ENTROPY_ZERO_CLAMP`] count as exact
/// zeros; negatives down to [`ENTROPY_NEGATIVE_FLOOR`] are clamped to zero,
/// anything lower is rejected.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let eig = eig_hermitian(rho.matrix())?;
    entropy_of_spectrum(&eig.eigenvalues)
}

/// Shared entropy kernel over a real spectrum (bits).
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in eigenvalues {
        if lambda < ENTROPY_NEGATIVE_FLOOR {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: lambda,
            });
        }
        if lambda.abs() < ENTROPY_ZERO_CLAMP || lambda < 0.0 {
            continue;
        }
        s -= lambda * lambda.log2();
    }
    Ok(s)
}

/// Random density operator from the Ginibre ensemble (`G G† / tr`).
pub fn random_density_operator(qubits: usize, rng: &mut impl Rng) -> DensityOperator {
    let dim = 1usize << qubits;
    let g = ComplexMatrix::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gg = &g * &g.adjoint();
    let trace = gg.trace().re;
    DensityOperator::new(gg.scaled_real(1.0 / trace), qubits)
        .expect("Ginibre construction is PSD with unit trace")
}
