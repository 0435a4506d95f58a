//! Full-matrix reference path for tiny registers.
//!
//! Used only to cross-check the statevector kernels: operators are assembled
//! from explicit Kronecker products and exponentiated by scaling and squaring
//! with a Taylor series.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{EvolveError, Schedule, StateVector};
use crate::pauli::ZPolynomial;

pub const MAX_DENSE_QUBITS: usize = 3;

fn check_dense(n: usize) -> Result<(), EvolveError> {
    if n == 0 || n > MAX_DENSE_QUBITS {
        return Err(EvolveError::DenseTooLarge {
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn pauli_x() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[cx(0.0), cx(1.0), cx(1.0), cx(0.0)])
}

fn pauli_z() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[cx(1.0), cx(0.0), cx(0.0), cx(-1.0)])
}

/// `op` on qubit `j` (1-based, leftmost factor is qubit 1), identity elsewhere.
fn embed(n: usize, j: usize, op: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut acc = DMatrix::<Complex64>::identity(1, 1);
    for q in 1..=n {
        let factor = if q == j {
            op.clone()
        } else {
            DMatrix::identity(2, 2)
        };
        acc = acc.kronecker(&factor);
    }
    acc
}

/// Square complex matrix on at most [`MAX_DENSE_QUBITS`] qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n: usize,
    m: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn from_matrix(n: usize, m: DMatrix<Complex64>) -> Result<Self, EvolveError> {
        check_dense(n)?;
        let d = 1 << n;
        if m.nrows() != d || m.ncols() != d {
            return Err(EvolveError::BadLength {
                len: m.nrows() * m.ncols(),
                expected: d * d,
            });
        }
        Ok(DenseOperator { n, m })
    }

    pub fn identity(n: usize) -> Result<Self, EvolveError> {
        check_dense(n)?;
        Ok(DenseOperator {
            n,
            m: DMatrix::identity(1 << n, 1 << n),
        })
    }

    pub fn zeros(n: usize) -> Result<Self, EvolveError> {
        check_dense(n)?;
        Ok(DenseOperator {
            n,
            m: DMatrix::zeros(1 << n, 1 << n),
        })
    }

    /// `H_D = -Σ_i X_i`.
    pub fn driver(n: usize) -> Result<Self, EvolveError> {
        let mut op = Self::zeros(n)?;
        for j in 1..=n {
            op.m -= embed(n, j, &pauli_x());
        }
        Ok(op)
    }

    /// Dense matrix of a Z-polynomial, built term by term from Kronecker products.
    pub fn from_polynomial(h: &ZPolynomial) -> Result<Self, EvolveError> {
        let n = h.n();
        let mut op = Self::zeros(n)?;
        for (t, c) in h.terms() {
            let mut term = DMatrix::<Complex64>::identity(1 << n, 1 << n);
            for j in t.qubits() {
                term = embed(n, j, &pauli_z()) * term;
            }
            op.m += term * cx(c);
        }
        Ok(op)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn scale(&self, c: Complex64) -> Self {
        DenseOperator {
            n: self.n,
            m: &self.m * c,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        DenseOperator {
            n: self.n,
            m: &self.m + &other.m,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        DenseOperator {
            n: self.n,
            m: &self.m * &other.m,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = DMatrix::identity(self.m.nrows(), self.m.ncols());
        for _ in 0..k {
            acc = &self.m * acc;
        }
        DenseOperator { n: self.n, m: acc }
    }

    /// Frobenius norm of `self − other`.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.m - &other.m).norm()
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector, EvolveError> {
        if psi.n() != self.n {
            return Err(EvolveError::DimensionMismatch {
                left: self.n,
                right: psi.n(),
            });
        }
        let v = DVector::from_column_slice(psi.amplitudes());
        let out = &self.m * v;
        StateVector::from_amplitudes(self.n, out.iter().copied().collect())
    }

    /// Largest `|(U†U − I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.m.nrows();
        let prod = self.m.adjoint() * &self.m - DMatrix::<Complex64>::identity(d, d);
        prod.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(M)` by scaling and squaring: scale so that `‖M‖₁ / 2^s ≤ ½`, sum the
/// Taylor series to convergence, then square `s` times.
pub fn dense_expm(op: &DenseOperator) -> Result<DenseOperator, EvolveError> {
    check_dense(op.n)?;
    let d = op.m.nrows();
    let norm = one_norm(&op.m);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = &op.m * cx(0.5f64.powi(squarings));

    let mut result = DMatrix::<Complex64>::identity(d, d);
    let mut term = DMatrix::<Complex64>::identity(d, d);
    for k in 1..=40 {
        term = &term * &scaled * cx(1.0 / k as f64);
        result += &term;
        if one_norm(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(DenseOperator { n: op.n, m: result })
}

/// `exp(-i θ H)`.
pub fn evolution_operator(h: &DenseOperator, theta: f64) -> Result<DenseOperator, EvolveError> {
    dense_expm(&h.scale(Complex64::new(0.0, -theta)))
}

/// Reference evolution: the adiabatic loop with each step factor exponentiated
/// as a full matrix.
pub fn dense_evolution_oracle(
    h: &ZPolynomial,
    schedule: &Schedule,
) -> Result<StateVector, EvolveError> {
    let n = h.n();
    check_dense(n)?;
    let hd = DenseOperator::driver(n)?;
    let hp = DenseOperator::from_polynomial(h)?;
    let mut psi = StateVector::plus(n)?;
    for (driver, problem) in schedule.angles() {
        psi = evolution_operator(&hd, driver)?.apply(&psi)?;
        psi = evolution_operator(&hp, problem)?.apply(&psi)?;
    }
    Ok(psi)
}

/// `‖(e^{-iA/m} e^{-iB/m})^m − e^{-i(A+B)}‖_F`.
pub fn trotter_error(a: &DenseOperator, b: &DenseOperator, m: u32) -> Result<f64, EvolveError> {
    let step = 1.0 / f64::from(m);
    let product = evolution_operator(a, step)?
        .mul(&evolution_operator(b, step)?)
        .pow(m);
    let exact = evolution_operator(&a.add(b), 1.0)?;
    Ok(product.distance(&exact))
}
