//! Real linear combinations of Pauli-Z tensor products.
//!
//! A term `Z_{j1} Z_{j2} …` is stored as a bit mask aligned with basis indices:
//! qubit `j` (1-based) owns bit `n - j`. Its eigenvalue on basis state `k` is
//! `(-1)^popcount(mask & k)`, so every polynomial here is diagonal.
//!
//! Boolean clauses compile to projectors onto their unique violating
//! assignment; summing clause projectors gives an operator whose eigenvalue on
//! a basis state is the number of clauses that state violates.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::formula::{BasisIndex, Clause, CnfFormula, Literal, EXHAUSTIVE_BOUND};

/// Coefficients smaller than this are dropped after every operation.
pub const DROP_TOLERANCE: f64 = 1e-12;

/// Widest register a mask can address.
pub const MAX_POLY_QUBITS: usize = 63;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("qubit {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{n} qubits exceed the supported maximum of {max}")]
    TooManyQubits { n: usize, max: usize },
}

/// Product `∏_{j ∈ support} Z_j`; the empty support is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZTerm {
    n: usize,
    mask: u64,
}

impl ZTerm {
    pub fn identity(n: usize) -> Self {
        ZTerm { n, mask: 0 }
    }

    /// Term over the given 1-based qubits. Repeated qubits cancel (`Z² = Id`).
    pub fn from_qubits(n: usize, qubits: &[usize]) -> Result<Self, PauliError> {
        check_width(n)?;
        let mut mask = 0u64;
        for &j in qubits {
            mask ^= qubit_bit(n, j)?;
        }
        Ok(ZTerm { n, mask })
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<Self, PauliError> {
        check_width(n)?;
        if mask >> n != 0 {
            return Err(PauliError::IndexOutOfRange { index: 0, n });
        }
        Ok(ZTerm { n, mask })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn degree(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Support as ascending 1-based qubit indices.
    pub fn qubits(&self) -> Vec<usize> {
        support_of(self.n, self.mask)
    }

    pub fn eigenvalue(&self, k: BasisIndex) -> i8 {
        z_term_eigenvalue(self.mask, k.0)
    }
}

/// `+1` if `k` has an even number of set bits inside `mask`, else `-1`.
#[inline]
pub fn z_term_eigenvalue(mask: u64, k: usize) -> i8 {
    if (mask & k as u64).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn check_width(n: usize) -> Result<(), PauliError> {
    if n > MAX_POLY_QUBITS {
        Err(PauliError::TooManyQubits {
            n,
            max: MAX_POLY_QUBITS,
        })
    } else {
        Ok(())
    }
}

fn qubit_bit(n: usize, j: usize) -> Result<u64, PauliError> {
    if j == 0 || j > n {
        return Err(PauliError::IndexOutOfRange { index: j, n });
    }
    Ok(1u64 << (n - j))
}

fn support_of(n: usize, mask: u64) -> Vec<usize> {
    (1..=n).filter(|&j| mask >> (n - j) & 1 == 1).collect()
}

/// The ±1 diagonal of `Z_j` on `n` qubits, together with the set of basis
/// indices where it is −1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagPattern {
    pub n: usize,
    pub j: usize,
    pub signs: Vec<i8>,
    pub negative: Vec<usize>,
}

/// Blocks of `2^(n-j)` entries alternating +1/−1, starting with +1.
pub fn diag_pattern(n: usize, j: usize) -> Result<DiagPattern, PauliError> {
    if n > EXHAUSTIVE_BOUND {
        return Err(PauliError::TooManyQubits {
            n,
            max: EXHAUSTIVE_BOUND,
        });
    }
    if j == 0 || j > n {
        return Err(PauliError::IndexOutOfRange { index: j, n });
    }
    let block = 1usize << (n - j);
    let signs: Vec<i8> = (0..1usize << n)
        .map(|k| if (k / block).is_multiple_of(2) { 1 } else { -1 })
        .collect();
    let negative = signs
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < 0)
        .map(|(k, _)| k)
        .collect();
    Ok(DiagPattern {
        n,
        j,
        signs,
        negative,
    })
}

/// Real linear combination of Z-terms on a fixed register width.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPolynomial {
    n: usize,
    terms: BTreeMap<u64, f64>,
}

impl ZPolynomial {
    pub fn zero(n: usize) -> Result<Self, PauliError> {
        check_width(n)?;
        Ok(ZPolynomial {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn identity(n: usize) -> Result<Self, PauliError> {
        Self::from_term(ZTerm::identity(n), 1.0)
    }

    /// `Z_j` alone.
    pub fn z(n: usize, j: usize) -> Result<Self, PauliError> {
        Self::from_term(ZTerm::from_qubits(n, &[j])?, 1.0)
    }

    pub fn from_term(t: ZTerm, coeff: f64) -> Result<Self, PauliError> {
        let mut p = Self::zero(t.n)?;
        p.add_term(t.mask, coeff);
        Ok(p)
    }

    /// Build from `(coefficient, 1-based qubits)` pairs.
    pub fn from_terms(n: usize, terms: &[(f64, &[usize])]) -> Result<Self, PauliError> {
        let mut p = Self::zero(n)?;
        for &(c, qs) in terms {
            p.add_term(ZTerm::from_qubits(n, qs)?.mask, c);
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the term over the given 1-based qubits (0 when absent).
    pub fn coeff(&self, qubits: &[usize]) -> f64 {
        match ZTerm::from_qubits(self.n, qubits) {
            Ok(t) => self.terms.get(&t.mask).copied().unwrap_or(0.0),
            Err(_) => 0.0,
        }
    }

    pub fn coeff_of_mask(&self, mask: u64) -> f64 {
        self.terms.get(&mask).copied().unwrap_or(0.0)
    }

    /// Terms in mask order.
    pub fn terms(&self) -> impl Iterator<Item = (ZTerm, f64)> + '_ {
        let n = self.n;
        self.terms
            .iter()
            .map(move |(&mask, &c)| (ZTerm { n, mask }, c))
    }

    /// Terms ordered by degree, then by ascending qubit list.
    pub fn sorted_terms(&self) -> Vec<(ZTerm, f64)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by_key(|(t, _)| (t.degree(), t.qubits()));
        v
    }

    fn add_term(&mut self, mask: u64, c: f64) {
        let entry = self.terms.entry(mask).or_insert(0.0);
        *entry += c;
        if entry.abs() < DROP_TOLERANCE {
            self.terms.remove(&mask);
        }
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.abs() >= DROP_TOLERANCE);
    }

    fn check_same(&self, other: &Self) -> Result<(), PauliError> {
        if self.n != other.n {
            return Err(PauliError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PauliError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            *out.terms.entry(m).or_insert(0.0) += c;
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PauliError> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = ZPolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(&m, &v)| (m, v * c)).collect(),
        };
        out.prune();
        out
    }

    /// Product of two polynomials; supports combine by symmetric difference.
    pub fn multiply(&self, other: &Self) -> Result<Self, PauliError> {
        self.check_same(other)?;
        let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
        for (&ma, &ca) in &self.terms {
            for (&mb, &cb) in &other.terms {
                *acc.entry(ma ^ mb).or_insert(0.0) += ca * cb;
            }
        }
        let mut out = ZPolynomial {
            n: self.n,
            terms: acc,
        };
        out.prune();
        Ok(out)
    }

    /// Eigenvalue on basis state `k`.
    pub fn eval(&self, k: BasisIndex) -> f64 {
        self.terms
            .iter()
            .map(|(&m, &c)| c * f64::from(z_term_eigenvalue(m, k.0)))
            .sum()
    }

    /// Full diagonal (dimension `2^n`). Caller bounds `n`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..1usize << self.n)
            .map(|k| self.eval(BasisIndex(k)))
            .collect()
    }

    /// One `<coefficient> <qubits…>` line per term, degree-then-lexicographic order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (t, c) in self.sorted_terms() {
            s.push_str(&format!("{c}"));
            for q in t.qubits() {
                s.push_str(&format!(" {q}"));
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for ZPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.sorted_terms().into_iter().enumerate() {
            let sign = if c < 0.0 { "-" } else { "+" };
            if i == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            write!(f, "{}·", c.abs())?;
            if t.mask == 0 {
                write!(f, "Id")?;
            } else {
                let names: Vec<String> = t.qubits().iter().map(|q| format!("Z{q}")).collect();
                write!(f, "{}", names.join("·"))?;
            }
        }
        Ok(())
    }
}

/// Projector onto the kets where literal `l` is false:
/// `½(Id − Z_j)` for `x_j`, `½(Id + Z_j)` for `¬x_j`.
pub fn literal_hamiltonian(l: Literal, n: usize) -> Result<ZPolynomial, PauliError> {
    let z = ZTerm::from_qubits(n, &[l.var])?;
    let mut p = ZPolynomial::zero(n)?;
    p.add_term(0, 0.5);
    p.add_term(z.mask, if l.negated { 0.5 } else { -0.5 });
    Ok(p)
}

/// Projector onto the basis states violating `c`: the product of the literal
/// projectors of its distinct literals. Tautologies give the zero polynomial.
pub fn clause_to_projector(c: &Clause, n: usize) -> Result<ZPolynomial, PauliError> {
    check_width(n)?;
    if let Some(l) = c.literals.iter().find(|l| l.var == 0 || l.var > n) {
        return Err(PauliError::IndexOutOfRange { index: l.var, n });
    }
    if c.is_tautology() {
        return ZPolynomial::zero(n);
    }
    let mut acc = ZPolynomial::identity(n)?;
    for l in c.dedup_literals() {
        acc = acc.multiply(&literal_hamiltonian(l, n)?)?;
    }
    Ok(acc)
}

/// Sum of clause projectors; eigenvalue on a basis state is its unsat count.
pub fn formula_to_hamiltonian(f: &CnfFormula) -> Result<ZPolynomial, PauliError> {
    clauses_to_hamiltonian(f.clauses(), f.num_vars())
}

pub fn clauses_to_hamiltonian(clauses: &[Clause], n: usize) -> Result<ZPolynomial, PauliError> {
    let mut h = ZPolynomial::zero(n)?;
    for c in clauses {
        h = h.add(&clause_to_projector(c, n)?)?;
    }
    Ok(h)
}
