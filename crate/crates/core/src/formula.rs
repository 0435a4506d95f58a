//! CNF formulas, DIMACS ingestion and the brute-force satisfaction oracle.
//!
//! Variables are 1-based, matching DIMACS. Assignments map onto computational
//! basis states with `|0⟩` encoding *true* and `|1⟩` encoding *false*; variable
//! `x_1` is the most significant bit of the basis index.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest variable count accepted by exhaustive enumeration.
pub const EXHAUSTIVE_BOUND: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("assignment has {got} values but the formula has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{num_vars} variables exceed the exhaustive bound of {bound}")]
    BoundExceeded { num_vars: usize, bound: usize },
    #[error("basis index {index} out of range for {num_vars} variables")]
    IndexOutOfRange { index: usize, num_vars: usize },
    #[error("variable {var} out of range 1..={num_vars}")]
    VariableOutOfRange { var: usize, num_vars: usize },
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("formula must have at least one variable")]
    NoVariables,
}

/// DIMACS parse failure. Every variant carries the 1-based line it refers to.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: missing `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: duplicate `p cnf` header")]
    DuplicateHeader { line: usize },
    #[error("line {line}: malformed header")]
    MalformedHeader { line: usize },
    #[error("line {line}: invalid literal `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: variable out of range: {var} (num_vars = {num_vars})")]
    VariableOutOfRange {
        line: usize,
        var: i64,
        num_vars: usize,
    },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("line {line}: clause not terminated by 0")]
    UnterminatedClause { line: usize },
    #[error("line {line}: clause count mismatch: header declares {expected}, found {found}")]
    ClauseCountMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
}

impl DimacsError {
    pub fn line(&self) -> usize {
        match *self {
            DimacsError::MissingHeader { line }
            | DimacsError::DuplicateHeader { line }
            | DimacsError::MalformedHeader { line }
            | DimacsError::InvalidToken { line, .. }
            | DimacsError::VariableOutOfRange { line, .. }
            | DimacsError::EmptyClause { line }
            | DimacsError::UnterminatedClause { line }
            | DimacsError::ClauseCountMismatch { line, .. } => line,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    /// Signed DIMACS form: `-3` for `¬x₃`.
    pub fn from_dimacs(v: i64) -> Self {
        Literal {
            var: v.unsigned_abs() as usize,
            negated: v < 0,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn is_satisfied_by(self, value: bool) -> bool {
        value != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals }
    }

    pub fn from_dimacs(lits: &[i64]) -> Self {
        Clause::new(lits.iter().copied().map(Literal::from_dimacs).collect())
    }

    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        self.literals
            .iter()
            .any(|l| l.is_satisfied_by(a.values[l.var - 1]))
    }

    /// Distinct literals in first-occurrence order.
    pub fn dedup_literals(&self) -> Vec<Literal> {
        let mut out: Vec<Literal> = Vec::with_capacity(self.literals.len());
        for &l in &self.literals {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        out
    }

    /// True when the clause contains both `x` and `¬x` for some variable.
    pub fn is_tautology(&self) -> bool {
        self.literals.iter().any(|l| {
            self.literals
                .iter()
                .any(|m| m.var == l.var && m.negated != l.negated)
        })
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        if num_vars == 0 {
            return Err(FormulaError::NoVariables);
        }
        for (i, c) in clauses.iter().enumerate() {
            if c.literals.is_empty() {
                return Err(FormulaError::EmptyClause(i));
            }
            if let Some(l) = c.literals.iter().find(|l| l.var == 0 || l.var > num_vars) {
                return Err(FormulaError::VariableOutOfRange {
                    var: l.var,
                    num_vars,
                });
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Number of clauses left unsatisfied by `a`.
    pub fn unsat_count(&self, a: &Assignment) -> Result<usize, FormulaError> {
        if a.len() != self.num_vars {
            return Err(FormulaError::LengthMismatch {
                expected: self.num_vars,
                got: a.len(),
            });
        }
        Ok(self
            .clauses
            .iter()
            .filter(|c| !c.is_satisfied_by(a))
            .count())
    }

    /// Unsatisfied-clause count of the assignment encoded by basis state `k`.
    pub fn unsat_count_at(&self, k: BasisIndex) -> Result<usize, FormulaError> {
        let a = basis_to_assignment(k, self.num_vars)?;
        self.unsat_count(&a)
    }

    pub fn enumerate_solutions(&self) -> Result<Vec<Assignment>, FormulaError> {
        self.enumerate_solutions_bounded(EXHAUSTIVE_BOUND)
    }

    /// Every satisfying assignment, in ascending order of basis index.
    pub fn enumerate_solutions_bounded(
        &self,
        bound: usize,
    ) -> Result<Vec<Assignment>, FormulaError> {
        if self.num_vars > bound {
            return Err(FormulaError::BoundExceeded {
                num_vars: self.num_vars,
                bound,
            });
        }
        let mut out = Vec::new();
        for k in 0..1usize << self.num_vars {
            let a = basis_to_assignment(BasisIndex(k), self.num_vars)?;
            if self.unsat_count(&a)? == 0 {
                out.push(a);
            }
        }
        Ok(out)
    }

    /// Serialize as DIMACS CNF.
    pub fn to_dimacs(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.num_vars, self.clauses.len())?;
        for c in &self.clauses {
            for l in &c.literals {
                write!(f, "{} ", l.to_dimacs())?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

impl FromStr for CnfFormula {
    type Err = DimacsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_dimacs(s)
    }
}

/// Parse DIMACS CNF text.
///
/// Clauses may span lines and several may share a line. Comment lines start
/// with `c`; a line starting with `%` ends the clause section (SATLIB style).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut current_start = 0;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::DuplicateHeader { line: line_no });
            }
            header = Some(parse_header(line, line_no)?);
            continue;
        }
        let (num_vars, _) = header.ok_or(DimacsError::MissingHeader { line: line_no })?;
        for token in line.split_whitespace() {
            let v: i64 = token.parse().map_err(|_| DimacsError::InvalidToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if v == 0 {
                if current.is_empty() {
                    return Err(DimacsError::EmptyClause { line: line_no });
                }
                clauses.push(Clause::from_dimacs(&current));
                current.clear();
                continue;
            }
            if v.unsigned_abs() as usize > num_vars {
                return Err(DimacsError::VariableOutOfRange {
                    line: line_no,
                    var: v,
                    num_vars,
                });
            }
            if current.is_empty() {
                current_start = line_no;
            }
            current.push(v);
        }
    }

    let (num_vars, expected) = header.ok_or(DimacsError::MissingHeader { line: last_line })?;
    if !current.is_empty() {
        return Err(DimacsError::UnterminatedClause {
            line: current_start,
        });
    }
    if clauses.len() != expected {
        return Err(DimacsError::ClauseCountMismatch {
            line: last_line,
            expected,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula { num_vars, clauses })
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, usize), DimacsError> {
    let malformed = || DimacsError::MalformedHeader { line: line_no };
    let mut parts = line.split_whitespace();
    if parts.next() != Some("p") || parts.next() != Some("cnf") {
        return Err(malformed());
    }
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(malformed)?;
    let m: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(malformed)?;
    if parts.next().is_some() || n == 0 {
        return Err(malformed());
    }
    Ok((n, m))
}

/// Truth values, `values[j - 1]` holding `x_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// From 0/1 digits, e.g. `[0, 1, 0]`.
    pub fn from_bits(bits: &[u8]) -> Self {
        Assignment::new(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, &v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v as u8)?;
        }
        write!(f, ")")
    }
}

/// Computational basis index; bit `n - j` holds qubit `j` (qubit 1 is the MSB).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex(pub usize);

impl BasisIndex {
    pub fn get(self) -> usize {
        self.0
    }

    /// Ket label, qubit 1 first: index 5 with n = 3 renders as `101`.
    pub fn bitstring(self, n: usize) -> String {
        (1..=n)
            .map(|j| if self.0 >> (n - j) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn parse_bitstring(s: &str) -> Option<BasisIndex> {
        if s.is_empty() || s.len() > usize::BITS as usize {
            return None;
        }
        usize::from_str_radix(s, 2).ok().map(BasisIndex)
    }
}

pub fn assignment_to_basis(a: &Assignment) -> BasisIndex {
    let n = a.len();
    let k = a
        .values
        .iter()
        .enumerate()
        .filter(|(_, &v)| !v)
        .fold(0usize, |k, (i, _)| k | 1 << (n - 1 - i));
    BasisIndex(k)
}

pub fn basis_to_assignment(k: BasisIndex, n: usize) -> Result<Assignment, FormulaError> {
    if n >= usize::BITS as usize || k.0 >> n != 0 {
        return Err(FormulaError::IndexOutOfRange {
            index: k.0,
            num_vars: n,
        });
    }
    Ok(Assignment::new(
        (1..=n).map(|j| k.0 >> (n - j) & 1 == 0).collect(),
    ))
}
