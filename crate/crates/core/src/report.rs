//! Measurement statistics and solve reports.
//!
//! Shot sampling uses ChaCha8 seeded through `SeedableRng::seed_from_u64`,
//! drawing one uniform `f64` per shot and inverting the cumulative
//! distribution. The same `(distribution, shots, seed)` always yields the same
//! histogram on every platform.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::evolve::{
    build_spectrum, run_adiabatic, DiagonalSpectrum, EvolveError, Schedule, StateVector,
};
use crate::formula::{basis_to_assignment, Assignment, BasisIndex, CnfFormula, FormulaError};
use crate::pauli::{formula_to_hamiltonian, PauliError};

/// Reports list the full exact distribution only up to this width.
pub const MAX_REPORTED_DISTRIBUTION_QUBITS: usize = 16;

/// Significant digits used for probabilities in reports.
pub const REPORT_DIGITS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReportError {
    #[error("shot count must be at least 1")]
    NoShots,
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Evolve(#[from] EvolveError),
}

/// Born-rule probabilities over the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub n: usize,
    pub probabilities: Vec<f64>,
}

impl Distribution {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn get(&self, k: BasisIndex) -> f64 {
        self.probabilities[k.0]
    }

    pub fn mass_on(&self, states: &[BasisIndex]) -> f64 {
        states.iter().map(|k| self.probabilities[k.0]).sum()
    }
}

pub fn exact_distribution(psi: &StateVector) -> Distribution {
    Distribution {
        n: psi.n(),
        probabilities: psi.probabilities(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub n: usize,
    pub shots: u64,
    /// Observed states only.
    pub counts: BTreeMap<BasisIndex, u64>,
}

impl Histogram {
    pub fn count(&self, k: BasisIndex) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn frequency(&self, k: BasisIndex) -> f64 {
        self.count(k) as f64 / self.shots as f64
    }
}

/// `shots` i.i.d. draws from `d`.
pub fn sample(d: &Distribution, shots: u64, seed: u64) -> Result<Histogram, ReportError> {
    if shots == 0 {
        return Err(ReportError::NoShots);
    }
    let cumulative: Vec<f64> = d
        .probabilities
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let total = *cumulative.last().unwrap_or(&0.0);
    let last = cumulative.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u = rng.random::<f64>() * total;
        let k = cumulative.partition_point(|&c| c <= u).min(last);
        *counts.entry(BasisIndex(k)).or_insert(0) += 1;
    }
    Ok(Histogram {
        n: d.n,
        shots,
        counts,
    })
}

/// Anything with a per-state weight to take the argmax of.
pub trait Ranked {
    fn width(&self) -> usize;
    /// Highest-weight state; ties go to the smallest index.
    fn argmax(&self) -> BasisIndex;
}

impl Ranked for Distribution {
    fn width(&self) -> usize {
        self.n
    }

    fn argmax(&self) -> BasisIndex {
        let mut best = 0;
        for (k, &p) in self.probabilities.iter().enumerate() {
            if p > self.probabilities[best] {
                best = k;
            }
        }
        BasisIndex(best)
    }
}

impl Ranked for Histogram {
    fn width(&self) -> usize {
        self.n
    }

    fn argmax(&self) -> BasisIndex {
        let mut best: Option<(BasisIndex, u64)> = None;
        for (&k, &c) in &self.counts {
            if best.is_none_or(|(_, b)| c > b) {
                best = Some((k, c));
            }
        }
        best.map(|(k, _)| k).unwrap_or(BasisIndex(0))
    }
}

/// Most likely state `S*` and the assignment it encodes.
pub fn extract_best<R: Ranked>(source: &R) -> Result<(BasisIndex, Assignment), ReportError> {
    let k = source.argmax();
    Ok((k, basis_to_assignment(k, source.width())?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verification {
    pub satisfies: bool,
    pub unsat: usize,
}

pub fn verify(f: &CnfFormula, s: BasisIndex) -> Result<Verification, ReportError> {
    let unsat = f.unsat_count_at(s)?;
    Ok(Verification {
        satisfies: unsat == 0,
        unsat,
    })
}

/// Round to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

fn rounded(x: f64) -> f64 {
    round_significant(x, REPORT_DIGITS)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceInfo {
    pub num_vars: usize,
    pub num_clauses: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleInfo {
    pub profile: &'static str,
    pub steps: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramInfo {
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

/// Serialized field order is the declaration order below.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub instance: InstanceInfo,
    pub schedule: ScheduleInfo,
    pub seed: u64,
    pub best_source: &'static str,
    pub best_state: String,
    pub assignment: Vec<bool>,
    pub unsat: usize,
    pub satisfied: bool,
    /// Optimum over all assignments, read off the problem spectrum.
    pub min_unsat: usize,
    /// Exact probability on satisfying assignments.
    pub solution_mass: f64,
    pub distribution: Option<BTreeMap<String, f64>>,
    pub histogram: Option<HistogramInfo>,
}

impl SolveReport {
    pub fn best_index(&self) -> BasisIndex {
        BasisIndex::parse_bitstring(&self.best_state).unwrap_or(BasisIndex(0))
    }
}

/// Raw outputs of one solve, before rendering.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub state: StateVector,
    pub spectrum: DiagonalSpectrum,
    pub distribution: Distribution,
    pub histogram: Option<Histogram>,
    pub report: SolveReport,
}

/// Compile, evolve, optionally sample, and pick `S*` from the exact distribution.
pub fn solve(
    f: &CnfFormula,
    schedule: &Schedule,
    shots: u64,
    seed: u64,
) -> Result<SolveOutcome, ReportError> {
    let h = formula_to_hamiltonian(f)?;
    let spectrum = build_spectrum(&h)?;
    let state = run_adiabatic(&h, schedule)?;
    let distribution = exact_distribution(&state);
    let histogram = if shots > 0 {
        Some(sample(&distribution, shots, seed)?)
    } else {
        None
    };
    let report = build_report(
        f,
        schedule,
        &distribution,
        &spectrum,
        histogram.as_ref(),
        seed,
    )?;
    Ok(SolveOutcome {
        state,
        spectrum,
        distribution,
        histogram,
        report,
    })
}

pub fn build_report(
    f: &CnfFormula,
    schedule: &Schedule,
    d: &Distribution,
    spectrum: &DiagonalSpectrum,
    histogram: Option<&Histogram>,
    seed: u64,
) -> Result<SolveReport, ReportError> {
    let n = f.num_vars();
    if d.n != n || spectrum.n != n {
        return Err(ReportError::DimensionMismatch {
            left: n,
            right: d.n,
        });
    }
    let (best, assignment) = extract_best(d)?;
    let check = verify(f, best)?;
    let solution_mass: f64 = spectrum
        .energies
        .iter()
        .zip(&d.probabilities)
        .filter(|(&e, _)| e.abs() < 0.5)
        .map(|(_, &p)| p)
        .sum();
    let distribution = (n <= MAX_REPORTED_DISTRIBUTION_QUBITS).then(|| {
        d.probabilities
            .iter()
            .enumerate()
            .map(|(k, &p)| (BasisIndex(k).bitstring(n), rounded(p)))
            .collect()
    });
    let histogram = histogram.map(|h| HistogramInfo {
        shots: h.shots,
        counts: h.counts.iter().map(|(k, &c)| (k.bitstring(n), c)).collect(),
    });
    Ok(SolveReport {
        instance: InstanceInfo {
            num_vars: n,
            num_clauses: f.num_clauses(),
        },
        schedule: ScheduleInfo {
            profile: schedule.profile().name(),
            steps: schedule.steps(),
        },
        seed,
        best_source: "exact",
        best_state: best.bitstring(n),
        assignment: assignment.values,
        unsat: check.unsat,
        satisfied: check.satisfies,
        min_unsat: spectrum.min_energy().round().max(0.0) as usize,
        solution_mass: rounded(solution_mass),
        distribution,
        histogram,
    })
}

/// Canonical JSON: fixed key order, two-space indentation, trailing newline.
pub fn write_report(r: &SolveReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serialization is infallible");
    s.push('\n');
    s
}

/// `bitstring,count,frequency` rows for observed states.
pub fn write_histogram_csv(h: &Histogram) -> String {
    let mut s = String::from("bitstring,count,frequency\n");
    for (k, &c) in &h.counts {
        s.push_str(&format!(
            "{},{},{}\n",
            k.bitstring(h.n),
            c,
            rounded(c as f64 / h.shots as f64)
        ));
    }
    s
}
