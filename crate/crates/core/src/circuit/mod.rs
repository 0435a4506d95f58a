//! Gate-level compilation of the adiabatic schedule into H / RX / RZ / CX.
//!
//! Conventions:
//! - `RotZ(λ) = diag(e^{-iλ/2}, e^{+iλ/2})`
//! - `RotX(λ) = cos(λ/2)·Id − i·sin(λ/2)·X`
//! - gate qubits are 0-based register indices; model qubit `j` is register `j − 1`.
//!
//! A term `c·Z_{q1}⋯Z_{qk}` at problem angle θ becomes a CX ladder
//! `q1→q2→…→qk`, `RotZ(2θc)` on `qk`, and the mirrored ladder. Identity terms
//! only contribute a global phase and are dropped. Rotations whose angle is
//! below [`ZERO_ANGLE`] are elided together with the ladder around them.

pub mod qasm;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::evolve::{EvolveError, Schedule, StateVector};
use crate::pauli::ZPolynomial;

pub use qasm::{export_qasm, parse_qasm, QasmError};

/// Rotation angles with smaller magnitude are not emitted.
pub const ZERO_ANGLE: f64 = 1e-15;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("gate {gate} addresses qubit {qubit} on a {n}-qubit circuit")]
    QubitOutOfRange { gate: usize, qubit: usize, n: usize },
    #[error("gate {gate}: control and target coincide on qubit {qubit}")]
    SameQubit { gate: usize, qubit: usize },
    #[error("cannot append a {right}-qubit circuit to a {left}-qubit circuit")]
    WidthMismatch { left: usize, right: usize },
    #[error(transparent)]
    Evolve(#[from] EvolveError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Hadamard { qubit: usize },
    RotX { qubit: usize, angle: f64 },
    RotZ { qubit: usize, angle: f64 },
    ControlledNot { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Hadamard { qubit } | Gate::RotX { qubit, .. } | Gate::RotZ { qubit, .. } => {
                vec![qubit]
            }
            Gate::ControlledNot { control, target } => vec![control, target],
        }
    }

    /// 2x2 matrix for single-qubit gates.
    pub fn matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let re = |x: f64| Complex64::new(x, 0.0);
        match *self {
            Gate::Hadamard { .. } => {
                let h = re(FRAC_1_SQRT_2);
                Some([[h, h], [h, -h]])
            }
            Gate::RotX { angle, .. } => {
                let c = re((angle / 2.0).cos());
                let s = Complex64::new(0.0, -(angle / 2.0).sin());
                Some([[c, s], [s, c]])
            }
            Gate::RotZ { angle, .. } => {
                let zero = re(0.0);
                Some([
                    [Complex64::from_polar(1.0, -angle / 2.0), zero],
                    [zero, Complex64::from_polar(1.0, angle / 2.0)],
                ])
            }
            Gate::ControlledNot { .. } => None,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Hadamard { qubit } => write!(f, "H q{qubit}"),
            Gate::RotX { qubit, angle } => write!(f, "RX({angle}) q{qubit}"),
            Gate::RotZ { qubit, angle } => write!(f, "RZ({angle}) q{qubit}"),
            Gate::ControlledNot { control, target } => write!(f, "CX q{control},q{target}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumCircuit {
    n: usize,
    gates: Vec<Gate>,
}

impl QuantumCircuit {
    pub fn empty(n: usize) -> Self {
        QuantumCircuit {
            n,
            gates: Vec::new(),
        }
    }

    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let mut c = Self::empty(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, g: Gate) -> Result<(), CircuitError> {
        let idx = self.gates.len();
        if let Some(&q) = g.qubits().iter().find(|&&q| q >= self.n) {
            return Err(CircuitError::QubitOutOfRange {
                gate: idx,
                qubit: q,
                n: self.n,
            });
        }
        if let Gate::ControlledNot { control, target } = g {
            if control == target {
                return Err(CircuitError::SameQubit {
                    gate: idx,
                    qubit: control,
                });
            }
        }
        self.gates.push(g);
        Ok(())
    }

    pub fn append(&mut self, other: QuantumCircuit) -> Result<(), CircuitError> {
        if other.n != self.n {
            return Err(CircuitError::WidthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        self.gates.extend(other.gates);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn cx_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::ControlledNot { .. }))
            .count()
    }
}

/// Realizes `exp(-iθ H)` up to the global phase of the identity term.
pub fn compile_problem_layer(h: &ZPolynomial, theta: f64) -> QuantumCircuit {
    let n = h.n();
    let mut gates = Vec::new();
    for (term, c) in h.sorted_terms() {
        let qs: Vec<usize> = term.qubits().into_iter().map(|j| j - 1).collect();
        let angle = 2.0 * theta * c;
        if qs.is_empty() || angle.abs() < ZERO_ANGLE {
            continue;
        }
        let ladder: Vec<Gate> = qs
            .windows(2)
            .map(|w| Gate::ControlledNot {
                control: w[0],
                target: w[1],
            })
            .collect();
        gates.extend(ladder.iter().copied());
        gates.push(Gate::RotZ {
            qubit: *qs.last().unwrap(),
            angle,
        });
        gates.extend(ladder.iter().rev().copied());
    }
    QuantumCircuit { n, gates }
}

/// `exp(iθ Σ X_i)`, one `RotX(−2θ)` per qubit.
pub fn compile_driver_layer(n: usize, theta: f64) -> QuantumCircuit {
    let angle = -2.0 * theta;
    let gates = if angle.abs() < ZERO_ANGLE {
        Vec::new()
    } else {
        (0..n).map(|qubit| Gate::RotX { qubit, angle }).collect()
    };
    QuantumCircuit { n, gates }
}

/// Hadamard prologue followed by driver and problem layers for every step.
pub fn compile_adiabatic_circuit(h: &ZPolynomial, schedule: &Schedule) -> QuantumCircuit {
    let n = h.n();
    let mut circuit = QuantumCircuit {
        n,
        gates: (0..n).map(|qubit| Gate::Hadamard { qubit }).collect(),
    };
    for (driver, problem) in schedule.angles() {
        circuit.gates.extend(compile_driver_layer(n, driver).gates);
        circuit
            .gates
            .extend(compile_problem_layer(h, problem).gates);
    }
    circuit
}

/// Apply every gate of `c` to `psi` in order.
pub fn apply_circuit(psi: &mut StateVector, c: &QuantumCircuit) -> Result<(), CircuitError> {
    if psi.n() != c.n {
        return Err(CircuitError::WidthMismatch {
            left: psi.n(),
            right: c.n,
        });
    }
    for g in &c.gates {
        match *g {
            Gate::ControlledNot { control, target } => psi.apply_cx(control, target),
            _ => {
                let u = g.matrix().expect("single-qubit gate");
                psi.apply_single(g.qubits()[0], u);
            }
        }
    }
    Ok(())
}

/// Run `c` on `|0…0⟩`.
pub fn simulate_circuit(c: &QuantumCircuit) -> Result<StateVector, CircuitError> {
    let mut psi = StateVector::zero_state(c.n)?;
    apply_circuit(&mut psi, c)?;
    Ok(psi)
}

/// `|⟨a|b⟩|`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64, CircuitError> {
    Ok(a.fidelity(b)?)
}
