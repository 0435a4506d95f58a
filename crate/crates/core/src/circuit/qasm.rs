//! OpenQASM 2.0 export, plus a parser for the subset the exporter writes.

use std::fmt::Write as _;

use thiserror::Error;

use super::{CircuitError, Gate, QuantumCircuit};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QasmError {
    #[error("line {line}: unsupported statement `{text}`")]
    Unsupported { line: usize, text: String },
    #[error("line {line}: malformed operand `{text}`")]
    Operand { line: usize, text: String },
    #[error("missing qreg declaration")]
    MissingRegister,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Angles carry 17 significant digits so they parse back bit-exactly.
fn angle(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn export_qasm(c: &QuantumCircuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    out.push_str("// model qubit j is q[j-1]\n");
    let _ = writeln!(out, "qreg q[{}];", c.n());
    for g in c.gates() {
        let _ = match *g {
            Gate::Hadamard { qubit } => writeln!(out, "h q[{qubit}];"),
            Gate::RotX { qubit, angle: a } => writeln!(out, "rx({}) q[{qubit}];", angle(a)),
            Gate::RotZ { qubit, angle: a } => writeln!(out, "rz({}) q[{qubit}];", angle(a)),
            Gate::ControlledNot { control, target } => {
                writeln!(out, "cx q[{control}],q[{target}];")
            }
        };
    }
    out
}

fn qubit_ref(s: &str, line: usize) -> Result<usize, QasmError> {
    s.trim()
        .strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|i| i.parse().ok())
        .ok_or_else(|| QasmError::Operand {
            line,
            text: s.to_string(),
        })
}

/// Parse text in the dialect produced by [`export_qasm`].
pub fn parse_qasm(text: &str) -> Result<QuantumCircuit, QasmError> {
    let mut circuit: Option<QuantumCircuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let stmt = raw.split("//").next().unwrap_or("").trim();
        if stmt.is_empty() || stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
            continue;
        }
        let stmt = stmt
            .strip_suffix(';')
            .ok_or_else(|| QasmError::Unsupported {
                line,
                text: stmt.to_string(),
            })?;
        if let Some(rest) = stmt.strip_prefix("qreg ") {
            circuit = Some(QuantumCircuit::empty(qubit_ref(rest, line)?));
            continue;
        }
        let c = circuit.as_mut().ok_or(QasmError::MissingRegister)?;
        let (op, args) = stmt.split_once(' ').ok_or_else(|| QasmError::Unsupported {
            line,
            text: stmt.to_string(),
        })?;
        let gate = if op == "h" {
            Gate::Hadamard {
                qubit: qubit_ref(args, line)?,
            }
        } else if op == "cx" {
            let (a, b) = args.split_once(',').ok_or_else(|| QasmError::Operand {
                line,
                text: args.to_string(),
            })?;
            Gate::ControlledNot {
                control: qubit_ref(a, line)?,
                target: qubit_ref(b, line)?,
            }
        } else if let Some(param) = op.strip_prefix("rx(").or_else(|| op.strip_prefix("rz(")) {
            let a: f64 = param
                .strip_suffix(')')
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| QasmError::Operand {
                    line,
                    text: op.to_string(),
                })?;
            let qubit = qubit_ref(args, line)?;
            if op.starts_with("rx") {
                Gate::RotX { qubit, angle: a }
            } else {
                Gate::RotZ { qubit, angle: a }
            }
        } else {
            return Err(QasmError::Unsupported {
                line,
                text: stmt.to_string(),
            });
        };
        c.push(gate)?;
    }
    circuit.ok_or(QasmError::MissingRegister)
}
