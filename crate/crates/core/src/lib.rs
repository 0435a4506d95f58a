//! Simulated adiabatic quantum optimization for SAT and Max-SAT.
//!
//! The pipeline:
//!
//! 1. [`formula`] parses DIMACS CNF and provides brute-force oracles.
//! 2. [`pauli`] compiles each clause into a diagonal projector built from
//!    Pauli-Z products; their sum counts unsatisfied clauses.
//! 3. [`evolve`] prepares `|+⟩^{⊗n}` and alternates the transverse-field driver
//!    with the problem phase along a linear schedule.
//! 4. [`report`] turns the final state into probabilities, shot histograms and
//!    a canonical JSON report.
//!
//! [`circuit`] lowers the same schedule to H / RX / RZ / CX gates and exports
//! OpenQASM 2.0.
//!
//! ```
//! use adiasat::{evolve::Schedule, formula::parse_dimacs, report::solve};
//!
//! let f = parse_dimacs("p cnf 3 4\n1 2 -3 0\n-1 -2 -3 0\n-1 2 3 0\n-1 2 -3 0\n").unwrap();
//! let out = solve(&f, &Schedule::linear(10).unwrap(), 0, 0).unwrap();
//! assert_eq!(out.report.best_state, "101");
//! assert!(out.report.satisfied);
//! ```

pub mod circuit;
pub mod cli;
pub mod evolve;
pub mod formula;
pub mod pauli;
pub mod report;
