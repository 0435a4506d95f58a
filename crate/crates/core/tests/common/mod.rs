#![allow(dead_code)]

use adiasat::formula::{parse_dimacs, Clause, CnfFormula, Literal};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Four clauses over three variables; solutions are the kets 001, 100, 101, 111.
pub const PHI: &str = "c worked example\np cnf 3 4\n1 2 -3 0\n-1 -2 -3 0\n-1 2 3 0\n-1 2 -3 0\n";

pub fn phi() -> CnfFormula {
    parse_dimacs(PHI).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Clause over `width` distinct variables drawn from `1..=n`, random signs.
pub fn random_clause(rng: &mut ChaCha8Rng, n: usize, width: usize) -> Clause {
    let vars = sample(rng, n, width.min(n));
    Clause::new(
        vars.iter()
            .map(|v| Literal {
                var: v + 1,
                negated: rng.random_bool(0.5),
            })
            .collect(),
    )
}

pub fn random_formula(
    rng: &mut ChaCha8Rng,
    n_range: (usize, usize),
    width_range: (usize, usize),
    clause_range: (usize, usize),
) -> CnfFormula {
    let n = rng.random_range(n_range.0..=n_range.1);
    let m = rng.random_range(clause_range.0..=clause_range.1);
    let clauses = (0..m)
        .map(|_| {
            let w = rng.random_range(width_range.0..=width_range.1);
            random_clause(rng, n, w)
        })
        .collect();
    CnfFormula::new(n, clauses).unwrap()
}

/// Random 3-SAT instance that has at least one solution.
pub fn random_satisfiable_3sat(rng: &mut ChaCha8Rng, n: usize, m: usize) -> CnfFormula {
    loop {
        let clauses = (0..m).map(|_| random_clause(rng, n, 3)).collect();
        let f = CnfFormula::new(n, clauses).unwrap();
        if !f.enumerate_solutions().unwrap().is_empty() {
            return f;
        }
    }
}
