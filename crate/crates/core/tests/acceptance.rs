//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any gating criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use adiasat::circuit::{
    apply_circuit, compile_adiabatic_circuit, compile_problem_layer, fidelity, simulate_circuit,
};
use adiasat::evolve::{
    build_spectrum, dense_evolution_oracle, run_adiabatic, run_adiabatic_observed, trotter_error,
    DenseOperator, Schedule, StateVector,
};
use adiasat::formula::{assignment_to_basis, BasisIndex, CnfFormula};
use adiasat::pauli::{
    clause_to_projector, clauses_to_hamiltonian, formula_to_hamiltonian, ZPolynomial,
};
use adiasat::report::{exact_distribution, sample, solve, write_report, Distribution, Ranked};
use common::*;
use num_complex::Complex64;
use rand::Rng;

const TARGET_T10: f64 = 0.628;
const TOL_T10: f64 = 0.10;
const TARGET_T100: [(usize, f64); 4] = [
    (0b111, 0.167),
    (0b100, 0.173),
    (0b101, 0.505),
    (0b001, 0.155),
];
const TOL_T100: f64 = 0.05;

struct Suite {
    failed: Vec<u32>,
}

impl Suite {
    fn check(
        &mut self,
        id: u32,
        name: &str,
        limit: Option<Duration>,
        f: impl FnOnce() -> Result<String, String>,
    ) {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("runtime {elapsed:.2?} over {l:.0?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS  {id}. {name}: {detail} [{elapsed:.2?}]"),
            Err(detail) => {
                println!("FAIL  {id}. {name}: {detail} [{elapsed:.2?}]");
                self.failed.push(id);
            }
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eighths(n: usize, c: [i32; 8]) -> ZPolynomial {
    let qs: [&[usize]; 8] = [&[], &[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3], &[1, 2, 3]];
    let terms: Vec<(f64, &[usize])> = c
        .iter()
        .zip(qs)
        .map(|(&k, q)| (k as f64 / 8.0, q))
        .collect();
    ZPolynomial::from_terms(n, &terms).unwrap()
}

fn golden_hamiltonians() -> Result<String, String> {
    let f = phi();
    let cs = f.clauses();
    let expected_clauses = [
        eighths(3, [1, -1, -1, 1, 1, -1, -1, 1]),
        eighths(3, [1, 1, 1, 1, 1, 1, 1, 1]),
        eighths(3, [1, 1, -1, -1, -1, -1, 1, 1]),
        eighths(3, [1, 1, -1, 1, -1, 1, -1, -1]),
    ];
    for (i, want) in expected_clauses.iter().enumerate() {
        let got = clause_to_projector(&cs[i], 3).unwrap();
        ensure(&got == want, || {
            format!("C{} = {got}, expected {want}", i + 1)
        })?;
    }
    let q = 0.25;
    let h12 =
        ZPolynomial::from_terms(3, &[(q, &[]), (q, &[3]), (q, &[1, 2]), (q, &[1, 2, 3])]).unwrap();
    let got = clauses_to_hamiltonian(&cs[..2], 3).unwrap();
    ensure(got == h12, || format!("H12 = {got}"))?;
    let h123 = eighths(3, [3, 1, -1, 1, 1, -1, 1, 3]);
    let got = clauses_to_hamiltonian(&cs[..3], 3).unwrap();
    ensure(got == h123, || format!("H123 = {got}"))?;
    let hp = ZPolynomial::from_terms(
        3,
        &[
            (0.5, &[]),
            (q, &[1]),
            (-q, &[2]),
            (q, &[3]),
            (q, &[1, 2, 3]),
        ],
    )
    .unwrap();
    let got = formula_to_hamiltonian(&f).unwrap();
    ensure(got == hp, || format!("Hp = {got}"))?;
    Ok(format!("Hp = {got}"))
}

fn solution_states(f: &CnfFormula) -> Vec<BasisIndex> {
    f.enumerate_solutions()
        .unwrap()
        .iter()
        .map(assignment_to_basis)
        .collect()
}

fn phi_distribution(steps: u32) -> Distribution {
    let h = formula_to_hamiltonian(&phi()).unwrap();
    exact_distribution(&run_adiabatic(&h, &Schedule::linear(steps).unwrap()).unwrap())
}

fn unique_argmax(d: &Distribution) -> Option<usize> {
    let best = d.argmax();
    let p = d.probabilities[best.0];
    let ties = d
        .probabilities
        .iter()
        .filter(|&&q| (q - p).abs() < 1e-12)
        .count();
    (ties == 1).then_some(best.0)
}

fn table_t10(note: &mut Vec<String>) -> Result<String, String> {
    let d = phi_distribution(10);
    let mass = d.mass_on(&solution_states(&phi()));
    ensure(mass >= 0.90, || format!("solution mass {mass:.4} < 0.90"))?;
    ensure(unique_argmax(&d) == Some(0b101), || {
        format!("argmax is not uniquely |101>: {:?}", d.probabilities)
    })?;
    let p = d.probabilities[0b101];
    if (p - TARGET_T10).abs() > TOL_T10 {
        note.push(format!(
            "RECORDED 2. P(|101>) = {p:.4}, outside {TARGET_T10} +/- {TOL_T10}; non-gating per criterion text"
        ));
    }
    Ok(format!(
        "mass {mass:.4}, argmax |101> unique, P(|101>) {p:.4}"
    ))
}

fn table_t100(note: &mut Vec<String>) -> Result<String, String> {
    let d = phi_distribution(100);
    let mass = d.mass_on(&solution_states(&phi()));
    ensure(mass >= 0.99, || format!("solution mass {mass:.5} < 0.99"))?;
    let mut parts = Vec::new();
    for (k, target) in TARGET_T100 {
        let p = d.probabilities[k];
        parts.push(format!("{}={p:.3}", BasisIndex(k).bitstring(3)));
        if (p - target).abs() > TOL_T100 {
            note.push(format!(
                "RECORDED 3. P(|{}>) = {p:.4}, outside {target} +/- {TOL_T100}",
                BasisIndex(k).bitstring(3)
            ));
        }
    }
    Ok(format!("mass {mass:.5}, {}", parts.join(" ")))
}

fn spectrum_oracle() -> Result<String, String> {
    let mut r = rng(2024);
    let mut states = 0usize;
    for i in 0..100 {
        let f = random_formula(&mut r, (2, 10), (1, 3), (1, 20));
        let spec = build_spectrum(&formula_to_hamiltonian(&f).unwrap()).unwrap();
        for (k, &e) in spec.energies.iter().enumerate() {
            let u = f.unsat_count_at(BasisIndex(k)).unwrap() as f64;
            ensure((e - u).abs() <= 1e-9, || {
                format!("formula {i}, state {k}: {e} vs {u}")
            })?;
        }
        states += spec.energies.len();
    }
    Ok(format!("100 formulas, {states} states"))
}

fn random_poly(r: &mut impl Rng, n: usize) -> ZPolynomial {
    let mut h = ZPolynomial::zero(n).unwrap();
    for mask in 0..1u64 << n {
        let qs: Vec<usize> = (1..=n).filter(|&j| mask >> (n - j) & 1 == 1).collect();
        h = h
            .add(&ZPolynomial::from_terms(n, &[(r.random_range(-1.0..1.0), &qs)]).unwrap())
            .unwrap();
    }
    h
}

fn circuit_soundness() -> Result<String, String> {
    let h = formula_to_hamiltonian(&phi()).unwrap();
    let sched = Schedule::linear(5).unwrap();
    let fid = fidelity(
        &simulate_circuit(&compile_adiabatic_circuit(&h, &sched)).unwrap(),
        &run_adiabatic(&h, &sched).unwrap(),
    )
    .unwrap();
    ensure(fid >= 1.0 - 1e-6, || format!("phi T=5 fidelity {fid}"))?;

    let mut r = rng(55);
    let mut worst: f64 = 1.0;
    for i in 0..40 {
        let n = 2 + i % 2;
        let h = random_poly(&mut r, n);
        let theta = r.random_range(-3.0..3.0);
        let mut a = StateVector::plus(n).unwrap();
        let mut b = a.clone();
        a.apply_driver_step(r.random_range(-2.0..2.0));
        b.clone_from(&a);
        apply_circuit(&mut a, &compile_problem_layer(&h, theta)).unwrap();
        b.apply_problem_phase(&build_spectrum(&h).unwrap(), theta)
            .unwrap();
        worst = worst.min(fidelity(&a, &b).unwrap());
    }
    ensure(worst >= 1.0 - 1e-9, || format!("layer fidelity {worst}"))?;

    // ZZ block at t·γ = 0.7 against diag(e^{-0.7i}, e^{0.7i}, e^{0.7i}, e^{-0.7i})
    let tg = 0.7;
    let block = compile_problem_layer(&ZPolynomial::from_terms(2, &[(1.0, &[1, 2])]).unwrap(), tg);
    let diag = [-tg, tg, tg, -tg];
    let mut max_err: f64 = 0.0;
    for (col, &phase) in diag.iter().enumerate() {
        let mut psi = StateVector::basis(2, BasisIndex(col)).unwrap();
        apply_circuit(&mut psi, &block).unwrap();
        for (row, a) in psi.amplitudes().iter().enumerate() {
            let want = if row == col {
                Complex64::from_polar(1.0, phase)
            } else {
                Complex64::new(0.0, 0.0)
            };
            max_err = max_err.max((a - want).norm());
        }
    }
    ensure(max_err <= 1e-12, || {
        format!("ZZ block entry error {max_err:e}")
    })?;
    Ok(format!(
        "phi T=5 fidelity {fid:.12}, worst layer {worst:.12}, ZZ block err {max_err:.1e}"
    ))
}

fn oracle_agreement() -> Result<String, String> {
    let h = formula_to_hamiltonian(&phi()).unwrap();
    let mut parts = Vec::new();
    for steps in [1, 10, 20] {
        let s = Schedule::linear(steps).unwrap();
        let dev = run_adiabatic(&h, &s)
            .unwrap()
            .max_deviation(&dense_evolution_oracle(&h, &s).unwrap())
            .unwrap();
        ensure(dev <= 1e-8, || format!("T={steps}: deviation {dev:e}"))?;
        parts.push(format!("T={steps} {dev:.1e}"));
    }
    Ok(parts.join(", "))
}

fn trotter_scaling() -> Result<String, String> {
    let hd = DenseOperator::driver(2).unwrap();
    let hp = DenseOperator::from_polynomial(
        &ZPolynomial::from_terms(2, &[(-1.0, &[1]), (-1.0, &[2]), (1.0, &[1, 2])]).unwrap(),
    )
    .unwrap();
    let e32 = trotter_error(&hd, &hp, 32).unwrap();
    let e64 = trotter_error(&hd, &hp, 64).unwrap();
    let ratio = e64 / e32;
    ensure((0.35..=0.65).contains(&ratio), || format!("ratio {ratio}"))?;
    Ok(format!(
        "err(32) {e32:.4e}, err(64) {e64:.4e}, ratio {ratio:.4}"
    ))
}

fn property_suite() -> Result<String, String> {
    // norm after every step
    let mut r = rng(77);
    let mut formulas = vec![phi()];
    formulas.extend((0..20).map(|_| random_formula(&mut r, (1, 8), (1, 3), (1, 15))));
    let mut worst: f64 = 0.0;
    for f in &formulas {
        let h = formula_to_hamiltonian(f).unwrap();
        for steps in [1, 10, 100] {
            run_adiabatic_observed(&h, &Schedule::linear(steps).unwrap(), |_, psi| {
                worst = worst.max((psi.norm() - 1.0).abs());
            })
            .unwrap();
        }
    }
    ensure(worst <= 1e-9, || format!("norm drift {worst:e}"))?;

    // projector idempotence
    for _ in 0..200 {
        let n = r.random_range(1..=8);
        let width = r.random_range(1..=n.min(5));
        let p = clause_to_projector(&random_clause(&mut r, n, width), n).unwrap();
        ensure(p.multiply(&p).unwrap() == p, || format!("P² ≠ P for {p}"))?;
    }

    // binomial 3σ at 2048 shots
    let d = phi_distribution(10);
    let shots = 2048u64;
    for seed in 0..8 {
        let hist = sample(&d, shots, seed).unwrap();
        for (k, &p) in d.probabilities.iter().enumerate() {
            let sigma = (shots as f64 * p * (1.0 - p)).sqrt();
            let dev = (hist.count(BasisIndex(k)) as f64 - shots as f64 * p).abs();
            ensure(dev <= 3.0 * sigma, || {
                format!(
                    "seed {seed} state {k}: |dev| {dev:.1} > 3σ {:.1}",
                    3.0 * sigma
                )
            })?;
        }
    }

    // byte-identical reports
    let s = Schedule::linear(10).unwrap();
    let a = write_report(&solve(&phi(), &s, 2048, 7).unwrap().report);
    let b = write_report(&solve(&phi(), &s, 2048, 7).unwrap().report);
    ensure(a == b, || "reports differ".into())?;
    Ok(format!(
        "norm drift {worst:.1e}, 200 projectors, 8 seeds x 8 states in 3σ, reports identical"
    ))
}

fn hardware_format() -> Result<String, String> {
    let out = solve(&phi(), &Schedule::linear(10).unwrap(), 2048, 0).map_err(|e| e.to_string())?;
    let h = out.histogram.ok_or("no histogram")?;
    let cells: Vec<String> = (0..8)
        .map(|k| format!("{}:{}", BasisIndex(k).bitstring(3), h.count(BasisIndex(k))))
        .collect();
    Ok(format!("2048-shot histogram {}", cells.join(" ")))
}

fn main() -> ExitCode {
    let mut suite = Suite { failed: Vec::new() };
    let mut notes = Vec::new();
    let ms = Duration::from_millis;
    suite.check(1, "golden Hamiltonians", Some(ms(100)), golden_hamiltonians);
    suite.check(2, "T=10 distribution", Some(ms(1000)), || {
        table_t10(&mut notes)
    });
    suite.check(3, "T=100 distribution", Some(ms(5000)), || {
        table_t100(&mut notes)
    });
    suite.check(
        4,
        "spectrum vs unsat count",
        Some(ms(10_000)),
        spectrum_oracle,
    );
    suite.check(5, "circuit soundness", None, circuit_soundness);
    suite.check(6, "dense oracle agreement", None, oracle_agreement);
    suite.check(7, "first-order Trotter scaling", None, trotter_scaling);
    suite.check(8, "property suite", None, property_suite);
    println!("INFO  9. physical-device results not reproducible; format check only");
    suite.check(9, "shot histogram format", None, hardware_format);
    for n in &notes {
        println!("{n}");
    }
    if suite.failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {:?}", suite.failed);
        ExitCode::FAILURE
    }
}
