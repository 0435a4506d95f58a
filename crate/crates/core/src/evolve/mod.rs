//! Dense statevector evolution under the Trotterized adiabatic schedule.
//!
//! One step `j` of the linear schedule applies the driver unitary
//! `exp(-i (1 - s_j) H_D)` and then the problem unitary `exp(-i s_j H_P)`,
//! with `H_D = -Σ X_i` and `s_j = j / T` for `j = 0..=T`. No extra time-step
//! factor is applied: the unit of time is one step.
//!
//! The interpolation weight increases from 0 to 1 here; a schedule written
//! with a weight decreasing from 1 to 0 on the driver is the same thing
//! relabelled.

pub mod dense;

use num_complex::Complex64;
use thiserror::Error;

use crate::formula::BasisIndex;
use crate::pauli::{z_term_eigenvalue, PauliError, ZPolynomial};

pub use dense::{
    dense_evolution_oracle, dense_expm, trotter_error, DenseOperator, MAX_DENSE_QUBITS,
};

/// Largest register the dense statevector accepts (2^24 amplitudes, 256 MiB).
pub const MAX_STATE_QUBITS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvolveError {
    #[error("{n} qubits outside the supported range 1..={max}")]
    QubitsOutOfRange { n: usize, max: usize },
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("amplitude vector has length {len}, expected {expected}")]
    BadLength { len: usize, expected: usize },
    #[error("basis index {0} out of range")]
    BasisOutOfRange(usize),
    #[error("schedule needs at least one step")]
    NoSteps,
    #[error("dense oracle limited to {max} qubits, got {n}")]
    DenseTooLarge { n: usize, max: usize },
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

fn check_qubits(n: usize) -> Result<(), EvolveError> {
    if n == 0 || n > MAX_STATE_QUBITS {
        return Err(EvolveError::QubitsOutOfRange {
            n,
            max: MAX_STATE_QUBITS,
        });
    }
    Ok(())
}

/// `2^n` complex amplitudes indexed by [`BasisIndex`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|k⟩`.
    pub fn basis(n: usize, k: BasisIndex) -> Result<Self, EvolveError> {
        check_qubits(n)?;
        if k.0 >> n != 0 {
            return Err(EvolveError::BasisOutOfRange(k.0));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[k.0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    pub fn zero_state(n: usize) -> Result<Self, EvolveError> {
        Self::basis(n, BasisIndex(0))
    }

    /// `|+⟩^{⊗n}`, the ground state of the driver.
    pub fn plus(n: usize) -> Result<Self, EvolveError> {
        check_qubits(n)?;
        let a = (0.5f64).powf(n as f64 / 2.0);
        Ok(StateVector {
            n,
            amps: vec![Complex64::new(a, 0.0); 1 << n],
        })
    }

    /// Wrap raw amplitudes. The caller is responsible for normalization.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self, EvolveError> {
        check_qubits(n)?;
        if amps.len() != 1 << n {
            return Err(EvolveError::BadLength {
                len: amps.len(),
                expected: 1 << n,
            });
        }
        Ok(StateVector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[cfg(test)]
    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, EvolveError> {
        self.check_same(other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64, EvolveError> {
        Ok(self.inner(other)?.norm())
    }

    /// Largest amplitude-wise deviation `max_k |a_k − b_k|`.
    pub fn max_deviation(&self, other: &StateVector) -> Result<f64, EvolveError> {
        self.check_same(other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn check_same(&self, n: usize) -> Result<(), EvolveError> {
        if self.n != n {
            return Err(EvolveError::DimensionMismatch {
                left: self.n,
                right: n,
            });
        }
        Ok(())
    }

    /// Bit of the basis index holding register qubit `q` (0-based, qubit 0 is the MSB).
    #[inline]
    pub(crate) fn bit_of(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    /// Apply a 2x2 unitary `[[u00, u01], [u10, u11]]` to register qubit `q`.
    pub(crate) fn apply_single(&mut self, q: usize, u: [[Complex64; 2]; 2]) {
        let bit = self.bit_of(q);
        let dim = self.amps.len();
        let mut base = 0;
        while base < dim {
            for k0 in base..base + bit {
                let k1 = k0 | bit;
                let (a0, a1) = (self.amps[k0], self.amps[k1]);
                self.amps[k0] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[k1] = u[1][0] * a0 + u[1][1] * a1;
            }
            base += 2 * bit;
        }
    }

    /// Controlled-X with register qubits `control` and `target`.
    pub(crate) fn apply_cx(&mut self, control: usize, target: usize) {
        let cb = self.bit_of(control);
        let tb = self.bit_of(target);
        for k in 0..self.amps.len() {
            if k & cb != 0 && k & tb == 0 {
                self.amps.swap(k, k | tb);
            }
        }
    }

    /// `exp(iθX)` on every qubit, i.e. `exp(-iθ H_D)` for `H_D = -Σ X_i`.
    pub fn apply_driver_step(&mut self, theta: f64) {
        let c = Complex64::new(theta.cos(), 0.0);
        let is = Complex64::new(0.0, theta.sin());
        let u = [[c, is], [is, c]];
        for q in 0..self.n {
            self.apply_single(q, u);
        }
    }

    /// `a_k ← exp(-iθ E_k) a_k`.
    pub fn apply_problem_phase(
        &mut self,
        spectrum: &DiagonalSpectrum,
        theta: f64,
    ) -> Result<(), EvolveError> {
        self.check_same(spectrum.n)?;
        for (a, &e) in self.amps.iter_mut().zip(&spectrum.energies) {
            *a *= Complex64::from_polar(1.0, -theta * e);
        }
        Ok(())
    }
}

pub fn init_plus_state(n: usize) -> Result<StateVector, EvolveError> {
    StateVector::plus(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleProfile {
    /// `s(j) = j / T`.
    Linear,
}

impl ScheduleProfile {
    pub fn name(self) -> &'static str {
        match self {
            ScheduleProfile::Linear => "linear",
        }
    }
}

/// Step count `T` and interpolation profile. Iterates `j = 0..=T` (T + 1 steps).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    steps: u32,
    profile: ScheduleProfile,
}

impl Schedule {
    pub fn linear(steps: u32) -> Result<Self, EvolveError> {
        if steps == 0 {
            return Err(EvolveError::NoSteps);
        }
        Ok(Schedule {
            steps,
            profile: ScheduleProfile::Linear,
        })
    }

    pub fn steps(&self) -> u32 {
        self.steps
    }

    pub fn profile(&self) -> ScheduleProfile {
        self.profile
    }

    pub fn dt(&self) -> f64 {
        1.0 / f64::from(self.steps)
    }

    pub fn s(&self, j: u32) -> f64 {
        match self.profile {
            ScheduleProfile::Linear => f64::from(j) / f64::from(self.steps),
        }
    }

    /// `(driver angle 1 − s_j, problem angle s_j)` for every step.
    pub fn angles(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..=self.steps).map(move |j| {
            let s = self.s(j);
            (1.0 - s, s)
        })
    }
}

/// Eigenvalues of a diagonal Hamiltonian, indexed by basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalSpectrum {
    pub n: usize,
    pub energies: Vec<f64>,
}

impl DiagonalSpectrum {
    pub fn min_energy(&self) -> f64 {
        self.energies.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Basis states within `tol` of the minimum energy.
    pub fn ground_states(&self, tol: f64) -> Vec<BasisIndex> {
        let min = self.min_energy();
        self.energies
            .iter()
            .enumerate()
            .filter(|(_, &e)| e - min <= tol)
            .map(|(k, _)| BasisIndex(k))
            .collect()
    }
}

/// `E_k = Σ_t c_t (-1)^{popcount(mask_t & k)}`.
pub fn build_spectrum(h: &ZPolynomial) -> Result<DiagonalSpectrum, EvolveError> {
    check_qubits(h.n())?;
    let mut energies = vec![0.0; 1 << h.n()];
    for (t, c) in h.terms() {
        let mask = t.mask();
        for (k, e) in energies.iter_mut().enumerate() {
            *e += c * f64::from(z_term_eigenvalue(mask, k));
        }
    }
    Ok(DiagonalSpectrum { n: h.n(), energies })
}

pub fn run_adiabatic(h: &ZPolynomial, schedule: &Schedule) -> Result<StateVector, EvolveError> {
    run_adiabatic_observed(h, schedule, |_, _| {})
}

/// As [`run_adiabatic`], calling `observe(j, ψ)` after each completed step.
pub fn run_adiabatic_observed<F>(
    h: &ZPolynomial,
    schedule: &Schedule,
    mut observe: F,
) -> Result<StateVector, EvolveError>
where
    F: FnMut(u32, &StateVector),
{
    let spectrum = build_spectrum(h)?;
    let mut psi = StateVector::plus(h.n())?;
    for (j, (driver, problem)) in schedule.angles().enumerate() {
        psi.apply_driver_step(driver);
        psi.apply_problem_phase(&spectrum, problem)?;
        observe(j as u32, &psi);
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn plus_states() {
        let s1 = init_plus_state(1).unwrap();
        assert!(s1
            .amplitudes()
            .iter()
            .all(|&a| close(a, c(FRAC_1_SQRT_2, 0.0))));
        let s2 = init_plus_state(2).unwrap();
        assert!(s2.amplitudes().iter().all(|&a| close(a, c(0.5, 0.0))));
        let s3 = init_plus_state(3).unwrap();
        assert!(s3
            .amplitudes()
            .iter()
            .all(|&a| close(a, c(1.0 / 8f64.sqrt(), 0.0))));
        assert!(init_plus_state(0).is_err());
        assert!(init_plus_state(MAX_STATE_QUBITS + 1).is_err());
    }

    #[test]
    fn plus_state_is_driver_ground_state() {
        // H_D |+⟩^n = -n |+⟩^n, checked via the driver generator on a tiny step
        let mut psi = init_plus_state(3).unwrap();
        let theta = 0.37;
        psi.apply_driver_step(theta);
        let phase = Complex64::from_polar(1.0, 3.0 * theta);
        let plus = init_plus_state(3).unwrap();
        for (a, b) in psi.amplitudes().iter().zip(plus.amplitudes()) {
            assert!(close(*a, b * phase));
        }
    }

    #[test]
    fn driver_step_cases() {
        let mut psi = StateVector::zero_state(2).unwrap();
        let before = psi.clone();
        psi.apply_driver_step(0.0);
        assert_eq!(psi, before);

        let mut one = StateVector::zero_state(1).unwrap();
        one.apply_driver_step(FRAC_PI_2);
        assert!(close(one.amplitudes()[0], c(0.0, 0.0)));
        assert!(close(one.amplitudes()[1], c(0.0, 1.0)));
    }

    #[test]
    fn problem_phase_cases() {
        let spec = DiagonalSpectrum {
            n: 1,
            energies: vec![0.0, 1.0],
        };
        let mut psi = init_plus_state(1).unwrap();
        let before = psi.clone();
        psi.apply_problem_phase(&spec, 0.0).unwrap();
        assert_eq!(psi, before);
        psi.apply_problem_phase(&spec, PI).unwrap();
        assert!(close(psi.amplitudes()[0], before.amplitudes()[0]));
        assert!(close(psi.amplitudes()[1], -before.amplitudes()[1]));

        let wrong = DiagonalSpectrum {
            n: 2,
            energies: vec![0.0; 4],
        };
        assert!(psi.apply_problem_phase(&wrong, 1.0).is_err());
    }

    #[test]
    fn spectra() {
        let zero = ZPolynomial::zero(3).unwrap();
        assert_eq!(build_spectrum(&zero).unwrap().energies, vec![0.0; 8]);
        let h = ZPolynomial::from_terms(2, &[(-1.0, &[1]), (-1.0, &[2]), (1.0, &[1, 2])]).unwrap();
        assert_eq!(
            build_spectrum(&h).unwrap().energies,
            vec![-1.0, -1.0, -1.0, 3.0]
        );
        let spec = build_spectrum(&h).unwrap();
        assert_eq!(spec.min_energy(), -1.0);
        assert_eq!(
            spec.ground_states(1e-9),
            vec![BasisIndex(0), BasisIndex(1), BasisIndex(2)]
        );
    }

    #[test]
    fn schedule_shape() {
        assert_eq!(Schedule::linear(0).unwrap_err(), EvolveError::NoSteps);
        let s = Schedule::linear(4).unwrap();
        let angles: Vec<_> = s.angles().collect();
        assert_eq!(angles.len(), 5);
        assert_eq!(angles[0], (1.0, 0.0));
        assert_eq!(angles[4], (0.0, 1.0));
        assert_eq!(s.s(2), 0.5);
        assert!(angles.windows(2).all(|w| w[0].1 <= w[1].1));
    }

    #[test]
    fn cx_and_single_qubit_kernels() {
        let mut psi = StateVector::basis(2, BasisIndex(0b10)).unwrap();
        psi.apply_cx(0, 1);
        assert_eq!(psi, StateVector::basis(2, BasisIndex(0b11)).unwrap());
        psi.apply_cx(1, 0);
        assert_eq!(psi, StateVector::basis(2, BasisIndex(0b01)).unwrap());
    }

    #[test]
    fn fidelity_basics() {
        let a = init_plus_state(2).unwrap();
        assert!((a.fidelity(&a).unwrap() - 1.0).abs() < 1e-12);
        let mut b = a.clone();
        for x in b.amplitudes_mut() {
            *x *= Complex64::from_polar(1.0, 0.9);
        }
        assert!((a.fidelity(&b).unwrap() - 1.0).abs() < 1e-12);
        let z0 = StateVector::basis(1, BasisIndex(0)).unwrap();
        let z1 = StateVector::basis(1, BasisIndex(1)).unwrap();
        assert_eq!(z0.fidelity(&z1).unwrap(), 0.0);
        assert!(z0.fidelity(&a).is_err());
    }
}
