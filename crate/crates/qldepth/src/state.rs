//! Exact pure-state simulation of small qubit registers.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gates::{GateOp, apply_gate_raw, qubit_mask};

/// Largest supported register; 2^24 amplitudes is the memory ceiling.
pub const MAX_QUBITS: usize = 24;

/// Tolerance for state normalization invariants.
pub const NORM_TOL: f64 = 1e-10;

/// A normalized complex amplitude vector over the computational basis.
///
/// Qubit 0 is the most significant bit of the basis index: a register
/// written |q0 q1 q2⟩ occupies index q0·4 + q1·2 + q2.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// The all-zeros basis state |0…0⟩ on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::Config(format!(
                "register size {num_qubits} outside supported range 1..={MAX_QUBITS}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(PureState { num_qubits, amps })
    }

    /// Builds a state from raw amplitudes, checking length and normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || !(2..=1 << MAX_QUBITS).contains(&len) {
            return Err(Error::Contract(format!(
                "amplitude vector length {len} is not a power of two in range"
            )));
        }
        let num_qubits = len.trailing_zeros() as usize;
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::Contract(format!(
                "amplitudes have squared norm {norm_sqr}, expected 1 within {NORM_TOL}"
            )));
        }
        Ok(PureState { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies `gate` in place by pairwise amplitude updates.
    pub fn apply_mut(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        apply_gate_raw(&mut self.amps, self.num_qubits, gate);
        Ok(())
    }

    /// Returns the unitary image of this state under `gate`.
    pub fn apply(&self, gate: &GateOp) -> Result<PureState> {
        let mut next = self.clone();
        next.apply_mut(gate)?;
        Ok(next)
    }

    /// ⟨Z⟩ on one qubit: +1 weight for bit 0, −1 for bit 1.
    ///
    /// The value is normalized by the state's total squared norm so that
    /// basis-aligned states report exactly ±1 or 0.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = qubit_mask(self.num_qubits, qubit);
        let mut p0 = 0.0;
        let mut p1 = 0.0;
        for (b, a) in self.amps.iter().enumerate() {
            if b & mask == 0 {
                p0 += a.norm_sqr();
            } else {
                p1 += a.norm_sqr();
            }
        }
        Ok((p0 - p1) / (p0 + p1))
    }

    /// Probability of finding `qubit` in `value` (0 or 1).
    pub fn projector_probability(&self, qubit: usize, value: u8) -> Result<f64> {
        self.check_qubit(qubit)?;
        if value > 1 {
            return Err(Error::Contract(format!(
                "projector value must be 0 or 1, got {value}"
            )));
        }
        let mask = qubit_mask(self.num_qubits, qubit);
        let mut matched = 0.0;
        let mut total = 0.0;
        for (b, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            total += p;
            let bit = u8::from(b & mask != 0);
            if bit == value {
                matched += p;
            }
        }
        Ok(matched / total)
    }

    /// Reduced density matrix over the `keep` qubits (all others traced out).
    ///
    /// Kept qubits retain their relative order; the lowest index stays the
    /// most significant bit of the reduced basis.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::Contract("keep set must be non-empty".into()));
        }
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        for &q in &keep {
            self.check_qubit(q)?;
        }
        let k = keep.len();
        let dim = 1usize << k;
        let keep_masks: Vec<usize> = keep
            .iter()
            .map(|&q| qubit_mask(self.num_qubits, q))
            .collect();

        // Reduced basis index of a full basis index.
        let project = |b: usize| -> usize {
            keep_masks
                .iter()
                .fold(0usize, |acc, &m| (acc << 1) | usize::from(b & m != 0))
        };
        // Full index with the kept bits replaced by configuration `cfg`.
        let with_cfg = |b: usize, cfg: usize| -> usize {
            let mut out = b;
            for (pos, &m) in keep_masks.iter().enumerate() {
                let bit = (cfg >> (k - 1 - pos)) & 1;
                if bit == 1 {
                    out |= m;
                } else {
                    out &= !m;
                }
            }
            out
        };

        let mut rho = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for (b, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            let row = project(b);
            for col in 0..dim {
                let partner = with_cfg(b, col);
                rho[(row, col)] += a * self.amps[partner].conj();
            }
        }
        DensityMatrix::new(rho)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::Contract(format!(
                "qubit index {qubit} out of range for {}-qubit register",
                self.num_qubits
            )));
        }
        Ok(())
    }
}
