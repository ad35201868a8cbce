//! Ancilla-based thermodynamic witness: branch-dependent phase accumulation
//! on a never-reset ancilla and the resulting purity contrast.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::analysis::{DistinguishabilityMatrix, distinguishability};
use crate::circuit::CircuitPair;
use crate::error::{Error, Result};
use crate::gates::{GateOp, apply_gate_raw};
use crate::simulate::{BranchTrace, simulate_pair};
use crate::state::{MAX_QUBITS, PureState};

/// How the ancilla coupling is modeled.
///
/// The semiclassical model rotates the ancilla by the data register's total
/// Z magnetization each step, which keeps the shallow path's ancilla exactly
/// pure. The full-unitary model applies the literal C-PHASE protocol on the
/// joint state; there the ancilla also entangles with data superpositions,
/// so even the shallow path's purity can drop below 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessModel {
    Semiclassical,
    FullUnitary,
}

/// Coupling angle per C-PHASE and the model to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessConfig {
    pub phi: f64,
    pub model: WitnessModel,
}

/// Witness outcome for one circuit pair.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessResult {
    /// Accumulated semiclassical ancilla phase per deep branch (radians).
    pub branch_phases: Vec<f64>,
    pub purity_deep: f64,
    pub purity_shallow: f64,
    /// Minimum coupling angle for an observable contrast; `None` when the
    /// branches never separate.
    pub phi_threshold: Option<f64>,
    /// Whether φ²·(min accumulated distinguishability) reaches 1.
    pub observable: bool,
}

/// Total ancilla phase a branch imprints: φ times the branch's per-step
/// data-register Z magnetization, summed over all steps.
pub fn branch_phase(trace: &BranchTrace, phi: f64) -> f64 {
    let magnetization: f64 = trace
        .z_expectations
        .iter()
        .map(|step| step.iter().sum::<f64>())
        .sum();
    phi * magnetization
}

/// Purity of the incoherent mixture of ancilla states
/// (|0⟩ + e^{iΦ_i}|1⟩)/√2 weighted by |α_i|²:
/// Σ_ij |α_i|²|α_j|²·cos²((Φ_i − Φ_j)/2).
pub fn witness_purity_semiclassical(phases: &[f64], alphas: &[Complex64]) -> f64 {
    debug_assert_eq!(phases.len(), alphas.len());
    let weights: Vec<f64> = alphas.iter().map(|a| a.norm_sqr()).collect();
    let mut purity = 0.0;
    for (i, wi) in weights.iter().enumerate() {
        for (j, wj) in weights.iter().enumerate() {
            let half = (phases[i] - phases[j]) / 2.0;
            purity += wi * wj * half.cos().powi(2);
        }
    }
    purity
}

/// Minimum coupling angle for observability: 1/√(min accumulated D).
/// `None` when no coupling can separate the branches.
pub fn witness_threshold(d: &DistinguishabilityMatrix) -> Option<f64> {
    match d.min_offdiagonal_accumulated() {
        Some(min) if min > 0.0 => Some(1.0 / min.sqrt()),
        _ => None,
    }
}

/// Runs the witness protocol over both architectures of a pair.
pub fn run_witness(pair: &CircuitPair, config: &WitnessConfig) -> Result<WitnessResult> {
    if config.phi < 0.0 {
        return Err(Error::Contract(format!(
            "coupling angle must be non-negative, got {}",
            config.phi
        )));
    }
    if config.model == WitnessModel::FullUnitary {
        let total = pair.control_qubits + pair.data_qubits + 1;
        if total > MAX_QUBITS {
            return Err(Error::Config(format!(
                "joint register of {total} qubits exceeds the {MAX_QUBITS}-qubit limit"
            )));
        }
    }
    let trace = simulate_pair(pair)?;
    let d = distinguishability(&trace);

    let branch_phases: Vec<f64> = trace
        .deep
        .iter()
        .map(|t| branch_phase(t, config.phi))
        .collect();

    let (purity_deep, purity_shallow) = match config.model {
        WitnessModel::Semiclassical => {
            let shallow_phase = branch_phase(&trace.shallow, config.phi);
            let shallow_phases = vec![shallow_phase; pair.num_branches()];
            (
                witness_purity_semiclassical(&branch_phases, &pair.control_amplitudes),
                witness_purity_semiclassical(&shallow_phases, &pair.control_amplitudes),
            )
        }
        WitnessModel::FullUnitary => (
            joint_ancilla_purity(pair, config.phi, true)?,
            joint_ancilla_purity(pair, config.phi, false)?,
        ),
    };

    let phi_threshold = witness_threshold(&d);
    let observable = d
        .min_offdiagonal_accumulated()
        .is_some_and(|min| config.phi * config.phi * min >= 1.0);

    Ok(WitnessResult {
        branch_phases,
        purity_deep,
        purity_shallow,
        phi_threshold,
        observable,
    })
}

/// Evolves control ⊗ data ⊗ ancilla jointly, coupling every data qubit to
/// the ancilla with a C-PHASE(φ) after each step's unitary, and returns the
/// purity of the reduced ancilla state.
fn joint_ancilla_purity(pair: &CircuitPair, phi: f64, deep: bool) -> Result<f64> {
    let m = pair.control_qubits;
    let n = pair.data_qubits;
    let total = m + n + 1;
    if total > MAX_QUBITS {
        return Err(Error::Config(format!(
            "joint register of {total} qubits exceeds the {MAX_QUBITS}-qubit limit"
        )));
    }
    let branches = pair.num_branches();
    let block = 1usize << (n + 1);

    // Σ_i α_i |i⟩ ⊗ |0…0⟩ ⊗ (|0⟩ + |1⟩)/√2, ancilla as least significant bit.
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << total];
    for (i, alpha) in pair.control_amplitudes.iter().enumerate() {
        amps[i * block] = alpha * FRAC_1_SQRT_2;
        amps[i * block + 1] = alpha * FRAC_1_SQRT_2;
    }

    for t in 0..pair.num_steps {
        for b in 0..branches {
            let gate = if deep {
                &pair.deep_branches[b].steps[t]
            } else {
                &pair.shallow.steps[t]
            };
            // Data qubit k is sub-qubit k of the (n+1)-qubit block.
            apply_gate_raw(&mut amps[b * block..(b + 1) * block], n + 1, gate);
        }
        for k in 0..n {
            let coupling = GateOp::Cphase(k, n, phi);
            for b in 0..branches {
                apply_gate_raw(&mut amps[b * block..(b + 1) * block], n + 1, &coupling);
            }
        }
    }

    let state = PureState::from_amplitudes(amps)?;
    Ok(state.reduced_density(&[total - 1])?.purity())
}
