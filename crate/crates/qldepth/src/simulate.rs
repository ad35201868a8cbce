//! Step-by-step evolution of deep branches and the shallow path, with
//! environmental monitoring records and halting probabilities.

use crate::circuit::{BranchProgram, CircuitPair};
use crate::error::Result;
use crate::state::PureState;

/// Evolution record for one branch program: the state after every step and
/// the per-qubit Z expectations monitored by the environment.
#[derive(Debug, Clone)]
pub struct BranchTrace {
    pub branch_index: usize,
    /// T+1 states; index 0 is the initial |0…0⟩.
    pub states: Vec<PureState>,
    /// One n-vector per step, recorded after that step's gate.
    pub z_expectations: Vec<Vec<f64>>,
}

impl BranchTrace {
    pub fn final_state(&self) -> &PureState {
        self.states
            .last()
            .expect("trace holds at least the initial state")
    }

    pub fn num_steps(&self) -> usize {
        self.z_expectations.len()
    }
}

/// Full simulation record for a circuit pair.
#[derive(Debug, Clone)]
pub struct PairTrace {
    pub deep: Vec<BranchTrace>,
    pub shallow: BranchTrace,
    pub per_branch_p_halt: Vec<f64>,
    pub p_halt_deep: f64,
    pub p_halt_shallow: f64,
}

/// Evolves one branch program from |0…0⟩, recording states and monitoring
/// expectations after each gate.
pub fn run_branch(
    program: &BranchProgram,
    num_qubits: usize,
    branch_index: usize,
) -> Result<BranchTrace> {
    let mut state = PureState::zero(num_qubits)?;
    let mut states = Vec::with_capacity(program.len() + 1);
    let mut z_expectations = Vec::with_capacity(program.len());
    states.push(state.clone());
    for gate in &program.steps {
        state.apply_mut(gate)?;
        let z = (0..num_qubits)
            .map(|q| state.expectation_z(q))
            .collect::<Result<Vec<f64>>>()?;
        states.push(state.clone());
        z_expectations.push(z);
    }
    Ok(BranchTrace {
        branch_index,
        states,
        z_expectations,
    })
}

/// Evolves every deep branch and the shallow path independently (the joint
/// evolution is block-diagonal in the control register) and computes the
/// weighted halting probabilities of both architectures.
pub fn simulate_pair(pair: &CircuitPair) -> Result<PairTrace> {
    let n = pair.data_qubits;
    let deep = pair
        .deep_branches
        .iter()
        .enumerate()
        .map(|(i, program)| run_branch(program, n, i))
        .collect::<Result<Vec<_>>>()?;
    let shallow = run_branch(&pair.shallow, n, 0)?;

    let mut per_branch_p_halt = Vec::with_capacity(deep.len());
    let mut p_halt_deep = 0.0;
    let mut p_halt_shallow = 0.0;
    for (i, trace) in deep.iter().enumerate() {
        let spec = pair.halting.for_branch(i);
        let p = trace
            .final_state()
            .projector_probability(spec.qubit, spec.value)?;
        per_branch_p_halt.push(p);
        let weight = pair.control_amplitudes[i].norm_sqr();
        p_halt_deep += weight * p;
        p_halt_shallow += weight
            * shallow
                .final_state()
                .projector_probability(spec.qubit, spec.value)?;
    }

    Ok(PairTrace {
        deep,
        shallow,
        per_branch_p_halt,
        p_halt_deep,
        p_halt_shallow,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::four_branch_example;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    #[test]
    fn branch0_monitoring_record() {
        let pair = four_branch_example();
        let trace = run_branch(&pair.deep_branches[0], 3, 0).unwrap();
        let expected: Vec<Vec<f64>> = vec![
            vec![0.0, 1.0, 1.0],
            vec![0.0, -1.0, 1.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, -1.0, 0.0],
        ];
        assert_eq!(trace.z_expectations, expected);
    }

    #[test]
    fn branch3_final_state_and_record() {
        let pair = four_branch_example();
        let trace = run_branch(&pair.deep_branches[3], 3, 3).unwrap();
        assert_eq!(trace.z_expectations[3], vec![0.0, 1.0, -1.0]);

        // Final state is e^{-iπ/12}(|001⟩ + |101⟩)/√2, global phase included.
        let phase = Complex64::from_polar(1.0, -PI / 12.0);
        let mut expected = vec![Complex64::new(0.0, 0.0); 8];
        expected[0b001] = phase * FRAC_1_SQRT_2;
        expected[0b101] = phase * FRAC_1_SQRT_2;
        for (got, want) in trace.final_state().amplitudes().iter().zip(&expected) {
            assert!((got - want).norm() < 1e-12, "got {got}, want {want}");
        }
    }

    #[test]
    fn final_monitoring_records_of_all_branches() {
        let pair = four_branch_example();
        let finals: Vec<Vec<f64>> = (0..4)
            .map(|i| {
                run_branch(&pair.deep_branches[i], 3, i)
                    .unwrap()
                    .z_expectations[3]
                    .clone()
            })
            .collect();
        assert_eq!(finals[0], vec![0.0, -1.0, 0.0]);
        assert_eq!(finals[1], vec![-1.0, 0.0, 0.0]);
        assert_eq!(finals[2], vec![-1.0, -1.0, 0.0]);
        assert_eq!(finals[3], vec![0.0, 1.0, -1.0]);
    }

    #[test]
    fn halting_probabilities_of_reference_pair() {
        let trace = simulate_pair(&four_branch_example()).unwrap();
        assert_eq!(trace.per_branch_p_halt, vec![0.5, 0.5, 0.5, 0.0]);
        assert_eq!(trace.p_halt_deep, 0.375);
        // The default steering angle already matches the two architectures.
        assert!((trace.p_halt_shallow - 0.375).abs() < 1e-6);
    }

    #[test]
    fn final_z_rotation_leaves_expectations_unchanged() {
        // Step 4 of every deep branch is a Z rotation, so the step-3 and
        // step-4 monitoring vectors agree exactly.
        let trace = simulate_pair(&four_branch_example()).unwrap();
        for branch in &trace.deep {
            assert_eq!(branch.z_expectations[2], branch.z_expectations[3]);
        }
    }

    #[test]
    fn single_active_branch_dominates_halting() {
        let mut pair = four_branch_example();
        pair.control_amplitudes = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let trace = simulate_pair(&pair).unwrap();
        assert_eq!(trace.p_halt_deep, trace.per_branch_p_halt[0]);
        assert_eq!(trace.p_halt_deep, 0.5);
    }

    #[test]
    fn per_branch_projectors_weight_both_architectures() {
        use crate::circuit::{Halting, HaltingSpec};
        let mut pair = four_branch_example();
        // Branch 3 ends in (|001⟩+|101⟩)/√2, so flipping its projector to
        // |1⟩⟨1| turns its halting probability from 0 into 1.
        pair.halting = Halting::PerBranch(vec![
            HaltingSpec { qubit: 2, value: 0 },
            HaltingSpec { qubit: 2, value: 0 },
            HaltingSpec { qubit: 2, value: 0 },
            HaltingSpec { qubit: 2, value: 1 },
        ]);
        let trace = simulate_pair(&pair).unwrap();
        assert_eq!(trace.per_branch_p_halt, vec![0.5, 0.5, 0.5, 1.0]);
        assert_eq!(trace.p_halt_deep, 0.625);
        // The shallow state is shared; only the projector varies per branch.
        let p0 = trace
            .shallow
            .final_state()
            .projector_probability(2, 0)
            .unwrap();
        let expected = 0.75 * p0 + 0.25 * (1.0 - p0);
        assert!((trace.p_halt_shallow - expected).abs() < 1e-12);
    }

    #[test]
    fn states_stay_normalized_along_traces() {
        let trace = simulate_pair(&four_branch_example()).unwrap();
        for branch in trace.deep.iter().chain(std::iter::once(&trace.shallow)) {
            for state in &branch.states {
                assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
            }
        }
    }
}
