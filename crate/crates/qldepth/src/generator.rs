//! Seeded generation of complexity-matched circuit pairs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::circuit::{BranchProgram, CircuitPair, Halting, HaltingSpec};
use crate::error::{Error, Result};
use crate::gates::GateOp;

const MAX_CONTROL: usize = 8;
const MAX_DATA: usize = 16;
const MAX_STEPS: usize = 256;

/// Generates a deterministic circuit pair whose deep branches and shallow
/// path all share one complexity profile.
///
/// Gates are drawn from {H, RZ(π/4), CNOT}; the shallow path ends in a
/// steering rotation RY(0) on the halting qubit, left for the halting
/// matcher to solve. The same seed always yields the same pair.
pub fn generate_matched_pair(
    seed: u64,
    control_qubits: usize,
    data_qubits: usize,
    num_steps: usize,
) -> Result<CircuitPair> {
    if !(1..=MAX_CONTROL).contains(&control_qubits) {
        return Err(Error::Config(format!(
            "control qubits {control_qubits} outside supported range 1..={MAX_CONTROL}"
        )));
    }
    if !(2..=MAX_DATA).contains(&data_qubits) {
        return Err(Error::Config(format!(
            "data qubits {data_qubits} outside supported range 2..={MAX_DATA}"
        )));
    }
    if !(2..=MAX_STEPS).contains(&num_steps) {
        return Err(Error::Config(format!(
            "step count {num_steps} outside supported range 2..={MAX_STEPS}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let branches = 1usize << control_qubits;

    // One arity profile for every path. The shallow path reserves its final
    // step for the steering rotation, so entangling gates fit in the first
    // num_steps - 1 slots.
    let two_qubit_count = rng.gen_range(0..num_steps);
    let halting_qubit = rng.gen_range(0..data_qubits);

    let single_gate = |rng: &mut ChaCha8Rng| {
        let q = rng.gen_range(0..data_qubits);
        if rng.gen_bool(0.5) {
            GateOp::H(q)
        } else {
            GateOp::Rz(q, PI / 4.0)
        }
    };
    let cnot_gate = |rng: &mut ChaCha8Rng| {
        let control = rng.gen_range(0..data_qubits);
        let mut target = rng.gen_range(0..data_qubits - 1);
        if target >= control {
            target += 1;
        }
        GateOp::Cnot(control, target)
    };
    let choose_slots = |rng: &mut ChaCha8Rng, len: usize, count: usize| -> Vec<bool> {
        let mut slots = vec![false; len];
        let mut placed = 0;
        while placed < count {
            let s = rng.gen_range(0..len);
            if !slots[s] {
                slots[s] = true;
                placed += 1;
            }
        }
        slots
    };

    let deep_branches: Vec<BranchProgram> = (0..branches)
        .map(|_| {
            let slots = choose_slots(&mut rng, num_steps, two_qubit_count);
            let steps = slots
                .iter()
                .map(|&two| {
                    if two {
                        cnot_gate(&mut rng)
                    } else {
                        single_gate(&mut rng)
                    }
                })
                .collect();
            BranchProgram::new(steps)
        })
        .collect();

    let shallow_slots = choose_slots(&mut rng, num_steps - 1, two_qubit_count);
    let mut shallow_steps: Vec<GateOp> = shallow_slots
        .iter()
        .map(|&two| {
            if two {
                cnot_gate(&mut rng)
            } else {
                single_gate(&mut rng)
            }
        })
        .collect();
    shallow_steps.push(GateOp::Ry(halting_qubit, 0.0));

    let amp = Complex64::new((1.0 / branches as f64).sqrt(), 0.0);
    let pair = CircuitPair {
        control_qubits,
        data_qubits,
        num_steps,
        control_amplitudes: vec![amp; branches],
        deep_branches,
        shallow: BranchProgram::new(shallow_steps),
        halting: Halting::Uniform(HaltingSpec {
            qubit: halting_qubit,
            value: 0,
        }),
    };
    pair.validate()?;
    Ok(pair)
}
