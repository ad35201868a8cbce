//! Shared test oracles, independent of the library's in-place update paths:
//! explicit full-space gate matrices and a joint simulation of the control
//! and data registers together.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qldepth::{CircuitPair, GateOp, Halting};

/// Full 2^n × 2^n unitary for a gate over an n-qubit register, built by
/// basis-state mapping from the gate's small matrix.
pub fn embed_gate(num_qubits: usize, gate: &GateOp) -> DMatrix<Complex64> {
    let dim = 1usize << num_qubits;
    let small = gate.matrix();
    let targets = gate.targets();
    let arity = targets.len();
    let bit_of = |b: usize, q: usize| (b >> (num_qubits - 1 - q)) & 1;
    let mut full = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for col in 0..dim {
        let sub_col = targets
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | bit_of(col, q));
        for sub_row in 0..small.nrows() {
            let amp = small[(sub_row, sub_col)];
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let mut row = col;
            for (pos, &q) in targets.iter().enumerate() {
                let mask = 1usize << (num_qubits - 1 - q);
                if (sub_row >> (arity - 1 - pos)) & 1 == 1 {
                    row |= mask;
                } else {
                    row &= !mask;
                }
            }
            full[(row, col)] = amp;
        }
    }
    full
}

/// What the joint simulation reports for one architecture.
pub struct JointRecord {
    /// Conditional per-branch Z expectations: [branch][step][data qubit].
    pub expectations: Vec<Vec<Vec<f64>>>,
    /// Conditional halting probability per branch.
    pub per_branch_p_halt: Vec<f64>,
    /// Amplitude-weighted total halting probability.
    pub p_halt: f64,
}

/// Evolves the full (m+n)-qubit register with explicit block-diagonal
/// controlled-unitary matrices, reading branch records out of the joint
/// state. `deep` selects the branching architecture; otherwise the uniform
/// shallow program runs in every block.
pub fn joint_simulate(pair: &CircuitPair, deep: bool) -> JointRecord {
    let m = pair.control_qubits;
    let n = pair.data_qubits;
    let branches = 1usize << m;
    let block = 1usize << n;
    let dim = branches * block;

    let mut state = DVector::from_element(dim, Complex64::new(0.0, 0.0));
    for (i, alpha) in pair.control_amplitudes.iter().enumerate() {
        state[i * block] = *alpha;
    }

    let mut expectations = vec![Vec::new(); branches];
    for t in 0..pair.num_steps {
        let mut step_matrix = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for b in 0..branches {
            let gate = if deep {
                &pair.deep_branches[b].steps[t]
            } else {
                &pair.shallow.steps[t]
            };
            let embedded = embed_gate(n, gate);
            step_matrix
                .view_mut((b * block, b * block), (block, block))
                .copy_from(&embedded);
        }
        state = step_matrix * state;

        for b in 0..branches {
            let amps = state.as_slice(); // contiguous column vector
            let block_amps = &amps[b * block..(b + 1) * block];
            let z: Vec<f64> = (0..n)
                .map(|k| {
                    let mask = 1usize << (n - 1 - k);
                    let mut p0 = 0.0;
                    let mut p1 = 0.0;
                    for (idx, a) in block_amps.iter().enumerate() {
                        if idx & mask == 0 {
                            p0 += a.norm_sqr();
                        } else {
                            p1 += a.norm_sqr();
                        }
                    }
                    (p0 - p1) / (p0 + p1)
                })
                .collect();
            expectations[b].push(z);
        }
    }

    let amps = state.as_slice();
    let mut per_branch_p_halt = Vec::with_capacity(branches);
    let mut p_halt = 0.0;
    for b in 0..branches {
        let spec = match &pair.halting {
            Halting::Uniform(s) => *s,
            Halting::PerBranch(specs) => specs[b],
        };
        let mask = 1usize << (n - 1 - spec.qubit);
        let mut matched = 0.0;
        let mut total = 0.0;
        for (idx, a) in amps[b * block..(b + 1) * block].iter().enumerate() {
            let p = a.norm_sqr();
            total += p;
            let bit = u8::from(idx & mask != 0);
            if bit == spec.value {
                matched += p;
            }
        }
        per_branch_p_halt.push(matched / total);
        p_halt += matched;
    }

    JointRecord {
        expectations,
        per_branch_p_halt,
        p_halt,
    }
}
