//! Deep/shallow circuit pairs: branch programs, complexity matching, and the
//! built-in four-branch reference pair.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::state::NORM_TOL;

/// One data-register program: exactly one gate per time step.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchProgram {
    pub steps: Vec<GateOp>,
}

impl BranchProgram {
    pub fn new(steps: Vec<GateOp>) -> Self {
        BranchProgram { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Gate counts by arity plus depth (= step count).
    pub fn complexity_profile(&self) -> ComplexityProfile {
        let two_qubit_count = self.steps.iter().filter(|g| g.is_two_qubit()).count();
        ComplexityProfile {
            single_qubit_count: self.steps.len() - two_qubit_count,
            two_qubit_count,
            depth: self.steps.len(),
        }
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        for gate in &self.steps {
            gate.validate(num_qubits)?;
        }
        Ok(())
    }
}

/// Physical-resource profile used for branch-level complexity matching.
/// Angles do not differentiate profiles; only counts and arity do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityProfile {
    pub single_qubit_count: usize,
    pub two_qubit_count: usize,
    pub depth: usize,
}

/// A single-qubit halting projector |value⟩⟨value| on one data qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HaltingSpec {
    pub qubit: usize,
    pub value: u8,
}

/// Halting projectors, either shared by all branches or branch-specific.
#[derive(Debug, Clone, PartialEq)]
pub enum Halting {
    Uniform(HaltingSpec),
    PerBranch(Vec<HaltingSpec>),
}

impl Halting {
    pub fn for_branch(&self, branch: usize) -> HaltingSpec {
        match self {
            Halting::Uniform(spec) => *spec,
            Halting::PerBranch(specs) => specs[branch],
        }
    }
}

/// A deep (branching) architecture paired with its shallow (uniform)
/// counterpart over the same registers and step count.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitPair {
    pub control_qubits: usize,
    pub data_qubits: usize,
    pub num_steps: usize,
    pub control_amplitudes: Vec<Complex64>,
    pub deep_branches: Vec<BranchProgram>,
    pub shallow: BranchProgram,
    pub halting: Halting,
}

impl CircuitPair {
    pub fn num_branches(&self) -> usize {
        1 << self.control_qubits
    }

    /// Checks every structural invariant, naming the violated one on failure.
    pub fn validate(&self) -> Result<()> {
        if self.control_qubits == 0 {
            return Err(Error::validation(
                "control register size",
                "need at least one control qubit",
            ));
        }
        if self.data_qubits == 0 {
            return Err(Error::validation(
                "data register size",
                "need at least one data qubit",
            ));
        }
        if self.num_steps == 0 {
            return Err(Error::validation("step count", "need at least one step"));
        }
        let branches = self.num_branches();
        if self.control_amplitudes.len() != branches {
            return Err(Error::validation(
                "amplitude count",
                format!(
                    "expected {branches} control amplitudes for {} control qubits, got {}",
                    self.control_qubits,
                    self.control_amplitudes.len()
                ),
            ));
        }
        let norm: f64 = self.control_amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::validation(
                "amplitude normalization",
                format!("squared amplitudes sum to {norm}, expected 1 within {NORM_TOL}"),
            ));
        }
        if self.deep_branches.len() != branches {
            return Err(Error::validation(
                "branch count",
                format!(
                    "expected {branches} deep branches, got {}",
                    self.deep_branches.len()
                ),
            ));
        }
        for (i, branch) in self.deep_branches.iter().enumerate() {
            if branch.len() != self.num_steps {
                return Err(Error::validation(
                    "branch length",
                    format!(
                        "branch {i} has {} steps, expected {}",
                        branch.len(),
                        self.num_steps
                    ),
                ));
            }
            branch.validate(self.data_qubits).map_err(|e| {
                Error::validation("branch gate targets", format!("branch {i}: {e}"))
            })?;
        }
        if self.shallow.len() != self.num_steps {
            return Err(Error::validation(
                "shallow length",
                format!(
                    "shallow program has {} steps, expected {}",
                    self.shallow.len(),
                    self.num_steps
                ),
            ));
        }
        self.shallow
            .validate(self.data_qubits)
            .map_err(|e| Error::validation("shallow gate targets", e.to_string()))?;
        let specs: Vec<HaltingSpec> = match &self.halting {
            Halting::Uniform(spec) => vec![*spec],
            Halting::PerBranch(specs) => {
                if specs.len() != branches {
                    return Err(Error::validation(
                        "halting projector count",
                        format!("expected {branches} projectors, got {}", specs.len()),
                    ));
                }
                specs.clone()
            }
        };
        for spec in specs {
            if spec.qubit >= self.data_qubits {
                return Err(Error::validation(
                    "halting projector qubit",
                    format!(
                        "projector qubit {} out of range for {} data qubits",
                        spec.qubit, self.data_qubits
                    ),
                ));
            }
            if spec.value > 1 {
                return Err(Error::validation(
                    "halting projector value",
                    format!("projector value {} must be 0 or 1", spec.value),
                ));
            }
        }
        Ok(())
    }

    /// The final shallow gate's rotation angle, if it carries one.
    pub fn steering_angle(&self) -> Option<f64> {
        self.shallow.steps.last().and_then(|g| g.angle())
    }

    /// Clone of this pair with the final shallow gate's angle replaced.
    pub fn with_steering_angle(&self, theta: f64) -> Result<CircuitPair> {
        let mut pair = self.clone();
        let last = pair
            .shallow
            .steps
            .last_mut()
            .ok_or_else(|| Error::Contract("shallow program is empty".into()))?;
        *last = last.with_angle(theta)?;
        Ok(pair)
    }
}

/// Per-path complexity profiles and the overall matching verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingReport {
    pub branch_profiles: Vec<ComplexityProfile>,
    pub shallow_profile: ComplexityProfile,
    pub matched: bool,
    /// Branch indices whose profile differs from the shallow path's.
    pub mismatched_branches: Vec<usize>,
}

/// Compares every deep branch's complexity profile against the shallow
/// path's. Mismatches are reported, never raised as errors.
pub fn validate_matching(pair: &CircuitPair) -> MatchingReport {
    let shallow_profile = pair.shallow.complexity_profile();
    let branch_profiles: Vec<ComplexityProfile> = pair
        .deep_branches
        .iter()
        .map(|b| b.complexity_profile())
        .collect();
    let mismatched_branches: Vec<usize> = branch_profiles
        .iter()
        .enumerate()
        .filter(|(_, p)| **p != shallow_profile)
        .map(|(i, _)| i)
        .collect();
    MatchingReport {
        matched: mismatched_branches.is_empty(),
        branch_profiles,
        shallow_profile,
        mismatched_branches,
    }
}

/// The built-in four-branch reference pair: m = 2 control qubits, n = 3 data
/// qubits, T = 4 steps, uniform control amplitudes, and a |0⟩⟨0| halting
/// projector on data qubit 2.
///
/// The shallow path ends in a steering rotation RY(θ) on the halting qubit;
/// θ defaults to the value that matches the deep architecture's halting
/// probability of 3/8.
pub fn four_branch_example() -> CircuitPair {
    let theta = 2.0 * (0.375f64).sqrt().acos();
    let deep_branches = vec![
        BranchProgram::new(vec![
            GateOp::H(0),
            GateOp::X(1),
            GateOp::Cnot(0, 2),
            GateOp::Rz(1, PI / 4.0),
        ]),
        BranchProgram::new(vec![
            GateOp::H(1),
            GateOp::X(0),
            GateOp::Cnot(1, 2),
            GateOp::Rz(0, PI / 3.0),
        ]),
        BranchProgram::new(vec![
            GateOp::H(2),
            GateOp::X(0),
            GateOp::Cnot(0, 1),
            GateOp::Rz(2, PI / 2.0),
        ]),
        BranchProgram::new(vec![
            GateOp::H(0),
            GateOp::X(2),
            GateOp::Cnot(1, 0),
            GateOp::Rz(1, PI / 6.0),
        ]),
    ];
    let shallow = BranchProgram::new(vec![
        GateOp::H(0),
        GateOp::X(1),
        GateOp::Cnot(0, 1),
        GateOp::Ry(2, theta),
    ]);
    CircuitPair {
        control_qubits: 2,
        data_qubits: 3,
        num_steps: 4,
        control_amplitudes: vec![Complex64::new(0.5, 0.0); 4],
        deep_branches,
        shallow,
        halting: Halting::Uniform(HaltingSpec { qubit: 2, value: 0 }),
    }
}
