//! Simulation and analysis of the thermodynamic footprint of branching
//! structure in quantum circuits.
//!
//! A deep architecture conditions its data-register program on a control
//! register (one program per control value); its shallow counterpart runs a
//! single uniform program tuned to the same overall halting probability.
//! This crate evolves both, records what a dephasing environment would see,
//! and derives the quantities that separate the two:
//!
//! - per-step and accumulated branch distinguishability,
//! - the observability threshold of the environmental coupling,
//! - cumulative entropy bounds and the logical depth factor,
//! - the purity contrast of a single ancilla witness qubit.
//!
//! Pairs can be parsed from a JSON document, generated from a seed with
//! matched complexity profiles, or taken from the built-in four-branch
//! reference example.

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod density;
pub mod document;
pub mod error;
pub mod gates;
pub mod generator;
pub mod matcher;
pub mod report;
pub mod simulate;
pub mod state;
pub mod witness;

pub use analysis::{
    DistinguishabilityMatrix, EntropyReport, distinguishability, effective_environment_entropy,
    entropy_bounds, observability_threshold, overlap_model, shallow_distinguishability,
};
pub use circuit::{
    BranchProgram, CircuitPair, ComplexityProfile, Halting, HaltingSpec, MatchingReport,
    four_branch_example, validate_matching,
};
pub use density::DensityMatrix;
pub use document::{parse_pair, serialize_pair};
pub use error::{Error, Result};
pub use gates::GateOp;
pub use generator::generate_matched_pair;
pub use matcher::{MatchResult, solve_ry_closed_form, solve_steering, verify_match};
pub use report::AnalysisReport;
pub use simulate::{BranchTrace, PairTrace, run_branch, simulate_pair};
pub use state::PureState;
pub use witness::{
    WitnessConfig, WitnessModel, WitnessResult, branch_phase, run_witness,
    witness_purity_semiclassical, witness_threshold,
};
