//! JSON document format for circuit pairs.
//!
//! Top-level fields: `m`, `n`, `t_steps`, `control_amplitudes` (list of
//! `[re, im]` pairs), `deep_branches` (list of gate-record lists), `shallow`
//! (gate-record list), and `halting` (either `{qubit, value}` or a list of
//! per-branch `{qubit, value}` records). A gate record is
//! `{"gate": "H"|"X"|"Z"|"RZ"|"RY"|"CNOT"|"CPHASE", "targets": [..], "angle": f}`
//! with angles in radians. Unknown fields are rejected.

use serde::{Deserialize, Serialize};

use crate::circuit::{BranchProgram, CircuitPair, Halting, HaltingSpec};
use crate::error::{Error, Result};
use crate::gates::GateOp;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairDocument {
    m: usize,
    n: usize,
    t_steps: usize,
    control_amplitudes: Vec<[f64; 2]>,
    deep_branches: Vec<Vec<GateRecord>>,
    shallow: Vec<GateRecord>,
    halting: HaltingField,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateRecord {
    gate: String,
    targets: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum HaltingField {
    Uniform(HaltingRecord),
    PerBranch(Vec<HaltingRecord>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HaltingRecord {
    qubit: usize,
    value: u8,
}

fn gate_from_record(record: &GateRecord, context: &str) -> Result<GateOp> {
    let targets = &record.targets;
    let angle = record.angle;
    let arity_err = |need: usize| {
        Error::Parse(format!(
            "{context}: gate {} expects {need} target(s), got {}",
            record.gate,
            targets.len()
        ))
    };
    let needs_angle = || {
        angle.ok_or_else(|| {
            Error::Parse(format!("{context}: gate {} requires an angle", record.gate))
        })
    };
    let forbid_angle = |gate: GateOp| {
        if angle.is_some() {
            Err(Error::Parse(format!(
                "{context}: gate {} does not take an angle",
                record.gate
            )))
        } else {
            Ok(gate)
        }
    };
    match record.gate.as_str() {
        "H" | "X" | "Z" => {
            if targets.len() != 1 {
                return Err(arity_err(1));
            }
            forbid_angle(match record.gate.as_str() {
                "H" => GateOp::H(targets[0]),
                "X" => GateOp::X(targets[0]),
                _ => GateOp::Z(targets[0]),
            })
        }
        "RZ" | "RY" => {
            if targets.len() != 1 {
                return Err(arity_err(1));
            }
            let a = needs_angle()?;
            Ok(if record.gate == "RZ" {
                GateOp::Rz(targets[0], a)
            } else {
                GateOp::Ry(targets[0], a)
            })
        }
        "CNOT" => {
            if targets.len() != 2 {
                return Err(arity_err(2));
            }
            forbid_angle(GateOp::Cnot(targets[0], targets[1]))
        }
        "CPHASE" => {
            if targets.len() != 2 {
                return Err(arity_err(2));
            }
            let a = needs_angle()?;
            Ok(GateOp::Cphase(targets[0], targets[1], a))
        }
        other => Err(Error::Parse(format!("{context}: unknown gate `{other}`"))),
    }
}

fn gate_to_record(gate: &GateOp) -> GateRecord {
    GateRecord {
        gate: gate.name().to_string(),
        targets: gate.targets(),
        angle: gate.angle(),
    }
}

fn program_from_records(records: &[GateRecord], context: &str) -> Result<BranchProgram> {
    let steps = records
        .iter()
        .enumerate()
        .map(|(t, r)| gate_from_record(r, &format!("{context}, step {t}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(BranchProgram::new(steps))
}

/// Parses and validates a circuit-pair document.
///
/// Schema violations come back as parse errors carrying the offending
/// location; violated structural invariants come back as validation errors
/// naming the invariant.
pub fn parse_pair(text: &str) -> Result<CircuitPair> {
    let doc: PairDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let control_amplitudes = doc
        .control_amplitudes
        .iter()
        .map(|[re, im]| num_complex::Complex64::new(*re, *im))
        .collect();
    let deep_branches = doc
        .deep_branches
        .iter()
        .enumerate()
        .map(|(i, records)| program_from_records(records, &format!("deep_branches[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let shallow = program_from_records(&doc.shallow, "shallow")?;
    let halting = match doc.halting {
        HaltingField::Uniform(r) => Halting::Uniform(HaltingSpec {
            qubit: r.qubit,
            value: r.value,
        }),
        HaltingField::PerBranch(rs) => Halting::PerBranch(
            rs.iter()
                .map(|r| HaltingSpec {
                    qubit: r.qubit,
                    value: r.value,
                })
                .collect(),
        ),
    };
    let pair = CircuitPair {
        control_qubits: doc.m,
        data_qubits: doc.n,
        num_steps: doc.t_steps,
        control_amplitudes,
        deep_branches,
        shallow,
        halting,
    };
    pair.validate()?;
    Ok(pair)
}

/// Serializes a pair back to the document format (pretty-printed, trailing
/// newline). `parse_pair(serialize_pair(p))` reproduces `p` exactly.
pub fn serialize_pair(pair: &CircuitPair) -> String {
    let doc = PairDocument {
        m: pair.control_qubits,
        n: pair.data_qubits,
        t_steps: pair.num_steps,
        control_amplitudes: pair
            .control_amplitudes
            .iter()
            .map(|a| [a.re, a.im])
            .collect(),
        deep_branches: pair
            .deep_branches
            .iter()
            .map(|b| b.steps.iter().map(gate_to_record).collect())
            .collect(),
        shallow: pair.shallow.steps.iter().map(gate_to_record).collect(),
        halting: match &pair.halting {
            Halting::Uniform(s) => HaltingField::Uniform(HaltingRecord {
                qubit: s.qubit,
                value: s.value,
            }),
            Halting::PerBranch(specs) => HaltingField::PerBranch(
                specs
                    .iter()
                    .map(|s| HaltingRecord {
                        qubit: s.qubit,
                        value: s.value,
                    })
                    .collect(),
            ),
        },
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("document serialization");
    out.push('\n');
    out
}
