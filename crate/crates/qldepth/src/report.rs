//! Aggregated analysis reports: machine-readable JSON and rendered tables.
//!
//! Report structs hold module outputs untouched; rounding happens only at
//! serialization (12 significant digits) and in the table renderer (4
//! decimal places).

use serde::{Deserialize, Serialize, Serializer};

use crate::analysis::{
    distinguishability, effective_environment_entropy, entropy_bounds, observability_threshold,
    shallow_distinguishability,
};
use crate::circuit::{CircuitPair, validate_matching};
use crate::error::{Error, Result};
use crate::matcher::MatchResult;
use crate::simulate::simulate_pair;
use crate::witness::{WitnessConfig, WitnessModel, run_witness};

/// Rounds to 12 significant digits; identity on already-rounded values.
fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn ser_f64<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(sig12(*x))
}

fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&sig12(*v)),
        None => s.serialize_none(),
    }
}

fn ser_vec_f64<S: Serializer>(xs: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|&x| sig12(x)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSection {
    pub m: usize,
    pub n: usize,
    pub t_steps: usize,
    pub complexity_matched: bool,
    pub mismatched_branches: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaltingSection {
    #[serde(serialize_with = "ser_vec_f64")]
    pub per_branch: Vec<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub deep: f64,
    #[serde(serialize_with = "ser_f64")]
    pub shallow: f64,
    /// Steering angle of the final shallow gate, when it carries one.
    #[serde(serialize_with = "ser_opt_f64")]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinguishabilityRow {
    pub pair: [usize; 2],
    #[serde(serialize_with = "ser_f64")]
    pub final_step: f64,
    #[serde(serialize_with = "ser_f64")]
    pub accumulated: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropySection {
    #[serde(serialize_with = "ser_f64")]
    pub bound_shallow_bits: f64,
    #[serde(serialize_with = "ser_f64")]
    pub bound_deep_bits: f64,
    #[serde(serialize_with = "ser_f64")]
    pub l_d: f64,
    #[serde(serialize_with = "ser_f64")]
    pub l_d_asymptotic: f64,
    /// Effective dephasing strength the model was evaluated at.
    #[serde(serialize_with = "ser_f64")]
    pub gamma: f64,
    /// Observability threshold; `null` when unobservable at any coupling.
    #[serde(serialize_with = "ser_opt_f64")]
    pub gamma_min: Option<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub effective_entropy_deep_bits: f64,
    #[serde(serialize_with = "ser_f64")]
    pub effective_entropy_shallow_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSection {
    pub model: String,
    #[serde(serialize_with = "ser_f64")]
    pub phi: f64,
    #[serde(serialize_with = "ser_vec_f64")]
    pub branch_phases: Vec<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub purity_deep: f64,
    #[serde(serialize_with = "ser_f64")]
    pub purity_shallow: f64,
    #[serde(serialize_with = "ser_opt_f64")]
    pub phi_threshold: Option<f64>,
    pub observable: bool,
}

/// The full analysis product for one circuit pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub pair: PairSection,
    pub halting: HaltingSection,
    pub distinguishability: Vec<DistinguishabilityRow>,
    pub entropy: EntropySection,
    pub witness: WitnessSection,
}

impl AnalysisReport {
    /// Runs the full pipeline on a validated pair: simulate, compare
    /// branches, bound entropies, and evaluate the witness.
    pub fn build(
        pair: &CircuitPair,
        gamma: f64,
        phi: f64,
        model: WitnessModel,
    ) -> Result<AnalysisReport> {
        if gamma < 0.0 {
            return Err(Error::Config(format!(
                "dephasing strength must be non-negative, got {gamma}"
            )));
        }
        let matching = validate_matching(pair);
        let trace = simulate_pair(pair)?;
        let d = distinguishability(&trace);
        let d_shallow = shallow_distinguishability(&trace);

        let rows = distinguishability_rows(&d);

        let mut entropy = entropy_bounds(pair.control_qubits, pair.data_qubits, pair.num_steps)?;
        entropy.gamma_min = observability_threshold(&d);
        let t_final = d.num_steps();
        let effective_deep =
            effective_environment_entropy(&pair.control_amplitudes, &d, gamma, t_final)?;
        let effective_shallow =
            effective_environment_entropy(&pair.control_amplitudes, &d_shallow, gamma, t_final)?;

        let witness = run_witness(pair, &WitnessConfig { phi, model })?;

        Ok(AnalysisReport {
            pair: PairSection {
                m: pair.control_qubits,
                n: pair.data_qubits,
                t_steps: pair.num_steps,
                complexity_matched: matching.matched,
                mismatched_branches: matching.mismatched_branches,
            },
            halting: HaltingSection {
                per_branch: trace.per_branch_p_halt,
                deep: trace.p_halt_deep,
                shallow: trace.p_halt_shallow,
                theta: pair.steering_angle(),
            },
            distinguishability: rows,
            entropy: EntropySection {
                bound_shallow_bits: entropy.bound_shallow_bits,
                bound_deep_bits: entropy.bound_deep_bits,
                l_d: entropy.l_d,
                l_d_asymptotic: entropy.l_d_asymptotic,
                gamma,
                gamma_min: entropy.gamma_min,
                effective_entropy_deep_bits: effective_deep,
                effective_entropy_shallow_bits: effective_shallow,
            },
            witness: WitnessSection {
                model: match model {
                    WitnessModel::Semiclassical => "semiclassical".to_string(),
                    WitnessModel::FullUnitary => "full-unitary".to_string(),
                },
                phi,
                branch_phases: witness.branch_phases,
                purity_deep: witness.purity_deep,
                purity_shallow: witness.purity_shallow,
                phi_threshold: witness.phi_threshold,
                observable: witness.observable,
            },
        })
    }

    /// Machine-readable form: pretty JSON, trailing newline, floats at 12
    /// significant digits. Re-parsing and re-serializing is idempotent.
    pub fn to_machine_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serialization");
        out.push('\n');
        out
    }

    pub fn from_machine_str(text: &str) -> Result<AnalysisReport> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// The distinguishability table on its own.
    pub fn render_distinguishability(&self) -> String {
        render_distinguishability_rows(&self.distinguishability)
    }

    /// Human-readable rendering of the whole report.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str("circuit pair\n");
        out.push_str(&format!("  control qubits (m): {}\n", self.pair.m));
        out.push_str(&format!("  data qubits (n):    {}\n", self.pair.n));
        out.push_str(&format!("  time steps:         {}\n", self.pair.t_steps));
        out.push_str(&format!(
            "  complexity matched: {}\n",
            if self.pair.complexity_matched {
                "yes".to_string()
            } else {
                format!("no (branches {:?})", self.pair.mismatched_branches)
            }
        ));

        out.push_str("\nhalting\n");
        for (i, p) in self.halting.per_branch.iter().enumerate() {
            out.push_str(&format!("  branch {i}: {}\n", fmt4(*p)));
        }
        out.push_str(&format!("  deep total:    {}\n", fmt4(self.halting.deep)));
        out.push_str(&format!(
            "  shallow total: {}\n",
            fmt4(self.halting.shallow)
        ));
        match self.halting.theta {
            Some(theta) => {
                out.push_str(&format!("  steering angle: {} rad\n", fmt4(theta)));
            }
            None => out.push_str("  steering angle: none\n"),
        }

        out.push_str("\ndistinguishability\n");
        for line in self.render_distinguishability().lines() {
            out.push_str(&format!("  {line}\n"));
        }

        out.push_str("\nentropy (upper bounds, saturation assumed)\n");
        out.push_str(&format!(
            "  shallow bound: {} bits\n",
            fmt4(self.entropy.bound_shallow_bits)
        ));
        out.push_str(&format!(
            "  deep bound:    {} bits\n",
            fmt4(self.entropy.bound_deep_bits)
        ));
        out.push_str(&format!("  depth factor:  {}\n", fmt4(self.entropy.l_d)));
        out.push_str(&format!(
            "  depth factor (asymptotic): {}\n",
            fmt4(self.entropy.l_d_asymptotic)
        ));
        match self.entropy.gamma_min {
            Some(g) => out.push_str(&format!("  gamma threshold: {}\n", fmt4(g))),
            None => out.push_str("  gamma threshold: unobservable at any coupling\n"),
        }
        out.push_str(&format!(
            "  modeled environment entropy at gamma {}: deep {} bits, shallow {} bits\n",
            fmt4(self.entropy.gamma),
            fmt4(self.entropy.effective_entropy_deep_bits),
            fmt4(self.entropy.effective_entropy_shallow_bits)
        ));

        out.push_str(&format!(
            "\nwitness ({}, phi = {})\n",
            self.witness.model,
            fmt4(self.witness.phi)
        ));
        let phases: Vec<String> = self
            .witness
            .branch_phases
            .iter()
            .map(|p| fmt4(*p))
            .collect();
        out.push_str(&format!("  branch phases:  {} rad\n", phases.join(", ")));
        out.push_str(&format!(
            "  purity deep:    {}\n",
            fmt4(self.witness.purity_deep)
        ));
        out.push_str(&format!(
            "  purity shallow: {}\n",
            fmt4(self.witness.purity_shallow)
        ));
        match self.witness.phi_threshold {
            Some(t) => out.push_str(&format!("  phi threshold:  {} rad\n", fmt4(t))),
            None => out.push_str("  phi threshold:  unobservable at any coupling\n"),
        }
        out.push_str(&format!(
            "  observable:     {}\n",
            if self.witness.observable { "yes" } else { "no" }
        ));
        if self.witness.model == "full-unitary" {
            out.push_str(
                "  note: the full-unitary coupling also entangles the ancilla with data\n  \
                 superpositions, so the shallow purity can sit below 1\n",
            );
        }
        out
    }
}

/// Machine-readable form of a steering solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchSection {
    #[serde(serialize_with = "ser_f64")]
    pub theta: f64,
    #[serde(serialize_with = "ser_f64")]
    pub achieved_p: f64,
    #[serde(serialize_with = "ser_f64")]
    pub target_p: f64,
    #[serde(serialize_with = "ser_f64")]
    pub residual: f64,
    pub iterations: usize,
}

impl From<&MatchResult> for MatchSection {
    fn from(r: &MatchResult) -> Self {
        MatchSection {
            theta: r.theta,
            achieved_p: r.achieved_p,
            target_p: r.target_p,
            residual: r.residual,
            iterations: r.iterations,
        }
    }
}

impl MatchSection {
    pub fn to_machine_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("match serialization");
        out.push('\n');
        out
    }

    pub fn render_table(&self) -> String {
        format!(
            "steering solve\n  theta:      {} rad\n  target p:   {}\n  achieved p: {}\n  \
             residual:   {:e}\n  iterations: {}\n",
            fmt4(self.theta),
            fmt4(self.target_p),
            fmt4(self.achieved_p),
            self.residual,
            self.iterations
        )
    }
}

/// One row per unordered branch pair, in ascending index order.
pub fn distinguishability_rows(
    d: &crate::analysis::DistinguishabilityMatrix,
) -> Vec<DistinguishabilityRow> {
    let branches = d.num_branches();
    let last = d.per_step.last();
    let mut rows = Vec::new();
    for i in 0..branches {
        for j in (i + 1)..branches {
            rows.push(DistinguishabilityRow {
                pair: [i, j],
                final_step: last.map_or(0.0, |m| m[(i, j)]),
                accumulated: d.accumulated[(i, j)],
            });
        }
    }
    rows
}

pub fn render_distinguishability_rows(rows: &[DistinguishabilityRow]) -> String {
    let mut out = String::from("pair | final | accumulated\n");
    for row in rows {
        out.push_str(&format!(
            "({},{}) | {} | {}\n",
            row.pair[0],
            row.pair[1],
            fmt4(row.final_step),
            fmt4(row.accumulated)
        ));
    }
    out
}

/// Four decimal places with trailing zeros trimmed (at least one kept).
pub fn fmt4(x: f64) -> String {
    let s = format!("{x:.4}");
    let trimmed = s.trim_end_matches('0');
    if trimmed.ends_with('.') {
        format!("{trimmed}0")
    } else {
        trimmed.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::four_branch_example;

    #[test]
    fn display_rounding() {
        assert_eq!(fmt4(2.0), "2.0");
        assert_eq!(fmt4(18.0), "18.0");
        assert_eq!(fmt4(0.375), "0.375");
        assert_eq!(fmt4(1.8234765819), "1.8235");
        assert_eq!(fmt4(1.0 / 6.0), "0.1667");
        assert_eq!(fmt4(-1.0), "-1.0");
    }

    #[test]
    fn sig12_is_idempotent() {
        for x in [0.375, 1.0 / 3.0, 21.0 / 13.0, 0.7965663991828, 1e-17, -2.5] {
            let once = sig12(x);
            assert_eq!(sig12(once), once, "x = {x}");
        }
        assert_eq!(sig12(0.0), 0.0);
    }

    #[test]
    fn reference_report_contents() {
        let pair = four_branch_example();
        let report = AnalysisReport::build(&pair, 0.17, 0.5, WitnessModel::Semiclassical).unwrap();
        assert!(report.pair.complexity_matched);
        assert_eq!(report.halting.per_branch, vec![0.5, 0.5, 0.5, 0.0]);
        assert_eq!(report.entropy.bound_deep_bits, 21.0);
        assert_eq!(report.entropy.bound_shallow_bits, 13.0);
        assert_eq!(report.witness.purity_shallow, 1.0);
        assert_eq!(report.distinguishability.len(), 6);
        assert!(report.entropy.effective_entropy_shallow_bits.abs() < 1e-12);
        assert!(report.entropy.effective_entropy_deep_bits > 0.01);
    }

    #[test]
    fn machine_round_trip_is_idempotent() {
        let pair = four_branch_example();
        let report = AnalysisReport::build(&pair, 0.17, 0.5, WitnessModel::Semiclassical).unwrap();
        let first = report.to_machine_string();
        let reparsed = AnalysisReport::from_machine_str(&first).unwrap();
        let second = reparsed.to_machine_string();
        assert_eq!(first, second);
    }

    #[test]
    fn distinguishability_table_rows() {
        let pair = four_branch_example();
        let report = AnalysisReport::build(&pair, 0.17, 0.5, WitnessModel::Semiclassical).unwrap();
        let table = report.render_distinguishability();
        assert!(table.contains("(0,1) | 2.0 | 8.0"));
        assert!(table.contains("(2,3) | 6.0 | 16.0"));
    }
}
