//! Branch distinguishability, the environmental overlap model, observability
//! thresholds, entropy bounds, and the logical depth factor.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::density::shannon_entropy_bits;
use crate::error::{Error, Result};
use crate::simulate::{BranchTrace, PairTrace};

/// Pairwise branch distinguishability: for each step t, the matrix of
/// squared Euclidean distances between per-qubit Z-expectation vectors,
/// plus the element-wise sum over steps.
#[derive(Debug, Clone)]
pub struct DistinguishabilityMatrix {
    pub per_step: Vec<DMatrix<f64>>,
    pub accumulated: DMatrix<f64>,
}

impl DistinguishabilityMatrix {
    /// Builds the matrices from a set of traces sharing one step count.
    pub fn from_traces(traces: &[&BranchTrace]) -> Self {
        let branches = traces.len();
        let steps = traces.first().map_or(0, |t| t.num_steps());
        let mut per_step = Vec::with_capacity(steps);
        let mut accumulated = DMatrix::zeros(branches, branches);
        for t in 0..steps {
            let mut d = DMatrix::zeros(branches, branches);
            for i in 0..branches {
                for j in (i + 1)..branches {
                    let zi = &traces[i].z_expectations[t];
                    let zj = &traces[j].z_expectations[t];
                    let dist: f64 = zi.iter().zip(zj).map(|(a, b)| (a - b) * (a - b)).sum();
                    d[(i, j)] = dist;
                    d[(j, i)] = dist;
                }
            }
            accumulated += &d;
            per_step.push(d);
        }
        DistinguishabilityMatrix {
            per_step,
            accumulated,
        }
    }

    pub fn num_branches(&self) -> usize {
        self.accumulated.nrows()
    }

    pub fn num_steps(&self) -> usize {
        self.per_step.len()
    }

    /// Element-wise sum of the per-step matrices through step `t` (1-based).
    pub fn accumulated_through(&self, t: usize) -> DMatrix<f64> {
        let branches = self.num_branches();
        let mut acc = DMatrix::zeros(branches, branches);
        for d in self.per_step.iter().take(t) {
            acc += d;
        }
        acc
    }

    /// Smallest off-diagonal accumulated entry; `None` for a single branch.
    pub fn min_offdiagonal_accumulated(&self) -> Option<f64> {
        let branches = self.num_branches();
        let mut min: Option<f64> = None;
        for i in 0..branches {
            for j in (i + 1)..branches {
                let v = self.accumulated[(i, j)];
                min = Some(min.map_or(v, |m: f64| m.min(v)));
            }
        }
        min
    }
}

/// Distinguishability of the deep architecture's branches.
pub fn distinguishability(trace: &PairTrace) -> DistinguishabilityMatrix {
    let refs: Vec<&BranchTrace> = trace.deep.iter().collect();
    DistinguishabilityMatrix::from_traces(&refs)
}

/// Distinguishability seen by an environment monitoring the shallow path:
/// every branch shares the single uniform trace, so all entries come out
/// exactly zero.
pub fn shallow_distinguishability(trace: &PairTrace) -> DistinguishabilityMatrix {
    let refs: Vec<&BranchTrace> = trace.deep.iter().map(|_| &trace.shallow).collect();
    DistinguishabilityMatrix::from_traces(&refs)
}

/// Modeled squared overlap of two environmental records, exp(−γ·D).
pub fn overlap_model(distinguishability: f64, gamma: f64) -> Result<f64> {
    if distinguishability < 0.0 {
        return Err(Error::Contract(format!(
            "distinguishability must be non-negative, got {distinguishability}"
        )));
    }
    if gamma < 0.0 {
        return Err(Error::Contract(format!(
            "dephasing strength must be non-negative, got {gamma}"
        )));
    }
    Ok((-gamma * distinguishability).exp())
}

/// Minimum effective dephasing strength for an observable signature:
/// the reciprocal of the smallest accumulated off-diagonal entry.
///
/// Returns `None` when no coupling strength can resolve the branches
/// (fewer than two branches, or some pair never separates).
pub fn observability_threshold(d: &DistinguishabilityMatrix) -> Option<f64> {
    match d.min_offdiagonal_accumulated() {
        Some(min) if min > 0.0 => Some(1.0 / min),
        _ => None,
    }
}

/// Entropy bounds (in bits) and the logical depth factor derived from them.
///
/// The bounds are upper bounds under assumed saturation, not simulated
/// entropies.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub bound_shallow_bits: f64,
    pub bound_deep_bits: f64,
    pub l_d: f64,
    pub l_d_asymptotic: f64,
    /// Minimum observable dephasing strength; `None` when unobservable at
    /// any coupling.
    pub gamma_min: Option<f64>,
}

/// Cumulative entropy bounds for both architectures over T steps plus the
/// final halting operation, and their ratio.
pub fn entropy_bounds(
    control_qubits: usize,
    data_qubits: usize,
    num_steps: usize,
) -> Result<EntropyReport> {
    if control_qubits == 0 || data_qubits == 0 || num_steps == 0 {
        return Err(Error::Config(format!(
            "entropy bounds need positive register sizes and step count, got \
             m={control_qubits}, n={data_qubits}, T={num_steps}"
        )));
    }
    let m = control_qubits as f64;
    let n = data_qubits as f64;
    let t = num_steps as f64;
    let bound_shallow_bits = t * n + 1.0;
    let bound_deep_bits = t * (m + n) + 1.0;
    Ok(EntropyReport {
        bound_shallow_bits,
        bound_deep_bits,
        l_d: bound_deep_bits / bound_shallow_bits,
        l_d_asymptotic: 1.0 + m / (n + 1.0 / t),
        gamma_min: None,
    })
}

/// Entropy (bits) of the modeled environmental state after step `t`
/// (1-based).
///
/// The environmental records are given the amplitude overlaps
/// G_ij = exp(−γ·D_ij/2) with D accumulated through step t (positive square
/// root of the modeled squared overlap, zero phase), weighted by the control
/// amplitudes: A_ij = α_i·conj(α_j)·G_ij. The result is the Shannon entropy
/// of A's eigenvalues.
pub fn effective_environment_entropy(
    alphas: &[Complex64],
    d: &DistinguishabilityMatrix,
    gamma: f64,
    t: usize,
) -> Result<f64> {
    if gamma < 0.0 {
        return Err(Error::Contract(format!(
            "dephasing strength must be non-negative, got {gamma}"
        )));
    }
    if t == 0 || t > d.num_steps() {
        return Err(Error::Contract(format!(
            "step {t} outside 1..={}",
            d.num_steps()
        )));
    }
    if alphas.len() != d.num_branches() {
        return Err(Error::Contract(format!(
            "{} amplitudes for {} branches",
            alphas.len(),
            d.num_branches()
        )));
    }
    let branches = alphas.len();
    let acc = d.accumulated_through(t);
    let mut weighted = DMatrix::from_element(branches, branches, Complex64::new(0.0, 0.0));
    for i in 0..branches {
        for j in 0..branches {
            let g = (-gamma * acc[(i, j)] / 2.0).exp();
            weighted[(i, j)] = alphas[i] * alphas[j].conj() * g;
        }
    }
    let eigenvalues: Vec<f64> = weighted
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    if let Some(&min) = eigenvalues
        .iter()
        .min_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"))
        && min < -1e-10
    {
        return Err(Error::Degenerate(format!(
            "weighted overlap matrix has negative eigenvalue {min}"
        )));
    }
    Ok(shannon_entropy_bits(&eigenvalues))
}
