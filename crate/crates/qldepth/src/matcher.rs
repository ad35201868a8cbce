//! Solving the shallow circuit's steering angle so both architectures halt
//! with equal probability.

use crate::circuit::{CircuitPair, Halting};
use crate::error::{Error, Result};
use crate::gates::GateOp;
use crate::simulate::simulate_pair;
use crate::state::PureState;

/// Bisection stops when the bracket is narrower than this.
const THETA_TOL: f64 = 1e-12;
const MAX_ITERATIONS: usize = 200;
/// Grid resolution used to locate a sign change on [0, π].
const BRACKET_GRID: usize = 256;

/// Outcome of a successful steering solve.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    /// Solved rotation angle in [0, π].
    pub theta: f64,
    pub achieved_p: f64,
    pub target_p: f64,
    pub residual: f64,
    /// Bisection iterations; zero when the closed form applied.
    pub iterations: usize,
}

/// Closed-form steering angle for a rotation RY(θ) acting on a halting qubit
/// that sits entirely in |0⟩ beforehand: the halting probability becomes
/// cos²(θ/2), so θ = 2·arccos(√target).
pub fn solve_ry_closed_form(target_p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&target_p) {
        return Err(Error::Contract(format!(
            "target probability {target_p} outside [0, 1]"
        )));
    }
    Ok(2.0 * target_p.sqrt().acos())
}

/// Finds the steering angle θ ∈ [0, π] for the final shallow gate such that
/// the shallow halting probability matches the deep architecture's.
///
/// Uses the closed form when its preconditions hold (RY on a uniform
/// |0⟩⟨0| halting qubit that is still fully in |0⟩ before the rotation),
/// verified by simulation afterward; otherwise falls back to a bracketing
/// bisection, returning the smallest bracketed root. When no angle reaches
/// the target, the achievable range is reported in the error.
pub fn solve_steering(pair: &CircuitPair, tol: f64) -> Result<MatchResult> {
    if tol <= 0.0 {
        return Err(Error::Contract(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let final_gate = pair
        .shallow
        .steps
        .last()
        .ok_or_else(|| Error::Contract("shallow program is empty".into()))?
        .clone();
    if final_gate.angle().is_none() {
        return Err(Error::Contract(format!(
            "final shallow gate {} carries no steering angle",
            final_gate.name()
        )));
    }

    let target_p = simulate_pair(pair)?.p_halt_deep;

    // State after the first T-1 shallow steps; only the final gate varies.
    let prefix = {
        let mut state = PureState::zero(pair.data_qubits)?;
        for gate in &pair.shallow.steps[..pair.shallow.len() - 1] {
            state.apply_mut(gate)?;
        }
        state
    };
    let weights: Vec<f64> = pair
        .control_amplitudes
        .iter()
        .map(|a| a.norm_sqr())
        .collect();
    let shallow_p = |theta: f64| -> Result<f64> {
        let final_state = prefix.apply(&final_gate.with_angle(theta)?)?;
        let mut p = 0.0;
        for (i, w) in weights.iter().enumerate() {
            let spec = pair.halting.for_branch(i);
            p += w * final_state.projector_probability(spec.qubit, spec.value)?;
        }
        Ok(p)
    };

    if closed_form_applies(pair, &final_gate, &prefix) {
        let theta = solve_ry_closed_form(target_p)?;
        let achieved_p = shallow_p(theta)?;
        let residual = (achieved_p - target_p).abs();
        if residual <= tol {
            return Ok(MatchResult {
                theta,
                achieved_p,
                target_p,
                residual,
                iterations: 0,
            });
        }
        // Preconditions misjudged the geometry; fall through to bisection.
    }

    let grid: Vec<(f64, f64)> = (0..=BRACKET_GRID)
        .map(|i| {
            let theta = std::f64::consts::PI * i as f64 / BRACKET_GRID as f64;
            shallow_p(theta).map(|p| (theta, p - target_p))
        })
        .collect::<Result<Vec<_>>>()?;

    // Smallest bracketed root wins: scan left to right.
    for w in grid.windows(2) {
        let (lo, f_lo) = w[0];
        let (hi, f_hi) = w[1];
        if f_lo == 0.0 {
            return Ok(MatchResult {
                theta: lo,
                achieved_p: f_lo + target_p,
                target_p,
                residual: 0.0,
                iterations: 0,
            });
        }
        if f_lo.signum() != f_hi.signum() && f_hi != 0.0 {
            return bisect(lo, hi, f_lo, target_p, tol, &shallow_p);
        }
    }

    // No sign change: accept a grid point already inside tolerance (targets
    // touching the range's edge, e.g. a deep halting probability of zero).
    if let Some(&(theta, f)) = grid
        .iter()
        .min_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).expect("finite residuals"))
        && f.abs() <= tol
    {
        return Ok(MatchResult {
            theta,
            achieved_p: f + target_p,
            target_p,
            residual: f.abs(),
            iterations: 0,
        });
    }

    let (min, max) = grid
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, f)| {
            let p = f + target_p;
            (lo.min(p), hi.max(p))
        });
    Err(Error::Infeasible {
        target: target_p,
        min,
        max,
    })
}

fn closed_form_applies(pair: &CircuitPair, final_gate: &GateOp, prefix: &PureState) -> bool {
    let Halting::Uniform(spec) = &pair.halting else {
        return false;
    };
    let GateOp::Ry(q, _) = final_gate else {
        return false;
    };
    if *q != spec.qubit || spec.value != 0 {
        return false;
    }
    matches!(
        prefix.projector_probability(spec.qubit, 0),
        Ok(p) if (p - 1.0).abs() < 1e-12
    )
}

fn bisect(
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    target_p: f64,
    tol: f64,
    f: &dyn Fn(f64) -> Result<f64>,
) -> Result<MatchResult> {
    let mut iterations = 0;
    while hi - lo > THETA_TOL && iterations < MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)? - target_p;
        iterations += 1;
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    let achieved_p = f(theta)? + target_p;
    let residual = (achieved_p - target_p).abs();
    if residual > tol {
        return Err(Error::Degenerate(format!(
            "bisection converged to theta={theta} but the residual {residual} exceeds {tol}"
        )));
    }
    Ok(MatchResult {
        theta,
        achieved_p,
        target_p,
        residual,
        iterations,
    })
}

/// Re-simulates a solved pair and checks the matching constraint end to end.
pub fn verify_match(pair: &CircuitPair, result: &MatchResult, tol: f64) -> Result<()> {
    let solved = pair.with_steering_angle(result.theta)?;
    let trace = simulate_pair(&solved)?;
    let gap = (trace.p_halt_deep - trace.p_halt_shallow).abs();
    if gap > tol {
        return Err(Error::Degenerate(format!(
            "post-solve halting probabilities differ by {gap}"
        )));
    }
    Ok(())
}
