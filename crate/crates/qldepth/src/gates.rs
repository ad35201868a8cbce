//! Symbolic gate operations and their action on amplitude vectors.
//!
//! Basis convention: qubit 0 is the most significant bit of the basis index,
//! so a register written |q0 q1 q2⟩ maps to index q0·4 + q1·2 + q2.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

/// A single gate applied to one or two qubits of a register.
///
/// Two-qubit variants carry `(control, target)` in that order.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    H(usize),
    X(usize),
    Z(usize),
    Rz(usize, f64),
    Ry(usize, f64),
    Cnot(usize, usize),
    Cphase(usize, usize, f64),
}

impl GateOp {
    /// Canonical name used by the document format.
    pub fn name(&self) -> &'static str {
        match self {
            GateOp::H(_) => "H",
            GateOp::X(_) => "X",
            GateOp::Z(_) => "Z",
            GateOp::Rz(..) => "RZ",
            GateOp::Ry(..) => "RY",
            GateOp::Cnot(..) => "CNOT",
            GateOp::Cphase(..) => "CPHASE",
        }
    }

    /// Qubit indices touched by this gate, control first for two-qubit gates.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            GateOp::H(q) | GateOp::X(q) | GateOp::Z(q) | GateOp::Rz(q, _) | GateOp::Ry(q, _) => {
                vec![q]
            }
            GateOp::Cnot(c, t) | GateOp::Cphase(c, t, _) => vec![c, t],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateOp::Rz(_, a) | GateOp::Ry(_, a) | GateOp::Cphase(_, _, a) => Some(a),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, GateOp::Cnot(..) | GateOp::Cphase(..))
    }

    /// Checks that targets are distinct, in range, and any angle is finite.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let targets = self.targets();
        for &q in &targets {
            if q >= num_qubits {
                return Err(Error::Contract(format!(
                    "gate {} targets qubit {q}, register has {num_qubits} qubits",
                    self.name()
                )));
            }
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::Contract(format!(
                "gate {} requires two distinct qubits, got {} twice",
                self.name(),
                targets[0]
            )));
        }
        if let Some(a) = self.angle()
            && !a.is_finite()
        {
            return Err(Error::Contract(format!(
                "gate {} has non-finite angle {a}",
                self.name()
            )));
        }
        Ok(())
    }

    /// Returns the same gate with a replaced rotation angle.
    pub fn with_angle(&self, angle: f64) -> Result<GateOp> {
        match *self {
            GateOp::Rz(q, _) => Ok(GateOp::Rz(q, angle)),
            GateOp::Ry(q, _) => Ok(GateOp::Ry(q, angle)),
            GateOp::Cphase(c, t, _) => Ok(GateOp::Cphase(c, t, angle)),
            _ => Err(Error::Contract(format!(
                "gate {} does not carry an angle",
                self.name()
            ))),
        }
    }

    /// The gate's unitary matrix over its own targets (2x2 or 4x4, basis
    /// |control target⟩ for two-qubit gates).
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let re = |x: f64| Complex64::new(x, 0.0);
        match *self {
            GateOp::H(_) => DMatrix::from_row_slice(
                2,
                2,
                &[
                    re(FRAC_1_SQRT_2),
                    re(FRAC_1_SQRT_2),
                    re(FRAC_1_SQRT_2),
                    re(-FRAC_1_SQRT_2),
                ],
            ),
            GateOp::X(_) => DMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)]),
            GateOp::Z(_) => DMatrix::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(-1.0)]),
            GateOp::Rz(_, a) => {
                let p = Complex64::from_polar(1.0, -a / 2.0);
                let q = Complex64::from_polar(1.0, a / 2.0);
                DMatrix::from_row_slice(2, 2, &[p, re(0.0), re(0.0), q])
            }
            GateOp::Ry(_, a) => {
                let c = (a / 2.0).cos();
                let s = (a / 2.0).sin();
                DMatrix::from_row_slice(2, 2, &[re(c), re(-s), re(s), re(c)])
            }
            GateOp::Cnot(..) => {
                let mut m = DMatrix::from_element(4, 4, re(0.0));
                m[(0, 0)] = re(1.0);
                m[(1, 1)] = re(1.0);
                m[(2, 3)] = re(1.0);
                m[(3, 2)] = re(1.0);
                m
            }
            GateOp::Cphase(_, _, a) => {
                let mut m = DMatrix::from_element(4, 4, re(0.0));
                m[(0, 0)] = re(1.0);
                m[(1, 1)] = re(1.0);
                m[(2, 2)] = re(1.0);
                m[(3, 3)] = Complex64::from_polar(1.0, a);
                m
            }
        }
    }
}

/// Bit mask of `qubit` in an index over `num_qubits` qubits (qubit 0 = MSB).
#[inline]
pub(crate) fn qubit_mask(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

/// Applies `gate` to a raw amplitude vector by pairwise in-place updates.
///
/// The caller is responsible for having validated the gate against the
/// register size; the vector need not be normalized (sub-blocks of a larger
/// state are applied through here as well).
pub(crate) fn apply_gate_raw(amps: &mut [Complex64], num_qubits: usize, gate: &GateOp) {
    debug_assert_eq!(amps.len(), 1 << num_qubits);
    match *gate {
        GateOp::H(q) => {
            let mask = qubit_mask(num_qubits, q);
            for b in 0..amps.len() {
                if b & mask == 0 {
                    let a0 = amps[b];
                    let a1 = amps[b | mask];
                    amps[b] = (a0 + a1) * FRAC_1_SQRT_2;
                    amps[b | mask] = (a0 - a1) * FRAC_1_SQRT_2;
                }
            }
        }
        GateOp::X(q) => {
            let mask = qubit_mask(num_qubits, q);
            for b in 0..amps.len() {
                if b & mask == 0 {
                    amps.swap(b, b | mask);
                }
            }
        }
        GateOp::Z(q) => {
            let mask = qubit_mask(num_qubits, q);
            for (b, amp) in amps.iter_mut().enumerate() {
                if b & mask != 0 {
                    *amp = -*amp;
                }
            }
        }
        GateOp::Rz(q, a) => {
            let mask = qubit_mask(num_qubits, q);
            let p0 = Complex64::from_polar(1.0, -a / 2.0);
            let p1 = Complex64::from_polar(1.0, a / 2.0);
            for (b, amp) in amps.iter_mut().enumerate() {
                *amp *= if b & mask == 0 { p0 } else { p1 };
            }
        }
        GateOp::Ry(q, a) => {
            let mask = qubit_mask(num_qubits, q);
            let c = (a / 2.0).cos();
            let s = (a / 2.0).sin();
            for b in 0..amps.len() {
                if b & mask == 0 {
                    let a0 = amps[b];
                    let a1 = amps[b | mask];
                    amps[b] = a0 * c - a1 * s;
                    amps[b | mask] = a0 * s + a1 * c;
                }
            }
        }
        GateOp::Cnot(ctrl, tgt) => {
            let cmask = qubit_mask(num_qubits, ctrl);
            let tmask = qubit_mask(num_qubits, tgt);
            for b in 0..amps.len() {
                if b & cmask != 0 && b & tmask == 0 {
                    amps.swap(b, b | tmask);
                }
            }
        }
        GateOp::Cphase(ctrl, tgt, a) => {
            let cmask = qubit_mask(num_qubits, ctrl);
            let tmask = qubit_mask(num_qubits, tgt);
            let phase = Complex64::from_polar(1.0, a);
            for (b, amp) in amps.iter_mut().enumerate() {
                if b & cmask != 0 && b & tmask != 0 {
                    *amp *= phase;
                }
            }
        }
    }
}
