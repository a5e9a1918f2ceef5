use std::f64::consts::FRAC_1_SQRT_2;

use super::state::{Amp, StateVector, MAX_DIM, TOL};
use crate::error::{Error, Result};

/// Dense unitary acting on 1 or 2 qubits (dimension 2 or 4), row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOp {
    dim: usize,
    entries: Vec<Amp>,
}

impl UnitaryOp {
    /// Checks shape, finiteness and `U†U = I` entrywise within [`TOL`].
    pub fn new(dim: usize, entries: Vec<Amp>) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                actual: dim,
            });
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if entries.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let op = Self { dim, entries };
        if !op.is_unitary(TOL) {
            return Err(Error::NotUnitary);
        }
        Ok(op)
    }

    fn from_real(dim: usize, entries: &[f64]) -> Self {
        Self::new(dim, entries.iter().map(|&x| Amp::new(x, 0.0)).collect())
            .expect("built-in gate is unitary")
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut e = vec![Amp::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            e[i * dim + i] = Amp::new(1.0, 0.0);
        }
        Self::new(dim, e)
    }

    pub fn pauli_x() -> Self {
        Self::from_real(2, &[0.0, 1.0, 1.0, 0.0])
    }

    /// `iσ_y = [[0, 1], [−1, 0]]`.
    pub fn i_sigma_y() -> Self {
        Self::from_real(2, &[0.0, 1.0, -1.0, 0.0])
    }

    pub fn hadamard() -> Self {
        let h = FRAC_1_SQRT_2;
        Self::from_real(2, &[h, h, h, -h])
    }

    /// Controlled-NOT with the first target as control.
    pub fn cnot() -> Self {
        #[rustfmt::skip]
        let e = [
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
        ];
        Self::from_real(4, &e)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Amp {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut e = vec![Amp::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                e[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        Self { dim: d, entries: e }
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &UnitaryOp) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let d = self.dim;
        let mut e = vec![Amp::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                e[r * d + c] = (0..d).map(|k| self.entry(r, k) * other.entry(k, c)).sum();
            }
        }
        Ok(Self { dim: d, entries: e })
    }

    fn is_unitary(&self, tol: f64) -> bool {
        let d = self.dim;
        (0..d).all(|r| {
            (0..d).all(|c| {
                let v: Amp = (0..d).map(|k| self.entry(k, r).conj() * self.entry(k, c)).sum();
                let want = if r == c { 1.0 } else { 0.0 };
                (v.re - want).abs() <= tol && v.im.abs() <= tol
            })
        })
    }
}

/// Real rotation `U(θ) = [[cos θ, sin θ], [−sin θ, cos θ]]` used to encode
/// two bid bits per qubit.
pub fn rotation_u(theta: f64) -> Result<UnitaryOp> {
    if !theta.is_finite() {
        return Err(Error::OutOfRange(format!("rotation angle {theta}")));
    }
    let (s, c) = theta.sin_cos();
    Ok(UnitaryOp::from_real(2, &[c, s, -s, c]))
}

pub(crate) fn validate_targets(targets: &[usize], num_qubits: usize) -> Result<()> {
    let bad = targets.is_empty()
        || targets.iter().any(|&t| t >= num_qubits)
        || targets
            .iter()
            .enumerate()
            .any(|(i, t)| targets[..i].contains(t));
    if bad {
        return Err(Error::InvalidTargets {
            targets: targets.to_vec(),
            num_qubits,
        });
    }
    Ok(())
}

/// Bit offsets, in the full register, of every configuration of the target
/// qubits. `offsets[t]` reads `t` with the first target as most significant bit.
pub(crate) fn target_offsets(targets: &[usize], num_qubits: usize) -> ([usize; MAX_DIM], usize) {
    let k = targets.len();
    let mut offsets = [0usize; MAX_DIM];
    for (t, slot) in offsets.iter_mut().enumerate().take(1 << k) {
        *slot = targets
            .iter()
            .enumerate()
            .map(|(j, &q)| ((t >> (k - 1 - j)) & 1) << (num_qubits - 1 - q))
            .sum();
    }
    let mask = targets.iter().map(|&q| 1 << (num_qubits - 1 - q)).sum();
    (offsets, mask)
}

/// Applies `op` to the listed qubits (first listed = most significant).
pub fn apply_unitary(state: &StateVector, op: &UnitaryOp, targets: &[usize]) -> Result<StateVector> {
    let n = state.num_qubits();
    validate_targets(targets, n)?;
    let sub = 1 << targets.len();
    if op.dim != sub {
        return Err(Error::DimensionMismatch {
            expected: sub,
            actual: op.dim,
        });
    }
    let (offsets, mask) = target_offsets(targets, n);
    let src = state.amps();
    let mut out = [Amp::new(0.0, 0.0); MAX_DIM];
    for base in (0..state.dim()).filter(|b| b & mask == 0) {
        for r in 0..sub {
            out[base | offsets[r]] = (0..sub)
                .map(|c| op.entries[r * sub + c] * src[base | offsets[c]])
                .sum();
        }
    }
    Ok(StateVector::from_parts(n, out))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    use super::*;
    use crate::quantum::state::{states_equal_up_to_phase, Bb84State};

    fn amps_close(a: &StateVector, b: &[f64]) -> bool {
        a.amps()
            .iter()
            .zip(b)
            .all(|(x, y)| (x.re - y).abs() < TOL && x.im.abs() < TOL)
    }

    #[test]
    fn rotation_examples() {
        let id = rotation_u(0.0).unwrap();
        assert_eq!(id, UnitaryOp::identity(2).unwrap());

        let zero = Bb84State::Zero.state();
        let r = apply_unitary(&zero, &rotation_u(FRAC_PI_4).unwrap(), &[0]).unwrap();
        assert!(states_equal_up_to_phase(&r, &Bb84State::Minus.state(), TOL).unwrap());

        // U(π/2)|0⟩ = −|1⟩
        let r = apply_unitary(&zero, &rotation_u(FRAC_PI_2).unwrap(), &[0]).unwrap();
        assert!(amps_close(&r, &[0.0, -1.0]));

        // U(3π/4)|0⟩ = −|+⟩
        let r = apply_unitary(&zero, &rotation_u(3.0 * PI / 4.0).unwrap(), &[0]).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(amps_close(&r, &[-h, -h]));
        assert!(states_equal_up_to_phase(&r, &Bb84State::Plus.state(), TOL).unwrap());

        assert!(rotation_u(f64::INFINITY).is_err());
    }

    #[test]
    fn i_sigma_y_flips_zero() {
        let r = apply_unitary(&Bb84State::Zero.state(), &UnitaryOp::i_sigma_y(), &[0]).unwrap();
        assert!(amps_close(&r, &[0.0, -1.0]));
    }

    #[test]
    fn cnot_entangles_and_disentangles() {
        let (alpha, beta) = (0.6, 0.8);
        let travel = StateVector::from_real(&[alpha, beta]).unwrap();
        let joint = travel.tensor(&Bb84State::Zero.state()).unwrap();
        let once = apply_unitary(&joint, &UnitaryOp::cnot(), &[0, 1]).unwrap();
        assert!(amps_close(&once, &[alpha, 0.0, 0.0, beta]));
        let twice = apply_unitary(&once, &UnitaryOp::cnot(), &[0, 1]).unwrap();
        assert!(amps_close(&twice, joint_real(&joint).as_slice()));
    }

    fn joint_real(s: &StateVector) -> Vec<f64> {
        s.amps().iter().map(|a| a.re).collect()
    }

    #[test]
    fn cnot_target_order_matters() {
        // control on qubit 1, target qubit 0: |01⟩ → |11⟩
        let s = StateVector::basis(2, 1).unwrap();
        let r = apply_unitary(&s, &UnitaryOp::cnot(), &[1, 0]).unwrap();
        assert!(amps_close(&r, &[0.0, 0.0, 0.0, 1.0]));
    }

    #[test]
    fn rejects_bad_targets() {
        let s = StateVector::basis(2, 0).unwrap();
        assert!(matches!(
            apply_unitary(&s, &UnitaryOp::cnot(), &[0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            apply_unitary(&s, &UnitaryOp::cnot(), &[0, 0]),
            Err(Error::InvalidTargets { .. })
        ));
        assert!(matches!(
            apply_unitary(&s, &UnitaryOp::pauli_x(), &[2]),
            Err(Error::InvalidTargets { .. })
        ));
    }

    #[test]
    fn rejects_non_unitary() {
        let e = vec![Amp::new(1.0, 0.0); 4];
        assert!(matches!(UnitaryOp::new(2, e), Err(Error::NotUnitary)));
    }

    #[test]
    fn adjoint_inverts_rotation() {
        let u = rotation_u(0.7).unwrap();
        let p = u.adjoint().compose(&u).unwrap();
        let id = UnitaryOp::identity(2).unwrap();
        for r in 0..2 {
            for c in 0..2 {
                assert!((p.entry(r, c) - id.entry(r, c)).norm() < TOL);
            }
        }
    }
}
