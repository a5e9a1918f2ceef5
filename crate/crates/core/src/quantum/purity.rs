use super::ops::validate_targets;
use super::state::{Amp, StateVector};
use crate::error::{Error, Result};

/// Purity `Tr(ρ²)` of the reduced state on `side`, together with the verdict
/// `purity ≥ 1 − tol` (the register factorizes across the cut).
pub fn is_product(state: &StateVector, side: &[usize], tol: f64) -> Result<(bool, f64)> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(Error::QubitCount(n));
    }
    validate_targets(side, n)?;
    if side.len() == n {
        return Err(Error::InvalidTargets {
            targets: side.to_vec(),
            num_qubits: n,
        });
    }
    let purity = reduced_purity(state, side);
    Ok((purity >= 1.0 - tol, purity))
}

fn reduced_purity(state: &StateVector, side: &[usize]) -> f64 {
    let n = state.num_qubits();
    let k = side.len();
    let mask: usize = side.iter().map(|&q| 1 << (n - 1 - q)).sum();
    // Split every amplitude index into (kept configuration, traced configuration).
    let split = |idx: usize| -> (usize, usize) {
        let kept = side
            .iter()
            .enumerate()
            .map(|(j, &q)| ((idx >> (n - 1 - q)) & 1) << (k - 1 - j))
            .sum();
        (kept, idx & !mask)
    };
    let a = 1 << k;
    let mut rho = vec![Amp::new(0.0, 0.0); a * a];
    let amps = state.amps();
    for (i, x) in amps.iter().enumerate() {
        let (ki, ti) = split(i);
        for (j, y) in amps.iter().enumerate() {
            let (kj, tj) = split(j);
            if ti == tj {
                rho[ki * a + kj] += x * y.conj();
            }
        }
    }
    rho.iter().map(|v| v.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ops::{apply_unitary, UnitaryOp};
    use crate::quantum::state::{BellState, Bb84State, TOL};

    #[test]
    fn product_and_entangled() {
        let s = StateVector::basis(2, 0).unwrap();
        let (ok, p) = is_product(&s, &[0], TOL).unwrap();
        assert!(ok);
        assert!((p - 1.0).abs() < TOL);

        let (ok, p) = is_product(&BellState::PhiPlus.state(), &[1], TOL).unwrap();
        assert!(!ok);
        assert!((p - 0.5).abs() < TOL);
    }

    #[test]
    fn double_cnot_leaves_product() {
        for b in Bb84State::ALL {
            let joint = b.state().tensor(&Bb84State::Zero.state()).unwrap();
            let once = apply_unitary(&joint, &UnitaryOp::cnot(), &[0, 1]).unwrap();
            let twice = apply_unitary(&once, &UnitaryOp::cnot(), &[0, 1]).unwrap();
            for (x, y) in twice.amps().iter().zip(joint.amps()) {
                assert!((x - y).norm() < TOL);
            }
            let (ok, p) = is_product(&twice, &[1], TOL).unwrap();
            assert!(ok && (p - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn three_qubit_cut() {
        // (|00⟩+|11⟩)/√2 ⊗ |+⟩: qubit 2 factorizes, qubit 0 does not.
        let s = BellState::PhiPlus
            .state()
            .tensor(&Bb84State::Plus.state())
            .unwrap();
        assert!(is_product(&s, &[2], TOL).unwrap().0);
        assert!(is_product(&s, &[0, 1], TOL).unwrap().0);
        assert!(!is_product(&s, &[0], TOL).unwrap().0);
    }

    #[test]
    fn rejects_single_qubit() {
        assert!(is_product(&Bb84State::Zero.state(), &[0], TOL).is_err());
    }
}
