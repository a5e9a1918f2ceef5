use std::f64::consts::FRAC_PI_4;

use rand::RngCore;

use crate::auction::BidString;
use crate::error::{Error, Result};
use crate::quantum::{
    apply_unitary, measure_projective, rotation_u, Bb84State, BellState, ProjBasis, StateVector, UnitaryOp,
};

/// Bit 0 leaves the qubit alone, bit 1 applies `iσ_y`.
pub fn liu_encode(prep_state: &StateVector, bit: bool) -> Result<StateVector> {
    if prep_state.num_qubits() != 1 {
        return Err(Error::QubitCount(prep_state.num_qubits()));
    }
    if bit {
        apply_unitary(prep_state, &UnitaryOp::i_sigma_y(), &[0])
    } else {
        Ok(*prep_state)
    }
}

/// Measures in the preparation basis: same state reads 0, orthogonal reads 1.
pub fn liu_decode(prep_label: Bb84State, returned: &StateVector, rng: &mut dyn RngCore) -> Result<bool> {
    let rec = measure_projective(returned, ProjBasis::for_basis(prep_label.basis()), &[0], rng)?;
    Ok((rec.outcome_index == 1) != prep_label.bit())
}

/// Bell pairs carrying a bid two bits at a time.
pub fn liu_confirmation_pairs(bid: &BidString) -> Vec<BellState> {
    bid.blocks().into_iter().map(|(h, l)| BellState::from_bits(h, l)).collect()
}

/// Bits recovered from Bell outcomes, with the odd-length pad removed.
pub fn bits_from_bell(outcomes: &[BellState], m: usize) -> Vec<bool> {
    let mut bits: Vec<bool> = outcomes
        .iter()
        .flat_map(|b| {
            let (h, l) = b.bits();
            [h, l]
        })
        .collect();
    if bits.len() > m {
        bits.drain(..bits.len() - m);
    }
    bits
}

/// Single-qubit confirmation states: `|0⟩` for bit 0, `|+⟩` for bit 1.
pub fn zhang1_state(bit: bool) -> Bb84State {
    if bit {
        Bb84State::Plus
    } else {
        Bb84State::Zero
    }
}

pub fn zhang1_confirmation_states(bid: &BidString) -> Vec<Bb84State> {
    bid.bits().iter().map(|&b| zhang1_state(b)).collect()
}

/// Rotation angle for a two-bit block: `00, 01, 10, 11 → 0, π/4, π/2, 3π/4`.
pub fn zhang2_theta(block: (bool, bool)) -> f64 {
    let index = (u8::from(block.0) << 1) | u8::from(block.1);
    f64::from(index) * FRAC_PI_4
}

pub fn zhang2_encode(q: &StateVector, block: (bool, bool)) -> Result<StateVector> {
    apply_unitary(q, &rotation_u(zhang2_theta(block))?, &[0])
}

pub fn zhang2_confirmation_states(bid: &BidString, q_pub: &[Bb84State]) -> Result<Vec<StateVector>> {
    let blocks = bid.blocks();
    if q_pub.len() != blocks.len() {
        return Err(Error::DimensionMismatch {
            expected: blocks.len(),
            actual: q_pub.len(),
        });
    }
    blocks
        .into_iter()
        .zip(q_pub)
        .map(|(b, q)| zhang2_encode(&q.state(), b))
        .collect()
}

/// Probability that undoing `θ'` on `U(θ)|q⟩` fails to give back `|q⟩`.
pub fn zhang2_mismatch_probability(q: &StateVector, theta: f64, theta_prime: f64) -> Result<f64> {
    let sent = apply_unitary(q, &rotation_u(theta)?, &[0])?;
    let back = apply_unitary(&sent, &rotation_u(theta_prime)?.adjoint(), &[0])?;
    Ok(1.0 - q.fidelity(&back)?)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::auction::PartyId;
    use crate::quantum::{states_equal_up_to_phase, TOL};

    #[test]
    fn encode_examples() {
        let one = liu_encode(&Bb84State::Zero.state(), true).unwrap();
        assert!(states_equal_up_to_phase(&one, &Bb84State::One.state(), TOL).unwrap());
        let minus = liu_encode(&Bb84State::Plus.state(), true).unwrap();
        assert!(states_equal_up_to_phase(&minus, &Bb84State::Minus.state(), TOL).unwrap());
        let same = liu_encode(&Bb84State::Minus.state(), false).unwrap();
        assert_eq!(same, Bb84State::Minus.state());
    }

    #[test]
    fn encode_is_involution_up_to_phase() {
        for s in Bb84State::ALL {
            let twice = liu_encode(&liu_encode(&s.state(), true).unwrap(), true).unwrap();
            assert!(states_equal_up_to_phase(&twice, &s.state(), TOL).unwrap());
            let flipped = liu_encode(&s.state(), true).unwrap();
            assert!(s.state().fidelity(&flipped).unwrap() < TOL);
        }
    }

    #[test]
    fn decode_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        assert!(liu_decode(Bb84State::Plus, &Bb84State::Minus.state(), &mut rng).unwrap());
        assert!(!liu_decode(Bb84State::Zero, &Bb84State::Zero.state(), &mut rng).unwrap());
        let n = 20_000;
        let ones = (0..n)
            .filter(|_| liu_decode(Bb84State::Plus, &Bb84State::Zero.state(), &mut rng).unwrap())
            .count();
        let f = ones as f64 / n as f64;
        assert!((f - 0.5).abs() < 4.0 * (0.25 / n as f64).sqrt());
    }

    #[test]
    fn bell_blocks_round_trip() {
        let b = BidString::from_value(PartyId(1), 0b10110, 5).unwrap();
        let pairs = liu_confirmation_pairs(&b);
        assert_eq!(pairs, vec![BellState::PsiMinus, BellState::PsiMinus, BellState::PhiPlus]);
        assert_eq!(bits_from_bell(&pairs, 5), b.bits());
    }

    #[test]
    fn zhang2_states_for_zero() {
        let zero = Bb84State::Zero.state();
        let expect = [Bb84State::Zero, Bb84State::Minus, Bb84State::One, Bb84State::Plus];
        for (k, block) in [(false, false), (false, true), (true, false), (true, true)].into_iter().enumerate() {
            let s = zhang2_encode(&zero, block).unwrap();
            assert!(states_equal_up_to_phase(&s, &expect[k].state(), TOL).unwrap());
        }
    }

    #[test]
    fn zhang2_soundness_matches_cosine() {
        let thetas = [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4];
        for q in Bb84State::ALL {
            for &t in &thetas {
                for &tp in &thetas {
                    let p = zhang2_mismatch_probability(&q.state(), t, tp).unwrap();
                    let expect = 1.0 - (t - tp).cos().powi(2);
                    assert!((p - expect).abs() < 1e-12, "q={q} t={t} t'={tp}");
                    if t == tp {
                        assert!(p.abs() < 1e-12);
                    }
                }
            }
        }
    }
}
