use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex amplitude. Double precision is ample for four qubits.
pub type Amp = Complex64;

/// Largest register the simulator holds.
pub const MAX_QUBITS: usize = 4;
pub(crate) const MAX_DIM: usize = 1 << MAX_QUBITS;

/// Tolerance for algebraic identities (normalization, unitarity, completeness).
pub const TOL: f64 = 1e-12;

const ZERO: Amp = Amp::new(0.0, 0.0);

/// Exact pure state of 1 to 4 qubits.
///
/// Qubit 0 is the leftmost factor of the ket, so `|01⟩` has amplitude index 1.
/// The amplitudes live inline; states are `Copy` and never allocate.
#[derive(Clone, Copy, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: [Amp; MAX_DIM],
}

impl StateVector {
    /// Builds a state from amplitudes, checking length, finiteness and norm.
    pub fn new(amps: &[Amp]) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() || dim < 2 || dim > MAX_DIM {
            return Err(Error::QubitCount(dim.max(1).trailing_zeros() as usize));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOL {
            return Err(Error::NotNormalized(norm));
        }
        let mut buf = [ZERO; MAX_DIM];
        buf[..dim].copy_from_slice(amps);
        Ok(Self {
            num_qubits: dim.trailing_zeros() as usize,
            amps: buf,
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        let c: Vec<Amp> = amps.iter().map(|&a| Amp::new(a, 0.0)).collect();
        Self::new(&c)
    }

    /// Computational basis state `|index⟩` on `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(num_qubits));
        }
        if index >= 1 << num_qubits {
            return Err(Error::OutOfRange(format!(
                "basis index {index} on {num_qubits} qubits"
            )));
        }
        let mut amps = [ZERO; MAX_DIM];
        amps[index] = Amp::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Renormalizes raw amplitudes produced internally (projections, partial
    /// inner products). The caller guarantees a non-zero norm.
    pub(crate) fn from_unnormalized(num_qubits: usize, raw: &[Amp]) -> Self {
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let mut amps = [ZERO; MAX_DIM];
        for (dst, src) in amps.iter_mut().zip(raw) {
            *dst = src / norm;
        }
        Self { num_qubits, amps }
    }

    pub(crate) fn from_parts(num_qubits: usize, amps: [Amp; MAX_DIM]) -> Self {
        Self { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn amps(&self) -> &[Amp] {
        &self.amps[..self.dim()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps().iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Amp> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amps()
            .iter()
            .zip(other.amps())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `self ⊗ other`, with `self` taking the lower qubit indices.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        if n > MAX_QUBITS {
            return Err(Error::QubitCount(n));
        }
        let mut amps = [ZERO; MAX_DIM];
        let od = other.dim();
        for (i, a) in self.amps().iter().enumerate() {
            for (j, b) in other.amps().iter().enumerate() {
                amps[i * od + j] = a * b;
            }
        }
        Ok(Self {
            num_qubits: n,
            amps,
        })
    }

    /// Inserts a single-qubit state so that it becomes qubit `position`.
    pub fn insert_qubit(&self, position: usize, qubit: &StateVector) -> Result<StateVector> {
        if qubit.num_qubits != 1 {
            return Err(Error::QubitCount(qubit.num_qubits));
        }
        let n = self.num_qubits + 1;
        if n > MAX_QUBITS {
            return Err(Error::QubitCount(n));
        }
        if position > self.num_qubits {
            return Err(Error::InvalidTargets {
                targets: vec![position],
                num_qubits: n,
            });
        }
        // Bits below the inserted qubit keep their place; bits above shift up.
        let low_bits = n - 1 - position;
        let low_mask = (1 << low_bits) - 1;
        let mut amps = [ZERO; MAX_DIM];
        for (old, a) in self.amps().iter().enumerate() {
            let high = (old & !low_mask) << 1;
            let low = old & low_mask;
            for (bit, q) in qubit.amps().iter().enumerate() {
                amps[high | (bit << low_bits) | low] = a * q;
            }
        }
        Ok(Self {
            num_qubits: n,
            amps,
        })
    }

    /// Exact probability of observing computational basis index `index`.
    pub fn probability_of(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateVector[")?;
        for (i, a) in self.amps().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:.6}{:+.6}i", a.re, a.im)?;
        }
        write!(f, "]")
    }
}

/// True iff `|⟨a|b⟩| ≥ 1 − tol`, i.e. the states agree up to a global phase.
pub fn states_equal_up_to_phase(a: &StateVector, b: &StateVector, tol: f64) -> Result<bool> {
    Ok(a.inner(b)?.norm() >= 1.0 - tol)
}

/// Measurement basis of a BB84 state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    /// Computational basis `{|0⟩, |1⟩}`.
    Z,
    /// Diagonal basis `{|+⟩, |−⟩}`.
    X,
}

/// One of the four BB84 states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bb84State {
    Zero,
    One,
    Plus,
    Minus,
}

impl Bb84State {
    pub const ALL: [Bb84State; 4] = [Self::Zero, Self::One, Self::Plus, Self::Minus];

    pub fn from_basis_bit(basis: Basis, bit: bool) -> Self {
        match (basis, bit) {
            (Basis::Z, false) => Self::Zero,
            (Basis::Z, true) => Self::One,
            (Basis::X, false) => Self::Plus,
            (Basis::X, true) => Self::Minus,
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::ALL[rng.random_range(0..4)]
    }

    pub fn basis(self) -> Basis {
        match self {
            Self::Zero | Self::One => Basis::Z,
            Self::Plus | Self::Minus => Basis::X,
        }
    }

    /// Index of this state within its own basis (0 for `|0⟩` and `|+⟩`).
    pub fn bit(self) -> bool {
        matches!(self, Self::One | Self::Minus)
    }

    pub fn orthogonal(self) -> Self {
        Self::from_basis_bit(self.basis(), !self.bit())
    }

    pub fn state(self) -> StateVector {
        let h = FRAC_1_SQRT_2;
        let amps = match self {
            Self::Zero => [1.0, 0.0],
            Self::One => [0.0, 1.0],
            Self::Plus => [h, h],
            Self::Minus => [h, -h],
        };
        StateVector::from_real(&amps).expect("BB84 states are normalized")
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::Zero => "0",
            Self::One => "1",
            Self::Plus => "+",
            Self::Minus => "-",
        }
    }
}

impl fmt::Display for Bb84State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}>", self.symbol())
    }
}

/// The Bell states, listed in the order of their two-bit code words
/// `ψ+ = 00, ψ− = 01, φ+ = 10, φ− = 11`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [
        Self::PsiPlus,
        Self::PsiMinus,
        Self::PhiPlus,
        Self::PhiMinus,
    ];

    pub fn from_bits(high: bool, low: bool) -> Self {
        Self::ALL[(usize::from(high) << 1) | usize::from(low)]
    }

    pub fn from_index(index: usize) -> Self {
        Self::ALL[index]
    }

    pub fn bits(self) -> (bool, bool) {
        let i = self as usize;
        (i & 2 != 0, i & 1 != 0)
    }

    pub fn is_phi(self) -> bool {
        matches!(self, Self::PhiPlus | Self::PhiMinus)
    }

    pub fn state(self) -> StateVector {
        let h = FRAC_1_SQRT_2;
        let amps = match self {
            Self::PsiPlus => [0.0, h, h, 0.0],
            Self::PsiMinus => [0.0, h, -h, 0.0],
            Self::PhiPlus => [h, 0.0, 0.0, h],
            Self::PhiMinus => [h, 0.0, 0.0, -h],
        };
        StateVector::from_real(&amps).expect("Bell states are normalized")
    }
}

/// Names accepted by [`prepare_named`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateLabel {
    Z0,
    Z1,
    XPlus,
    XMinus,
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl FromStr for StateLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let label = match s.to_ascii_lowercase().as_str() {
            "z0" => Self::Z0,
            "z1" => Self::Z1,
            "xplus" => Self::XPlus,
            "xminus" => Self::XMinus,
            "psiplus" => Self::PsiPlus,
            "psiminus" => Self::PsiMinus,
            "phiplus" => Self::PhiPlus,
            "phiminus" => Self::PhiMinus,
            _ => return Err(Error::UnknownLabel(s.to_string())),
        };
        Ok(label)
    }
}

pub fn prepare_named(label: StateLabel) -> StateVector {
    match label {
        StateLabel::Z0 => Bb84State::Zero.state(),
        StateLabel::Z1 => Bb84State::One.state(),
        StateLabel::XPlus => Bb84State::Plus.state(),
        StateLabel::XMinus => Bb84State::Minus.state(),
        StateLabel::PsiPlus => BellState::PsiPlus.state(),
        StateLabel::PsiMinus => BellState::PsiMinus.state(),
        StateLabel::PhiPlus => BellState::PhiPlus.state(),
        StateLabel::PhiMinus => BellState::PhiMinus.state(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[Amp], b: &[f64]) -> bool {
        a.len() == b.len()
            && a
                .iter()
                .zip(b)
                .all(|(x, y)| (x.re - y).abs() < TOL && x.im.abs() < TOL)
    }

    #[test]
    fn named_states() {
        let h = FRAC_1_SQRT_2;
        assert!(close(prepare_named(StateLabel::Z0).amps(), &[1.0, 0.0]));
        assert!(close(prepare_named(StateLabel::XMinus).amps(), &[h, -h]));
        assert!(close(
            prepare_named(StateLabel::PsiPlus).amps(),
            &[0.0, h, h, 0.0]
        ));
        assert_eq!("PsiPlus".parse::<StateLabel>().unwrap(), StateLabel::PsiPlus);
        assert!(matches!(
            "Y0".parse::<StateLabel>(),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn rejects_bad_amplitudes() {
        assert!(matches!(
            StateVector::from_real(&[1.0, 1.0]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            StateVector::from_real(&[f64::NAN, 0.0]),
            Err(Error::NonFinite)
        ));
        assert!(StateVector::from_real(&[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn phase_equality() {
        let one = Bb84State::One.state();
        let minus_one = StateVector::from_real(&[0.0, -1.0]).unwrap();
        assert!(states_equal_up_to_phase(&one, &minus_one, 1e-12).unwrap());
        let zero = Bb84State::Zero.state();
        assert!(!states_equal_up_to_phase(&zero, &one, 1e-12).unwrap());
    }

    #[test]
    fn insert_qubit_matches_tensor() {
        let a = Bb84State::Plus.state();
        let b = Bb84State::One.state();
        let front = b.insert_qubit(0, &a).unwrap();
        let back = b.insert_qubit(1, &a).unwrap();
        assert_eq!(front, a.tensor(&b).unwrap());
        assert_eq!(back, b.tensor(&a).unwrap());
    }

    #[test]
    fn bb84_relations() {
        for s in Bb84State::ALL {
            assert_eq!(Bb84State::from_basis_bit(s.basis(), s.bit()), s);
            let f = s.state().fidelity(&s.orthogonal().state()).unwrap();
            assert!(f < TOL);
        }
        assert_eq!(BellState::from_bits(true, false), BellState::PhiPlus);
        assert_eq!(BellState::PsiMinus.bits(), (false, true));
    }
}
