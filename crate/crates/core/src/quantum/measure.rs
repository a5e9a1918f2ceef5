use std::f64::consts::PI;
use std::sync::LazyLock;

use rand::Rng;

use super::ops::{target_offsets, validate_targets};
use super::state::{Amp, Basis, BellState, Bb84State, StateVector, MAX_DIM, TOL};
use crate::error::{Error, Result};

/// Orthonormal measurement basis on one or two qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjBasis {
    vectors: Vec<StateVector>,
}

impl ProjBasis {
    pub fn new(vectors: Vec<StateVector>) -> Result<Self> {
        let first = vectors.first().ok_or(Error::NotOrthonormal)?;
        let dim = first.dim();
        if vectors.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: vectors.len(),
            });
        }
        for (i, a) in vectors.iter().enumerate() {
            for b in &vectors[i + 1..] {
                if a.inner(b)?.norm() > TOL {
                    return Err(Error::NotOrthonormal);
                }
            }
        }
        Ok(Self { vectors })
    }

    /// The basis `{|q⟩, |q⊥⟩}` for a single-qubit state `q`.
    pub fn from_state(q: &StateVector) -> Result<Self> {
        if q.num_qubits() != 1 {
            return Err(Error::QubitCount(q.num_qubits()));
        }
        let [a, b] = [q.amps()[0], q.amps()[1]];
        let perp = StateVector::new(&[-b.conj(), a.conj()])?;
        Self::new(vec![*q, perp])
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn z() -> &'static ProjBasis {
        &Z_BASIS
    }

    pub fn x() -> &'static ProjBasis {
        &X_BASIS
    }

    pub fn bell() -> &'static ProjBasis {
        &BELL_BASIS
    }

    pub fn for_basis(basis: Basis) -> &'static ProjBasis {
        match basis {
            Basis::Z => &Z_BASIS,
            Basis::X => &X_BASIS,
        }
    }
}

static Z_BASIS: LazyLock<ProjBasis> = LazyLock::new(|| {
    ProjBasis::new(vec![Bb84State::Zero.state(), Bb84State::One.state()]).unwrap()
});
static X_BASIS: LazyLock<ProjBasis> = LazyLock::new(|| {
    ProjBasis::new(vec![Bb84State::Plus.state(), Bb84State::Minus.state()]).unwrap()
});
static BELL_BASIS: LazyLock<ProjBasis> =
    LazyLock::new(|| ProjBasis::new(BellState::ALL.iter().map(|b| b.state()).collect()).unwrap());
static TAU_BASIS: LazyLock<ProjBasis> = LazyLock::new(|| {
    let (s, c) = (PI / 8.0).sin_cos();
    let tau1 = StateVector::from_real(&[c, -s]).unwrap();
    let tau2 = StateVector::from_real(&[s, c]).unwrap();
    ProjBasis::new(vec![tau1, tau2]).unwrap()
});

/// Minimum-error basis for telling `|0⟩` from `|+⟩`:
/// `|τ1⟩ = cos(π/8)|0⟩ − sin(π/8)|1⟩`, `|τ2⟩ = sin(π/8)|0⟩ + cos(π/8)|1⟩`.
pub fn tau_basis() -> &'static ProjBasis {
    &TAU_BASIS
}

/// Outcome of a single measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasRecord {
    pub outcome_index: usize,
    pub post_state: Option<StateVector>,
    pub probability: f64,
}

/// Picks an index from a probability vector with one uniform draw.
pub(crate) fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // Rounding left `acc` fractionally below 1: take the last outcome that can occur.
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

struct Projection {
    num_qubits: usize,
    offsets: [usize; MAX_DIM],
    mask: usize,
    sub: usize,
}

impl Projection {
    fn new(state: &StateVector, basis: &ProjBasis, targets: &[usize]) -> Result<Self> {
        let n = state.num_qubits();
        validate_targets(targets, n)?;
        let sub = 1 << targets.len();
        if basis.dim() != sub {
            return Err(Error::DimensionMismatch {
                expected: sub,
                actual: basis.dim(),
            });
        }
        let (offsets, mask) = target_offsets(targets, n);
        Ok(Self {
            num_qubits: n,
            offsets,
            mask,
            sub,
        })
    }

    fn bases(&self) -> impl Iterator<Item = usize> + '_ {
        (0..1usize << self.num_qubits).filter(move |b| b & self.mask == 0)
    }

    /// `(⟨b|_targets ⊗ I) ψ` evaluated at every configuration of the other qubits.
    fn component(&self, state: &StateVector, b: &StateVector, base: usize) -> Amp {
        let amps = state.amps();
        (0..self.sub)
            .map(|t| b.amps()[t].conj() * amps[base | self.offsets[t]])
            .sum()
    }

    fn probability(&self, state: &StateVector, b: &StateVector) -> f64 {
        self.bases()
            .map(|base| self.component(state, b, base).norm_sqr())
            .sum()
    }

    fn post_state(&self, state: &StateVector, b: &StateVector) -> StateVector {
        let mut raw = [Amp::new(0.0, 0.0); MAX_DIM];
        for base in self.bases() {
            let c = self.component(state, b, base);
            for t in 0..self.sub {
                raw[base | self.offsets[t]] = b.amps()[t] * c;
            }
        }
        StateVector::from_unnormalized(self.num_qubits, &raw[..state.dim()])
    }

    /// State of the remaining qubits once the targets are found in `b`.
    fn remainder(&self, state: &StateVector, b: &StateVector) -> StateVector {
        let raw: Vec<Amp> = self
            .bases()
            .map(|base| self.component(state, b, base))
            .collect();
        StateVector::from_unnormalized(self.num_qubits - self.sub.trailing_zeros() as usize, &raw)
    }
}

/// Exact Born probabilities of every basis outcome on `targets`.
pub fn outcome_probabilities(
    state: &StateVector,
    basis: &ProjBasis,
    targets: &[usize],
) -> Result<Vec<f64>> {
    let proj = Projection::new(state, basis, targets)?;
    Ok(basis
        .vectors()
        .iter()
        .map(|b| proj.probability(state, b))
        .collect())
}

/// Projective measurement of `targets` in `basis`; the post-measurement state
/// is the normalized projection.
pub fn measure_projective<R: Rng + ?Sized>(
    state: &StateVector,
    basis: &ProjBasis,
    targets: &[usize],
    rng: &mut R,
) -> Result<MeasRecord> {
    let proj = Projection::new(state, basis, targets)?;
    let probs: Vec<f64> = basis
        .vectors()
        .iter()
        .map(|b| proj.probability(state, b))
        .collect();
    let k = sample_index(&probs, rng);
    Ok(MeasRecord {
        outcome_index: k,
        post_state: Some(proj.post_state(state, &basis.vectors()[k])),
        probability: probs[k],
    })
}

/// Measures `qubit` in `basis` and drops it from the register. Returns the
/// outcome and the state of the other qubits. Fails on a one-qubit register.
pub fn measure_and_remove<R: Rng + ?Sized>(
    state: &StateVector,
    basis: &ProjBasis,
    qubit: usize,
    rng: &mut R,
) -> Result<(usize, StateVector)> {
    if state.num_qubits() < 2 {
        return Err(Error::QubitCount(state.num_qubits()));
    }
    let proj = Projection::new(state, basis, &[qubit])?;
    let probs: Vec<f64> = basis
        .vectors()
        .iter()
        .map(|b| proj.probability(state, b))
        .collect();
    let k = sample_index(&probs, rng);
    Ok((k, proj.remainder(state, &basis.vectors()[k])))
}

/// Projective measurement of a qubit pair in the Bell basis
/// (outcome order `ψ+, ψ−, φ+, φ−`).
pub fn bell_measure<R: Rng + ?Sized>(
    state: &StateVector,
    pair: (usize, usize),
    rng: &mut R,
) -> Result<(BellState, MeasRecord)> {
    let rec = measure_projective(state, ProjBasis::bell(), &[pair.0, pair.1], rng)?;
    Ok((BellState::from_index(rec.outcome_index), rec))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_4;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn tau_basis_overlaps() {
        let tau = tau_basis();
        let [t1, t2] = [tau.vectors()[0], tau.vectors()[1]];
        assert!(t1.inner(&t2).unwrap().norm() < TOL);
        let pe = (1.0 - FRAC_PI_4.sin()) / 2.0;
        let zero = Bb84State::Zero.state();
        let plus = Bb84State::Plus.state();
        assert!((zero.fidelity(&t2).unwrap() - pe).abs() < TOL);
        assert!((plus.fidelity(&t1).unwrap() - pe).abs() < TOL);
        let c2 = (PI / 8.0).cos().powi(2);
        assert!((zero.fidelity(&t1).unwrap() - c2).abs() < TOL);
        assert!((plus.fidelity(&t2).unwrap() - c2).abs() < TOL);
    }

    #[test]
    fn projective_probabilities() {
        let zero = Bb84State::Zero.state();
        let p = outcome_probabilities(&zero, ProjBasis::z(), &[0]).unwrap();
        assert_eq!(p, vec![1.0, 0.0]);
        let plus = Bb84State::Plus.state();
        let p = outcome_probabilities(&plus, tau_basis(), &[0]).unwrap();
        assert!((p[0] - 0.146_446_609_406_726_24).abs() < TOL);
        let p = outcome_probabilities(&zero, tau_basis(), &[0]).unwrap();
        assert!((p[0] - 0.853_553_390_593_273_8).abs() < TOL);
    }

    #[test]
    fn measurement_collapses() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let zero = Bb84State::Zero.state();
        let rec = measure_projective(&zero, ProjBasis::z(), &[0], &mut rng).unwrap();
        assert_eq!(rec.outcome_index, 0);
        assert_eq!(rec.probability, 1.0);
        let plus = Bb84State::Plus.state();
        let rec = measure_projective(&plus, ProjBasis::z(), &[0], &mut rng).unwrap();
        let post = rec.post_state.unwrap();
        let expect = if rec.outcome_index == 0 {
            Bb84State::Zero
        } else {
            Bb84State::One
        };
        assert!((post.fidelity(&expect.state()).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn bell_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (b, rec) = bell_measure(&BellState::PsiMinus.state(), (0, 1), &mut rng).unwrap();
        assert_eq!(b, BellState::PsiMinus);
        assert!((rec.probability - 1.0).abs() < TOL);

        let p = outcome_probabilities(&StateVector::basis(2, 0).unwrap(), ProjBasis::bell(), &[0, 1])
            .unwrap();
        for (got, want) in p.iter().zip([0.0, 0.0, 0.5, 0.5]) {
            assert!((got - want).abs() < TOL);
        }
        let p = outcome_probabilities(&StateVector::basis(2, 1).unwrap(), ProjBasis::bell(), &[0, 1])
            .unwrap();
        for (got, want) in p.iter().zip([0.5, 0.5, 0.0, 0.0]) {
            assert!((got - want).abs() < TOL);
        }
    }

    #[test]
    fn partial_measurement_of_bell_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let phi = BellState::PhiPlus.state();
        let (k, rest) = measure_and_remove(&phi, ProjBasis::z(), 0, &mut rng).unwrap();
        let want = if k == 0 { Bb84State::Zero } else { Bb84State::One };
        assert_eq!(rest.num_qubits(), 1);
        assert!((rest.fidelity(&want.state()).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn basis_from_state_is_orthonormal() {
        let q = StateVector::new(&[Amp::new(0.6, 0.0), Amp::new(0.0, 0.8)]).unwrap();
        let b = ProjBasis::from_state(&q).unwrap();
        assert!(b.vectors()[0].inner(&b.vectors()[1]).unwrap().norm() < TOL);
    }

    #[test]
    fn sampler_never_returns_impossible_outcome() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            assert_eq!(sample_index(&[0.0, 1.0 - 1e-17, 0.0], &mut rng), 1);
        }
    }
}
