use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use rand::Rng;

use super::measure::{sample_index, MeasRecord};
use super::state::{Amp, StateVector, TOL};
use crate::error::{Error, Result};

/// Hermitian operator stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Amp>,
}

impl Operator {
    pub fn new(dim: usize, entries: Vec<Amp>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// `weight · |v⟩⟨v|`.
    pub fn projector(v: &StateVector, weight: f64) -> Self {
        let a = v.amps();
        let d = a.len();
        let mut e = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                e.push(a[r] * a[c].conj() * weight);
            }
        }
        Self { dim: d, entries: e }
    }

    pub fn identity(dim: usize) -> Self {
        let mut e = vec![Amp::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            e[i * dim + i] = Amp::new(1.0, 0.0);
        }
        Self { dim, entries: e }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> Amp {
        self.entries[r * self.dim + c]
    }

    fn sub(&self, other: &Operator) -> Operator {
        Operator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `⟨ψ|self|ψ⟩`, real for a Hermitian operator.
    pub fn expectation(&self, psi: &StateVector) -> f64 {
        let a = psi.amps();
        let mut acc = Amp::new(0.0, 0.0);
        for r in 0..self.dim {
            for c in 0..self.dim {
                acc += a[r].conj() * self.entry(r, c) * a[c];
            }
        }
        acc.re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = DMatrix::from_row_slice(self.dim, self.dim, &self.entries);
        m.symmetric_eigenvalues().iter().copied().collect()
    }

    fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim)
            .all(|r| (0..self.dim).all(|c| (self.entry(r, c) - self.entry(c, r).conj()).norm() <= tol))
    }
}

/// Generalized measurement: positive semidefinite elements summing to `I`.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    elements: Vec<Operator>,
}

impl Povm {
    pub fn new(elements: Vec<Operator>) -> Result<Self> {
        let dim = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?
            .dim;
        let mut sum = Operator::new(dim, vec![Amp::new(0.0, 0.0); dim * dim])?;
        for (k, e) in elements.iter().enumerate() {
            if e.dim != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: e.dim,
                });
            }
            if !e.is_hermitian(TOL) {
                return Err(Error::InvalidPovm(format!("element {k} is not Hermitian")));
            }
            if let Some(ev) = e.eigenvalues().into_iter().find(|&ev| ev < -TOL) {
                return Err(Error::InvalidPovm(format!(
                    "element {k} has negative eigenvalue {ev}"
                )));
            }
            for (s, x) in sum.entries.iter_mut().zip(&e.entries) {
                *s += x;
            }
        }
        let id = Operator::identity(dim);
        if sum.entries.iter().zip(&id.entries).any(|(a, b)| (a - b).norm() > TOL) {
            return Err(Error::InvalidPovm("elements do not sum to identity".into()));
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[Operator] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim
    }

    /// Exact outcome probabilities `⟨ψ|E_k|ψ⟩`.
    pub fn probabilities(&self, psi: &StateVector) -> Result<Vec<f64>> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: psi.dim(),
            });
        }
        Ok(self
            .elements
            .iter()
            .map(|e| e.expectation(psi).max(0.0))
            .collect())
    }
}

/// Samples a POVM outcome. No post-measurement state is produced.
pub fn measure_povm<R: Rng + ?Sized>(
    state: &StateVector,
    povm: &Povm,
    rng: &mut R,
) -> Result<MeasRecord> {
    let probs = povm.probabilities(state)?;
    let k = sample_index(&probs, rng);
    Ok(MeasRecord {
        outcome_index: k,
        post_state: None,
        probability: probs[k],
    })
}

/// Optimal unambiguous discrimination of `|ψ1⟩ = |0⟩` and
/// `|ψ2⟩ = cos α|0⟩ + sin α|1⟩`.
///
/// `E1 ∝ |ψ2⊥⟩⟨ψ2⊥|` certifies `ψ1`, `E2 ∝ |ψ1⊥⟩⟨ψ1⊥|` certifies `ψ2`, and
/// `E3 = I − E1 − E2` is inconclusive with probability `cos α` on either input.
/// At `α = π/4` this separates `|0⟩` from `|+⟩` with `E1 ∝ |−⟩⟨−|`, `E2 ∝ |1⟩⟨1|`.
pub fn usd_povm(overlap_angle: f64) -> Result<Povm> {
    if !(overlap_angle > 0.0 && overlap_angle < FRAC_PI_2) {
        return Err(Error::OutOfRange(format!(
            "overlap angle {overlap_angle} outside (0, π/2)"
        )));
    }
    let (s, c) = overlap_angle.sin_cos();
    // 1 / (2 cos²(α/2)) = 1 / (1 + cos α)
    let weight = 1.0 / (1.0 + c);
    let psi2_perp = StateVector::from_real(&[s, -c])?;
    let psi1_perp = StateVector::from_real(&[0.0, 1.0])?;
    let e1 = Operator::projector(&psi2_perp, weight);
    let e2 = Operator::projector(&psi1_perp, weight);
    let e3 = Operator::identity(2).sub(&e1).sub(&e2);
    Povm::new(vec![e1, e2, e3])
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_4, PI};

    use super::*;
    use crate::quantum::state::Bb84State;

    #[test]
    fn usd_at_pi_over_4() {
        let povm = usd_povm(FRAC_PI_4).unwrap();
        let w = 1.0 / (2.0 * (PI / 8.0).cos().powi(2));
        let e1_expect = Operator::projector(&Bb84State::Minus.state(), w);
        for r in 0..2 {
            for c in 0..2 {
                assert!((povm.elements()[0].entry(r, c) - e1_expect.entry(r, c)).norm() < TOL);
            }
        }
        let zero = povm.probabilities(&Bb84State::Zero.state()).unwrap();
        let plus = povm.probabilities(&Bb84State::Plus.state()).unwrap();
        assert!(zero[1].abs() < TOL);
        assert!(plus[0].abs() < TOL);
        assert!((zero[2] - FRAC_PI_4.cos()).abs() < TOL);
        assert!((plus[2] - FRAC_PI_4.cos()).abs() < TOL);
    }

    #[test]
    fn usd_inconclusive_vanishes_near_orthogonal() {
        for alpha in [1.0, 1.4, 1.55, 1.57] {
            let povm = usd_povm(alpha).unwrap();
            let p = povm.probabilities(&Bb84State::Zero.state()).unwrap();
            assert!((p[2] - f64::cos(alpha)).abs() < 1e-12);
        }
        let p = usd_povm(FRAC_PI_2 - 1e-9)
            .unwrap()
            .probabilities(&Bb84State::Zero.state())
            .unwrap();
        assert!(p[2] < 1e-8);
    }

    #[test]
    fn usd_rejects_out_of_range() {
        for a in [0.0, -0.1, FRAC_PI_2, 2.0, f64::NAN] {
            assert!(matches!(usd_povm(a), Err(Error::OutOfRange(_))));
        }
    }

    #[test]
    fn povm_validation() {
        let half = Operator::projector(&Bb84State::Zero.state(), 0.5);
        assert!(matches!(
            Povm::new(vec![half.clone()]),
            Err(Error::InvalidPovm(_))
        ));
        let neg = Operator::projector(&Bb84State::Zero.state(), -0.5);
        let rest = Operator::identity(2).sub(&neg);
        assert!(matches!(
            Povm::new(vec![neg, rest]),
            Err(Error::InvalidPovm(_))
        ));
        let ok = Povm::new(vec![
            Operator::projector(&Bb84State::Plus.state(), 1.0),
            Operator::projector(&Bb84State::Minus.state(), 1.0),
        ]);
        assert!(ok.is_ok());
    }
}
