//! Single-atom reduced density matrices, built from the block coefficients by
//! tracing out the other atom and the field.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockWeights;
use crate::model::{BlockCoefficients, Dynamics};
use crate::sum::compensated;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomId {
    First,
    Second,
}

impl AtomId {
    pub fn other(self) -> Self {
        match self {
            AtomId::First => AtomId::Second,
            AtomId::Second => AtomId::First,
        }
    }
}

/// `ρ = p₊|+⟩⟨+| + p₋|−⟩⟨−| + coh|+⟩⟨−| + coh*|−⟩⟨+|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedAtomState {
    pub p_plus: f64,
    pub p_minus: f64,
    pub coh: Complex64,
}

impl ReducedAtomState {
    pub fn trace(&self) -> f64 {
        self.p_plus + self.p_minus
    }

    /// Largest entrywise difference, used for cross-path comparisons.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.p_plus - other.p_plus)
            .abs()
            .max((self.p_minus - other.p_minus).abs())
            .max((self.coh.re - other.coh.re).abs())
            .max((self.coh.im - other.coh.im).abs())
    }

    /// Eigenvalues `(μ₋, μ₊)` of the 2×2 matrix.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let half_tr = 0.5 * self.trace();
        let half_diff = 0.5 * (self.p_plus - self.p_minus);
        let r = (half_diff * half_diff + self.coh.norm_sqr()).sqrt();
        (half_tr - r, half_tr + r)
    }
}

fn oriented(c: BlockCoefficients, atom: AtomId) -> BlockCoefficients {
    match atom {
        AtomId::First => c,
        AtomId::Second => c.swap_atoms(),
    }
}

/// Summands `(Q₁(n,n), Q₂(n,n), Q₃(n,n+l))` of the reduced density matrix.
///
/// `coeffs[n]` must hold the coefficients of block `n`. Terms reaching past
/// the table (`n+l` beyond it) are taken as zero.
pub fn q_terms(
    weights: &FockWeights,
    coeffs: &[BlockCoefficients],
    l: u32,
    atom: AtomId,
    n: usize,
) -> (f64, f64, Complex64) {
    let Some(&here) = coeffs.get(n) else {
        return (0.0, 0.0, Complex64::new(0.0, 0.0));
    };
    let x = oriented(here, atom);
    let cn = weights.get(n);
    let q1 = cn * cn * (x.x1 * x.x1 + x.x2 * x.x2);
    let q2 = cn * cn * (x.x3 * x.x3 + x.x4 * x.x4);
    let up = n + l as usize;
    let q3 = match coeffs.get(up) {
        Some(&next) => {
            let y = oriented(next, atom);
            let amp = weights.get(up) * cn * (y.x2 * x.x4 - x.x3 * y.x1);
            Complex64::new(0.0, amp)
        }
        None => Complex64::new(0.0, 0.0),
    };
    (q1, q2, q3)
}

const COHERENCE_REALNESS_TOL: f64 = 1e-10;

/// Sums the Q-terms over the whole coefficient table in ascending `n`.
pub fn reduced_state(
    weights: &FockWeights,
    coeffs: &[BlockCoefficients],
    l: u32,
    atom: AtomId,
    cutoff_eps: f64,
) -> Result<ReducedAtomState> {
    let terms: Vec<_> = (0..coeffs.len())
        .map(|n| q_terms(weights, coeffs, l, atom, n))
        .collect();
    let state = ReducedAtomState {
        p_plus: compensated(terms.iter().map(|t| t.0)),
        p_minus: compensated(terms.iter().map(|t| t.1)),
        coh: Complex64::new(
            compensated(terms.iter().map(|t| t.2.re)),
            compensated(terms.iter().map(|t| t.2.im)),
        ),
    };
    let deviation = (state.trace() - 1.0).abs();
    let allowed = 10.0 * cutoff_eps;
    if deviation > allowed {
        return Err(Error::TruncationTooCoarse { deviation, allowed });
    }
    if state.coh.re.abs() > COHERENCE_REALNESS_TOL {
        return Err(Error::Inconsistent(format!(
            "coherence has a real part {:e}; expected purely imaginary",
            state.coh.re
        )));
    }
    Ok(state)
}

impl Dynamics {
    pub fn reduced_state(&self, time: f64, atom: AtomId) -> Result<ReducedAtomState> {
        let coeffs = self.coefficients(time)?;
        reduced_state(
            self.weights(),
            &coeffs,
            self.params().l,
            atom,
            self.params().cutoff_eps,
        )
    }

    /// Both single-atom states from one coefficient evaluation.
    pub fn reduced_pair(&self, time: f64) -> Result<(ReducedAtomState, ReducedAtomState)> {
        let coeffs = self.coefficients(time)?;
        let p = self.params();
        let first = reduced_state(self.weights(), &coeffs, p.l, AtomId::First, p.cutoff_eps)?;
        let second = reduced_state(self.weights(), &coeffs, p.l, AtomId::Second, p.cutoff_eps)?;
        Ok((first, second))
    }
}
