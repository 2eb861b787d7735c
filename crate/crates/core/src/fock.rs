//! Coherent-state photon-number amplitudes and the Fock-space truncation policy.

use crate::error::{Error, Result};

/// Default tail-mass tolerance for truncating the photon-number sum.
pub const DEFAULT_CUTOFF_EPS: f64 = 1e-12;

/// Truncated table of coherent-state amplitudes `C_n = αⁿ/√(n!)·exp(-α²/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockWeights {
    c: Vec<f64>,
}

impl FockWeights {
    /// Amplitudes for `n = 0..=n_max`, with no tail criterion applied.
    pub fn up_to(alpha: f64, n_max: usize) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            c: amplitudes(alpha).take(n_max + 1).collect(),
        })
    }

    pub fn from_amplitudes(c: Vec<f64>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidParameter("empty amplitude table".into()));
        }
        Ok(Self { c })
    }

    pub fn n_max(&self) -> usize {
        self.c.len() - 1
    }

    /// `C_n`, or zero past the truncation index.
    #[inline]
    pub fn get(&self, n: usize) -> f64 {
        self.c.get(n).copied().unwrap_or(0.0)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.c
    }

    /// Retained probability `Σ C_n²`.
    pub fn mass(&self) -> f64 {
        crate::sum::compensated(self.c.iter().map(|c| c * c))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be finite and non-negative, got {alpha}"
        )));
    }
    Ok(())
}

fn check_eps(cutoff_eps: f64) -> Result<()> {
    if !(cutoff_eps > 0.0 && cutoff_eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "cutoff_eps must lie in (0, 1), got {cutoff_eps}"
        )));
    }
    Ok(())
}

/// Runs `C_{n+1} = C_n·α/√(n+1)` in log space so that `exp(-α²/2)` never
/// underflows on its own.
fn amplitudes(alpha: f64) -> impl Iterator<Item = f64> {
    let ln_alpha = alpha.ln();
    let mut ln_c = -0.5 * alpha * alpha;
    let mut n = 0usize;
    std::iter::from_fn(move || {
        let out = if alpha == 0.0 {
            if n == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            let c = ln_c.exp();
            ln_c += ln_alpha - 0.5 * ((n + 1) as f64).ln();
            c
        };
        n += 1;
        Some(out)
    })
}

/// Smallest `n_max` such that the discarded mass `Σ_{n>n_max} C_n²` is below
/// `cutoff_eps`.
pub fn minimal_cutoff(alpha: f64, cutoff_eps: f64) -> Result<usize> {
    check_alpha(alpha)?;
    check_eps(cutoff_eps)?;
    if alpha == 0.0 {
        return Ok(0);
    }
    // Past n ≥ 2α² the term ratio α²/(n+1) is below 1/2, so the remaining tail
    // is bounded by the last generated term.
    let a2 = alpha * alpha;
    let floor = (2.0 * a2).ceil() as usize + 2;
    let mut probs = Vec::new();
    for (n, c) in amplitudes(alpha).enumerate() {
        let p = c * c;
        probs.push(p);
        if n >= floor && p < cutoff_eps * 1e-6 {
            break;
        }
    }
    let mut tail = 0.0;
    let mut n_max = probs.len() - 1;
    for n in (0..probs.len()).rev() {
        // `tail` holds Σ_{k>n} p_k here.
        if tail >= cutoff_eps {
            break;
        }
        n_max = n;
        tail += probs[n];
    }
    Ok(n_max)
}

/// Coherent weights truncated at the minimal index meeting the tail tolerance.
pub fn coherent_weights(alpha: f64, cutoff_eps: f64) -> Result<FockWeights> {
    let n_max = minimal_cutoff(alpha, cutoff_eps)?;
    FockWeights::up_to(alpha, n_max)
}

/// Truncation floor `⌈α² + 10α + 20⌉` that keeps the `n+l`, `n+2l` tails covered.
pub fn cutoff_floor(alpha: f64) -> usize {
    (alpha * alpha + 10.0 * alpha + 20.0).ceil() as usize
}

pub(crate) fn validate(alpha: f64, cutoff_eps: f64) -> Result<()> {
    check_alpha(alpha)?;
    check_eps(cutoff_eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_prob(alpha: f64, n: usize) -> f64 {
        // αⁿ/n! accumulated term by term
        let mut p = (-alpha * alpha).exp();
        for k in 1..=n {
            p *= alpha * alpha / k as f64;
        }
        p
    }

    #[test]
    fn vacuum_has_single_amplitude() {
        let w = coherent_weights(0.0, 1e-12).unwrap();
        assert_eq!(w.as_slice(), &[1.0]);
        assert_eq!(w.get(3), 0.0);
    }

    #[test]
    fn unit_amplitude_first_term() {
        let w = coherent_weights(1.0, 1e-12).unwrap();
        assert!((w.get(1) - (-0.5f64).exp()).abs() < 1e-15);
        assert!((w.get(1) - 0.60653).abs() < 1e-5);
    }

    #[test]
    fn alpha_five_mass_and_mode() {
        let w = coherent_weights(5.0, 1e-12).unwrap();
        let mass = w.mass();
        assert!((1.0 - 1e-12..=1.0 + 1e-15).contains(&mass), "mass {mass}");
        let argmax = (0..=w.n_max())
            .max_by(|&a, &b| w.get(a).partial_cmp(&w.get(b)).unwrap())
            .unwrap();
        assert!(argmax == 24 || argmax == 25);
        // brute-force Poisson weights and the same minimal tail index
        let probs: Vec<f64> = (0..400).map(|n| brute_force_prob(5.0, n)).collect();
        for n in 0..=w.n_max() {
            assert!((w.get(n) * w.get(n) - probs[n]).abs() < 1e-14);
        }
        let tail_after = |k: usize| probs[k + 1..].iter().sum::<f64>();
        assert!(tail_after(w.n_max()) < 1e-12);
        assert!(tail_after(w.n_max() - 1) >= 1e-12);
    }

    #[test]
    fn stable_for_large_alpha() {
        let w = coherent_weights(12.0, 1e-12).unwrap();
        assert!(w.as_slice().iter().all(|c| c.is_finite() && *c >= 0.0));
        assert!((w.mass() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(coherent_weights(-1.0, 1e-12).is_err());
        assert!(coherent_weights(1.0, 0.0).is_err());
        assert!(coherent_weights(1.0, 1.0).is_err());
        assert!(coherent_weights(f64::NAN, 1e-3).is_err());
    }

    #[test]
    fn floor_formula() {
        assert_eq!(cutoff_floor(5.0), 95);
        assert_eq!(cutoff_floor(0.0), 20);
        assert_eq!(cutoff_floor(0.5), 26);
    }
}
