//! Single-atom resonant Jaynes–Cummings reference and the harmonic
//! approximation of `⟨σ_y⟩` for the symmetric two-atom model.
//!
//! The single atom starts excited; each photon number evolves as
//! `cos(T√(n+1))|+,n⟩ − i·sin(T√(n+1))|−,n+1⟩` with `T = λt`.

use crate::fock::FockWeights;
use crate::observables::{entropy_squeezing, Axis, BlochVector};
use crate::sum::compensated;

/// Single-atom model evaluated at one scaled time.
#[derive(Debug, Clone, Copy)]
pub struct JcmState<'a> {
    pub weights: &'a FockWeights,
    pub time: f64,
}

impl JcmState<'_> {
    pub fn bloch(&self) -> BlochVector {
        jcm_bloch(self.weights, self.time)
    }
}

pub fn jcm_bloch(weights: &FockWeights, time: f64) -> BlochVector {
    let c = weights.as_slice();
    let sz = compensated(
        c.iter()
            .enumerate()
            .map(|(n, cn)| cn * cn * (2.0 * time * ((n + 1) as f64).sqrt()).cos()),
    );
    let sy = 2.0
        * compensated(c.windows(2).enumerate().map(|(n, w)| {
            w[0] * w[1] * (time * ((n + 2) as f64).sqrt()).cos() * (time * ((n + 1) as f64).sqrt()).sin()
        }));
    BlochVector { sx: 0.0, sy, sz }
}

pub fn jcm_entropy_squeezing(weights: &FockWeights, time: f64) -> f64 {
    entropy_squeezing(&jcm_bloch(weights, time), Axis::Y)
}

/// Large-amplitude approximation of `⟨σ_y⟩` for `(g, l) = (1, 1)`.
pub fn tjcm_harmonic_sy(weights: &FockWeights, time: f64) -> f64 {
    let theta = |n: usize| (4.0 * n as f64 + 6.0).sqrt();
    compensated(weights.as_slice().windows(2).enumerate().map(|(n, w)| {
        let (a, b) = (theta(n), theta(n + 1));
        w[0] * w[1]
            * (0.5 * (time * (a - b)).sin() + (0.5 * time * (a + b)).sin() * (0.5 * time * (a - b)).cos())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::coherent_weights;
    use std::f64::consts::PI;

    #[test]
    fn starts_excited() {
        let w = FockWeights::up_to(5.0, 95).unwrap();
        let b = JcmState { weights: &w, time: 0.0 }.bloch();
        assert_eq!(b.sx, 0.0);
        assert!(b.sy.abs() < 1e-15);
        assert!((b.sz - 1.0).abs() < 1e-12);
        assert!(jcm_entropy_squeezing(&w, 0.0).abs() < 1e-9);
        assert_eq!(tjcm_harmonic_sy(&w, 0.0), 0.0);
    }

    #[test]
    fn vacuum_field_rabi() {
        let w = coherent_weights(0.0, 1e-12).unwrap();
        for t in [0.1, 0.9, 2.5] {
            let b = jcm_bloch(&w, t);
            assert!((b.sz - (2.0 * t).cos()).abs() < 1e-15);
            assert_eq!(b.sy, 0.0);
        }
        let b = jcm_bloch(&w, PI / 2.0);
        assert!((b.sz + 1.0).abs() < 1e-15);
        assert!(jcm_entropy_squeezing(&w, PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_fock_component_is_two_level_rabi() {
        // only C_3 nonzero: sz = cos(2T·2), sy has no neighbouring pair
        let w = FockWeights::from_amplitudes(vec![0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        for t in [0.2, 1.3] {
            let b = jcm_bloch(&w, t);
            assert!((b.sz - (4.0 * t).cos()).abs() < 1e-15);
            assert_eq!(b.sy, 0.0);
        }
    }

    #[test]
    fn bloch_norm_bounded() {
        let w = FockWeights::up_to(5.0, 95).unwrap();
        for k in 0..500 {
            let b = jcm_bloch(&w, 0.05 * k as f64);
            assert!(b.norm() <= 1.0 + 1e-10);
        }
    }

    type C = num_complex::Complex64;

    /// `exp(−i·T·[[0, w], [w, 0]])` by scaling and squaring a Taylor series.
    fn expm_2x2(w: f64, time: f64) -> [[C; 2]; 2] {
        let mut squarings = 0;
        let mut scale = w * time;
        while scale.abs() > 0.1 {
            scale *= 0.5;
            squarings += 1;
        }
        let a = [[C::new(0.0, 0.0), C::new(0.0, -scale)], [C::new(0.0, -scale), C::new(0.0, 0.0)]];
        let mul = |x: [[C; 2]; 2], y: [[C; 2]; 2]| {
            let mut z = [[C::new(0.0, 0.0); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    z[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
                }
            }
            z
        };
        let mut sum = [[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(1.0, 0.0)]];
        let mut term = sum;
        for k in 1..30 {
            term = mul(term, a);
            for row in term.iter_mut() {
                for v in row.iter_mut() {
                    *v /= k as f64;
                }
            }
            for i in 0..2 {
                for j in 0..2 {
                    sum[i][j] += term[i][j];
                }
            }
        }
        for _ in 0..squarings {
            sum = mul(sum, sum);
        }
        sum
    }

    #[test]
    fn matches_per_photon_propagators() {
        let w = coherent_weights(5.0, 1e-12).unwrap();
        let c = w.as_slice();
        for time in [0.7, 6.0, 15.6] {
            // excited[n] = <+,n|psi>, ground[n] = <-,n|psi>
            let mut excited = vec![C::new(0.0, 0.0); c.len() + 1];
            let mut ground = vec![C::new(0.0, 0.0); c.len() + 1];
            for (n, &cn) in c.iter().enumerate() {
                let u = expm_2x2(((n + 1) as f64).sqrt(), time);
                excited[n] = u[0][0] * cn;
                ground[n + 1] = u[1][0] * cn;
            }
            let p_plus: f64 = excited.iter().map(|a| a.norm_sqr()).sum();
            let p_minus: f64 = ground.iter().map(|a| a.norm_sqr()).sum();
            let coh: C = excited.iter().zip(&ground).map(|(a, b)| a * b.conj()).sum();
            let b = jcm_bloch(&w, time);
            assert!((b.sz - (p_plus - p_minus)).abs() < 1e-10);
            assert!((b.sy - 2.0 * coh.im).abs() < 1e-10, "{} vs {}", b.sy, 2.0 * coh.im);
            assert!(coh.re.abs() < 1e-12);
        }
    }

    /// Peak of `|f|` over `[center − 1, center + 1]`.
    fn envelope(f: impl Fn(f64) -> f64, center: f64) -> f64 {
        (-100..=100)
            .map(|k| f(center + 0.01 * k as f64).abs())
            .fold(0.0, f64::max)
    }

    fn exact_symmetric_sy(alpha: f64) -> impl Fn(f64) -> f64 {
        use crate::model::{Dynamics, ModelParams};
        use crate::observables::bloch;
        use crate::reduced::AtomId;
        let dynamics = Dynamics::new(ModelParams::new(alpha, 1.0, 1).unwrap()).unwrap();
        move |t| bloch(&dynamics.reduced_state(t, AtomId::First).unwrap()).sy
    }

    // Envelope tolerance of 15% is an implementation choice; the window
    // T ∈ [4, 12] brackets the first post-collapse maximum of |sy|.
    #[test]
    fn harmonic_sy_tracks_envelope() {
        let w = coherent_weights(5.0, 1e-12).unwrap();
        let exact = exact_symmetric_sy(5.0);
        for center in [4.0, 6.0, 8.0, 10.0, 12.0] {
            let e = envelope(&exact, center);
            let h = envelope(|t| tjcm_harmonic_sy(&w, t), center);
            assert!(((h - e) / e).abs() < 0.15, "T={center}: {h} vs {e}");
        }
    }

    #[test]
    fn harmonic_sy_peak_in_phase() {
        let w = coherent_weights(5.0, 1e-12).unwrap();
        let exact = exact_symmetric_sy(5.0);
        let argmax = |f: &dyn Fn(f64) -> f64| {
            (400..=1200)
                .map(|k| 0.01 * k as f64)
                .max_by(|a, b| f(*a).abs().total_cmp(&f(*b).abs()))
                .unwrap()
        };
        let n_bar = 25.0f64;
        let revival = 2.0 * PI / ((4.0 * n_bar + 10.0).sqrt() - (4.0 * n_bar + 6.0).sqrt());
        let te = argmax(&exact);
        let th = argmax(&|t| tjcm_harmonic_sy(&w, t));
        assert!((te - th).abs() < 0.05 * revival, "{te} vs {th}, revival {revival}");
    }
}
