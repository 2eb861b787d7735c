//! Scalar diagnostics of a single-atom state: Bloch components, Shannon
//! entropies of the Pauli measurements, entropy and variance squeezing, the
//! von Neumann entropy and the two-level entropic uncertainty relation.
//!
//! All entropies are in nats. Entropy squeezing in a component `k ∈ {x, y}`
//! is `E_k = exp H(σ_k) − 2/√(exp H(σ_z))`; it ranges over `[1−√2, 2−√2]` for
//! `σ_y` when `⟨σ_x⟩ = 0`, reaching `1−√2` on the `σ_y` eigenstates and
//! `2−√2` on the maximally mixed state.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::reduced::ReducedAtomState;

const MEAN_SLACK: f64 = 1e-12;

/// `(⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)` of a single atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl BlochVector {
    pub fn new(sx: f64, sy: f64, sz: f64) -> Self {
        Self { sx, sy, sz }
    }

    pub fn norm(&self) -> f64 {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }

    pub fn component(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.sx,
            Axis::Y => self.sy,
        }
    }
}

/// Transverse component probed by the squeezing criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

pub fn bloch(state: &ReducedAtomState) -> BlochVector {
    BlochVector {
        sx: 2.0 * state.coh.re,
        sy: 2.0 * state.coh.im,
        sz: state.p_plus - state.p_minus,
    }
}

fn xlnx(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.ln()
    }
}

/// Binary entropy of the outcome distribution `(1±m)/2`, without the range check.
fn entropy_clamped(m: f64) -> f64 {
    let m = m.clamp(-1.0, 1.0);
    let p = (0.5 * (1.0 + m)).clamp(0.0, 1.0);
    let q = (0.5 * (1.0 - m)).clamp(0.0, 1.0);
    -(xlnx(p) + xlnx(q))
}

/// Shannon entropy of a Pauli measurement whose mean is `m`.
pub fn binary_entropy_of_mean(m: f64) -> Result<f64> {
    if m.is_nan() || m.abs() > 1.0 + MEAN_SLACK {
        return Err(Error::InvalidMean(m));
    }
    Ok(entropy_clamped(m))
}

pub fn entropy_squeezing(b: &BlochVector, axis: Axis) -> f64 {
    let dh_k = entropy_clamped(b.component(axis)).exp();
    let dh_z = entropy_clamped(b.sz).exp();
    dh_k - 2.0 / dh_z.sqrt()
}

/// `F_k = (1 − ⟨σ_k⟩²) − |⟨σ_z⟩|`; negative values mean variance squeezing.
pub fn variance_squeezing(b: &BlochVector, axis: Axis) -> f64 {
    let m = b.component(axis);
    (1.0 - m * m) - b.sz.abs()
}

/// Entropy of the atom computed from its Bloch radius, `μ± = (1 ± |r|)/2`.
pub fn von_neumann(state: &ReducedAtomState) -> f64 {
    let r = bloch(state).norm().min(1.0);
    let hi = 0.5 * (1.0 + r);
    let lo = 0.5 * (1.0 - r);
    -(xlnx(lo) + xlnx(hi))
}

/// `H(σ_x) + H(σ_y) + H(σ_z) − ln 4`, non-negative for every physical state.
pub fn eur_residual(b: &BlochVector) -> f64 {
    entropy_clamped(b.sx) + entropy_clamped(b.sy) + entropy_clamped(b.sz) - 2.0 * LN_2
}

/// With `⟨σ_x⟩ = 0`, `E_x` reduces to `2(1 − 1/√(exp H(σ_z)))`. Returns the
/// absolute gap between that form and the general definition.
pub fn e_x_identity_check(b: &BlochVector) -> Result<f64> {
    if b.sx.abs() > 1e-10 {
        return Err(Error::NotApplicable(format!(
            "the E_x identity needs <sigma_x> = 0, got {}",
            b.sx
        )));
    }
    let reduced = 2.0 * (1.0 - 1.0 / entropy_clamped(b.sz).exp().sqrt());
    Ok((entropy_squeezing(b, Axis::X) - reduced).abs())
}

/// Every diagnostic of one state, in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeReport {
    pub e_x: f64,
    pub e_y: f64,
    pub f_x: f64,
    pub f_y: f64,
    pub h_x: f64,
    pub h_y: f64,
    pub h_z: f64,
    pub gamma: f64,
}

impl SqueezeReport {
    pub fn new(state: &ReducedAtomState) -> Self {
        let b = bloch(state);
        Self {
            e_x: entropy_squeezing(&b, Axis::X),
            e_y: entropy_squeezing(&b, Axis::Y),
            f_x: variance_squeezing(&b, Axis::X),
            f_y: variance_squeezing(&b, Axis::Y),
            h_x: entropy_clamped(b.sx),
            h_y: entropy_clamped(b.sy),
            h_z: entropy_clamped(b.sz),
            gamma: von_neumann(state),
        }
    }
}
