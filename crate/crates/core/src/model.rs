//! Excitation-conserving block dynamics of the two-atom, l-photon cavity model.
//!
//! Starting from `|+,+⟩ ⊗ |α⟩`, each Fock component `|+,+,n⟩` stays inside the
//! four-dimensional invariant subspace
//!
//! ```text
//! |+,+,n⟩, |+,−,n+l⟩, |−,+,n+l⟩, |−,−,n+2l⟩
//! ```
//!
//! of the resonant interaction-picture Hamiltonian. Each 4×4 block is real
//! symmetric and bipartite, so its evolution of the first basis vector has the
//! form `(X₁, iX₂, iX₃, X₄)` with real `X_j(T, n)`. Time is `T = λ₁t` and
//! `g = λ₂/λ₁`; the free part of the Hamiltonian drops out at exact resonance
//! `ω_a = 2lω`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{self, FockWeights};

/// Physical configuration plus the derived Fock truncation index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub alpha: f64,
    pub g: f64,
    pub l: u32,
    pub cutoff_eps: f64,
    pub n_max: usize,
}

impl ModelParams {
    pub fn new(alpha: f64, g: f64, l: u32) -> Result<Self> {
        Self::with_cutoff(alpha, g, l, fock::DEFAULT_CUTOFF_EPS)
    }

    pub fn with_cutoff(alpha: f64, g: f64, l: u32, cutoff_eps: f64) -> Result<Self> {
        fock::validate(alpha, cutoff_eps)?;
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coupling ratio g must be positive and finite, got {g}"
            )));
        }
        if l == 0 {
            return Err(Error::InvalidParameter("transition order l must be >= 1".into()));
        }
        let n_max = fock::minimal_cutoff(alpha, cutoff_eps)?.max(fock::cutoff_floor(alpha));
        Ok(Self {
            alpha,
            g,
            l,
            cutoff_eps,
            n_max,
        })
    }

    pub fn weights(&self) -> Result<FockWeights> {
        FockWeights::up_to(self.alpha, self.n_max)
    }

    /// Parameters with the roles of the two atoms exchanged (`g → 1/g`).
    /// Pair with a time rescaling `T → g·T`.
    pub fn swapped(&self) -> Result<Self> {
        Self::with_cutoff(self.alpha, 1.0 / self.g, self.l, self.cutoff_eps)
    }
}

/// `√((n+l)!/n!)`, the l-photon ladder matrix element.
pub fn ladder_factor(n: usize, l: u32) -> f64 {
    let mut prod = 1.0f64;
    for k in 1..=l as usize {
        prod *= (n + k) as f64;
    }
    prod.sqrt()
}

/// Interaction Hamiltonian restricted to one invariant subspace, in units of λ₁.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionBlock {
    pub n: usize,
    pub h: [[f64; 4]; 4],
}

pub fn build_block(n: usize, l: u32, g: f64) -> InteractionBlock {
    let f1 = ladder_factor(n, l);
    let f2 = ladder_factor(n + l as usize, l);
    let h = [
        [0.0, g * f1, f1, 0.0],
        [g * f1, 0.0, 0.0, f2],
        [f1, 0.0, 0.0, g * f2],
        [0.0, f2, g * f2, 0.0],
    ];
    InteractionBlock { n, h }
}

/// Eigendecomposition `h = V·diag(λ)·Vᵀ` of an interaction block.
///
/// Eigenvalues are sorted ascending; columns of `eigvecs` are the matching
/// eigenvectors, each with its largest-magnitude entry made positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBlock {
    pub n: usize,
    pub eigvals: [f64; 4],
    pub eigvecs: [[f64; 4]; 4],
}

const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

pub fn diagonalize_block(block: &InteractionBlock) -> Result<EigenBlock> {
    let h = &block.h;
    let scale = h.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
    for i in 0..4 {
        for j in (i + 1)..4 {
            let asym = (h[i][j] - h[j][i]).abs();
            if asym > 1e-12 * scale || !asym.is_finite() {
                return Err(Error::NotSymmetric {
                    row: i,
                    col: j,
                    asymmetry: asym,
                });
            }
        }
    }
    let (vals, vecs) = jacobi_sym4(h);

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let mut eigvals = [0.0; 4];
    let mut eigvecs = [[0.0; 4]; 4];
    for (col, &k) in order.iter().enumerate() {
        eigvals[col] = vals[k];
        let mut pivot = 0;
        for row in 1..4 {
            if vecs[row][k].abs() > vecs[pivot][k].abs() {
                pivot = row;
            }
        }
        let sign = if vecs[pivot][k] < 0.0 { -1.0 } else { 1.0 };
        for row in 0..4 {
            eigvecs[row][col] = sign * vecs[row][k];
        }
    }
    Ok(EigenBlock {
        n: block.n,
        eigvals,
        eigvecs,
    })
}

/// Cyclic Jacobi rotations on a 4×4 symmetric matrix.
fn jacobi_sym4(h: &[[f64; 4]; 4]) -> ([f64; 4], [[f64; 4]; 4]) {
    let mut a = *h;
    let mut v = [[0.0; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let frob = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..4)
            .flat_map(|p| ((p + 1)..4).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_TOL * frob || off == 0.0 {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    ([a[0][0], a[1][1], a[2][2], a[3][3]], v)
}

/// Real amplitudes `X₁..X₄` of `|+,+,n⟩, i|+,−,n+l⟩, i|−,+,n+l⟩, |−,−,n+2l⟩`
/// at scaled time `time`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockCoefficients {
    pub n: usize,
    pub time: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl BlockCoefficients {
    pub fn norm_sqr(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3 + self.x4 * self.x4
    }

    /// Exchange of the two atoms' roles (`X₂ ↔ X₃`).
    pub fn swap_atoms(self) -> Self {
        Self {
            x2: self.x3,
            x3: self.x2,
            ..self
        }
    }
}

const CROSS_TERM_TOL: f64 = 1e-10;

/// `exp(-i·h·T)·e₁` read off in the `(X₁, iX₂, iX₃, X₄)` phase convention.
pub fn evolve_block(eb: &EigenBlock, time: f64) -> Result<BlockCoefficients> {
    let mut v = [Complex64::new(0.0, 0.0); 4];
    for k in 0..4 {
        let phase = Complex64::from_polar(1.0, -eb.eigvals[k] * time);
        let weight = phase * eb.eigvecs[0][k];
        for (row, vr) in v.iter_mut().enumerate() {
            *vr += weight * eb.eigvecs[row][k];
        }
    }
    let cross = v[0].im.abs().max(v[3].im.abs()).max(v[1].re.abs()).max(v[2].re.abs());
    if cross >= CROSS_TERM_TOL {
        return Err(Error::Inconsistent(format!(
            "block n={} at T={time}: cross terms reach {cross:e}; the block is not bipartite",
            eb.n
        )));
    }
    Ok(BlockCoefficients {
        n: eb.n,
        time,
        x1: v[0].re,
        x2: v[1].im,
        x3: v[2].im,
        x4: v[3].re,
    })
}

/// Closed-form coefficients of the symmetric single-photon case `(l, g) = (1, 1)`,
/// with `θ_n = √(4n+6)`.
pub fn closed_form_x(n: usize, time: f64) -> BlockCoefficients {
    let nf = n as f64;
    let theta = (4.0 * nf + 6.0).sqrt();
    let (s, c) = (time * theta).sin_cos();
    let denom = 2.0 * nf + 3.0;
    let x23 = -(nf + 1.0).sqrt() / theta * s;
    BlockCoefficients {
        n,
        time,
        x1: ((nf + 1.0) * c + (nf + 2.0)) / denom,
        x2: x23,
        x3: x23,
        x4: ((nf + 1.0) * (nf + 2.0)).sqrt() / denom * (c - 1.0),
    }
}

/// Precomputed eigenblocks for `n = 0..=n_max`, shared read-only across times.
#[derive(Debug, Clone)]
pub struct Dynamics {
    params: ModelParams,
    weights: FockWeights,
    blocks: Vec<EigenBlock>,
}

impl Dynamics {
    pub fn new(params: ModelParams) -> Result<Self> {
        let weights = params.weights()?;
        let blocks = (0..=params.n_max)
            .map(|n| diagonalize_block(&build_block(n, params.l, params.g)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            params,
            weights,
            blocks,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn weights(&self) -> &FockWeights {
        &self.weights
    }

    pub fn blocks(&self) -> &[EigenBlock] {
        &self.blocks
    }

    /// Coefficient table indexed by `n`.
    pub fn coefficients(&self, time: f64) -> Result<Vec<BlockCoefficients>> {
        self.blocks.iter().map(|eb| evolve_block(eb, time)).collect()
    }
}
