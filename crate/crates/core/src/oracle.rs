//! Brute-force reference path: the full joint Schrödinger equation in the
//! truncated product space `atom₁ ⊗ atom₂ ⊗ field`, integrated with classic
//! fixed-step RK4, followed by a direct partial trace.
//!
//! Nothing here uses the invariant-subspace structure exploited by
//! [`crate::model`]; only the coherent amplitudes are shared.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::FockWeights;
use crate::reduced::{AtomId, ReducedAtomState};

/// Tolerated norm drift over a trajectory.
pub const NORM_DRIFT_TOL: f64 = 1e-7;

const PLUS: usize = 0;
const MINUS: usize = 1;

/// Amplitudes over `(atom₁, atom₂, n)` with `n = 0..=photon_cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointStateVector {
    pub photon_cutoff: usize,
    pub amp: Vec<Complex64>,
}

impl JointStateVector {
    pub fn zeros(photon_cutoff: usize) -> Self {
        Self {
            photon_cutoff,
            amp: vec![Complex64::new(0.0, 0.0); 4 * (photon_cutoff + 1)],
        }
    }

    /// `|+,+⟩ ⊗ Σ C_n |n⟩`.
    pub fn excited_coherent(weights: &FockWeights, photon_cutoff: usize) -> Result<Self> {
        if weights.n_max() > photon_cutoff {
            return Err(Error::PhotonCutoffTooSmall {
                got: photon_cutoff,
                required: weights.n_max(),
            });
        }
        let mut psi = Self::zeros(photon_cutoff);
        for (n, &c) in weights.as_slice().iter().enumerate() {
            psi.amp[index(photon_cutoff, PLUS, PLUS, n)] = Complex64::new(c, 0.0);
        }
        Ok(psi)
    }

    /// Amplitude of `|a₁, a₂, n⟩`, with `true` meaning the excited level.
    pub fn get(&self, atom1_excited: bool, atom2_excited: bool, n: usize) -> Complex64 {
        self.amp[index(self.photon_cutoff, level(atom1_excited), level(atom2_excited), n)]
    }

    pub fn set(&mut self, atom1_excited: bool, atom2_excited: bool, n: usize, value: Complex64) {
        let i = index(self.photon_cutoff, level(atom1_excited), level(atom2_excited), n);
        self.amp[i] = value;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum()
    }
}

fn level(excited: bool) -> usize {
    if excited {
        PLUS
    } else {
        MINUS
    }
}

#[inline]
fn index(photon_cutoff: usize, a1: usize, a2: usize, n: usize) -> usize {
    (2 * a1 + a2) * (photon_cutoff + 1) + n
}

/// Interaction Hamiltonian on the product basis in CSR form, units of λ₁.
#[derive(Debug, Clone, PartialEq)]
pub struct JointHamiltonian {
    pub l: u32,
    pub g: f64,
    pub photon_cutoff: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

fn sqrt_falling(n: usize, l: u32) -> f64 {
    ((n + 1)..=(n + l as usize)).map(|k| k as f64).product::<f64>().sqrt()
}

/// `Σ_j λ_j (a^l σ₊⁽ʲ⁾ + a†^l σ₋⁽ʲ⁾)` with `λ₁ = 1`, `λ₂ = g`, truncated at
/// `photon_cutoff` photons.
pub fn build_joint_hamiltonian(l: u32, g: f64, photon_cutoff: usize) -> Result<JointHamiltonian> {
    if l == 0 || !(g >= 0.0 && g.is_finite()) {
        return Err(Error::InvalidParameter(format!("need l >= 1 and g >= 0, got l={l}, g={g}")));
    }
    let dim = 4 * (photon_cutoff + 1);
    let lu = l as usize;
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
    let mut link = |from: usize, to: usize, v: f64| {
        rows[from].push((to, v));
        rows[to].push((from, v));
    };
    for n in 0..=photon_cutoff {
        if n + lu > photon_cutoff {
            break;
        }
        let f = sqrt_falling(n, l);
        for other in [PLUS, MINUS] {
            // atom 1 flips, atom 2 spectates
            link(
                index(photon_cutoff, PLUS, other, n),
                index(photon_cutoff, MINUS, other, n + lu),
                f,
            );
            if g != 0.0 {
                link(
                    index(photon_cutoff, other, PLUS, n),
                    index(photon_cutoff, other, MINUS, n + lu),
                    g * f,
                );
            }
        }
    }
    let mut row_ptr = Vec::with_capacity(dim + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    row_ptr.push(0);
    for mut row in rows {
        row.sort_by_key(|e| e.0);
        for (c, v) in row {
            cols.push(c);
            vals.push(v);
        }
        row_ptr.push(cols.len());
    }
    Ok(JointHamiltonian {
        l,
        g,
        photon_cutoff,
        row_ptr,
        cols,
        vals,
    })
}

impl JointHamiltonian {
    pub fn dim(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        let range = self.row_ptr[row]..self.row_ptr[row + 1];
        self.cols[range.clone()]
            .iter()
            .position(|&c| c == col)
            .map_or(0.0, |k| self.vals[range.start + k])
    }

    /// Row-sum norm `‖h‖_∞`.
    pub fn inf_norm(&self) -> f64 {
        (0..self.dim())
            .map(|r| self.vals[self.row_ptr[r]..self.row_ptr[r + 1]].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Dense copy, for small test systems.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let d = self.dim();
        (0..d).map(|r| (0..d).map(|c| self.get(r, c)).collect()).collect()
    }

    /// Dense-row index of basis state `|a₁, a₂, n⟩`.
    pub fn basis_index(&self, atom1_excited: bool, atom2_excited: bool, n: usize) -> usize {
        index(self.photon_cutoff, level(atom1_excited), level(atom2_excited), n)
    }

    /// `out = -i·h·psi`
    fn apply_minus_i(&self, psi: &[Complex64], out: &mut [Complex64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += psi[self.cols[k]] * self.vals[k];
            }
            *o = Complex64::new(acc.im, -acc.re);
        }
    }

    /// Excitation number `n + (l/2)(σ_z⁽¹⁾ + σ_z⁽²⁾ + 2)` of a basis state.
    pub fn excitation_of(&self, atom1_excited: bool, atom2_excited: bool, n: usize) -> f64 {
        let ups = atom1_excited as usize + atom2_excited as usize;
        (n + self.l as usize * ups) as f64
    }
}

/// Expectation of the conserved excitation number.
pub fn excitation_expectation(h: &JointHamiltonian, psi: &JointStateVector) -> f64 {
    let mut total = 0.0;
    for a1 in [true, false] {
        for a2 in [true, false] {
            for n in 0..=psi.photon_cutoff {
                total += psi.get(a1, a2, n).norm_sqr() * h.excitation_of(a1, a2, n);
            }
        }
    }
    total
}

/// Step size `min(10⁻³, 0.1/‖h‖_∞, 0.0025/‖h·ψ₀‖)`.
///
/// The last cap ties the step to the frequency scale actually populated by
/// the initial state; RK4 phase error grows like `T·ω·(ω·dt)⁴`, and multi-photon
/// couplings push `ω` well above what the first two caps allow for.
pub fn default_step(h: &JointHamiltonian, psi0: &JointStateVector) -> f64 {
    let mut dt = 1e-3f64;
    let norm = h.inf_norm();
    if norm > 0.0 {
        dt = dt.min(0.1 / norm);
    }
    let mut hpsi = vec![Complex64::new(0.0, 0.0); h.dim()];
    h.apply_minus_i(&psi0.amp, &mut hpsi);
    let rms = hpsi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if rms > 0.0 {
        dt = dt.min(0.0025 / rms);
    }
    dt
}

fn check_step(h: &JointHamiltonian, dt: f64) -> Result<()> {
    let norm = h.inf_norm();
    if dt.is_nan() || dt <= 0.0 || dt * norm > 0.5 {
        return Err(Error::InvalidParameter(format!(
            "RK4 step {dt} must be positive and at most 0.5/||h|| = {}",
            0.5 / norm
        )));
    }
    Ok(())
}

struct Rk4Workspace {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4Workspace {
    fn new(dim: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); dim];
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    fn step(&mut self, h: &JointHamiltonian, psi: &mut [Complex64], dt: f64) {
        h.apply_minus_i(psi, &mut self.k1);
        for i in 0..psi.len() {
            self.tmp[i] = psi[i] + self.k1[i] * (0.5 * dt);
        }
        h.apply_minus_i(&self.tmp, &mut self.k2);
        for i in 0..psi.len() {
            self.tmp[i] = psi[i] + self.k2[i] * (0.5 * dt);
        }
        h.apply_minus_i(&self.tmp, &mut self.k3);
        for i in 0..psi.len() {
            self.tmp[i] = psi[i] + self.k3[i] * dt;
        }
        h.apply_minus_i(&self.tmp, &mut self.k4);
        for i in 0..psi.len() {
            psi[i] += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * (dt / 6.0);
        }
    }
}

/// Result of integrating to one time.
#[derive(Debug, Clone)]
pub struct Evolved {
    pub time: f64,
    pub state: JointStateVector,
    /// `|‖ψ(T)‖² − ‖ψ(0)‖²|`
    pub norm_drift: f64,
}

/// Integrates `dψ/dT = −i·h·ψ` from 0 to `time`; no renormalisation.
pub fn rk4_evolve(h: &JointHamiltonian, psi0: &JointStateVector, time: f64, dt: f64) -> Result<Evolved> {
    let mut out = rk4_sample(h, psi0, &[time], dt)?;
    Ok(out.pop().expect("one sample"))
}

/// Integrates once through the sorted, non-negative `times`, returning the
/// state at each. Each interval is split into equal steps no longer than `dt`.
pub fn rk4_sample(
    h: &JointHamiltonian,
    psi0: &JointStateVector,
    times: &[f64],
    dt: f64,
) -> Result<Vec<Evolved>> {
    check_step(h, dt)?;
    if psi0.amp.len() != h.dim() {
        return Err(Error::InvalidParameter(format!(
            "state dimension {} does not match Hamiltonian dimension {}",
            psi0.amp.len(),
            h.dim()
        )));
    }
    if times.iter().any(|t| t.is_nan() || *t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("sample times must be sorted and non-negative".into()));
    }
    let norm0 = psi0.norm_sqr();
    let mut psi = psi0.amp.clone();
    let mut ws = Rk4Workspace::new(psi.len());
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        let span = target - now;
        if span > 0.0 {
            let steps = (span / dt).ceil().max(1.0) as usize;
            let sub = span / steps as f64;
            for _ in 0..steps {
                ws.step(h, &mut psi, sub);
            }
        }
        now = target;
        let state = JointStateVector {
            photon_cutoff: psi0.photon_cutoff,
            amp: psi.clone(),
        };
        let norm_drift = (state.norm_sqr() - norm0).abs();
        if norm_drift > NORM_DRIFT_TOL {
            return Err(Error::StepSizeTooLarge { drift: norm_drift });
        }
        out.push(Evolved {
            time: target,
            state,
            norm_drift,
        });
    }
    Ok(out)
}

/// Direct partial trace over the other atom and the field.
pub fn partial_trace_atom(psi: &JointStateVector, atom: AtomId) -> ReducedAtomState {
    let mut p_plus = 0.0;
    let mut p_minus = 0.0;
    let mut coh = Complex64::new(0.0, 0.0);
    for spectator in [true, false] {
        for n in 0..=psi.photon_cutoff {
            let (up, down) = match atom {
                AtomId::First => (psi.get(true, spectator, n), psi.get(false, spectator, n)),
                AtomId::Second => (psi.get(spectator, true, n), psi.get(spectator, false, n)),
            };
            p_plus += up.norm_sqr();
            p_minus += down.norm_sqr();
            coh += up * down.conj();
        }
    }
    ReducedAtomState { p_plus, p_minus, coh }
}

/// Photon cutoff `n_max + 2l` that contains every manifold reached from the
/// initial state.
pub fn required_photon_cutoff(n_max: usize, l: u32) -> usize {
    n_max + 2 * l as usize
}

/// Hamiltonian, initial state and step size for one parameter set.
#[derive(Debug, Clone)]
pub struct OracleSetup {
    pub hamiltonian: JointHamiltonian,
    pub initial: JointStateVector,
    pub dt: f64,
}

impl OracleSetup {
    pub fn new(weights: &FockWeights, l: u32, g: f64, photon_cutoff: usize) -> Result<Self> {
        let required = required_photon_cutoff(weights.n_max(), l);
        if photon_cutoff < required {
            return Err(Error::PhotonCutoffTooSmall {
                got: photon_cutoff,
                required,
            });
        }
        let hamiltonian = build_joint_hamiltonian(l, g, photon_cutoff)?;
        let initial = JointStateVector::excited_coherent(weights, photon_cutoff)?;
        let dt = default_step(&hamiltonian, &initial);
        Ok(Self {
            hamiltonian,
            initial,
            dt,
        })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// Reduced states of both atoms at each sorted sample time.
    pub fn reduced_states(&self, times: &[f64]) -> Result<Vec<OracleSample>> {
        Ok(rk4_sample(&self.hamiltonian, &self.initial, times, self.dt)?
            .into_iter()
            .map(|e| OracleSample {
                time: e.time,
                first: partial_trace_atom(&e.state, AtomId::First),
                second: partial_trace_atom(&e.state, AtomId::Second),
                norm_drift: e.norm_drift,
                excitation: excitation_expectation(&self.hamiltonian, &e.state),
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OracleSample {
    pub time: f64,
    pub first: ReducedAtomState,
    pub second: ReducedAtomState,
    pub norm_drift: f64,
    pub excitation: f64,
}
