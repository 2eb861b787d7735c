//! Cross-checks the block pipeline against the brute-force oracle at random
//! grid times.

use std::fmt;

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::model::{BlockCoefficients, Dynamics};
use crate::observables::{bloch, eur_residual};
use crate::oracle::{required_photon_cutoff, OracleSetup, NORM_DRIFT_TOL};
use crate::reduced::{reduced_state, AtomId, ReducedAtomState};
use crate::scan::ScanConfig;

pub const DEVIATION_TOL: f64 = 1e-8;
pub const EUR_TOL: f64 = 1e-10;
pub const MIN_SAMPLES: usize = 10;
pub const DEFAULT_MAX_DIM: usize = 20_000;
pub const DEFAULT_SEED: u64 = 0x7ca5_c0de;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Largest oracle state dimension accepted.
    pub max_dim: usize,
    pub seed: u64,
    /// Rotate one block's amplitudes before comparing (fault injection).
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_dim: DEFAULT_MAX_DIM,
            seed: DEFAULT_SEED,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub samples: usize,
    pub oracle_dim: usize,
    pub max_deviation: f64,
    pub max_eur_violation: f64,
    pub max_norm_drift: f64,
}

impl VerifyReport {
    pub fn deviation_ok(&self) -> bool {
        self.max_deviation < DEVIATION_TOL
    }

    pub fn eur_ok(&self) -> bool {
        self.max_eur_violation <= EUR_TOL
    }

    pub fn norm_ok(&self) -> bool {
        self.max_norm_drift <= NORM_DRIFT_TOL
    }

    pub fn passed(&self) -> bool {
        self.deviation_ok() && self.eur_ok() && self.norm_ok()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        writeln!(f, "samples            {}", self.samples)?;
        writeln!(f, "oracle dimension   {}", self.oracle_dim)?;
        writeln!(
            f,
            "max deviation      {:.3e} (< {DEVIATION_TOL:e}) {}",
            self.max_deviation,
            mark(self.deviation_ok())
        )?;
        writeln!(
            f,
            "max EUR violation  {:.3e} (<= {EUR_TOL:e}) {}",
            self.max_eur_violation,
            mark(self.eur_ok())
        )?;
        writeln!(
            f,
            "max norm drift     {:.3e} (<= {NORM_DRIFT_TOL:e}) {}",
            self.max_norm_drift,
            mark(self.norm_ok())
        )?;
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Amplitude-preserving corruption of the most heavily weighted block.
fn corrupt(coeffs: &mut [BlockCoefficients], dynamics: &Dynamics) {
    let w = dynamics.weights();
    let heaviest = (0..coeffs.len())
        .max_by(|&a, &b| w.get(a).total_cmp(&w.get(b)))
        .unwrap_or(0);
    let (s, c) = 1e-3f64.sin_cos();
    let x = &mut coeffs[heaviest];
    let (x1, x4) = (x.x1, x.x4);
    x.x1 = c * x1 - s * x4;
    x.x4 = s * x1 + c * x4;
}

fn analytic_pair(dynamics: &Dynamics, time: f64, inject_fault: bool) -> Result<(ReducedAtomState, ReducedAtomState)> {
    if !inject_fault {
        return dynamics.reduced_pair(time);
    }
    let mut coeffs = dynamics.coefficients(time)?;
    corrupt(&mut coeffs, dynamics);
    let p = dynamics.params();
    Ok((
        reduced_state(dynamics.weights(), &coeffs, p.l, AtomId::First, p.cutoff_eps)?,
        reduced_state(dynamics.weights(), &coeffs, p.l, AtomId::Second, p.cutoff_eps)?,
    ))
}

/// Sorted random subset of the scan grid.
pub fn sample_times(cfg: &ScanConfig, count: usize, seed: u64) -> Vec<f64> {
    let grid = cfg.grid();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, grid.len(), count.min(grid.len())).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|k| grid[k]).collect()
}

pub fn run_verify(cfg: &ScanConfig, sample_count: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    cfg.validate()?;
    if sample_count < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_SAMPLES} samples are required, got {sample_count}"
        )));
    }
    let p = cfg.params;
    let photon_cutoff = required_photon_cutoff(p.n_max, p.l);
    let dim = 4 * (photon_cutoff + 1);
    if dim > opts.max_dim {
        return Err(Error::ResourceLimit {
            dim,
            limit: opts.max_dim,
        });
    }

    let dynamics = Dynamics::new(p)?;
    let oracle = OracleSetup::new(dynamics.weights(), p.l, p.g, photon_cutoff)?;
    let times = sample_times(cfg, sample_count, opts.seed);

    let oracle_samples = match oracle.reduced_states(&times) {
        Ok(s) => s,
        Err(Error::StepSizeTooLarge { drift }) => {
            return Ok(VerifyReport {
                samples: times.len(),
                oracle_dim: dim,
                max_deviation: f64::INFINITY,
                max_eur_violation: 0.0,
                max_norm_drift: drift,
            })
        }
        Err(e) => return Err(e),
    };

    let mut max_deviation = 0.0f64;
    let mut max_eur_violation = 0.0f64;
    let mut max_norm_drift = 0.0f64;
    for s in &oracle_samples {
        let (a1, a2) = analytic_pair(&dynamics, s.time, opts.inject_fault)?;
        max_deviation = max_deviation.max(a1.max_abs_diff(&s.first)).max(a2.max_abs_diff(&s.second));
        for st in [&a1, &a2] {
            max_eur_violation = max_eur_violation.max(-eur_residual(&bloch(st)));
        }
        max_norm_drift = max_norm_drift.max(s.norm_drift);
    }
    Ok(VerifyReport {
        samples: times.len(),
        oracle_dim: dim,
        max_deviation,
        max_eur_violation,
        max_norm_drift,
    })
}
