//! Time scans over a uniform grid, named presets and CSV emission.

use std::fmt;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jcm::{jcm_bloch, tjcm_harmonic_sy};
use crate::model::{Dynamics, ModelParams};
use crate::observables::{bloch, entropy_squeezing, eur_residual, variance_squeezing, von_neumann, Axis};
use crate::reduced::ReducedAtomState;

/// Observable columns a scan can emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Inv1,
    Inv2,
    Sy1,
    Sy2,
    Ey1,
    Ey2,
    Ex1,
    Ex2,
    Fy1,
    Fy2,
    Gamma1,
    Gamma2,
    Eur1,
    Eur2,
    JcmSz,
    JcmSy,
    JcmEy,
    HarmonicSy,
}

impl Channel {
    pub const ALL: [Channel; 18] = [
        Channel::Inv1,
        Channel::Inv2,
        Channel::Sy1,
        Channel::Sy2,
        Channel::Ey1,
        Channel::Ey2,
        Channel::Ex1,
        Channel::Ex2,
        Channel::Fy1,
        Channel::Fy2,
        Channel::Gamma1,
        Channel::Gamma2,
        Channel::Eur1,
        Channel::Eur2,
        Channel::JcmSz,
        Channel::JcmSy,
        Channel::JcmEy,
        Channel::HarmonicSy,
    ];

    /// Channels derived from the two-atom state (no single-atom baselines).
    pub const TWO_ATOM: [Channel; 14] = [
        Channel::Inv1,
        Channel::Inv2,
        Channel::Sy1,
        Channel::Sy2,
        Channel::Ey1,
        Channel::Ey2,
        Channel::Ex1,
        Channel::Ex2,
        Channel::Fy1,
        Channel::Fy2,
        Channel::Gamma1,
        Channel::Gamma2,
        Channel::Eur1,
        Channel::Eur2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::Inv1 => "inv1",
            Channel::Inv2 => "inv2",
            Channel::Sy1 => "sy1",
            Channel::Sy2 => "sy2",
            Channel::Ey1 => "ey1",
            Channel::Ey2 => "ey2",
            Channel::Ex1 => "ex1",
            Channel::Ex2 => "ex2",
            Channel::Fy1 => "fy1",
            Channel::Fy2 => "fy2",
            Channel::Gamma1 => "gamma1",
            Channel::Gamma2 => "gamma2",
            Channel::Eur1 => "eur1",
            Channel::Eur2 => "eur2",
            Channel::JcmSz => "jcm_sz",
            Channel::JcmSy => "jcm_sy",
            Channel::JcmEy => "jcm_ey",
            Channel::HarmonicSy => "harmonic_sy",
        }
    }

    fn needs_two_atom(self) -> bool {
        Self::TWO_ATOM.contains(&self)
    }

    pub fn valid_names() -> String {
        Self::ALL.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
    }

    /// Parses a comma-separated list, keeping the given order.
    pub fn parse_list(list: &str) -> Result<Vec<Channel>> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect()
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownChannel {
                name: s.to_string(),
                valid: Self::valid_names(),
            })
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub params: ModelParams,
    pub t_max: f64,
    pub steps: usize,
    pub channels: Vec<Channel>,
    pub output_path: Option<PathBuf>,
}

impl ScanConfig {
    pub fn new(params: ModelParams, t_max: f64, steps: usize, channels: Vec<Channel>) -> Result<Self> {
        let cfg = Self {
            params,
            t_max,
            steps,
            channels,
            output_path: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidParameter(format!("steps must be >= 2, got {}", self.steps)));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_max must be positive, got {}", self.t_max)));
        }
        Ok(())
    }

    /// `steps` equally spaced times from 0 to `t_max` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.t_max, self.steps)
    }
}

pub fn uniform_grid(t_max: f64, steps: usize) -> Vec<f64> {
    let last = (steps - 1) as f64;
    (0..steps).map(|k| t_max * k as f64 / last).collect()
}

/// Grid plus named columns, one value per grid point each.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub grid: Vec<f64>,
    pub channels: Vec<(String, Vec<f64>)>,
}

impl TimeSeries {
    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.channels
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Header `T,<channels…>`, values written with 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let mut header = vec!["T".to_string()];
        header.extend(self.channels.iter().map(|(n, _)| n.clone()));
        w.write_record(&header)?;
        let mut record = Vec::with_capacity(header.len());
        for (k, t) in self.grid.iter().enumerate() {
            record.clear();
            record.push(format!("{t:.16e}"));
            record.extend(self.channels.iter().map(|(_, v)| format!("{:.16e}", v[k])));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let header = r.headers()?.clone();
        if header.get(0) != Some("T") {
            return Err(Error::Parse("first column must be `T`".into()));
        }
        let mut grid = Vec::new();
        let mut channels: Vec<(String, Vec<f64>)> =
            header.iter().skip(1).map(|n| (n.to_string(), Vec::new())).collect();
        for rec in r.records() {
            let rec = rec?;
            let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}")));
            grid.push(parse(&rec[0])?);
            for (i, (_, col)) in channels.iter_mut().enumerate() {
                col.push(parse(&rec[i + 1])?);
            }
        }
        Ok(Self { grid, channels })
    }
}

/// Every channel value at one time.
#[derive(Debug, Clone, Copy)]
struct PointValues {
    first: Option<(ReducedAtomState, ReducedAtomState)>,
    jcm: Option<crate::observables::BlochVector>,
    harmonic_sy: f64,
}

impl PointValues {
    fn get(&self, ch: Channel) -> f64 {
        let atoms = || self.first.expect("two-atom state computed");
        let b = |second: bool| {
            let (s1, s2) = atoms();
            bloch(if second { &s2 } else { &s1 })
        };
        match ch {
            Channel::Inv1 => b(false).sz,
            Channel::Inv2 => b(true).sz,
            Channel::Sy1 => b(false).sy,
            Channel::Sy2 => b(true).sy,
            Channel::Ey1 => entropy_squeezing(&b(false), Axis::Y),
            Channel::Ey2 => entropy_squeezing(&b(true), Axis::Y),
            Channel::Ex1 => entropy_squeezing(&b(false), Axis::X),
            Channel::Ex2 => entropy_squeezing(&b(true), Axis::X),
            Channel::Fy1 => variance_squeezing(&b(false), Axis::Y),
            Channel::Fy2 => variance_squeezing(&b(true), Axis::Y),
            Channel::Gamma1 => von_neumann(&atoms().0),
            Channel::Gamma2 => von_neumann(&atoms().1),
            Channel::Eur1 => eur_residual(&b(false)),
            Channel::Eur2 => eur_residual(&b(true)),
            Channel::JcmSz => self.jcm.expect("jcm computed").sz,
            Channel::JcmSy => self.jcm.expect("jcm computed").sy,
            Channel::JcmEy => entropy_squeezing(&self.jcm.expect("jcm computed"), Axis::Y),
            Channel::HarmonicSy => self.harmonic_sy,
        }
    }
}

pub fn run_scan(cfg: &ScanConfig) -> Result<TimeSeries> {
    cfg.validate()?;
    let grid = cfg.grid();
    let dynamics = Dynamics::new(cfg.params)?;
    let two_atom = cfg.channels.iter().any(|c| c.needs_two_atom());
    let jcm = cfg
        .channels
        .iter()
        .any(|c| matches!(c, Channel::JcmSz | Channel::JcmSy | Channel::JcmEy));
    let harmonic = cfg.channels.contains(&Channel::HarmonicSy);

    let points = grid
        .par_iter()
        .map(|&t| -> Result<PointValues> {
            Ok(PointValues {
                first: if two_atom { Some(dynamics.reduced_pair(t)?) } else { None },
                jcm: jcm.then(|| jcm_bloch(dynamics.weights(), t)),
                harmonic_sy: if harmonic { tjcm_harmonic_sy(dynamics.weights(), t) } else { 0.0 },
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let channels = cfg
        .channels
        .iter()
        .map(|&ch| (ch.name().to_string(), points.iter().map(|p| p.get(ch)).collect()))
        .collect();
    Ok(TimeSeries { grid, channels })
}

/// Named parameter sets with their channel selections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `(α, g, l) = (5, 0.5, 1)`: inversions, entropy and variance squeezing.
    Fig1,
    /// `(α, g, l) = (5, 0.5, 2)`: as `Fig1`, two-photon transitions.
    Fig2,
    /// `(α, g) = (5, 0.5)`: von Neumann entropies for `l = 1` and `l = 2`.
    Fig3,
    /// `(α, l) = (5, 1)`, `g = 1`: two-atom vs single-atom entropy squeezing.
    Fig4,
}

pub const DEFAULT_T_MAX: f64 = 25.0;
pub const DEFAULT_STEPS: usize = 2500;

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig1, Preset::Fig2, Preset::Fig3, Preset::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }

    /// `(α, g, l)` of each panel group.
    pub fn parameter_sets(self) -> Vec<(f64, f64, u32)> {
        match self {
            Preset::Fig1 => vec![(5.0, 0.5, 1)],
            Preset::Fig2 => vec![(5.0, 0.5, 2)],
            Preset::Fig3 => vec![(5.0, 0.5, 1), (5.0, 0.5, 2)],
            Preset::Fig4 => vec![(5.0, 1.0, 1)],
        }
    }

    pub fn channels(self) -> Vec<Channel> {
        use Channel::*;
        match self {
            Preset::Fig1 | Preset::Fig2 => vec![Inv1, Inv2, Ey1, Ey2, Fy1, Fy2],
            Preset::Fig3 => vec![Gamma1, Gamma2],
            Preset::Fig4 => vec![Ey1, JcmEy, Sy1, JcmSy, HarmonicSy],
        }
    }

    /// Scan configurations behind the preset, one per parameter set.
    pub fn configs(self, t_max: f64, steps: usize, cutoff_eps: f64) -> Result<Vec<ScanConfig>> {
        self.parameter_sets()
            .into_iter()
            .map(|(a, g, l)| {
                ScanConfig::new(ModelParams::with_cutoff(a, g, l, cutoff_eps)?, t_max, steps, self.channels())
            })
            .collect()
    }

    /// Runs the preset. `Fig3` suffixes each column with its `_l<l>`.
    pub fn run(self, t_max: f64, steps: usize, cutoff_eps: f64) -> Result<TimeSeries> {
        let configs = self.configs(t_max, steps, cutoff_eps)?;
        let multi = configs.len() > 1;
        let mut merged: Option<TimeSeries> = None;
        for cfg in configs {
            let mut ts = run_scan(&cfg)?;
            if multi {
                for (name, _) in ts.channels.iter_mut() {
                    *name = format!("{name}_l{}", cfg.params.l);
                }
            }
            merged = Some(match merged {
                None => ts,
                Some(mut acc) => {
                    acc.channels.append(&mut ts.channels);
                    acc
                }
            });
        }
        Ok(merged.expect("at least one parameter set"))
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown preset `{s}`; expected fig1, fig2, fig3 or fig4")))
    }
}
