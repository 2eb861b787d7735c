//! Exact dynamics of two two-level atoms sharing one quantized cavity mode
//! through resonant l-photon transitions, with the single-atom diagnostics
//! built on top of it: atomic inversion, entropy squeezing, variance
//! squeezing, von Neumann entropy and the entropic uncertainty relation.
//!
//! The atoms start excited and the field in a real coherent state `|α⟩`.
//! [`model`] evolves each invariant 4×4 subspace exactly, [`reduced`] traces
//! out the partner atom and the field, and [`observables`] turns the 2×2
//! state into scalars. [`oracle`] integrates the full product-space
//! Schrödinger equation as an independent check; [`jcm`] holds the one-atom
//! reference; [`scan`] and [`verify`] drive the command-line tool.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod fock;
pub mod jcm;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod reduced;
pub mod scan;
pub mod verify;

mod sum;

pub use error::{Error, Result};
pub use fock::{coherent_weights, FockWeights};
pub use model::{
    build_block, closed_form_x, diagonalize_block, evolve_block, BlockCoefficients, Dynamics, EigenBlock,
    InteractionBlock, ModelParams,
};
pub use observables::{Axis, BlochVector, SqueezeReport};
pub use reduced::{AtomId, ReducedAtomState};
pub use scan::{run_scan, Channel, Preset, ScanConfig, TimeSeries};
pub use verify::{run_verify, VerifyOptions, VerifyReport};
