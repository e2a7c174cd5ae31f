//! Spectra of Linial–Meshulam random simplicial complexes.
//!
//! - [`complex`]: simplices, orientation signs, signed adjacency matrices, d-trees and bracelets.
//! - [`lm`]: sampling Y^d_{n,p} and the centered, scaled matrix H_n.
//! - [`spectral`]: eigenvalues, empirical spectral statistics and the semicircle law ν_d.
//! - [`words`]: closed words and sentences over (d−1)-simplices and their exhaustive enumeration.
//! - [`clt`]: the limiting covariance σ(k,l) of spectral moments.
//! - [`mc`]: reproducible parallel Monte Carlo experiments.

pub mod clt;
pub mod complex;
mod error;
pub mod lm;
pub mod mc;
pub mod spectral;
pub mod words;

pub use error::{Error, Result};

/// Version tag embedded in every machine-readable output.
pub const SCHEMA: &str = "simplectra/1";
