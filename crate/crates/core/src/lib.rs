//! Multi-information estimation with zeroth-order active regret minimisation
//! (MI-ZO), plus the derivative-free camera controller built on top of it.
//!
//! The crate is organised bottom-up:
//!
//! - [`histogram`]: the normalized distribution type shared by everything else.
//! - [`sources`]: raster views and text turned into entropy sources.
//! - [`info`]: plug-in entropy, mutual information, multi-information and
//!   Halton-driven interval estimation.
//! - [`mizo`]: the weighted mixture, the zeroth-order update loop and the
//!   max-margin unit separator.
//! - [`controller`]: proxy labels, component models, the central unit and the
//!   strong-product interaction matrix used to plan camera actions.
//! - [`scene`]: a deterministic synthetic scene simulator with a noisy
//!   decision oracle standing in for a vision-language model.
//! - [`metrics`]: BER, summary accuracy, separation statistics and the
//!   posterior-concentration dispersion diagnostic.
//! - [`harness`]: demonstrations, two-round episodes, benchmarks and reports.

pub mod controller;
pub mod error;
pub mod harness;
pub mod histogram;
pub mod info;
pub mod metrics;
pub mod mizo;
pub mod scene;
pub mod sources;

pub use error::{Error, Result};
pub use histogram::Histogram;
