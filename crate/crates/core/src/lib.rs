//! Numerical toolkit for quantum-limited optical phase estimation.
//!
//! The crate is organised around the quantities an experimentalist needs when
//! deciding whether a nonclassical probe can beat a laser:
//!
//! - [`states`]: photon-number distributions, Gaussian probes and their
//!   counting, quadrature and coherence observables.
//! - [`limits`]: closed-form phase-precision bounds (shot noise, Heisenberg,
//!   loss-induced, quantum Fisher information) and auxiliary optics formulas.
//! - [`noon`]: NOON-state precision under loss, optimal state size and flux.
//! - [`squeezed`]: bright squeezed-light homodyne precision under a photon
//!   budget, and the NOON-versus-squeezed comparison.
//! - [`conditioning`]: binomial loss channels and Bayesian conditioning of
//!   heralded twin-beam photons.
//! - [`mc`]: seeded Monte-Carlo simulations that check the closed forms.
//! - [`dataset`] and [`figures`]: tabular datasets and their CSV/JSON forms.
//!
//! All photon counts are per averaging window and all precisions are in
//! radians.

pub mod conditioning;
pub mod dataset;
pub mod error;
pub mod figures;
pub mod limits;
pub mod mc;
pub mod noon;
pub mod numeric;
pub mod special;
pub mod squeezed;
pub mod states;

pub use dataset::{Axis, AxisScale, Column, FigureDataset};
pub use error::{Error, Result};
pub use limits::{BoundFamily, PowerConstraint, PrecisionResult};
pub use states::{GaussianProbe, NoonSpec, PdcTwinBeam, PhotonDistribution};
