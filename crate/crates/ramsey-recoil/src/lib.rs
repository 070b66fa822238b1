//! Photon-recoil shift of two-zone microwave Ramsey fringes for cold atomic
//! clouds.
//!
//! The atom is modelled as a Gaussian wave packet travelling through a
//! standing-wave cavity field twice.  Each interaction populates a ladder of
//! momentum states `n·ħk`; after free flight the packets are projected on a
//! finite detection region and averaged over an incoherent cloud.  The
//! position of the central fringe then yields the recoil-induced frequency
//! shift.
//!
//! Module map:
//!
//! * [`wavepacket`] – free Gaussian packets in position and momentum space.
//! * [`ensemble`] – thermal cloud density operator and position sampling.
//! * [`dynamics`] – momentum-ladder amplitude equations during the pulses.
//! * [`detection`] – detection-region projection, averaging, shift extraction.
//! * [`weakfield`] – first-order analytic interference terms.
//! * [`config`], [`scenario`], [`report`] – run configuration, presets, CSV.

pub mod bessel;
pub mod config;
pub mod constants;
pub mod detection;
pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod ode;
pub mod quadrature;
pub mod report;
pub mod scenario;
pub mod sum;
pub mod wavepacket;
pub mod weakfield;

pub use error::{Error, Result};
