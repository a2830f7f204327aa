//! Discrete-time quantum random walks of one and two photons on a line.
//!
//! The walker carries a four-sided coin made of its propagation direction
//! (`h`/`v`) and linear polarization (`x`/`y`). One step is a half-wave plate
//! (Hadamard on polarization) followed by a polarizing beam splitter that
//! displaces `|h,x>`/`|h,y>` by `+1` and `|v,x>`/`|v,y>` by `-1`.
//!
//! Modules, bottom-up:
//!
//! * [`mode`]: the labelled mode basis, reachability and canonical indexing.
//! * [`single`]: exact single-photon evolution and position statistics.
//! * [`transform`]: the n-step single-particle matrix shared by the
//!   multi-photon and coherent walks.
//! * [`two_photon`]: bosonic two-photon Fock states, Bell inputs, joint and
//!   marginal detection and the correlation `sigma`.
//! * [`coherent`]: product coherent-state inputs.
//! * [`asymptotics`]: the Fourier-domain propagator, exact integral
//!   coefficients and their stationary-phase approximations.
//! * [`golden`]: reference tables for regression checks.

pub mod asymptotics;
pub mod coherent;
pub mod error;
pub mod golden;
pub mod mode;
pub mod single;
pub mod transform;
pub mod two_photon;

pub use error::{Error, Result};
pub use mode::{Coin, Direction, ModeLabel, Polarization};

/// Complex amplitude type used throughout the crate.
pub type Amplitude = num_complex::Complex64;
