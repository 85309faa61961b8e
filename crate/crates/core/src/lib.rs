//! Pseudospectral simulation and diagnostics for the generalized
//! Korteweg-de Vries equation
//!
//! ```text
//! u_t + u_xxx + mu (u^{k+1})_x = 0,   x in [-L/2, L/2) periodic,
//! ```
//!
//! with ground states, sharp Gagliardo-Nirenberg thresholds, scaling
//! exponents, and the modified-energy (I-method) diagnostics for rough data.

pub mod error;
pub mod evolution;
pub mod ground_state;
pub mod harness;
pub mod imethod;
pub mod invariants;
pub mod spectral;

pub use error::{Error, Result};
pub use evolution::{simulate, InvariantSeries, SimOptions, SimState};
pub use invariants::ModelParams;
pub use spectral::{Field, Grid};
