//! Desk-scale through-the-wall FMCW radar gait simulator and
//! Chebyshev-time map (ChTM) feature toolkit.
//!
//! The crate follows the processing chain end to end:
//!
//! ```text
//! kinematics -> echo -> dsp (MTI, range FFT, STFT) -> envelope -> chtm -> eval
//! ```
//!
//! [`kinematics`] produces time-sampled skeleton poses for normal and armed
//! walking, [`echo`] turns them into multi-channel IF data cubes through a
//! single-layer wall model, [`dsp`] builds range-time and Doppler-time maps,
//! [`envelope`] extracts the macro/micro Doppler envelopes, [`chtm`] projects
//! envelope-bounded DTM slices onto first-kind Chebyshev polynomials, and
//! [`eval`] hosts the dataset synthesis, separability metrics, classifier,
//! and noise/order sweep protocols.

pub mod chtm;
pub mod dsp;
pub mod echo;
pub mod envelope;
pub mod error;
pub mod eval;
pub mod kinematics;
pub mod pipeline;

pub use error::{CoreError, Result};
