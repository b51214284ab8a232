//! Age-of-Information metrics for an energy-harvesting transmitter.
//!
//! Update packets queue FCFS at a transmitter whose energy is a fluid
//! reservoir: it fills at `r+` while the server idles and drains at `r-`
//! while it works. Service runs at `mu1` while energy remains and slows to
//! `mu2` once the reservoir is empty.
//!
//! * [`model`] holds the parameterization and stability predicates.
//! * [`analytic`] evaluates the closed forms: sojourn and waiting tails,
//!   mean AoI and mean peak AoI with an infinite buffer, and the stationary
//!   distribution and mean peak AoI for a finite buffer.
//! * [`sim`] is a discrete-event simulator covering every buffer and
//!   reservoir size, including the finite reservoirs with no closed form.
//! * [`experiments`] carries the reference parameter panels used for
//!   validation.
//!
//! ```
//! use fluid_aoi::{analytic, ModelParams};
//!
//! let params = ModelParams::new(1.0, 2.0, 1.5, 1.0, 2.0)?;
//! let peak = analytic::mean_peak_aoi_inf(&params)?;
//! assert!((peak - 2.7).abs() < 1e-12);
//! # Ok::<(), fluid_aoi::Error>(())
//! ```

pub mod analytic;
pub mod error;
pub mod experiments;
pub mod model;
pub mod sim;

pub use error::{Error, Result};
pub use model::{Buffer, DerivedConstants, ModelParams, Reservoir};

// Code blocks in the guide are compiled and run as doc tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/infinite-buffer.md")]
    mod infinite_buffer {}
    #[doc = include_str!("../../../book/src/finite-buffer.md")]
    mod finite_buffer {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
