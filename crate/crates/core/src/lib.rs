//! Fractional Fourier transforms of sampled signals and stochastic processes,
//! with Monte Carlo estimators and closed-form predictions for the
//! second-order statistics of the transformed process.
//!
//! The guide in `book/` walks through the concepts; its code listings run as
//! doctests of this crate.

pub mod dfrft;
pub mod error;
pub mod estimators;
pub mod frfs;
pub mod grid;
pub mod io;
pub mod kernel;
pub mod linalg;
pub mod order;
pub mod pipeline;
pub mod processes;
pub mod surface;
pub mod theory;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/processes.md")]
    mod processes {}
    #[doc = include_str!("../../../book/src/statistics.md")]
    mod statistics {}
    #[doc = include_str!("../../../book/src/theory.md")]
    mod theory {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
