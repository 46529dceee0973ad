//! Spectra of rescaled adjacency matrices of configuration-model graphs and
//! their deterministic limit `μ = ν ⊠ σ_sc`.
//!
//! The crate covers the whole chain: degree laws and sequences, graph
//! sampling (configuration model, Poissonized variant, and the coupling that
//! grows one from the other), eigenvalue spectra, the limit law through its
//! Stieltjes transform, and the support of the limit.

pub mod config;
pub mod degree;
pub mod error;
pub mod graph;
pub mod limit;
pub mod measure;
pub mod pipeline;
pub mod spectrum;
pub mod support;

pub use error::{Error, Result};
pub use measure::DiscreteMeasure;

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/degrees.md")]
    mod degrees {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/limit-law.md")]
    mod limit_law {}
    #[doc = include_str!("../../../book/src/support.md")]
    mod support {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
