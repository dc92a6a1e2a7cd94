//! Finite models of the correspondence between actions of compact quantum
//! groups and weak unitary tensor functors into C*-correspondences.
//!
//! The pipeline runs from representation categories ([`qcat`]) and
//! correspondences ([`hilbmod`]) through functor validation ([`wutf`]) and
//! algebra reconstruction ([`reconstruct`]) to actions ([`spectral`]),
//! equivariant modules ([`equivariant`]) and cocycle deformations ([`deform`]).
//! Every check returns a [`report::Report`] of residuals against a tolerance.

// Index loops mirror the formulas in the numeric kernels.
#![allow(clippy::needless_range_loop)]

pub mod deform;
pub mod equivariant;
pub mod error;
pub mod fixtures;
pub mod hilbmod;
pub mod io;
pub mod linalg;
pub mod qcat;
pub mod reconstruct;
pub mod report;
pub mod spectral;
pub mod wutf;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/categories.md")]
    mod categories {}
    #[doc = include_str!("../../../book/src/functors.md")]
    mod functors {}
    #[doc = include_str!("../../../book/src/reconstruction.md")]
    mod reconstruction {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/deformation.md")]
    mod deformation {}
    #[doc = include_str!("../../../book/src/files.md")]
    mod files {}
}
