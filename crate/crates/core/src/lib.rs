//! Exact, finite-window verification of coarse cover witnesses.
//!
//! The crate builds cover witnesses (families of blocks that are pairwise
//! far apart within a family, uniformly bounded, and jointly covering) on
//! finite windows of integer lattices and finitely generated groups, checks
//! them by brute force in exact arithmetic, and transfers witnesses along an
//! isometric group action: a witness on the space plus witnesses on the
//! quasi-stabilizers of a basepoint yield a witness on the group.

pub mod action;
pub mod builders;
pub mod cli;
pub mod format;
pub mod error;
pub mod group;
pub mod limits;
pub mod transfer;
pub mod metric;
pub mod pipeline;
pub mod sfdc;

pub use error::{Error, Result};
pub use limits::Limits;
