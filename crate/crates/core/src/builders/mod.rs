//! Constructive cover witnesses for lattices and quasi-stabilizers. Builders
//! only construct; every witness is certified separately by the verifier.

mod group;
mod lattice;

pub use group::{cluster_cover, layered_cover, search_layered_cover, strip_cover};
pub use lattice::{brick_cover, brick_cover_with, interval_cover, product_cover, BrickParams};
