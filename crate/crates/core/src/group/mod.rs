//! Finitely generated groups with canonical normal forms, breadth-first
//! ball enumeration and the left-invariant word metric.

mod free;
mod heisenberg;
mod lamplighter;
mod lattice;
mod window;

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use free::{FreeGroup, FreeWord};
pub use heisenberg::{Heisenberg, HeisenbergElement};
pub use lamplighter::{LampState, Lamplighter};
pub use lattice::IntegerLattice;
pub use window::{ball, ball_with_metric_radius, left_translate, word_distance, GroupWindow, WordMetric};

/// A group given by multiplication, inversion and a finite generating set,
/// whose elements are always stored in canonical form.
///
/// The `Ord` on elements is the canonical-form order used for every
/// deterministic tie-break.
pub trait Group: Clone + Debug + Send + Sync + 'static {
    type Element: Clone
        + Eq
        + Hash
        + Ord
        + Debug
        + Display
        + FromStr<Err = Error>
        + Send
        + Sync;

    fn name(&self) -> String;

    fn identity(&self) -> Self::Element;

    fn multiply(&self, a: &Self::Element, b: &Self::Element) -> Self::Element;

    fn invert(&self, a: &Self::Element) -> Self::Element;

    /// Generators before symmetrization.
    fn base_generators(&self) -> Vec<Self::Element>;

    /// Whether `e` is a well-formed element of this particular group (rank etc.).
    fn contains(&self, e: &Self::Element) -> bool;

    fn canonicalize(&self, e: &Self::Element) -> Self::Element {
        e.clone()
    }

    /// `a^-1 * b`.
    fn left_quotient(&self, a: &Self::Element, b: &Self::Element) -> Self::Element {
        self.multiply(&self.invert(a), b)
    }

    /// The generating set closed under inversion, without the identity, sorted.
    fn generators(&self) -> Vec<Self::Element> {
        symmetrize(self, self.base_generators())
    }

    fn parse_element(&self, text: &str) -> Result<Self::Element> {
        let e: Self::Element = text.parse()?;
        if !self.contains(&e) {
            return Err(Error::Validation(format!(
                "`{text}` is not an element of {}",
                self.name()
            )));
        }
        Ok(self.canonicalize(&e))
    }
}

/// Closes a generating list under inversion, dropping the identity.
pub fn symmetrize<G: Group>(group: &G, gens: Vec<G::Element>) -> Vec<G::Element> {
    let identity = group.identity();
    let mut all: Vec<G::Element> = gens
        .iter()
        .flat_map(|g| [g.clone(), group.invert(g)])
        .filter(|g| *g != identity)
        .collect();
    all.sort();
    all.dedup();
    all
}
