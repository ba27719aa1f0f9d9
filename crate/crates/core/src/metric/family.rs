use std::fmt;

use serde::{Deserialize, Serialize};

use super::Distance;
use crate::error::{Error, Result};

/// A nonempty finite set of points, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block<P> {
    members: Vec<P>,
}

impl<P: Ord> Block<P> {
    pub fn new(members: impl IntoIterator<Item = P>) -> Result<Self> {
        let mut members: Vec<P> = members.into_iter().collect();
        members.sort();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptyBlock);
        }
        Ok(Block { members })
    }

    /// Like [`Block::new`] but returns `None` for an empty input.
    pub fn nonempty(members: impl IntoIterator<Item = P>) -> Option<Self> {
        Block::new(members).ok()
    }

    pub fn singleton(p: P) -> Self {
        Block { members: vec![p] }
    }

    pub fn members(&self) -> &[P] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &P) -> bool {
        self.members.binary_search(p).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, P> {
        self.members.iter()
    }

    pub fn first(&self) -> &P {
        &self.members[0]
    }

    pub fn is_subset_of(&self, other: &Block<P>) -> bool {
        self.members.iter().all(|p| other.contains(p))
    }
}

impl<P: fmt::Display> fmt::Display for Block<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        if self.members.len() <= 6 {
            for (i, p) in self.members.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p}")?;
            }
        } else {
            write!(
                f,
                "{}, {}, ... {} ({} points)",
                self.members[0],
                self.members[1],
                self.members[self.members.len() - 1],
                self.members.len()
            )?;
        }
        write!(f, "}}")
    }
}

/// A collection of blocks with a claimed disjointness scale and diameter bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family<P> {
    pub blocks: Vec<Block<P>>,
    pub scale: Distance,
    pub bound: Distance,
}

impl<P> Family<P> {
    pub fn new(blocks: Vec<Block<P>>, scale: Distance, bound: Distance) -> Self {
        Family {
            blocks,
            scale,
            bound,
        }
    }

    pub fn point_count(&self) -> usize {
        self.blocks.iter().map(|b| b.members.len()).sum()
    }
}

/// An indexed list of families claimed to witness a cover of some window.
/// Family `i` claims disjointness at `families[i].scale`; every block claims
/// diameter strictly below `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverWitness<P> {
    pub families: Vec<Family<P>>,
    pub bound: Distance,
}

impl<P> CoverWitness<P> {
    /// Uniform bound taken as the largest per-family claimed bound.
    pub fn new(families: Vec<Family<P>>) -> Self {
        let bound = families
            .iter()
            .map(|f| f.bound)
            .max()
            .unwrap_or(Distance::ZERO);
        CoverWitness { families, bound }
    }

    pub fn scales(&self) -> Vec<Distance> {
        self.families.iter().map(|f| f.scale).collect()
    }

    pub fn block_count(&self) -> usize {
        self.families.iter().map(|f| f.blocks.len()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extension {
    /// No scales beyond the explicit prefix.
    None,
    /// Repeatedly double the last explicit scale.
    Double,
}

/// A finite prefix of scales plus a rule for extending it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleSequence {
    prefix: Vec<Distance>,
    extension: Extension,
}

impl ScaleSequence {
    /// Strictly increasing, strictly positive scales.
    pub fn new(prefix: Vec<Distance>, extension: Extension) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::InvalidScales("at least one scale is required".into()));
        }
        if prefix[0].is_zero() {
            return Err(Error::InvalidScales("scales must be positive".into()));
        }
        if let Some(w) = prefix.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidScales(format!(
                "scales must be strictly increasing, found {} followed by {}",
                w[0], w[1]
            )));
        }
        Ok(ScaleSequence { prefix, extension })
    }

    /// Non-decreasing scales, zero allowed.
    pub fn non_decreasing(prefix: Vec<Distance>, extension: Extension) -> Result<Self> {
        if let Some(w) = prefix.windows(2).find(|w| w[0] > w[1]) {
            return Err(Error::InvalidScales(format!(
                "scales must be non-decreasing, found {} followed by {}",
                w[0], w[1]
            )));
        }
        if prefix.is_empty() && extension == Extension::Double {
            return Err(Error::InvalidScales("cannot extend an empty prefix".into()));
        }
        Ok(ScaleSequence { prefix, extension })
    }

    pub fn prefix(&self) -> &[Distance] {
        &self.prefix
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    pub fn get(&self, index: usize) -> Result<Distance> {
        if let Some(d) = self.prefix.get(index) {
            return Ok(*d);
        }
        let insufficient = Error::InsufficientScales {
            index,
            available: self.prefix.len(),
        };
        match self.extension {
            Extension::None => Err(insufficient),
            Extension::Double => {
                let mut value = *self.prefix.last().ok_or(insufficient)?;
                let two = Distance::integer(2);
                for _ in self.prefix.len()..=index {
                    value = value.checked_mul(&two).ok_or_else(|| {
                        Error::InvalidScales(format!("scale {index} overflows"))
                    })?;
                }
                Ok(value)
            }
        }
    }
}
