use std::fmt;
use std::str::FromStr;

use super::Group;
use crate::error::{Error, Result};

/// The lamplighter group Z2 wr Z, generated by the lamp toggle `t` at the
/// cursor and the cursor moves `m`, `m^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Lamplighter;

/// A finite set of lit lamp positions and a cursor, written `[p1,...,pk]@c`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LampState {
    lamps: Vec<i64>,
    pub cursor: i64,
}

impl LampState {
    pub fn new(lamps: impl IntoIterator<Item = i64>, cursor: i64) -> Self {
        let mut lamps: Vec<i64> = lamps.into_iter().collect();
        lamps.sort_unstable();
        // Toggling twice switches a lamp off again.
        let mut canonical: Vec<i64> = Vec::with_capacity(lamps.len());
        let mut i = 0;
        while i < lamps.len() {
            let mut j = i;
            while j < lamps.len() && lamps[j] == lamps[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                canonical.push(lamps[i]);
            }
            i = j;
        }
        LampState {
            lamps: canonical,
            cursor,
        }
    }

    pub fn lamps(&self) -> &[i64] {
        &self.lamps
    }
}

impl fmt::Display for LampState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.lamps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]@{}", self.cursor)
    }
}

impl fmt::Debug for LampState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for LampState {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::parse("lamplighter state", text);
        let (lamps, cursor) = text.trim().split_once('@').ok_or_else(bad)?;
        let inner = lamps
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(bad)?;
        let lamps: Vec<i64> = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|p| p.trim().parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?
        };
        let cursor = cursor.trim().parse().map_err(|_| bad())?;
        Ok(LampState::new(lamps, cursor))
    }
}

/// Symmetric difference of two sorted, duplicate-free lists.
fn xor_sorted(a: &[i64], b: impl Iterator<Item = i64>) -> Vec<i64> {
    let mut out = Vec::with_capacity(a.len());
    let mut a = a.iter().copied().peekable();
    let mut b = b.peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some(&x), Some(&y)) if x == y => {
                a.next();
                b.next();
            }
            (Some(&x), Some(&y)) if x < y => {
                out.push(x);
                a.next();
            }
            (Some(_), Some(&y)) => {
                out.push(y);
                b.next();
            }
            (Some(&x), None) => {
                out.push(x);
                a.next();
            }
            (None, Some(&y)) => {
                out.push(y);
                b.next();
            }
            (None, None) => return out,
        }
    }
}

impl Group for Lamplighter {
    type Element = LampState;

    fn name(&self) -> String {
        "Z2 wr Z".into()
    }

    fn identity(&self) -> LampState {
        LampState::default()
    }

    /// `(f, x)(g, y) = (f + g shifted by x, x + y)`.
    fn multiply(&self, p: &LampState, q: &LampState) -> LampState {
        LampState {
            lamps: xor_sorted(&p.lamps, q.lamps.iter().map(|l| l + p.cursor)),
            cursor: p.cursor + q.cursor,
        }
    }

    fn invert(&self, p: &LampState) -> LampState {
        LampState {
            lamps: p.lamps.iter().map(|l| l - p.cursor).collect(),
            cursor: -p.cursor,
        }
    }

    fn base_generators(&self) -> Vec<LampState> {
        vec![LampState::new([0], 0), LampState::new([], 1)]
    }

    fn contains(&self, _: &LampState) -> bool {
        true
    }

    fn canonicalize(&self, e: &LampState) -> LampState {
        LampState::new(e.lamps.iter().copied(), e.cursor)
    }
}
