use std::fmt;
use std::str::FromStr;

use super::Group;
use crate::error::{Error, Result};

/// The integer Heisenberg group H3(Z) of upper unitriangular 3x3 matrices.
///
/// `(a, b, c)` stands for the matrix with `a` and `b` on the superdiagonal
/// and `c` in the corner, so `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Heisenberg;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HeisenbergElement {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl HeisenbergElement {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        HeisenbergElement { a, b, c }
    }
}

impl fmt::Display for HeisenbergElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl fmt::Debug for HeisenbergElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HeisenbergElement {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::parse("Heisenberg triple", text);
        let inner = text
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parts: Vec<i64> = inner
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match parts[..] {
            [a, b, c] => Ok(HeisenbergElement { a, b, c }),
            _ => Err(bad()),
        }
    }
}

impl Group for Heisenberg {
    type Element = HeisenbergElement;

    fn name(&self) -> String {
        "H3(Z)".into()
    }

    fn identity(&self) -> HeisenbergElement {
        HeisenbergElement::default()
    }

    fn multiply(&self, x: &HeisenbergElement, y: &HeisenbergElement) -> HeisenbergElement {
        HeisenbergElement {
            a: x.a + y.a,
            b: x.b + y.b,
            c: x.c + y.c + x.a * y.b,
        }
    }

    fn invert(&self, x: &HeisenbergElement) -> HeisenbergElement {
        HeisenbergElement {
            a: -x.a,
            b: -x.b,
            c: x.a * x.b - x.c,
        }
    }

    fn base_generators(&self) -> Vec<HeisenbergElement> {
        vec![HeisenbergElement::new(1, 0, 0), HeisenbergElement::new(0, 1, 0)]
    }

    fn contains(&self, _: &HeisenbergElement) -> bool {
        true
    }
}
