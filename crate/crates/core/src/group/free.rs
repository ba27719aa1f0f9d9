use std::fmt;
use std::str::FromStr;

use super::Group;
use crate::error::{Error, Result};

/// The free group on `rank` letters `a, b, c, ...`; inverses are written in
/// upper case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeGroup {
    rank: u8,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 || rank > 26 {
            return Err(Error::Validation(format!(
                "free group rank must be between 1 and 26, got {rank}"
            )));
        }
        Ok(FreeGroup { rank: rank as u8 })
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }
}

/// A freely reduced word. Letter `k > 0` is the `k`-th generator, `-k` its inverse.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FreeWord(Vec<i8>);

impl FreeWord {
    pub fn from_letters(letters: impl IntoIterator<Item = i8>) -> Self {
        let mut out: Vec<i8> = Vec::new();
        for x in letters {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        FreeWord(out)
    }

    pub fn letters(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for &x in &self.0 {
            let base = if x > 0 { b'a' } else { b'A' };
            write!(f, "{}", (base + x.unsigned_abs() - 1) as char)?;
        }
        Ok(())
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "e" || t.is_empty() {
            return Ok(FreeWord::default());
        }
        let letters = t
            .chars()
            .map(|c| match c {
                'a'..='z' => Ok((c as u8 - b'a' + 1) as i8),
                'A'..='Z' => Ok(-((c as u8 - b'A' + 1) as i8)),
                _ => Err(Error::parse("free group word", text)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeWord::from_letters(letters))
    }
}

impl Group for FreeGroup {
    type Element = FreeWord;

    fn name(&self) -> String {
        format!("F{}", self.rank)
    }

    fn identity(&self) -> FreeWord {
        FreeWord::default()
    }

    fn multiply(&self, a: &FreeWord, b: &FreeWord) -> FreeWord {
        let overlap = a
            .0
            .iter()
            .rev()
            .zip(&b.0)
            .take_while(|(x, y)| **x == -**y)
            .count();
        let mut out = a.0[..a.0.len() - overlap].to_vec();
        out.extend_from_slice(&b.0[overlap..]);
        FreeWord(out)
    }

    fn invert(&self, a: &FreeWord) -> FreeWord {
        FreeWord(a.0.iter().rev().map(|x| -x).collect())
    }

    fn base_generators(&self) -> Vec<FreeWord> {
        (1..=self.rank as i8).map(|k| FreeWord(vec![k])).collect()
    }

    fn contains(&self, e: &FreeWord) -> bool {
        e.0.iter().all(|x| *x != 0 && x.unsigned_abs() <= self.rank)
    }

    fn canonicalize(&self, e: &FreeWord) -> FreeWord {
        FreeWord::from_letters(e.0.iter().copied())
    }
}
