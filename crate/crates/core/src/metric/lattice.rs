use std::fmt;
use std::str::FromStr;

use super::{Distance, Metric, MetricWindow};
use crate::error::{Error, Result};
use crate::limits::Limits;

/// A point of the integer lattice Z^n, written `(x1,...,xn)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn zero(rank: usize) -> Self {
        IntVector(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn l1_norm(&self) -> u64 {
        self.0.iter().map(|x| x.unsigned_abs()).sum()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for IntVector {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(t);
        if inner.trim().is_empty() {
            return Ok(IntVector(Vec::new()));
        }
        inner
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(IntVector)
            .map_err(|_| Error::parse("integer vector", text))
    }
}

/// Z^rank with the L1 metric (the word metric for the standard generators).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct L1Lattice {
    pub rank: usize,
}

impl L1Lattice {
    pub fn new(rank: usize) -> Self {
        L1Lattice { rank }
    }
}

pub(crate) fn l1_distance(a: &[i64], b: &[i64]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).unsigned_abs())
        .sum()
}

impl Metric for L1Lattice {
    type Point = IntVector;

    fn distance(&self, a: &IntVector, b: &IntVector) -> Result<Distance> {
        if a.rank() != self.rank || b.rank() != self.rank {
            let bad = if a.rank() != self.rank { a } else { b };
            return Err(Error::DomainMismatch {
                point: bad.to_string(),
            });
        }
        Ok(Distance::integer(l1_distance(&a.0, &b.0)))
    }
}

/// All lattice points within L1 distance `radius` of `center`, in lexicographic order.
pub fn l1_ball_points(center: &IntVector, radius: u64) -> Vec<IntVector> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(center.rank());
    fill_ball(center.coords(), radius as i64, &mut current, &mut out);
    out
}

fn fill_ball(center: &[i64], budget: i64, current: &mut Vec<i64>, out: &mut Vec<IntVector>) {
    let depth = current.len();
    if depth == center.len() {
        out.push(IntVector(current.clone()));
        return;
    }
    for offset in -budget..=budget {
        current.push(center[depth] + offset);
        fill_ball(center, budget - offset.abs(), current, out);
        current.pop();
    }
}

/// Closed L1 ball as a metric window.
pub fn lattice_ball(center: &IntVector, radius: u64, limits: Limits) -> Result<MetricWindow<L1Lattice>> {
    limits.check_points(l1_ball_size(center.rank(), radius))?;
    MetricWindow::with_limits(
        L1Lattice::new(center.rank()),
        l1_ball_points(center, radius),
        limits,
    )
}

/// Axis-aligned box `lower <= x <= upper` (coordinatewise) as a metric window.
pub fn lattice_box(lower: &IntVector, upper: &IntVector, limits: Limits) -> Result<MetricWindow<L1Lattice>> {
    if lower.rank() != upper.rank() {
        return Err(Error::Validation(format!(
            "box corners {lower} and {upper} have different ranks"
        )));
    }
    let mut size: u64 = 1;
    for (lo, hi) in lower.0.iter().zip(&upper.0) {
        let side = if hi >= lo { (hi - lo) as u64 + 1 } else { 0 };
        size = size.saturating_mul(side);
    }
    limits.check_points(size)?;
    let mut points = vec![Vec::new()];
    for (lo, hi) in lower.0.iter().zip(&upper.0) {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                (*lo..=*hi).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    MetricWindow::with_limits(
        L1Lattice::new(lower.rank()),
        points.into_iter().map(IntVector),
        limits,
    )
}

/// Number of lattice points in an L1 ball: sum_k 2^k C(n,k) C(r,k).
pub fn l1_ball_size(rank: usize, radius: u64) -> u64 {
    let mut total: u64 = 0;
    for k in 0..=rank.min(radius as usize) {
        let term = 2u64
            .saturating_pow(k as u32)
            .saturating_mul(binomial(rank as u64, k as u64))
            .saturating_mul(binomial(radius, k as u64));
        total = total.saturating_add(term);
    }
    total
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let p: IntVector = "(3,-2)".parse().unwrap();
        assert_eq!(p, IntVector(vec![3, -2]));
        assert_eq!(p.to_string(), "(3,-2)");
        assert_eq!("7".parse::<IntVector>().unwrap(), IntVector(vec![7]));
        assert!("(1,x)".parse::<IntVector>().is_err());
    }

    #[test]
    fn ball_sizes_match_enumeration() {
        for rank in 1..=3 {
            for r in 0..=6 {
                let pts = l1_ball_points(&IntVector::zero(rank), r);
                assert_eq!(pts.len() as u64, l1_ball_size(rank, r), "rank {rank} radius {r}");
            }
        }
        assert_eq!(l1_ball_size(2, 2), 13);
        assert_eq!(l1_ball_size(2, 60), 7321);
    }

    #[test]
    fn rank_mismatch_is_domain_error() {
        let m = L1Lattice::new(2);
        assert!(matches!(
            m.distance(&IntVector(vec![1]), &IntVector(vec![1, 2])),
            Err(Error::DomainMismatch { .. })
        ));
    }

    #[test]
    fn box_window_is_lexicographic() {
        let w = lattice_box(&IntVector(vec![0, 0]), &IntVector(vec![1, 1]), Limits::default()).unwrap();
        let shown: Vec<String> = w.points().iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
    }
}
