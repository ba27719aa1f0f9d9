use std::collections::BTreeMap;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::metric::{Block, CoverWitness, Distance, Family, IntVector, Metric, MetricWindow};

/// Block length `L = floor(r) + 1`, the least integer with `L + 1 > r` gaps.
pub(crate) fn period_for(r: Distance) -> Result<i64> {
    if r < Distance::integer(1) {
        return Err(Error::precondition("scale r >= 1", format!("got r = {r}")));
    }
    Ok(r.floor() + 1)
}

/// Groups points by `key` into blocks, then blocks into families by `family_of(key)`.
pub(crate) fn keyed_families<P, K>(
    points: &[P],
    family_count: usize,
    key: impl Fn(&P) -> K,
    family_of: impl Fn(&K) -> usize,
    r: Distance,
    bound: Distance,
) -> Result<Vec<Family<P>>>
where
    P: Clone + Ord,
    K: Ord,
{
    let mut grouped: BTreeMap<K, Vec<P>> = BTreeMap::new();
    for p in points {
        grouped.entry(key(p)).or_default().push(p.clone());
    }
    let mut families: Vec<Vec<Block<P>>> = vec![Vec::new(); family_count];
    for (k, members) in grouped {
        families[family_of(&k)].push(Block::new(members)?);
    }
    Ok(families
        .into_iter()
        .map(|blocks| Family::new(blocks, r, bound))
        .collect())
}

fn require_rank<M: Metric<Point = IntVector>>(window: &MetricWindow<M>, rank: Option<usize>) -> Result<usize> {
    let ranks: Vec<usize> = window.points().iter().map(IntVector::rank).collect();
    let actual = match ranks.first() {
        Some(&first) if ranks.iter().any(|&r| r != first) => {
            return Err(Error::Validation("window mixes lattice ranks".into()))
        }
        Some(&first) => first,
        None => rank.unwrap_or(0),
    };
    match rank {
        Some(expected) if expected != actual => Err(Error::precondition(
            "lattice rank",
            format!("builder expects Z^{expected}, window is Z^{actual}"),
        )),
        _ => Ok(actual),
    }
}

/// Two families of consecutive length-`L` intervals, alternating, with
/// `L = floor(r) + 1`. Same-family gaps are `L + 1`, diameters `L - 1`.
pub fn interval_cover<M: Metric<Point = IntVector>>(r: Distance, window: &MetricWindow<M>) -> Result<CoverWitness<IntVector>> {
    require_rank(window, Some(1))?;
    let l = period_for(r)?;
    let families = keyed_families(
        window.points(),
        2,
        |p| Integer::div_floor(&p.0[0], &l),
        |k| k.rem_euclid(2) as usize,
        r,
        Distance::integer(l as u64),
    )?;
    Ok(CoverWitness::new(families))
}

/// Products of the interval blocks, one family per parity vector:
/// `2^n` families bounded by `n(L - 1) + 1`.
pub fn product_cover<M: Metric<Point = IntVector>>(r: Distance, window: &MetricWindow<M>) -> Result<CoverWitness<IntVector>> {
    let n = require_rank(window, None)?;
    if n > 16 {
        return Err(Error::Unsupported(format!("product cover of Z^{n} needs 2^{n} families")));
    }
    let l = period_for(r)?;
    let bound = Distance::integer((n as u64) * (l as u64 - 1) + 1);
    let families = keyed_families(
        window.points(),
        1 << n,
        |p| p.0.iter().map(|x| Integer::div_floor(x, &l)).collect::<Vec<i64>>(),
        |k| {
            k.iter()
                .enumerate()
                .map(|(i, ki)| (ki.rem_euclid(2) as usize) << i)
                .sum()
        },
        r,
        bound,
    )?;
    Ok(CoverWitness::new(families))
}

/// Staggered bricks in Z^n, measured in multiples of a unit length `u`.
///
/// The brick with index `k` has lower corner
/// `lo_d = u * (k_d * size_d + sum_{e > d} stagger[d][e] * k_e)` and side
/// `u * size_d` along axis `d`; its family is `sum_d color_d * k_d mod (n+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrickParams {
    pub unit: i64,
    pub sizes: Vec<i64>,
    /// `stagger[d][e]` for `d < e`; other entries are ignored.
    pub stagger: Vec<Vec<i64>>,
    pub colors: Vec<i64>,
}

impl BrickParams {
    pub fn rank(&self) -> usize {
        self.sizes.len()
    }

    fn shift(&self, d: usize, k: &[i64]) -> i64 {
        (d + 1..self.rank()).map(|e| self.stagger[d][e] * k[e]).sum()
    }

    /// Brick index containing `x`, resolved from the last axis down.
    pub fn index_of(&self, x: &[i64]) -> Vec<i64> {
        let n = self.rank();
        let mut k = vec![0; n];
        for d in (0..n).rev() {
            let offset = self.unit * self.shift(d, &k);
            k[d] = Integer::div_floor(&(x[d] - offset), &(self.unit * self.sizes[d]));
        }
        k
    }

    pub fn color(&self, k: &[i64]) -> usize {
        let n = self.rank() as i64;
        k.iter()
            .zip(&self.colors)
            .map(|(ki, ci)| ki * ci)
            .sum::<i64>()
            .rem_euclid(n + 1) as usize
    }

    /// Lower corner of brick `k`, in units.
    fn corner(&self, k: &[i64]) -> Vec<i64> {
        (0..self.rank())
            .map(|d| k[d] * self.sizes[d] + self.shift(d, k))
            .collect()
    }

    /// Whether every pair of distinct same-colored bricks has a full unit of
    /// empty space between them along some axis. Indices are compared up to
    /// `n + 1` apart along each axis, which is enough because bricks are at
    /// least one unit wide and staggers are smaller than the brick sizes.
    pub fn separates_colors(&self) -> bool {
        let n = self.rank();
        let reach = n as i64 + 1;
        let origin = vec![0; n];
        let base = self.corner(&origin);
        let mut delta = vec![-reach; n];
        loop {
            if delta.iter().any(|&x| x != 0) && self.color(&delta) == self.color(&origin) {
                let other = self.corner(&delta);
                let apart = (0..n).any(|d| {
                    other[d] > base[d] + self.sizes[d] || base[d] > other[d] + self.sizes[d]
                });
                if !apart {
                    return false;
                }
            }
            let mut d = 0;
            while d < n && delta[d] == reach {
                delta[d] = -reach;
                d += 1;
            }
            if d == n {
                return true;
            }
            delta[d] += 1;
        }
    }

    /// Upper bound on brick diameters, plus one (the strict bound).
    pub fn bound(&self) -> Distance {
        let span: i64 = self.sizes.iter().map(|s| self.unit * s - 1).sum();
        Distance::integer(span as u64 + 1)
    }

    /// Smallest parameters (by sizes, then staggers, then colors) whose
    /// same-colored bricks are unit-separated, with unit `u`.
    pub fn search(n: usize, unit: i64, max_size: i64) -> Option<BrickParams> {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|d| (d + 1..n).map(move |e| (d, e))).collect();
        for sizes in tuples(n, 1, max_size) {
            let stagger_ranges: Vec<i64> = pairs.iter().map(|&(d, _)| sizes[d] - 1).collect();
            for staggers in bounded_tuples(&stagger_ranges) {
                let mut stagger = vec![vec![0; n]; n];
                for (&(d, e), s) in pairs.iter().zip(&staggers) {
                    stagger[d][e] = *s;
                }
                for colors in tuples(n, 1, n as i64) {
                    let params = BrickParams {
                        unit,
                        sizes: sizes.clone(),
                        stagger: stagger.clone(),
                        colors,
                    };
                    if params.separates_colors() {
                        return Some(params);
                    }
                }
            }
        }
        None
    }
}

/// All `n`-tuples with entries in `lo..=hi`, last coordinate fastest.
fn tuples(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    bounded_tuples(&vec![hi - lo; n])
        .into_iter()
        .map(|t| t.into_iter().map(|x| x + lo).collect())
        .collect()
}

/// All tuples `t` with `0 <= t_i <= ranges_i`.
fn bounded_tuples(ranges: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &hi in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=hi).map(move |x| {
                    let mut t = prefix.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// `n + 1` families of staggered bricks. Rank 1 is the interval cover;
/// ranks 2 and 3 use searched brick parameters with unit `L - 1 = floor(r)`.
pub fn brick_cover<M: Metric<Point = IntVector>>(r: Distance, window: &MetricWindow<M>) -> Result<CoverWitness<IntVector>> {
    let n = require_rank(window, None)?;
    if n == 1 {
        return interval_cover(r, window);
    }
    let unit = period_for(r)? - 1;
    if n > 3 {
        return Err(Error::ConstructionFailed(format!(
            "no brick parameters are searched for Z^{n}; use the product cover"
        )));
    }
    let params = BrickParams::search(n, unit, 4).ok_or_else(|| {
        Error::ConstructionFailed(format!("brick search found no parameters for Z^{n}"))
    })?;
    brick_cover_with(&params, r, window)
}

/// Bricks with explicit parameters; nothing is checked here.
pub fn brick_cover_with<M: Metric<Point = IntVector>>(
    params: &BrickParams,
    r: Distance,
    window: &MetricWindow<M>,
) -> Result<CoverWitness<IntVector>> {
    let n = require_rank(window, Some(params.rank()))?;
    if params.unit < 1 || params.sizes.iter().any(|&s| s < 1) {
        return Err(Error::Validation("brick unit and sizes must be positive".into()));
    }
    let families = keyed_families(
        window.points(),
        n + 1,
        |p| params.index_of(&p.0),
        |k| params.color(k),
        r,
        params.bound(),
    )?;
    Ok(CoverWitness::new(families))
}
