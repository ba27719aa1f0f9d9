//! Brute-force verification predicates. Every answer is computed by exact
//! pairwise distance evaluation; nothing is sampled.

use rayon::prelude::*;

use super::{Block, CoverWitness, Distance, Family, Metric, MetricWindow};
use crate::error::Result;

/// Minimum distance over all pairs `(p, q)` with `p` in `a` and `q` in `b`.
pub fn min_block_distance<M: Metric>(
    window: &MetricWindow<M>,
    a: &Block<M::Point>,
    b: &Block<M::Point>,
) -> Result<Distance> {
    for p in a.iter().chain(b.iter()) {
        window.require_member(p)?;
    }
    window
        .limits()
        .check_pairs(a.len() as u64 * b.len() as u64)?;
    raw_min_distance(window, a, b)
}

fn raw_min_distance<M: Metric>(
    window: &MetricWindow<M>,
    a: &Block<M::Point>,
    b: &Block<M::Point>,
) -> Result<Distance> {
    let mut best: Option<Distance> = None;
    for p in a.iter() {
        for q in b.iter() {
            let d = window.distance(p, q)?;
            if best.is_none_or(|cur| d < cur) {
                best = Some(d);
                if d.is_zero() {
                    return Ok(d);
                }
            }
        }
    }
    Ok(best.expect("blocks are nonempty"))
}

/// Maximum pairwise distance inside a block; zero for singletons.
pub fn diameter<M: Metric>(window: &MetricWindow<M>, a: &Block<M::Point>) -> Result<Distance> {
    for p in a.iter() {
        window.require_member(p)?;
    }
    let n = a.len() as u64;
    window.limits().check_pairs(n * n.saturating_sub(1) / 2)?;
    raw_diameter(window, a)
}

fn raw_diameter<M: Metric>(window: &MetricWindow<M>, a: &Block<M::Point>) -> Result<Distance> {
    let members = a.members();
    let mut best = Distance::ZERO;
    for (i, p) in members.iter().enumerate() {
        for q in &members[i + 1..] {
            best = best.max(window.distance(p, q)?);
        }
    }
    Ok(best)
}

/// Separation between two blocks of one family, identified by position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairSeparation {
    pub first: usize,
    pub second: usize,
    pub distance: Distance,
}

/// Minimum distances for every unordered pair of distinct blocks, in
/// `(first, second)` lexicographic order.
pub fn pairwise_separations<M: Metric>(
    window: &MetricWindow<M>,
    blocks: &[Block<M::Point>],
) -> Result<Vec<PairSeparation>> {
    for b in blocks {
        for p in b.iter() {
            window.require_member(p)?;
        }
    }
    let sizes: Vec<u64> = blocks.iter().map(|b| b.len() as u64).collect();
    let total: u64 = sizes.iter().sum();
    let squares: u64 = sizes.iter().map(|s| s * s).sum();
    window
        .limits()
        .check_pairs(total.saturating_mul(total).saturating_sub(squares) / 2)?;

    let pairs: Vec<(usize, usize)> = (0..blocks.len())
        .flat_map(|i| ((i + 1)..blocks.len()).map(move |j| (i, j)))
        .collect();
    pairs
        .into_par_iter()
        .map(|(i, j)| {
            raw_min_distance(window, &blocks[i], &blocks[j]).map(|distance| PairSeparation {
                first: i,
                second: j,
                distance,
            })
        })
        .collect()
}

/// Closest pair among `separations`, ties broken by position.
pub fn closest_pair(separations: &[PairSeparation]) -> Option<PairSeparation> {
    separations
        .iter()
        .min_by_key(|s| (s.distance, s.first, s.second))
        .copied()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disjointness {
    pub holds: bool,
    pub scale: Distance,
    /// `None` when the family has fewer than two blocks.
    pub min_separation: Option<Distance>,
    /// The closest pair of blocks when it is not separated by more than the scale.
    pub violation: Option<PairSeparation>,
}

/// Whether every pair of distinct blocks is at distance strictly greater than `r`.
pub fn is_r_disjoint<M: Metric>(
    window: &MetricWindow<M>,
    blocks: &[Block<M::Point>],
    r: Distance,
) -> Result<Disjointness> {
    let separations = pairwise_separations(window, blocks)?;
    Ok(disjointness_from(&separations, r))
}

pub(crate) fn disjointness_from(separations: &[PairSeparation], r: Distance) -> Disjointness {
    let closest = closest_pair(separations);
    let violation = closest.filter(|c| c.distance <= r);
    Disjointness {
        holds: violation.is_none(),
        scale: r,
        min_separation: closest.map(|c| c.distance),
        violation,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockViolation {
    pub family: usize,
    pub block: usize,
    pub diameter: Distance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundedness {
    pub holds: bool,
    pub bound: Distance,
    /// `None` when there are no blocks at all.
    pub max_diameter: Option<Distance>,
    /// The first block (family-major order) whose diameter is not below the bound.
    pub violation: Option<BlockViolation>,
}

/// Whether every block of every family has diameter strictly below `bound`.
pub fn is_uniformly_bounded<M: Metric>(
    window: &MetricWindow<M>,
    families: &[Family<M::Point>],
    bound: Distance,
) -> Result<Boundedness> {
    let diameters = family_diameters(window, families)?;
    let mut max_diameter = None;
    let mut violation = None;
    for (fi, ds) in diameters.iter().enumerate() {
        for (bi, d) in ds.iter().enumerate() {
            max_diameter = Some(max_diameter.map_or(*d, |m: Distance| m.max(*d)));
            if violation.is_none() && *d >= bound {
                violation = Some(BlockViolation {
                    family: fi,
                    block: bi,
                    diameter: *d,
                });
            }
        }
    }
    Ok(Boundedness {
        holds: violation.is_none(),
        bound,
        max_diameter,
        violation,
    })
}

/// Diameters of every block, indexed `[family][block]`.
pub fn family_diameters<M: Metric>(
    window: &MetricWindow<M>,
    families: &[Family<M::Point>],
) -> Result<Vec<Vec<Distance>>> {
    let mut budget = 0u64;
    for f in families {
        for b in &f.blocks {
            for p in b.iter() {
                window.require_member(p)?;
            }
            let n = b.len() as u64;
            budget = budget.saturating_add(n * n.saturating_sub(1) / 2);
        }
    }
    window.limits().check_pairs(budget)?;
    families
        .iter()
        .map(|f| {
            f.blocks
                .par_iter()
                .map(|b| raw_diameter(window, b))
                .collect::<Result<Vec<_>>>()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coverage<P> {
    pub holds: bool,
    /// Uncovered window points, in window order.
    pub missing: Vec<P>,
}

/// Whether every point of the window lies in some block of some family.
pub fn covers<M: Metric>(
    window: &MetricWindow<M>,
    families: &[Family<M::Point>],
) -> Result<Coverage<M::Point>> {
    let mut hit = vec![false; window.len()];
    for f in families {
        for b in &f.blocks {
            for p in b.iter() {
                match window.position(p) {
                    Some(i) => hit[i] = true,
                    None => window.require_member(p)?,
                }
            }
        }
    }
    let missing: Vec<M::Point> = window
        .points()
        .iter()
        .zip(&hit)
        .filter(|(_, h)| !**h)
        .map(|(p, _)| p.clone())
        .collect();
    Ok(Coverage {
        holds: missing.is_empty(),
        missing,
    })
}

/// Like [`covers`] but tolerates blocks containing points outside the window.
pub fn covers_subset<M: Metric>(
    window: &MetricWindow<M>,
    families: &[Family<M::Point>],
) -> Coverage<M::Point> {
    let mut hit = vec![false; window.len()];
    for f in families {
        for b in &f.blocks {
            for p in b.iter() {
                if let Some(i) = window.position(p) {
                    hit[i] = true;
                }
            }
        }
    }
    let missing: Vec<M::Point> = window
        .points()
        .iter()
        .zip(&hit)
        .filter(|(_, h)| !**h)
        .map(|(p, _)| p.clone())
        .collect();
    Coverage {
        holds: missing.is_empty(),
        missing,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCheck {
    pub index: usize,
    pub blocks: usize,
    pub disjointness: Disjointness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport<P> {
    pub families: Vec<FamilyCheck>,
    pub boundedness: Boundedness,
    pub coverage: Coverage<P>,
    pub passed: bool,
}

impl<P> VerificationReport<P> {
    pub fn disjointness_holds(&self) -> bool {
        self.families.iter().all(|f| f.disjointness.holds)
    }
}

/// Checks each family at its claimed scale, all blocks against the witness
/// bound, and coverage of the window.
pub fn verify_witness<M: Metric>(
    window: &MetricWindow<M>,
    witness: &CoverWitness<M::Point>,
) -> Result<VerificationReport<M::Point>> {
    let families = witness
        .families
        .iter()
        .enumerate()
        .map(|(index, f)| {
            Ok(FamilyCheck {
                index,
                blocks: f.blocks.len(),
                disjointness: is_r_disjoint(window, &f.blocks, f.scale)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let boundedness = is_uniformly_bounded(window, &witness.families, witness.bound)?;
    let coverage = covers(window, &witness.families)?;
    let passed =
        families.iter().all(|f| f.disjointness.holds) && boundedness.holds && coverage.holds;
    Ok(VerificationReport {
        families,
        boundedness,
        coverage,
        passed,
    })
}
