use num_integer::Integer;

use super::lattice::{keyed_families, period_for};
use crate::action::{CoordinateShift, QuasiStabilizerWindow};
use crate::error::{Error, Result};
use crate::group::{Group, IntegerLattice};
use crate::metric::{diameter, is_r_disjoint, CoverWitness, Distance, Family, Metric, MetricWindow};

/// Two alternating families of slabs `{bounded coordinates} x [kL, kL + L - 1]`
/// along the single free axis of a coordinate-shift quasi-stabilizer.
pub fn strip_cover(
    r: Distance,
    qs: &QuasiStabilizerWindow<IntegerLattice>,
    action: &CoordinateShift,
) -> Result<CoverWitness<<IntegerLattice as Group>::Element>> {
    let free_axes = action.rank() - action.space_rank();
    if free_axes != 1 {
        return Err(Error::Unsupported(format!(
            "strip cover needs exactly one free direction, Z^{} on Z^{} has {free_axes}",
            action.rank(),
            action.space_rank()
        )));
    }
    let axis = action.space_rank();
    let l = period_for(r)?;
    let big_r = qs.radius().floor() as u64;
    let bound = Distance::integer(2 * big_r + l as u64);
    let families = keyed_families(
        qs.members(),
        2,
        |g| Integer::div_floor(&g.0[axis], &l),
        |k| k.rem_euclid(2) as usize,
        r,
        bound,
    )?;
    Ok(CoverWitness::new(families))
}

/// Slabs of a real-valued height function: points with `key` in
/// `[kP, kP + P - 1]` form one block, alternating between two families.
/// The bound is the largest measured diameter plus one.
pub fn layered_cover<M: Metric>(
    r: Distance,
    window: &MetricWindow<M>,
    period: i64,
    key: impl Fn(&M::Point) -> i64,
) -> Result<CoverWitness<M::Point>> {
    if period < 1 {
        return Err(Error::Validation(format!("layer period must be positive, got {period}")));
    }
    let mut families = keyed_families(
        window.points(),
        2,
        |p| Integer::div_floor(&key(p), &period),
        |k| k.rem_euclid(2) as usize,
        r,
        Distance::ZERO,
    )?;
    let bound = measured_bound(window, &families)?;
    for f in &mut families {
        f.bound = bound;
    }
    Ok(CoverWitness::new(families))
}

/// Doubles the layer period from 1 until both families are `r`-disjoint.
pub fn search_layered_cover<M: Metric>(
    r: Distance,
    window: &MetricWindow<M>,
    max_period: i64,
    key: impl Fn(&M::Point) -> i64,
) -> Result<CoverWitness<M::Point>> {
    let mut period = 1;
    while period <= max_period {
        let witness = layered_cover(r, window, period, &key)?;
        let mut separated = true;
        for f in &witness.families {
            if !is_r_disjoint(window, &f.blocks, r)?.holds {
                separated = false;
                break;
            }
        }
        if separated {
            return Ok(witness);
        }
        period *= 2;
    }
    Err(Error::ConstructionFailed(format!(
        "no layer period up to {max_period} separates the layers at scale {r}"
    )))
}

/// One family: the classes of the relation "joined by a chain of steps of
/// length at most `r`", found by union-find over the window order.
pub fn cluster_cover<M: Metric>(r: Distance, window: &MetricWindow<M>) -> Result<CoverWitness<M::Point>> {
    let points = window.points();
    let n = points.len() as u64;
    window.limits().check_pairs(n * n.saturating_sub(1) / 2)?;
    let mut parent: Vec<usize> = (0..points.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if window.distance(&points[i], &points[j])? <= r {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..points.len()).map(|i| find(&mut parent, i)).collect();
    let mut families = keyed_families(points, 1, |p| roots[window.position(p).expect("own point")], |_| 0, r, Distance::ZERO)?;
    let bound = measured_bound(window, &families)?;
    families[0].bound = bound;
    Ok(CoverWitness::new(families))
}

fn measured_bound<M: Metric>(window: &MetricWindow<M>, families: &[Family<M::Point>]) -> Result<Distance> {
    let mut largest = Distance::ZERO;
    for f in families {
        for b in &f.blocks {
            largest = largest.max(diameter(window, b)?);
        }
    }
    Ok(largest.saturating_add(&Distance::integer(1)))
}
