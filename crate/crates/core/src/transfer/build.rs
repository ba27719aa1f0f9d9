use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;

use super::plan::{pair_index, TransferPlan};
use crate::action::{project, ActionBundle, ElementOf, IsometricAction, PointOf, QuasiStabilizerWindow};
use crate::error::{Error, Result};
use crate::group::{Group, GroupWindow};
use crate::metric::{
    covers, is_r_disjoint, is_uniformly_bounded, Block, CoverWitness, Distance, Family, Metric,
};

/// The element of `pre` with least word length, ties broken by canonical order.
pub fn choose_anchor<G: Group>(window: &GroupWindow<G>, pre: &Block<G::Element>) -> G::Element {
    pre.iter()
        .min_by_key(|g| (window.word_length(g).unwrap_or(u32::MAX), (*g).clone()))
        .expect("blocks are nonempty")
        .clone()
}

/// Measured values behind each accepted precondition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreconditionReport {
    /// Per space family: required scale and measured minimum separation.
    pub space_families: Vec<(Distance, Option<Distance>)>,
    pub space_max_diameter: Option<Distance>,
    pub quasi_stabilizer_scale: Distance,
    /// Per quasi-stabilizer family: measured minimum separation.
    pub quasi_stabilizer_families: Vec<Option<Distance>>,
    pub quasi_stabilizer_max_diameter: Option<Distance>,
    pub quasi_stabilizer_points: usize,
}

fn disjointness_condition<P: Clone + std::fmt::Display>(
    condition: String,
    blocks: &[Block<P>],
    d: &crate::metric::Disjointness,
) -> Error {
    let v = d.violation.expect("failing disjointness has a violation");
    Error::precondition(
        condition,
        format!(
            "blocks {} and {} are at distance {}, not more than {}",
            blocks[v.first], blocks[v.second], v.distance, d.scale
        ),
    )
}

/// Checks both witnesses at the scales the plan demands. The first failing
/// condition is returned as an error naming it.
pub fn check_preconditions<A: IsometricAction>(
    bundle: &ActionBundle<A>,
    space_witness: &CoverWitness<PointOf<A>>,
    qs: &QuasiStabilizerWindow<A::Group>,
    qs_witness: &CoverWitness<ElementOf<A>>,
    plan: &TransferPlan,
) -> Result<PreconditionReport> {
    let space = bundle.space();
    if space_witness.families.len() != plan.m + 1 {
        return Err(Error::precondition(
            "m is the number of M-witness families minus one",
            format!("plan has m = {}, witness has {} families", plan.m, space_witness.families.len()),
        ));
    }
    let mut space_families = Vec::new();
    for (i, f) in space_witness.families.iter().enumerate() {
        let required = plan.space_scale(i)?;
        let d = is_r_disjoint(space, &f.blocks, required)?;
        if !d.holds {
            return Err(disjointness_condition(
                format!("M-witness family {i} must be lambda*r_{}-disjoint", (i + 1) * (plan.n + 1)),
                &f.blocks,
                &d,
            ));
        }
        space_families.push((required, d.min_separation));
    }
    let bounded = is_uniformly_bounded(space, &space_witness.families, plan.bound)?;
    if let Some(v) = bounded.violation {
        return Err(Error::precondition(
            "M-witness must be uniformly bounded by R",
            format!(
                "block {} of family {} has diameter {}, not below {}",
                space_witness.families[v.family].blocks[v.block], v.family, v.diameter, plan.bound
            ),
        ));
    }
    let covered = covers(space, &space_witness.families)?;
    if let Some(p) = covered.missing.first() {
        return Err(Error::precondition(
            "M-witness must cover the space window",
            format!("{} points are uncovered, first {p}", covered.missing.len()),
        ));
    }

    if qs.radius() < plan.bound {
        return Err(Error::precondition(
            "the quasi-stabilizer radius must be at least R",
            format!("W_{} supplied but R = {}", qs.radius(), plan.bound),
        ));
    }
    if qs_witness.families.len() > plan.n + 1 {
        return Err(Error::precondition(
            "A-witness has at most n+1 families",
            format!("{} families for n = {}", qs_witness.families.len(), plan.n),
        ));
    }
    let qs_scale = plan.quasi_stabilizer_scale()?;
    let mut quasi_stabilizer_families = Vec::new();
    for f in &qs_witness.families {
        let d = is_r_disjoint(qs.window(), &f.blocks, qs_scale)?;
        if !d.holds {
            return Err(disjointness_condition(
                "A-witness families must each be r_{(m+1)(n+1)}-disjoint".to_string(),
                &f.blocks,
                &d,
            ));
        }
        quasi_stabilizer_families.push(d.min_separation);
    }
    let qs_bounded = is_uniformly_bounded(qs.window(), &qs_witness.families, qs_witness.bound)?;
    if let Some(v) = qs_bounded.violation {
        return Err(Error::precondition(
            "A-witness must be uniformly bounded",
            format!("block {} of family {} has diameter {}", v.block, v.family, v.diameter),
        ));
    }
    let qs_covered = covers(qs.window(), &qs_witness.families)?;
    if let Some(p) = qs_covered.missing.first() {
        return Err(Error::precondition(
            "A-witness must cover W_R(x0)",
            format!("{} members are uncovered, first {p}", qs_covered.missing.len()),
        ));
    }
    Ok(PreconditionReport {
        space_families,
        space_max_diameter: bounded.max_diameter,
        quasi_stabilizer_scale: qs_scale,
        quasi_stabilizer_families,
        quasi_stabilizer_max_diameter: qs_bounded.max_diameter,
        quasi_stabilizer_points: qs.len(),
    })
}

/// Where a block of the transferred witness came from: block `space_block`
/// of space family `i` and block `qs_block` of quasi-stabilizer family `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockOrigin {
    pub i: usize,
    pub space_block: usize,
    pub j: usize,
    pub qs_block: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferFamily<E> {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub family: Family<E>,
    pub origins: Vec<BlockOrigin>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorEntry<E, P> {
    pub i: usize,
    pub space_block: usize,
    pub block: Block<P>,
    pub anchor: E,
    pub anchor_length: u32,
    pub preimage_size: usize,
    /// Preimage members `h` with `g_F^-1 h` outside the quasi-stabilizer window.
    pub clipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferReport<E, P> {
    pub plan: TransferPlan,
    pub preconditions: PreconditionReport,
    pub anchors: Vec<AnchorEntry<E, P>>,
    pub families: Vec<TransferFamily<E>>,
    pub qs_bound: Distance,
    pub notes: Vec<String>,
}

impl<E: Clone, P> TransferReport<E, P> {
    pub fn witness(&self) -> CoverWitness<E> {
        CoverWitness::new(self.families.iter().map(|f| f.family.clone()).collect())
    }
}

/// Replacement anchors keyed by `(i, space_block)`.
#[derive(Debug, Clone)]
pub struct TransferOptions<E> {
    pub anchor_overrides: BTreeMap<(usize, usize), E>,
}

impl<E> Default for TransferOptions<E> {
    fn default() -> Self {
        TransferOptions {
            anchor_overrides: BTreeMap::new(),
        }
    }
}

/// Builds `W_{i(n+1)+j} = { g_F A ∩ pi^-1(F) : F in F_i, A in A_j }` over the
/// group window, after checking the preconditions.
pub fn build_transfer<A: IsometricAction>(
    bundle: &ActionBundle<A>,
    space_witness: &CoverWitness<PointOf<A>>,
    qs: &QuasiStabilizerWindow<A::Group>,
    qs_witness: &CoverWitness<ElementOf<A>>,
    plan: &TransferPlan,
    options: &TransferOptions<ElementOf<A>>,
) -> Result<TransferReport<ElementOf<A>, PointOf<A>>> {
    let preconditions = check_preconditions(bundle, space_witness, qs, qs_witness, plan)?;
    let window = bundle.group_window();
    let group = bundle.group();
    let space = bundle.action().space();

    let mut owner: HashMap<&PointOf<A>, Vec<(usize, usize)>> = HashMap::new();
    for (i, f) in space_witness.families.iter().enumerate() {
        for (b, block) in f.blocks.iter().enumerate() {
            for p in block.iter() {
                owner.entry(p).or_default().push((i, b));
            }
        }
    }
    let mut preimages: BTreeMap<(usize, usize), Vec<ElementOf<A>>> = BTreeMap::new();
    for (i, f) in space_witness.families.iter().enumerate() {
        for b in 0..f.blocks.len() {
            preimages.insert((i, b), Vec::new());
        }
    }
    for g in window.elements() {
        if let Some(keys) = owner.get(&project(bundle, g)) {
            for key in keys {
                preimages.get_mut(key).expect("registered").push(g.clone());
            }
        }
    }

    let jobs: Vec<((usize, usize), Vec<ElementOf<A>>)> = preimages.into_iter().collect();
    let built: Vec<(AnchorEntry<ElementOf<A>, PointOf<A>>, Vec<(usize, Block<ElementOf<A>>, BlockOrigin)>)> = jobs
        .into_par_iter()
        .map(|((i, b), members)| {
            let f_block = &space_witness.families[i].blocks[b];
            let pre = Block::new(members).map_err(|_| Error::EmptyPreimage {
                block: f_block.to_string(),
            })?;
            let anchor = match options.anchor_overrides.get(&(i, b)) {
                Some(g) => g.clone(),
                None => choose_anchor(window, &pre),
            };
            let anchor_point = project(bundle, &anchor);
            let mut clipped = 0;
            for h in pre.iter() {
                let d = space.distance(&project(bundle, h), &anchor_point)?;
                if d > plan.bound {
                    return Err(Error::Consistency(format!(
                        "preimage element {h} of {f_block} lies outside g_F W_R(x0) for anchor {anchor}: \
                         d(pi(h), pi(g_F)) = {d} > R = {}",
                        plan.bound
                    )));
                }
                if !qs.contains(&group.left_quotient(&anchor, h)) {
                    clipped += 1;
                }
            }
            let pre_set: HashSet<&ElementOf<A>> = pre.iter().collect();
            let mut pieces = Vec::new();
            for (j, fam) in qs_witness.families.iter().enumerate() {
                let k = pair_index(i, j, plan.n)?;
                for (a, block) in fam.blocks.iter().enumerate() {
                    let piece = block
                        .iter()
                        .map(|x| group.multiply(&anchor, x))
                        .filter(|y| pre_set.contains(y));
                    if let Some(piece) = Block::nonempty(piece) {
                        pieces.push((
                            k,
                            piece,
                            BlockOrigin {
                                i,
                                space_block: b,
                                j,
                                qs_block: a,
                            },
                        ));
                    }
                }
            }
            let entry = AnchorEntry {
                i,
                space_block: b,
                block: f_block.clone(),
                anchor_length: window.word_length(&anchor).unwrap_or(u32::MAX),
                anchor,
                preimage_size: pre.len(),
                clipped,
            };
            Ok((entry, pieces))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut families: Vec<TransferFamily<ElementOf<A>>> = (0..plan.family_count())
        .map(|k| {
            let (i, j) = super::plan::index_pair(k, plan.n);
            Ok(TransferFamily {
                k,
                i,
                j,
                family: Family::new(Vec::new(), plan.scale(k)?, qs_witness.bound),
                origins: Vec::new(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut anchors = Vec::new();
    for (entry, pieces) in built {
        anchors.push(entry);
        for (k, block, origin) in pieces {
            families[k].family.blocks.push(block);
            families[k].origins.push(origin);
        }
    }

    let count = plan.family_count();
    let mut notes = vec![
        format!(
            "families are indexed k = i(n+1)+j with 0 <= i <= m = {}, 0 <= j <= n = {}: {count} families, \
             one more than the count (m+1)(n+1)-1",
            plan.m, plan.n
        ),
        "the cover is the union over all space families 0 <= i <= m, including i = 0".to_string(),
    ];
    if qs_witness.families.len() < plan.n + 1 {
        notes.push(format!(
            "the A-witness has {} families; indices j >= {} are empty",
            qs_witness.families.len(),
            qs_witness.families.len()
        ));
    }
    let clipped: usize = anchors.iter().map(|a| a.clipped).sum();
    if clipped > 0 {
        notes.push(format!(
            "{clipped} preimage elements h have g_F^-1 h outside the finite W_R window; \
             they are covered only if some other translate reaches them"
        ));
    }

    Ok(TransferReport {
        plan: plan.clone(),
        preconditions,
        anchors,
        families,
        qs_bound: qs_witness.bound,
        notes,
    })
}
