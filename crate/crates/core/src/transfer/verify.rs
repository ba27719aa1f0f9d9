use std::collections::HashSet;

use super::build::TransferReport;
use super::plan::TransferPlan;
use crate::action::{preimage, ActionBundle, ElementOf, IsometricAction, PointOf};
use crate::error::Result;
use crate::metric::{
    covers_subset, is_r_disjoint, is_uniformly_bounded, pairwise_separations, Boundedness, Coverage, CoverWitness,
    Distance, Family,
};

/// Minimum separation over one class of block pairs, against its bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseCheck {
    pub bound: Distance,
    pub pairs: u64,
    pub min_separation: Option<Distance>,
    pub holds: bool,
}

impl CaseCheck {
    fn new(bound: Distance) -> Self {
        CaseCheck {
            bound,
            pairs: 0,
            min_separation: None,
            holds: true,
        }
    }

    fn record(&mut self, d: Distance) {
        self.pairs += 1;
        self.min_separation = Some(self.min_separation.map_or(d, |m| m.min(d)));
        if d <= self.bound {
            self.holds = false;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyCertificate {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub blocks: usize,
    /// `r_k`.
    pub required: Distance,
    pub min_separation: Option<Distance>,
    pub disjoint: bool,
    /// Pairs from different space blocks, against `r_{(i+1)(n+1)}`.
    pub distinct_space_blocks: CaseCheck,
    /// Pairs from one space block, against `r_{(m+1)(n+1)}`.
    pub same_space_block: CaseCheck,
    /// `r_k <= r_{(i+1)(n+1)} <= r_{(m+1)(n+1)}`, checked on the values.
    pub scales_ordered: bool,
    pub max_diameter: Option<Distance>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackCheck {
    pub i: usize,
    pub required: Distance,
    pub min_separation: Option<Distance>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferVerification<E> {
    pub families: Vec<FamilyCertificate>,
    pub boundedness: Boundedness,
    pub core_radius: u32,
    pub core_points: usize,
    pub coverage: Coverage<E>,
    /// Smallest margin `N - rho` such that the whole ball of radius `rho`
    /// is covered; `None` if even the identity is uncovered.
    pub measured_margin: Option<u32>,
    pub pullbacks: Vec<PullbackCheck>,
    pub family_count_ok: bool,
    pub passed: bool,
}

/// Re-checks a transfer from scratch with the metric predicates: each family
/// at its scale with the two cases reported separately, uniform boundedness
/// by the quasi-stabilizer witness bound, coverage of the core ball, and
/// disjointness of the pulled-back space families.
pub fn verify_transfer<A: IsometricAction>(
    bundle: &ActionBundle<A>,
    space_witness: &CoverWitness<PointOf<A>>,
    report: &TransferReport<ElementOf<A>, PointOf<A>>,
    plan: &TransferPlan,
    core_radius: u32,
) -> Result<TransferVerification<ElementOf<A>>> {
    let window = bundle.group_window();
    let metric_window = window.window();
    let top = plan.quasi_stabilizer_scale()?;

    let mut certificates = Vec::new();
    for tf in &report.families {
        let required = plan.scale(tf.k)?;
        let pullback = plan.pullback_scale(tf.i)?;
        let mut distinct = CaseCheck::new(pullback);
        let mut same = CaseCheck::new(top);
        let seps = pairwise_separations(metric_window, &tf.family.blocks)?;
        for s in &seps {
            let (a, b) = (tf.origins[s.first], tf.origins[s.second]);
            if (a.i, a.space_block) == (b.i, b.space_block) {
                same.record(s.distance);
            } else {
                distinct.record(s.distance);
            }
        }
        let min_separation = seps.iter().map(|s| s.distance).min();
        let diameters = is_uniformly_bounded(metric_window, std::slice::from_ref(&tf.family), report.qs_bound)?;
        certificates.push(FamilyCertificate {
            k: tf.k,
            i: tf.i,
            j: tf.j,
            blocks: tf.family.blocks.len(),
            required,
            min_separation,
            disjoint: min_separation.is_none_or(|d| d > required),
            distinct_space_blocks: distinct,
            same_space_block: same,
            scales_ordered: required <= pullback && pullback <= top,
            max_diameter: diameters.max_diameter,
        });
    }

    let families: Vec<Family<ElementOf<A>>> = report.families.iter().map(|f| f.family.clone()).collect();
    let boundedness = is_uniformly_bounded(metric_window, &families, report.qs_bound)?;
    let core = window.sub_ball(core_radius)?;
    let coverage = covers_subset(&core, &families);

    let covered: HashSet<&ElementOf<A>> = families.iter().flat_map(|f| f.blocks.iter().flat_map(|b| b.iter())).collect();
    let first_gap = window
        .elements()
        .iter()
        .filter(|g| !covered.contains(g))
        .filter_map(|g| window.word_length(g))
        .min();
    let measured_margin = match first_gap {
        None => Some(0),
        Some(0) => None,
        Some(len) => Some(window.radius() + 1 - len),
    };

    let mut pullbacks = Vec::new();
    for (i, f) in space_witness.families.iter().enumerate() {
        let required = plan.pullback_scale(i)?;
        let blocks: Vec<_> = f.blocks.iter().filter_map(|b| preimage(bundle, b, window)).collect();
        let d = is_r_disjoint(metric_window, &blocks, required)?;
        pullbacks.push(PullbackCheck {
            i,
            required,
            min_separation: d.min_separation,
            holds: d.holds,
        });
    }

    let family_count_ok = report.families.len() == plan.family_count()
        && report.families.iter().enumerate().all(|(k, f)| f.k == k);
    let passed = family_count_ok
        && certificates
            .iter()
            .all(|c| c.disjoint && c.distinct_space_blocks.holds && c.same_space_block.holds && c.scales_ordered)
        && boundedness.holds
        && coverage.holds
        && pullbacks.iter().all(|p| p.holds);
    Ok(TransferVerification {
        families: certificates,
        boundedness,
        core_radius,
        core_points: core.len(),
        coverage,
        measured_margin,
        pullbacks,
        family_count_ok,
        passed,
    })
}
