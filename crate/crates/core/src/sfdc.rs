//! Straight finite decomposition complexity: exact verification of
//! decomposition steps and chains of metric families inside one ambient
//! window.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::metric::{
    is_r_disjoint, is_uniformly_bounded, Block, Boundedness, CoverWitness, Disjointness, Distance, Family, Metric,
    IntVector, MetricWindow, ScaleSequence,
};

/// Which way a chain is read: step `i` splits every member of family
/// `i - 1` into two `r_i`-disjoint subfamilies whose sets belong to family
/// `i`, starting from the whole space and ending at a bounded family.
pub const CHAIN_DIRECTION: &str =
    "step i decomposes each member of X_(i-1) into r_i-disjoint families U, V with U ∪ V ⊆ X_i; X_0 is the input family, X_n must be uniformly bounded";

/// A finite family of subsets of the ambient window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricFamily<P> {
    pub members: Vec<Block<P>>,
}

impl<P: Ord + Clone> MetricFamily<P> {
    pub fn new(members: Vec<Block<P>>) -> Self {
        MetricFamily { members }
    }
}

/// The two families `U`, `V` for one source member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<P> {
    pub u: Vec<Block<P>>,
    pub v: Vec<Block<P>>,
}

/// One decomposition per member of the source family, in member order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionStep<P> {
    pub pieces: Vec<Decomposition<P>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberCheck<P> {
    pub member: usize,
    pub u: Disjointness,
    pub v: Disjointness,
    /// Points of the member not covered by `U ∪ V`.
    pub missing: Vec<P>,
    /// Pieces that are not subsets of the member.
    pub escaping: Vec<Block<P>>,
    /// Pieces that are not members of the target family.
    pub not_in_target: Vec<Block<P>>,
    pub failures: Vec<String>,
}

impl<P> MemberCheck<P> {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport<P> {
    pub r: Distance,
    pub members: Vec<MemberCheck<P>>,
    pub passed: bool,
}

impl<P> StepReport<P> {
    pub fn failures(&self) -> impl Iterator<Item = &String> {
        self.members.iter().flat_map(|m| m.failures.iter())
    }
}

/// Checks, for every source member `X`: `U` and `V` are `r`-disjoint,
/// their sets are subsets of `X` covering it, and each belongs to `target`.
pub fn verify_decomposition_step<M: Metric>(
    window: &MetricWindow<M>,
    source: &MetricFamily<M::Point>,
    target: &MetricFamily<M::Point>,
    step: &DecompositionStep<M::Point>,
    r: Distance,
) -> Result<StepReport<M::Point>> {
    if step.pieces.len() != source.members.len() {
        return Err(Error::Validation(format!(
            "step has {} decompositions for {} source members",
            step.pieces.len(),
            source.members.len()
        )));
    }
    let targets: HashSet<&Block<M::Point>> = target.members.iter().collect();
    let mut members = Vec::new();
    for (index, (x, dec)) in source.members.iter().zip(&step.pieces).enumerate() {
        let u = is_r_disjoint(window, &dec.u, r)?;
        let v = is_r_disjoint(window, &dec.v, r)?;
        let pieces: Vec<&Block<M::Point>> = dec.u.iter().chain(&dec.v).collect();
        let covered: HashSet<&M::Point> = pieces.iter().flat_map(|b| b.iter()).collect();
        let missing: Vec<M::Point> = x.iter().filter(|p| !covered.contains(p)).cloned().collect();
        let escaping: Vec<Block<M::Point>> = pieces.iter().filter(|b| !b.is_subset_of(x)).map(|b| (*b).clone()).collect();
        let not_in_target: Vec<Block<M::Point>> =
            pieces.iter().filter(|b| !targets.contains(*b)).map(|b| (*b).clone()).collect();

        let mut failures = Vec::new();
        for (name, d) in [("U", &u), ("V", &v)] {
            if let Some(s) = d.violation {
                failures.push(format!(
                    "member {index}: {name} is not {r}-disjoint (blocks {} and {} at distance {})",
                    s.first, s.second, s.distance
                ));
            }
        }
        if let Some(p) = missing.first() {
            failures.push(format!("member {index}: U ∪ V misses {} points, first {p}", missing.len()));
        }
        if let Some(b) = escaping.first() {
            failures.push(format!("member {index}: piece {b} is not a subset of the member"));
        }
        if let Some(b) = not_in_target.first() {
            failures.push(format!("member {index}: piece {b} is not in the target family"));
        }
        members.push(MemberCheck {
            member: index,
            u,
            v,
            missing,
            escaping,
            not_in_target,
            failures,
        });
    }
    let passed = members.iter().all(|m| m.holds());
    Ok(StepReport { r, members, passed })
}

/// A chain `X_0, ..., X_n` with its decomposition steps, scales and bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SfdcChain<P> {
    /// The `i`-th listed scale is used by step `i` (counting from one).
    pub scales: ScaleSequence,
    pub bound: Distance,
    pub families: Vec<MetricFamily<P>>,
    pub steps: Vec<DecompositionStep<P>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport<P> {
    pub direction: &'static str,
    pub steps: Vec<StepReport<P>>,
    pub terminal: Boundedness,
    pub passed: bool,
}

/// Verifies every step at its scale and the terminal family against the
/// strict bound. Shape mismatches are errors raised before any checking.
pub fn verify_sfdc_chain<M: Metric>(
    window: &MetricWindow<M>,
    chain: &SfdcChain<M::Point>,
) -> Result<ChainReport<M::Point>> {
    let n = chain.steps.len();
    if chain.families.len() != n + 1 {
        return Err(Error::Validation(format!(
            "a chain with {n} steps needs {} families, found {}",
            n + 1,
            chain.families.len()
        )));
    }
    for (i, step) in chain.steps.iter().enumerate() {
        if step.pieces.len() != chain.families[i].members.len() {
            return Err(Error::Validation(format!(
                "step {} has {} decompositions for {} members of X_{i}",
                i + 1,
                step.pieces.len(),
                chain.families[i].members.len()
            )));
        }
    }
    let scales: Vec<Distance> = (0..n).map(|i| chain.scales.get(i)).collect::<Result<_>>()?;
    let mut steps = Vec::new();
    for (i, step) in chain.steps.iter().enumerate() {
        steps.push(verify_decomposition_step(
            window,
            &chain.families[i],
            &chain.families[i + 1],
            step,
            scales[i],
        )?);
    }
    let last = chain.families.last().expect("at least one family");
    let terminal = is_uniformly_bounded(
        window,
        &[Family::new(last.members.clone(), Distance::ZERO, chain.bound)],
        chain.bound,
    )?;
    let passed = steps.iter().all(|s| s.passed) && terminal.holds;
    Ok(ChainReport {
        direction: CHAIN_DIRECTION,
        steps,
        terminal,
        passed,
    })
}

/// Largest member count accepted by [`search_decomposition`].
pub const SEARCH_LIMIT: usize = 24;

/// Exhaustive search for `r`-disjoint `U`, `V` drawn from `candidates`
/// (subsets of `x`) that cover `x`. Points are covered in order; each
/// candidate through the first uncovered point is tried in `U`, then in `V`.
pub fn search_decomposition<M: Metric>(
    window: &MetricWindow<M>,
    x: &Block<M::Point>,
    candidates: &[Block<M::Point>],
    r: Distance,
) -> Result<Option<Decomposition<M::Point>>> {
    if x.len() > SEARCH_LIMIT {
        return Err(Error::Unsupported(format!(
            "decomposition search is limited to {SEARCH_LIMIT} points, member has {}",
            x.len()
        )));
    }
    let pool: Vec<&Block<M::Point>> = candidates.iter().filter(|c| c.is_subset_of(x)).collect();
    let k = pool.len();
    // far[a][b]: candidates a and b are more than r apart.
    let mut far = vec![vec![false; k]; k];
    for a in 0..k {
        for b in (a + 1)..k {
            let mut best: Option<Distance> = None;
            for p in pool[a].iter() {
                for q in pool[b].iter() {
                    let d = window.distance(p, q)?;
                    best = Some(best.map_or(d, |m| m.min(d)));
                }
            }
            let apart = best.is_none_or(|d| d > r);
            far[a][b] = apart;
            far[b][a] = apart;
        }
    }
    let points = x.members();
    let through: Vec<Vec<usize>> = points
        .iter()
        .map(|p| (0..k).filter(|&c| pool[c].contains(p)).collect())
        .collect();

    struct State {
        sides: [Vec<usize>; 2],
        cover: Vec<u32>,
    }
    fn go(
        state: &mut State,
        points_len: usize,
        through: &[Vec<usize>],
        pool_members: &[Vec<usize>],
        far: &[Vec<bool>],
    ) -> bool {
        let Some(next) = (0..points_len).find(|&i| state.cover[i] == 0) else {
            return true;
        };
        for &c in &through[next] {
            for side in 0..2 {
                if state.sides[side].iter().all(|&o| far[o][c]) {
                    state.sides[side].push(c);
                    for &i in &pool_members[c] {
                        state.cover[i] += 1;
                    }
                    if go(state, points_len, through, pool_members, far) {
                        return true;
                    }
                    for &i in &pool_members[c] {
                        state.cover[i] -= 1;
                    }
                    state.sides[side].pop();
                }
            }
        }
        false
    }
    let pool_members: Vec<Vec<usize>> = pool
        .iter()
        .map(|b| b.iter().filter_map(|p| points.binary_search(p).ok()).collect())
        .collect();
    let mut state = State {
        sides: [Vec::new(), Vec::new()],
        cover: vec![0; points.len()],
    };
    if !go(&mut state, points.len(), &through, &pool_members, &far) {
        return Ok(None);
    }
    let pick = |side: &Vec<usize>| side.iter().map(|&c| pool[c].clone()).collect();
    Ok(Some(Decomposition {
        u: pick(&state.sides[0]),
        v: pick(&state.sides[1]),
    }))
}

/// Re-packages a cover witness `F_0, ..., F_m` of the whole window as a
/// chain of `m + 1` steps. With `rest_0` the window and `rest_{i+1}` what
/// `F_0 .. F_i` leave uncovered, step `i + 1` splits `rest_i` into
/// `U = F_i ∩ rest_i` and `V = {rest_{i+1}}`, and carries every earlier
/// piece over as itself. Step `i + 1` runs at the scale of `F_i`.
pub fn chain_from_cover_witness<M: Metric>(
    window: &MetricWindow<M>,
    witness: &CoverWitness<M::Point>,
) -> Result<SfdcChain<M::Point>> {
    let everything = Block::new(window.points().iter().cloned())?;
    let mut families = vec![MetricFamily::new(vec![everything.clone()])];
    let mut steps = Vec::new();
    let mut rest = Some(everything);
    let mut done: Vec<Block<M::Point>> = Vec::new();
    for f in &witness.families {
        let mut pieces: Vec<Decomposition<M::Point>> = done
            .iter()
            .map(|b| Decomposition {
                u: vec![b.clone()],
                v: Vec::new(),
            })
            .collect();
        let mut next_done = done.clone();
        if let Some(current) = rest.take() {
            let u: Vec<Block<M::Point>> = f
                .blocks
                .iter()
                .filter_map(|b| Block::nonempty(b.iter().filter(|p| current.contains(p)).cloned()))
                .collect();
            let used: HashSet<&M::Point> = u.iter().flat_map(|b| b.iter()).collect();
            rest = Block::nonempty(current.iter().filter(|p| !used.contains(p)).cloned());
            next_done.extend(u.iter().cloned());
            pieces.push(Decomposition {
                u,
                v: rest.iter().cloned().collect(),
            });
        }
        steps.push(DecompositionStep { pieces });
        let mut members = next_done.clone();
        members.extend(rest.iter().cloned());
        families.push(MetricFamily::new(members));
        done = next_done;
    }
    if let Some(r) = &rest {
        return Err(Error::Validation(format!(
            "the witness leaves {} window points uncovered",
            r.len()
        )));
    }
    let scales = ScaleSequence::non_decreasing(witness.scales(), crate::metric::Extension::None)?;
    Ok(SfdcChain {
        scales,
        bound: witness.bound,
        families,
        steps,
    })
}

/// Repeatedly cuts `[lo, hi]` in Z: step `i` splits every current interval
/// into consecutive pieces of length `lengths[i]`, alternating between `U`
/// and `V`. Same-side pieces at step `i` are `lengths[i] + 1` apart.
pub fn nested_interval_chain(
    lo: i64,
    hi: i64,
    lengths: &[i64],
    scales: ScaleSequence,
    bound: Distance,
) -> Result<SfdcChain<IntVector>> {
    if lengths.iter().any(|&l| l < 1) {
        return Err(Error::Validation("piece lengths must be positive".into()));
    }
    let interval = |a: i64, b: i64| Block::new((a..=b).map(|x| IntVector(vec![x])));
    let mut current = vec![interval(lo, hi)?];
    let mut families = vec![MetricFamily::new(current.clone())];
    let mut steps = Vec::new();
    for &len in lengths {
        let mut pieces = Vec::new();
        let mut next = Vec::new();
        for block in &current {
            let (a, b) = (block.first().0[0], block.members().last().expect("nonempty").0[0]);
            let mut dec = Decomposition { u: Vec::new(), v: Vec::new() };
            let mut start = a;
            let mut side = 0;
            while start <= b {
                let piece = interval(start, (start + len - 1).min(b))?;
                next.push(piece.clone());
                if side == 0 {
                    dec.u.push(piece);
                } else {
                    dec.v.push(piece);
                }
                side = 1 - side;
                start += len;
            }
            pieces.push(dec);
        }
        steps.push(DecompositionStep { pieces });
        families.push(MetricFamily::new(next.clone()));
        current = next;
    }
    Ok(SfdcChain {
        scales,
        bound,
        families,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{interval_cover, product_cover};
    use crate::limits::Limits;
    use crate::metric::{lattice_ball, lattice_box, Extension, IntVector, L1Lattice};

    fn d(v: u64) -> Distance {
        Distance::integer(v)
    }

    fn z(lo: i64, hi: i64) -> MetricWindow<L1Lattice> {
        lattice_box(&IntVector(vec![lo]), &IntVector(vec![hi]), Limits::default()).unwrap()
    }

    fn interval(lo: i64, hi: i64) -> Block<IntVector> {
        Block::new((lo..=hi).map(|x| IntVector(vec![x]))).unwrap()
    }

    /// Splits `[lo, hi]` into consecutive length-`len` intervals, alternating U/V.
    fn split(lo: i64, hi: i64, len: i64) -> Decomposition<IntVector> {
        let mut dec = Decomposition { u: Vec::new(), v: Vec::new() };
        let mut start = lo;
        let mut side = 0;
        while start <= hi {
            let block = interval(start, (start + len - 1).min(hi));
            if side == 0 { dec.u.push(block) } else { dec.v.push(block) }
            side = 1 - side;
            start += len;
        }
        dec
    }

    #[test]
    fn decomposition_step_examples() {
        let w = z(0, 23);
        let source = MetricFamily::new(vec![interval(0, 23)]);
        let dec = split(0, 23, 6);
        let target = MetricFamily::new(dec.u.iter().chain(&dec.v).cloned().collect());
        let step = DecompositionStep { pieces: vec![dec] };
        let ok = verify_decomposition_step(&w, &source, &target, &step, d(3)).unwrap();
        assert!(ok.passed);
        assert_eq!(ok.members[0].u.min_separation, Some(d(7)));
        let bad = verify_decomposition_step(&w, &source, &target, &step, d(7)).unwrap();
        assert!(!bad.passed);
        assert!(bad.failures().any(|f| f.contains("U is not 7-disjoint")));

        let point = MetricFamily::new(vec![interval(5, 5)]);
        let step = DecompositionStep {
            pieces: vec![Decomposition { u: vec![interval(5, 5)], v: Vec::new() }],
        };
        assert!(verify_decomposition_step(&w, &point, &point, &step, d(100)).unwrap().passed);
    }

    #[test]
    fn step_failures_name_the_condition() {
        let w = z(0, 23);
        let source = MetricFamily::new(vec![interval(0, 11)]);
        let dec = Decomposition { u: vec![interval(0, 5)], v: vec![interval(6, 12)] };
        let target = MetricFamily::new(vec![interval(0, 5)]);
        let report = verify_decomposition_step(&w, &source, &target, &DecompositionStep { pieces: vec![dec] }, d(1)).unwrap();
        let failures: Vec<&String> = report.failures().collect();
        assert!(failures.iter().any(|f| f.contains("not a subset")));
        assert!(failures.iter().any(|f| f.contains("not in the target")));
    }

    fn two_step_chain(scales: Vec<Distance>, bound: Distance) -> SfdcChain<IntVector> {
        let x0 = MetricFamily::new(vec![interval(-200, 200)]);
        let first = split(-200, 200, 12);
        let mids: Vec<Block<IntVector>> = first.u.iter().chain(&first.v).cloned().collect();
        let x1 = MetricFamily::new(mids.clone());
        let second: Vec<Decomposition<IntVector>> = mids
            .iter()
            .map(|b| split(b.first().0[0], b.members().last().unwrap().0[0], 3))
            .collect();
        let x2 = MetricFamily::new(second.iter().flat_map(|dec| dec.u.iter().chain(&dec.v)).cloned().collect());
        SfdcChain {
            scales: ScaleSequence::non_decreasing(scales, Extension::None).unwrap(),
            bound,
            families: vec![x0, x1, x2],
            steps: vec![DecompositionStep { pieces: vec![first] }, DecompositionStep { pieces: second }],
        }
    }

    #[test]
    fn two_step_chain_on_an_interval() {
        let w = z(-200, 200);
        let report = verify_sfdc_chain(&w, &two_step_chain(vec![d(2), d(3)], d(4))).unwrap();
        assert!(report.passed);
        assert_eq!(report.direction, CHAIN_DIRECTION);

        let boundary = verify_sfdc_chain(&w, &two_step_chain(vec![d(2), d(4)], d(4))).unwrap();
        assert!(!boundary.passed);
        assert!(boundary.steps[0].passed && !boundary.steps[1].passed);

        let tight = verify_sfdc_chain(&w, &two_step_chain(vec![d(2), d(3)], d(2))).unwrap();
        assert!(!tight.passed);
        assert_eq!(tight.terminal.max_diameter, Some(d(2)));
    }

    #[test]
    fn nested_chain_matches_the_hand_built_one() {
        let scales = ScaleSequence::non_decreasing(vec![d(2), d(3)], Extension::None).unwrap();
        let nested = nested_interval_chain(-200, 200, &[12, 3], scales, d(4)).unwrap();
        let manual = two_step_chain(vec![d(2), d(3)], d(4));
        for (a, b) in nested.families.iter().zip(&manual.families) {
            let mut a = a.members.clone();
            let mut b = b.members.clone();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
        assert!(verify_sfdc_chain(&z(-200, 200), &nested).unwrap().passed);
    }

    #[test]
    fn terminal_block_at_the_bound_fails() {
        let w = z(-200, 200);
        let mut chain = two_step_chain(vec![d(2), d(3)], d(4));
        chain.families[2].members.push(interval(0, 4));
        let report = verify_sfdc_chain(&w, &chain).unwrap();
        assert!(!report.terminal.holds);
        assert_eq!(report.terminal.violation.unwrap().diameter, d(4));
    }

    #[test]
    fn empty_chain_and_shape_errors() {
        let w = z(0, 3);
        let chain = SfdcChain {
            scales: ScaleSequence::non_decreasing(Vec::new(), Extension::None).unwrap(),
            bound: d(4),
            families: vec![MetricFamily::new(vec![interval(0, 3)])],
            steps: Vec::new(),
        };
        assert!(verify_sfdc_chain(&w, &chain).unwrap().passed);

        let mut broken = two_step_chain(vec![d(2), d(3)], d(4));
        broken.families.pop();
        assert!(matches!(verify_sfdc_chain(&z(-200, 200), &broken), Err(Error::Validation(_))));
    }

    #[test]
    fn non_decreasing_scales_with_zero_are_accepted() {
        let w = z(-200, 200);
        assert!(verify_sfdc_chain(&w, &two_step_chain(vec![d(0), d(0)], d(4))).unwrap().passed);
    }

    fn small_blocks(lo: i64, hi: i64, max_diameter: i64) -> Vec<Block<IntVector>> {
        let mut out = Vec::new();
        for start in lo..=hi {
            let end = (start + max_diameter).min(hi);
            let span = (end - start) as u32;
            for mask in 0..(1u32 << span) {
                let members = std::iter::once(start)
                    .chain((1..=span as i64).filter(|k| mask >> (k - 1) & 1 == 1).map(|k| start + k));
                out.push(Block::new(members.map(|x| IntVector(vec![x]))).unwrap());
            }
        }
        out
    }

    #[test]
    fn exhaustive_search_on_small_intervals() {
        let w = z(0, 11);
        let x = interval(0, 11);
        // Blocks of diameter at most 2, split at scale 3: found.
        let dec = search_decomposition(&w, &x, &small_blocks(0, 11, 2), d(3)).unwrap().unwrap();
        let target = MetricFamily::new(dec.u.iter().chain(&dec.v).cloned().collect());
        let step = DecompositionStep { pieces: vec![dec] };
        assert!(verify_decomposition_step(&w, &MetricFamily::new(vec![x.clone()]), &target, &step, d(3)).unwrap().passed);
        // Blocks of diameter below 4 cannot be split into two 5-disjoint families.
        assert!(search_decomposition(&w, &x, &small_blocks(0, 11, 3), d(5)).unwrap().is_none());
        // Blocks of diameter at most 2 cannot be split at scale 4.
        assert!(search_decomposition(&w, &x, &small_blocks(0, 11, 2), d(4)).unwrap().is_none());

        let big = interval(0, 30);
        assert!(matches!(
            search_decomposition(&z(0, 30), &big, &[], d(1)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn cover_witnesses_repackage_into_chains() {
        let line = z(-60, 60);
        let wit = interval_cover(d(4), &line).unwrap();
        let chain = chain_from_cover_witness(&line, &wit).unwrap();
        assert_eq!(chain.steps.len(), 2);
        assert!(verify_sfdc_chain(&line, &chain).unwrap().passed);

        let plane = lattice_ball(&IntVector(vec![0, 0]), 12, Limits::default()).unwrap();
        let wit = product_cover(d(2), &plane).unwrap();
        let chain = chain_from_cover_witness(&plane, &wit).unwrap();
        assert_eq!(chain.steps.len(), 4);
        assert!(verify_sfdc_chain(&plane, &chain).unwrap().passed);

        let mut partial = interval_cover(d(4), &line).unwrap();
        partial.families.pop();
        assert!(chain_from_cover_witness(&line, &partial).is_err());
    }
}
