//! Scenario runs and the single-stage operations behind the command line.
//! Everything here turns typed results into the serialized report forms.

use std::fmt::Display;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::action::{
    quasi_stabilizer, verify_action, verify_lipschitz, Abelianization, ActionBundle, ActionReport, CoordinateShift,
    CursorShift, ElementOf, IsometricAction, LeftMultiplication, LipschitzReport, PointOf, QuasiStabilizerWindow,
};
use crate::builders::{brick_cover, cluster_cover, interval_cover, product_cover, search_layered_cover, strip_cover};
use crate::error::{Error, Result};
use crate::format::{
    ActionSpec, ChainDoc, CoverRecipe, GroupSpec, Scenario, WindowSpec, WitnessDoc, REPORT_SCHEMA,
};
use crate::group::{
    ball_with_metric_radius, FreeWord, Group, GroupWindow, Heisenberg, HeisenbergElement, IntegerLattice, LampState,
    Lamplighter,
};
use crate::limits::Limits;
use crate::metric::{
    lattice_ball, lattice_box, verify_witness, CoverWitness, Distance, IntVector, Metric, MetricWindow,
    VerificationReport,
};
use crate::sfdc::{verify_sfdc_chain, ChainReport};
use crate::transfer::{
    build_transfer, plan_scales, verify_transfer, TransferOptions, TransferPlan, TransferReport, TransferVerification,
};
use crate::with_group;

/// Long point lists in reports are cut to this many entries.
const LISTED_POINTS: usize = 32;

/// Height functions for layered covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerKey {
    /// The central coordinate of a Heisenberg element.
    Center,
    /// The cursor of a lamplighter state.
    Cursor,
    /// One coordinate of a lattice point or Heisenberg element.
    Axis(usize),
}

impl FromStr for LayerKey {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text {
            "center" => Ok(LayerKey::Center),
            "cursor" => Ok(LayerKey::Cursor),
            _ => text
                .strip_prefix("axis:")
                .and_then(|k| k.parse().ok())
                .map(LayerKey::Axis)
                .ok_or_else(|| Error::parse("layer key (center, cursor, axis:K)", text)),
        }
    }
}

/// Point types the named cover recipes know how to handle.
pub trait RecipePoint: Clone + Ord + Hash + Display + FromStr<Err = Error> + Send + Sync + std::fmt::Debug {
    fn lattice_rank(&self) -> Option<usize> {
        None
    }

    /// The interval, product and brick recipes.
    fn lattice_cover<M: Metric<Point = Self>>(
        recipe: &CoverRecipe,
        _r: Distance,
        _window: &MetricWindow<M>,
    ) -> Result<CoverWitness<Self>> {
        Err(Error::Unsupported(format!("the {} recipe needs lattice points", recipe.kind())))
    }

    fn height(&self, _key: LayerKey) -> Option<i64> {
        None
    }
}

impl RecipePoint for IntVector {
    fn lattice_rank(&self) -> Option<usize> {
        Some(self.rank())
    }

    fn lattice_cover<M: Metric<Point = Self>>(
        recipe: &CoverRecipe,
        r: Distance,
        window: &MetricWindow<M>,
    ) -> Result<CoverWitness<Self>> {
        match recipe {
            CoverRecipe::Interval { .. } => interval_cover(r, window),
            CoverRecipe::Product { .. } => product_cover(r, window),
            CoverRecipe::Brick { .. } => brick_cover(r, window),
            other => Err(Error::Unsupported(format!("{} is not a lattice recipe", other.kind()))),
        }
    }

    fn height(&self, key: LayerKey) -> Option<i64> {
        match key {
            LayerKey::Axis(k) => self.0.get(k).copied(),
            _ => None,
        }
    }
}

impl RecipePoint for HeisenbergElement {
    fn height(&self, key: LayerKey) -> Option<i64> {
        match key {
            LayerKey::Center => Some(self.c),
            LayerKey::Axis(0) => Some(self.a),
            LayerKey::Axis(1) => Some(self.b),
            _ => None,
        }
    }
}

impl RecipePoint for LampState {
    fn height(&self, key: LayerKey) -> Option<i64> {
        match key {
            LayerKey::Cursor => Some(self.cursor),
            _ => None,
        }
    }
}

impl RecipePoint for FreeWord {}

/// Builds a cover of `window` at scale `r` by the named recipe. `strip`
/// supplies the strip cover where the caller knows how to build one.
pub fn build_recipe<M: Metric>(
    recipe: &CoverRecipe,
    r: Distance,
    window: &MetricWindow<M>,
    strip: Option<&dyn Fn(Distance) -> Result<CoverWitness<M::Point>>>,
) -> Result<CoverWitness<M::Point>>
where
    M::Point: RecipePoint,
{
    match recipe {
        CoverRecipe::Interval { .. } | CoverRecipe::Product { .. } | CoverRecipe::Brick { .. } => {
            M::Point::lattice_cover(recipe, r, window)
        }
        CoverRecipe::Strip { .. } => match strip {
            Some(build) => build(r),
            None => Err(Error::Unsupported(
                "the strip recipe needs a coordinate-shift quasi-stabilizer with one free axis".into(),
            )),
        },
        CoverRecipe::Layers { key, max_period, .. } => {
            let key: LayerKey = key.parse()?;
            if let Some(p) = window.points().first() {
                if p.height(key).is_none() {
                    return Err(Error::Unsupported(format!("layer key {key:?} is not defined on {p}")));
                }
            }
            search_layered_cover(r, window, *max_period, |p| p.height(key).unwrap_or(0))
        }
        CoverRecipe::Clusters { .. } => cluster_cover(r, window),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// A verifier found a violation.
    Fail,
    /// A transfer precondition does not hold; nothing was built.
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheckDoc {
    pub index: usize,
    pub blocks: usize,
    pub scale: Distance,
    pub min_separation: Option<Distance>,
    pub holds: bool,
}

/// The three witness predicates, with each violation named.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheckDoc {
    pub families: Vec<FamilyCheckDoc>,
    pub bound: Distance,
    pub max_diameter: Option<Distance>,
    pub bounded: bool,
    pub covered: bool,
    pub missing_count: usize,
    pub missing: Vec<String>,
    pub failures: Vec<String>,
    pub passed: bool,
}

fn listed<P: Display>(points: &[P]) -> Vec<String> {
    points.iter().take(LISTED_POINTS).map(|p| p.to_string()).collect()
}

impl WitnessCheckDoc {
    pub fn new<P: Display + Clone>(witness: &CoverWitness<P>, report: &VerificationReport<P>) -> Self {
        let mut failures = Vec::new();
        for f in &report.families {
            if let Some(v) = f.disjointness.violation {
                let fam = &witness.families[f.index];
                failures.push(format!(
                    "disjointness: family {} blocks {} and {} are at distance {}, not more than {}",
                    f.index, fam.blocks[v.first], fam.blocks[v.second], v.distance, f.disjointness.scale
                ));
            }
        }
        if let Some(v) = report.boundedness.violation {
            failures.push(format!(
                "boundedness: family {} block {} has diameter {}, not below {}",
                v.family, witness.families[v.family].blocks[v.block], v.diameter, report.boundedness.bound
            ));
        }
        if !report.coverage.holds {
            failures.push(format!(
                "coverage: {} window points are uncovered, first {}",
                report.coverage.missing.len(),
                report.coverage.missing.first().map_or_else(|| "-".to_string(), |p| p.to_string())
            ));
        }
        WitnessCheckDoc {
            families: report
                .families
                .iter()
                .map(|f| FamilyCheckDoc {
                    index: f.index,
                    blocks: f.blocks,
                    scale: f.disjointness.scale,
                    min_separation: f.disjointness.min_separation,
                    holds: f.disjointness.holds,
                })
                .collect(),
            bound: report.boundedness.bound,
            max_diameter: report.boundedness.max_diameter,
            bounded: report.boundedness.holds,
            covered: report.coverage.holds,
            missing_count: report.coverage.missing.len(),
            missing: listed(&report.coverage.missing),
            failures,
            passed: report.passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSection {
    /// `explicit` when the witness was supplied rather than built.
    pub recipe: String,
    pub scale: Distance,
    pub check: WitnessCheckDoc,
    pub witness: WitnessDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowDoc {
    pub radius: u32,
    pub metric_radius: u32,
    pub elements: usize,
    pub space_points: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionCheckDoc {
    pub radius: u32,
    pub identity_ok: bool,
    pub homomorphism_checks: u64,
    pub isometry_checks: u64,
    pub transitive: bool,
    pub failures: Vec<String>,
    pub holds: bool,
}

impl ActionCheckDoc {
    fn new(radius: u32, r: &ActionReport) -> Self {
        ActionCheckDoc {
            radius,
            identity_ok: r.identity_ok,
            homomorphism_checks: r.homomorphism_checks,
            isometry_checks: r.isometry_checks,
            transitive: r.transitive,
            failures: r.failures.clone(),
            holds: r.holds(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LipschitzDoc {
    pub lambda: Distance,
    pub steps_checked: u64,
    pub max_step_ratio: Distance,
    pub pairs_checked: u64,
    pub pairs_skipped: u64,
    pub violations: Vec<String>,
    pub holds: bool,
}

impl LipschitzDoc {
    fn new(r: &LipschitzReport) -> Self {
        LipschitzDoc {
            lambda: r.lambda,
            steps_checked: r.steps_checked,
            max_step_ratio: r.max_step_ratio,
            pairs_checked: r.pairs_checked,
            pairs_skipped: r.pairs_skipped,
            violations: r
                .violations
                .iter()
                .map(|v| {
                    format!(
                        "d(pi({}), pi({})) = {} > lambda * {}",
                        v.from, v.to, v.space_distance, v.group_distance
                    )
                })
                .collect(),
            holds: r.holds(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDoc {
    pub m: usize,
    pub n: usize,
    pub family_count: usize,
    /// `r_0, ..., r_{(m+1)(n+1)}`.
    pub scales: Vec<Distance>,
    /// `lambda * r_{(i+1)(n+1)}` for each space family.
    pub space_scales: Vec<Distance>,
    pub quasi_stabilizer_scale: Distance,
    /// `R`, the space witness bound.
    pub bound: Distance,
    pub margin: u32,
    pub core_radius: u32,
}

impl PlanDoc {
    fn new(plan: &TransferPlan) -> Result<Self> {
        Ok(PlanDoc {
            m: plan.m,
            n: plan.n,
            family_count: plan.family_count(),
            scales: (0..=plan.family_count()).map(|k| plan.scale(k)).collect::<Result<_>>()?,
            space_scales: plan_scales(&plan.scales, plan.lambda, plan.n, plan.m + 1)?,
            quasi_stabilizer_scale: plan.quasi_stabilizer_scale()?,
            bound: plan.bound,
            margin: plan.margin,
            core_radius: plan.core_radius(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiStabilizerDoc {
    pub radius: Distance,
    pub window_radius: u32,
    pub size: usize,
    pub members: Vec<String>,
}

impl QuasiStabilizerDoc {
    pub fn new<G: Group>(qs: &QuasiStabilizerWindow<G>, window_radius: u32) -> Self {
        QuasiStabilizerDoc {
            radius: qs.radius(),
            window_radius,
            size: qs.len(),
            members: qs.members().iter().map(|g| g.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorDoc {
    pub i: usize,
    pub space_block: usize,
    pub anchor: String,
    pub anchor_length: u32,
    pub preimage_size: usize,
    pub clipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferBlockDoc {
    pub space_block: usize,
    pub qs_block: usize,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferFamilyDoc {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub scale: Distance,
    pub bound: Distance,
    pub blocks: Vec<TransferBlockDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseDoc {
    pub bound: Distance,
    pub pairs: u64,
    pub min_separation: Option<Distance>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub blocks: usize,
    pub required: Distance,
    pub min_separation: Option<Distance>,
    pub disjoint: bool,
    pub distinct_space_blocks: CaseDoc,
    pub same_space_block: CaseDoc,
    pub scales_ordered: bool,
    pub max_diameter: Option<Distance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackDoc {
    pub i: usize,
    pub required: Distance,
    pub min_separation: Option<Distance>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferDoc {
    pub anchors: Vec<AnchorDoc>,
    pub families: Vec<TransferFamilyDoc>,
    pub certificates: Vec<CertificateDoc>,
    pub bound: Distance,
    pub max_diameter: Option<Distance>,
    pub bounded: bool,
    pub core_radius: u32,
    pub core_points: usize,
    pub covered: bool,
    pub missing_count: usize,
    pub missing: Vec<String>,
    pub measured_margin: Option<u32>,
    pub pullbacks: Vec<PullbackDoc>,
    pub family_count_ok: bool,
    pub passed: bool,
}

impl TransferDoc {
    fn new<E: Display + Clone + Ord, P>(report: &TransferReport<E, P>, check: &TransferVerification<E>) -> Self {
        let case = |c: &crate::transfer::CaseCheck| CaseDoc {
            bound: c.bound,
            pairs: c.pairs,
            min_separation: c.min_separation,
            holds: c.holds,
        };
        TransferDoc {
            anchors: report
                .anchors
                .iter()
                .map(|a| AnchorDoc {
                    i: a.i,
                    space_block: a.space_block,
                    anchor: a.anchor.to_string(),
                    anchor_length: a.anchor_length,
                    preimage_size: a.preimage_size,
                    clipped: a.clipped,
                })
                .collect(),
            families: report
                .families
                .iter()
                .map(|f| TransferFamilyDoc {
                    k: f.k,
                    i: f.i,
                    j: f.j,
                    scale: f.family.scale,
                    bound: f.family.bound,
                    blocks: f
                        .family
                        .blocks
                        .iter()
                        .zip(&f.origins)
                        .map(|(b, o)| TransferBlockDoc {
                            space_block: o.space_block,
                            qs_block: o.qs_block,
                            members: b.iter().map(|g| g.to_string()).collect(),
                        })
                        .collect(),
                })
                .collect(),
            certificates: check
                .families
                .iter()
                .map(|c| CertificateDoc {
                    k: c.k,
                    i: c.i,
                    j: c.j,
                    blocks: c.blocks,
                    required: c.required,
                    min_separation: c.min_separation,
                    disjoint: c.disjoint,
                    distinct_space_blocks: case(&c.distinct_space_blocks),
                    same_space_block: case(&c.same_space_block),
                    scales_ordered: c.scales_ordered,
                    max_diameter: c.max_diameter,
                })
                .collect(),
            bound: check.boundedness.bound,
            max_diameter: check.boundedness.max_diameter,
            bounded: check.boundedness.holds,
            core_radius: check.core_radius,
            core_points: check.core_points,
            covered: check.coverage.holds,
            missing_count: check.coverage.missing.len(),
            missing: listed(&check.coverage.missing),
            measured_margin: check.measured_margin,
            pullbacks: check
                .pullbacks
                .iter()
                .map(|p| PullbackDoc {
                    i: p.i,
                    required: p.required,
                    min_separation: p.min_separation,
                    holds: p.holds,
                })
                .collect(),
            family_count_ok: check.family_count_ok,
            passed: check.passed,
        }
    }

    fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.family_count_ok {
            out.push("transfer: family count or order differs from (m+1)(n+1)".to_string());
        }
        for c in &self.certificates {
            if !c.disjoint {
                out.push(format!(
                    "transfer: family {} is not {}-disjoint (min separation {})",
                    c.k,
                    c.required,
                    c.min_separation.map_or_else(|| "-".into(), |d| d.to_string())
                ));
            }
            if !c.distinct_space_blocks.holds {
                out.push(format!(
                    "transfer: family {} blocks from different space blocks come within {}",
                    c.k, c.distinct_space_blocks.bound
                ));
            }
            if !c.same_space_block.holds {
                out.push(format!(
                    "transfer: family {} blocks from one space block come within {}",
                    c.k, c.same_space_block.bound
                ));
            }
            if !c.scales_ordered {
                out.push(format!("transfer: scales out of order for family {}", c.k));
            }
        }
        if !self.bounded {
            out.push(format!("transfer: a block has diameter not below {}", self.bound));
        }
        if !self.covered {
            out.push(format!(
                "transfer: {} points of the core ball of radius {} are uncovered",
                self.missing_count, self.core_radius
            ));
        }
        for p in &self.pullbacks {
            if !p.holds {
                out.push(format!("transfer: pullback of space family {} is not {}-disjoint", p.i, p.required));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub scenario: Scenario,
    pub group: String,
    pub action: String,
    pub status: Status,
    pub failures: Vec<String>,
    pub window: WindowDoc,
    pub lambda: Distance,
    pub action_checks: ActionCheckDoc,
    pub lipschitz: LipschitzDoc,
    pub plan: PlanDoc,
    pub space_witness: WitnessSection,
    pub quasi_stabilizer: QuasiStabilizerDoc,
    pub qs_witness: WitnessSection,
    pub transfer: Option<TransferDoc>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// A few lines for a terminal.
    pub fn summary(&self) -> String {
        let mut lines = vec![
            format!("scenario {}: {} ({})", self.scenario.name, self.action, self.group),
            format!(
                "window N={} with {} elements, space window {} points, lambda = {}",
                self.window.radius, self.window.elements, self.window.space_points, self.lambda
            ),
            format!(
                "m = {}, n = {}, R = {}, quasi-stabilizer W_R has {} members",
                self.plan.m, self.plan.n, self.plan.bound, self.quasi_stabilizer.size
            ),
        ];
        if let Some(t) = &self.transfer {
            lines.push(format!(
                "transfer: {} families, bound {}, core radius {} ({} points) covered: {}, measured margin {}",
                t.families.len(),
                t.bound,
                t.core_radius,
                t.core_points,
                t.covered,
                t.measured_margin.map_or_else(|| "-".into(), |m| m.to_string())
            ));
            for c in &t.certificates {
                lines.push(format!(
                    "  W_{} (i={}, j={}): {} blocks, r_{} = {}, min separation {}",
                    c.k,
                    c.i,
                    c.j,
                    c.blocks,
                    c.k,
                    c.required,
                    c.min_separation.map_or_else(|| "-".into(), |d| d.to_string())
                ));
            }
        }
        for f in &self.failures {
            lines.push(format!("FAILED {f}"));
        }
        lines.push(format!(
            "status: {}",
            match self.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Rejected => "rejected",
            }
        ));
        lines.join("\n") + "\n"
    }
}

/// Overrides for a run: explicit witnesses replace the recipes.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub limits: Limits,
    pub space_witness: Option<WitnessDoc>,
    pub qs_witness: Option<WitnessDoc>,
}

/// Loads the group window and action named by the scenario and runs the
/// whole pipeline. Failed verifications and rejected preconditions produce
/// a report; other problems are errors.
pub fn run_scenario(scenario: &Scenario, options: &RunOptions) -> Result<Report> {
    scenario.validate()?;
    let (n, mr, limits) = (scenario.radius, scenario.metric_radius(), options.limits);
    match (&scenario.group, &scenario.action) {
        (GroupSpec::Lattice { rank }, ActionSpec::CoordinateShift { space_rank }) => {
            let action = CoordinateShift::new(*rank, *space_rank)?;
            let window = ball_with_metric_radius(IntegerLattice::new(*rank), n, mr, limits)?;
            let strip = move |r: Distance, qs: &QuasiStabilizerWindow<IntegerLattice>| strip_cover(r, qs, &action);
            run_typed(scenario, options, action, window, Some(&strip))
        }
        (GroupSpec::Heisenberg, ActionSpec::Abelianization) => {
            let window = ball_with_metric_radius(Heisenberg, n, mr, limits)?;
            run_typed(scenario, options, Abelianization::new(), window, None)
        }
        (GroupSpec::Lamplighter, ActionSpec::CursorShift) => {
            let window = ball_with_metric_radius(Lamplighter, n, mr, limits)?;
            run_typed(scenario, options, CursorShift::new(), window, None)
        }
        (g, ActionSpec::LeftMultiplication) => with_group!(g, group => {
            let window = ball_with_metric_radius(group, n, mr, limits)?;
            let action = LeftMultiplication::new(window.metric().clone());
            run_typed(scenario, options, action, window, None)
        }),
        (g, a) => Err(Error::Validation(format!("action {a:?} is not defined for group {g}"))),
    }
}

type StripBuilder<'a, G> = &'a dyn Fn(Distance, &QuasiStabilizerWindow<G>) -> Result<CoverWitness<<G as Group>::Element>>;

/// The space window as a serializable spec. Non-lattice spaces only occur
/// for self-actions, where the ball is centered at the identity basepoint.
fn space_window_spec<P: RecipePoint>(scenario: &Scenario, basepoint: &P, radius: Distance) -> WindowSpec {
    let radius = radius.floor().max(0);
    match basepoint.lattice_rank() {
        Some(_) => WindowSpec::LatticeBall {
            center: basepoint.to_string(),
            radius: radius as u64,
        },
        None => WindowSpec::GroupBall {
            group: scenario.group.clone(),
            radius: radius as u32,
            metric_radius: Some(scenario.metric_radius()),
        },
    }
}

fn run_typed<A>(
    scenario: &Scenario,
    options: &RunOptions,
    action: A,
    window: GroupWindow<A::Group>,
    strip: Option<StripBuilder<'_, A::Group>>,
) -> Result<Report>
where
    A: IsometricAction,
    PointOf<A>: RecipePoint,
    ElementOf<A>: RecipePoint,
{
    let basepoint: PointOf<A> = scenario.basepoint.parse()?;
    let action_name = action.name();
    let group_name = action.group().name();
    let bundle = ActionBundle::over_ball(action, window, basepoint)?;
    let window = bundle.group_window();
    let lambda = bundle.lambda();
    let scales = scenario.scales.strict()?;
    let mut failures = Vec::new();

    let check_radius = window.radius().min(3);
    let action_checks = ActionCheckDoc::new(check_radius, &verify_action(&bundle, check_radius, 8, 0)?);
    failures.extend(action_checks.failures.iter().map(|f| format!("action: {f}")));
    let lipschitz = LipschitzDoc::new(&verify_lipschitz(&bundle, window, 256, 0)?);
    failures.extend(lipschitz.violations.iter().map(|v| format!("lipschitz: {v}")));

    // Space witness at the largest required scale unless one is supplied.
    let space = bundle.space();
    let space_radius = lambda
        .checked_mul(&Distance::from(scenario.radius))
        .ok_or_else(|| Error::Validation("space radius overflows".into()))?;
    let space_spec = space_window_spec(scenario, bundle.basepoint(), space_radius);
    let (space_witness, space_recipe, space_scale) = match &options.space_witness {
        Some(doc) => {
            let w = doc.to_witness(|t| t.parse::<PointOf<A>>())?;
            let scale = w.families.iter().map(|f| f.scale).max().unwrap_or(Distance::ZERO);
            (w, "explicit".to_string(), scale)
        }
        None => {
            let rank = bundle.basepoint().lattice_rank().unwrap_or(0);
            let families = scenario.space_cover.family_count(rank);
            let scale = match scenario.space_cover.scale() {
                Some(s) => s,
                None => *plan_scales(&scales, lambda, scenario.n, families)?.last().expect("at least one family"),
            };
            let w = build_recipe(&scenario.space_cover, scale, space, None)?;
            (w, scenario.space_cover.kind().to_string(), scale)
        }
    };
    let space_check = WitnessCheckDoc::new(&space_witness, &verify_witness(space, &space_witness)?);
    failures.extend(space_check.failures.iter().map(|f| format!("space witness: {f}")));

    let plan = TransferPlan::new(
        scales,
        scenario.n,
        lambda,
        space_witness.families.len(),
        space_witness.bound,
        scenario.radius,
        scenario.core_margin,
    )?;
    let plan_doc = PlanDoc::new(&plan)?;

    let qs = quasi_stabilizer(&bundle, plan.bound, window)?;
    let (qs_witness, qs_recipe, qs_scale) = match &options.qs_witness {
        Some(doc) => {
            let w = doc.to_witness(|t| window.group().parse_element(t))?;
            let scale = w.families.iter().map(|f| f.scale).max().unwrap_or(Distance::ZERO);
            (w, "explicit".to_string(), scale)
        }
        None => {
            let scale = scenario.qs_cover.scale().unwrap_or(plan.quasi_stabilizer_scale()?);
            let qs_ref = &qs;
            let build_strip = strip.map(|s| move |r: Distance| s(r, qs_ref));
            let w = build_recipe(
                &scenario.qs_cover,
                scale,
                qs.window(),
                build_strip.as_ref().map(|f| f as &dyn Fn(Distance) -> Result<CoverWitness<ElementOf<A>>>),
            )?;
            (w, scenario.qs_cover.kind().to_string(), scale)
        }
    };
    let qs_check = WitnessCheckDoc::new(&qs_witness, &verify_witness(qs.window(), &qs_witness)?);
    failures.extend(qs_check.failures.iter().map(|f| format!("quasi-stabilizer witness: {f}")));
    let qs_spec = WindowSpec::GroupBall {
        group: scenario.group.clone(),
        radius: scenario.radius,
        metric_radius: scenario.metric_radius,
    };

    let mut notes = Vec::new();
    let mut status = if failures.is_empty() { Status::Pass } else { Status::Fail };
    let transfer = match build_transfer(&bundle, &space_witness, &qs, &qs_witness, &plan, &TransferOptions::default()) {
        Ok(built) => {
            notes.extend(built.notes.iter().cloned());
            let check = verify_transfer(&bundle, &space_witness, &built, &plan, plan.core_radius())?;
            let doc = TransferDoc::new(&built, &check);
            let transfer_failures = doc.failures();
            if !transfer_failures.is_empty() {
                status = Status::Fail;
            }
            failures.extend(transfer_failures);
            Some(doc)
        }
        Err(e @ Error::Precondition { .. }) => {
            status = Status::Rejected;
            failures.push(format!("transfer: {e}"));
            None
        }
        Err(e) => return Err(e),
    };

    Ok(Report {
        schema: REPORT_SCHEMA.to_string(),
        scenario: scenario.clone(),
        group: group_name,
        action: action_name,
        status,
        failures,
        window: WindowDoc {
            radius: window.radius(),
            metric_radius: scenario.metric_radius(),
            elements: window.len(),
            space_points: space.len(),
        },
        lambda,
        action_checks,
        lipschitz,
        plan: plan_doc,
        space_witness: WitnessSection {
            recipe: space_recipe,
            scale: space_scale,
            check: space_check,
            witness: WitnessDoc::from_witness(space_spec, &space_witness),
        },
        quasi_stabilizer: QuasiStabilizerDoc::new(&qs, window.radius()),
        qs_witness: WitnessSection {
            recipe: qs_recipe,
            scale: qs_scale,
            check: qs_check,
            witness: WitnessDoc::from_witness(qs_spec, &qs_witness),
        },
        transfer,
        notes,
    })
}

/// The elements of the ball of radius `radius`, with word lengths.
pub fn ball_listing(group: &GroupSpec, radius: u32, limits: Limits) -> Result<Vec<(String, u32)>> {
    with_group!(group, g => {
        let window = ball_with_metric_radius(g, radius, radius, limits)?;
        Ok(window
            .elements()
            .iter()
            .map(|e| (e.to_string(), window.word_length(e).unwrap_or(0)))
            .collect())
    })
}

/// `W_R(x0)` for the scenario's action over the ball of radius `window_radius`.
pub fn quasi_stabilizer_listing(
    scenario: &Scenario,
    radius: Distance,
    window_radius: u32,
    limits: Limits,
) -> Result<QuasiStabilizerDoc> {
    fn listing<A: IsometricAction>(
        action: A,
        window: GroupWindow<A::Group>,
        basepoint: &str,
        radius: Distance,
    ) -> Result<QuasiStabilizerDoc>
    where
        PointOf<A>: RecipePoint,
    {
        let bundle = ActionBundle::over_ball(action, window, basepoint.parse()?)?;
        let qs = quasi_stabilizer(&bundle, radius, bundle.group_window())?;
        Ok(QuasiStabilizerDoc::new(&qs, bundle.group_window().radius()))
    }
    let mr = 2 * window_radius;
    let bp = scenario.basepoint.as_str();
    match (&scenario.group, &scenario.action) {
        (GroupSpec::Lattice { rank }, ActionSpec::CoordinateShift { space_rank }) => listing(
            CoordinateShift::new(*rank, *space_rank)?,
            ball_with_metric_radius(IntegerLattice::new(*rank), window_radius, mr, limits)?,
            bp,
            radius,
        ),
        (GroupSpec::Heisenberg, ActionSpec::Abelianization) => listing(
            Abelianization::new(),
            ball_with_metric_radius(Heisenberg, window_radius, mr, limits)?,
            bp,
            radius,
        ),
        (GroupSpec::Lamplighter, ActionSpec::CursorShift) => listing(
            CursorShift::new(),
            ball_with_metric_radius(Lamplighter, window_radius, mr, limits)?,
            bp,
            radius,
        ),
        (g, ActionSpec::LeftMultiplication) => with_group!(g, group => {
            let window = ball_with_metric_radius(group, window_radius, mr, limits)?;
            let action = LeftMultiplication::new(window.metric().clone());
            listing(action, window, bp, radius)
        }),
        (g, a) => Err(Error::Validation(format!("action {a:?} is not defined for group {g}"))),
    }
}

fn lattice_window(spec: &WindowSpec, limits: Limits) -> Result<MetricWindow<crate::metric::L1Lattice>> {
    match spec {
        WindowSpec::LatticeBox { lower, upper } => lattice_box(&lower.parse()?, &upper.parse()?, limits),
        WindowSpec::LatticeBall { center, radius } => lattice_ball(&center.parse()?, *radius, limits),
        WindowSpec::GroupBall { .. } => Err(Error::Validation("expected a lattice window".into())),
    }
}

/// Builds a witness for a lattice window or a group ball by a recipe with
/// an explicit scale.
pub fn cover_window(recipe: &CoverRecipe, window: &WindowSpec, limits: Limits) -> Result<WitnessDoc> {
    let r = recipe
        .scale()
        .ok_or_else(|| Error::Validation("the cover recipe needs an explicit scale".into()))?;
    match window {
        WindowSpec::GroupBall {
            group,
            radius,
            metric_radius,
        } => with_group!(group, g => {
            let gw = ball_with_metric_radius(g, *radius, metric_radius.unwrap_or(2 * radius), limits)?;
            let w = build_recipe(recipe, r, gw.window(), None)?;
            Ok(WitnessDoc::from_witness(window.clone(), &w))
        }),
        _ => {
            let mw = lattice_window(window, limits)?;
            let w = build_recipe(recipe, r, &mw, None)?;
            Ok(WitnessDoc::from_witness(window.clone(), &w))
        }
    }
}

/// Re-verifies a serialized witness on its window.
pub fn check_witness(doc: &WitnessDoc, limits: Limits) -> Result<WitnessCheckDoc> {
    match &doc.window {
        WindowSpec::GroupBall {
            group,
            radius,
            metric_radius,
        } => with_group!(group, g => {
            let gw = ball_with_metric_radius(g, *radius, metric_radius.unwrap_or(2 * radius), limits)?;
            let w = doc.to_witness(|t| gw.group().parse_element(t))?;
            Ok(WitnessCheckDoc::new(&w, &verify_witness(gw.window(), &w)?))
        }),
        spec => {
            let mw = lattice_window(spec, limits)?;
            let rank = mw.points().first().map_or(0, IntVector::rank);
            let w = doc.to_witness(crate::format::lattice_parser(rank))?;
            Ok(WitnessCheckDoc::new(&w, &verify_witness(&mw, &w)?))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub step: usize,
    pub scale: Distance,
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCheckDoc {
    pub direction: String,
    pub steps: Vec<StepDoc>,
    pub terminal_bound: Distance,
    pub terminal_max_diameter: Option<Distance>,
    pub terminal_bounded: bool,
    pub passed: bool,
}

impl ChainCheckDoc {
    fn new<P>(report: &ChainReport<P>) -> Self {
        ChainCheckDoc {
            direction: report.direction.to_string(),
            steps: report
                .steps
                .iter()
                .enumerate()
                .map(|(i, s)| StepDoc {
                    step: i + 1,
                    scale: s.r,
                    failures: s.failures().cloned().collect(),
                    passed: s.passed,
                })
                .collect(),
            terminal_bound: report.terminal.bound,
            terminal_max_diameter: report.terminal.max_diameter,
            terminal_bounded: report.terminal.holds,
            passed: report.passed,
        }
    }
}

/// Verifies a serialized decomposition chain.
pub fn check_chain(doc: &ChainDoc, limits: Limits) -> Result<ChainCheckDoc> {
    match &doc.window {
        WindowSpec::GroupBall {
            group,
            radius,
            metric_radius,
        } => with_group!(group, g => {
            let gw = ball_with_metric_radius(g, *radius, metric_radius.unwrap_or(2 * radius), limits)?;
            let chain = doc.to_chain(|t| gw.group().parse_element(t))?;
            Ok(ChainCheckDoc::new(&verify_sfdc_chain(gw.window(), &chain)?))
        }),
        spec => {
            let mw = lattice_window(spec, limits)?;
            let rank = mw.points().first().map_or(0, IntVector::rank);
            let chain = doc.to_chain(crate::format::lattice_parser(rank))?;
            Ok(ChainCheckDoc::new(&verify_sfdc_chain(&mw, &chain)?))
        }
    }
}
