//! Isometric, transitive group actions on metric windows: the orbit map,
//! its Lipschitz constant, quasi-stabilizers and preimages.

mod shipped;

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{Group, GroupWindow, WordMetric};
use crate::limits::Limits;
use crate::metric::{Block, Distance, Metric, MetricWindow};

pub use shipped::{Abelianization, CoordinateShift, CursorShift, LeftMultiplication};

pub type ElementOf<A> = <<A as IsometricAction>::Group as Group>::Element;
pub type PointOf<A> = <<A as IsometricAction>::Space as Metric>::Point;

/// A group acting on a metric space by isometries.
pub trait IsometricAction: Send + Sync {
    type Group: Group;
    type Space: Metric + Clone;

    fn name(&self) -> String;

    fn group(&self) -> &Self::Group;

    fn space(&self) -> &Self::Space;

    fn act(&self, g: &ElementOf<Self>, x: &PointOf<Self>) -> PointOf<Self>;

    /// Closed ball in the space, as a finite window.
    fn space_ball(
        &self,
        center: &PointOf<Self>,
        radius: Distance,
        limits: Limits,
    ) -> Result<MetricWindow<Self::Space>>;
}

/// An action together with the finite group and space windows it is
/// evaluated on, a basepoint, and the cached Lipschitz constant of the
/// orbit map.
pub struct ActionBundle<A: IsometricAction> {
    action: A,
    group_window: GroupWindow<A::Group>,
    space: MetricWindow<A::Space>,
    basepoint: PointOf<A>,
    lambda: Distance,
}

impl<A: IsometricAction> std::fmt::Debug for ActionBundle<A> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ActionBundle")
            .field("action", &self.action.name())
            .field("group_window", &self.group_window)
            .field("space_points", &self.space.len())
            .field("basepoint", &self.basepoint)
            .field("lambda", &self.lambda)
            .finish()
    }
}

impl<A: IsometricAction> ActionBundle<A> {
    /// Validates the basepoint, computes the Lipschitz constant and checks
    /// that the orbit of the basepoint under the group window contains the
    /// space window.
    pub fn new(
        action: A,
        group_window: GroupWindow<A::Group>,
        space: MetricWindow<A::Space>,
        basepoint: PointOf<A>,
    ) -> Result<Self> {
        if !space.contains(&basepoint) {
            return Err(Error::Validation(format!(
                "basepoint {basepoint} is not in the space window"
            )));
        }
        let lambda = lipschitz_constant(&action, &basepoint, &space)?;
        let bundle = ActionBundle {
            action,
            group_window,
            space,
            basepoint,
            lambda,
        };
        let missed = bundle.orbit_gaps();
        if let Some(first) = missed.first() {
            return Err(Error::precondition(
                "finite-window transitivity",
                format!(
                    "{} space points (first {first}) are not hit by the orbit of {}",
                    missed.len(),
                    bundle.basepoint
                ),
            ));
        }
        Ok(bundle)
    }

    /// The space window is the closed ball of radius `lambda * N` around the
    /// basepoint, which the orbit of the radius-`N` group ball always reaches.
    pub fn over_ball(action: A, group_window: GroupWindow<A::Group>, basepoint: PointOf<A>) -> Result<Self> {
        let limits = group_window.window().limits();
        let lambda = max_generator_displacement(&action, &basepoint)?;
        let radius = lambda
            .checked_mul(&Distance::from(group_window.radius()))
            .ok_or_else(|| Error::Validation("space radius overflows".into()))?;
        let space = action.space_ball(&basepoint, radius, limits)?;
        ActionBundle::new(action, group_window, space, basepoint)
    }

    /// Replaces the cached Lipschitz constant (used to exercise the checks
    /// against a constant computed for a different action).
    pub fn with_lambda(mut self, lambda: Distance) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn action(&self) -> &A {
        &self.action
    }

    pub fn group(&self) -> &A::Group {
        self.action.group()
    }

    pub fn group_window(&self) -> &GroupWindow<A::Group> {
        &self.group_window
    }

    pub fn space(&self) -> &MetricWindow<A::Space> {
        &self.space
    }

    pub fn basepoint(&self) -> &PointOf<A> {
        &self.basepoint
    }

    pub fn lambda(&self) -> Distance {
        self.lambda
    }

    /// The action fixes the basepoint under every generator.
    pub fn is_degenerate(&self) -> bool {
        self.lambda.is_zero()
    }

    /// Space points not of the form `g x0` for `g` in the group window.
    pub fn orbit_gaps(&self) -> Vec<PointOf<A>> {
        let orbit: HashSet<PointOf<A>> = self
            .group_window
            .elements()
            .iter()
            .map(|g| project(self, g))
            .collect();
        self.space
            .points()
            .iter()
            .filter(|x| !orbit.contains(*x))
            .cloned()
            .collect()
    }
}

/// The orbit map `g -> g x0`.
pub fn project<A: IsometricAction>(bundle: &ActionBundle<A>, g: &ElementOf<A>) -> PointOf<A> {
    bundle.action.act(g, &bundle.basepoint)
}

fn max_generator_displacement<A: IsometricAction>(action: &A, basepoint: &PointOf<A>) -> Result<Distance> {
    let generators = action.group().generators();
    if generators.is_empty() {
        return Err(Error::Validation(format!(
            "{} has an empty generating set",
            action.group().name()
        )));
    }
    let mut best = Distance::ZERO;
    for s in &generators {
        best = best.max(action.space().distance(basepoint, &action.act(s, basepoint))?);
    }
    Ok(best)
}

/// `max { d(x0, s x0) : s in S }`. Zero is only accepted on a one-point space.
pub fn lipschitz_constant<A: IsometricAction>(
    action: &A,
    basepoint: &PointOf<A>,
    space: &MetricWindow<A::Space>,
) -> Result<Distance> {
    let lambda = max_generator_displacement(action, basepoint)?;
    if lambda.is_zero() && space.len() > 1 {
        return Err(Error::DegenerateAction {
            space_points: space.len(),
        });
    }
    Ok(lambda)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzViolation {
    pub from: String,
    pub to: String,
    pub space_distance: Distance,
    pub group_distance: Distance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzReport {
    pub lambda: Distance,
    pub steps_checked: u64,
    /// Largest `d(pi(gs), pi(g)) / d(gs, g)` over generator steps.
    pub max_step_ratio: Distance,
    pub pairs_checked: u64,
    /// Sampled pairs whose group distance lies outside the length table.
    pub pairs_skipped: u64,
    pub violations: Vec<LipschitzViolation>,
}

impl LipschitzReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `d(pi(gs), pi(g)) <= lambda d(gs, g)` for every `g` in the window
/// and every generator `s`, then `d(pi(g), pi(h)) <= lambda d(g, h)` on
/// `samples` seeded random pairs.
pub fn verify_lipschitz<A: IsometricAction>(
    bundle: &ActionBundle<A>,
    window: &GroupWindow<A::Group>,
    samples: usize,
    seed: u64,
) -> Result<LipschitzReport> {
    let group = bundle.group();
    let space = bundle.action.space();
    let generators = group.generators();
    let lambda = bundle.lambda;
    let mut report = LipschitzReport {
        lambda,
        steps_checked: 0,
        max_step_ratio: Distance::ZERO,
        pairs_checked: 0,
        pairs_skipped: 0,
        violations: Vec::new(),
    };

    let check = |g: &ElementOf<A>, h: &ElementOf<A>, dg: Distance, report: &mut LipschitzReport| -> Result<()> {
        let dm = space.distance(&project(bundle, g), &project(bundle, h))?;
        let allowed = lambda
            .checked_mul(&dg)
            .ok_or_else(|| Error::Validation("lambda * distance overflows".into()))?;
        if dm > allowed && report.violations.len() < 16 {
            report.violations.push(LipschitzViolation {
                from: g.to_string(),
                to: h.to_string(),
                space_distance: dm,
                group_distance: dg,
            });
        }
        Ok(())
    };

    for g in window.elements() {
        for s in &generators {
            let gs = group.multiply(g, s);
            let dg = window.metric().distance(g, &gs)?;
            report.steps_checked += 1;
            if !dg.is_zero() {
                let dm = space.distance(&project(bundle, &gs), &project(bundle, g))?;
                let ratio = Distance::new(dm.numer() * dg.denom(), dm.denom() * dg.numer())?;
                report.max_step_ratio = report.max_step_ratio.max(ratio);
            }
            check(&gs, g, dg, &mut report)?;
        }
    }

    let elements = window.elements();
    if !elements.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let g = &elements[rng.gen_range(0..elements.len())];
            let h = &elements[rng.gen_range(0..elements.len())];
            match window.metric().distance(g, h) {
                Ok(dg) => {
                    report.pairs_checked += 1;
                    check(g, h, dg, &mut report)?;
                }
                Err(Error::OutOfWindow { .. }) => report.pairs_skipped += 1,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionReport {
    pub identity_ok: bool,
    pub homomorphism_checks: u64,
    pub isometry_checks: u64,
    pub transitive: bool,
    pub failures: Vec<String>,
}

impl ActionReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Identity and homomorphism laws on the ball of radius `radius` (all pairs
/// `g, h`, acting on the basepoint and the first few space points), isometry
/// on `samples` random space pairs per group element of that ball, and
/// finite-window transitivity.
pub fn verify_action<A: IsometricAction>(
    bundle: &ActionBundle<A>,
    radius: u32,
    samples: usize,
    seed: u64,
) -> Result<ActionReport> {
    let group = bundle.group();
    let action = &bundle.action;
    let space = &bundle.space;
    let mut failures = Vec::new();
    let mut record = |msg: String| {
        if failures.len() < 16 {
            failures.push(msg);
        }
    };

    let identity = group.identity();
    let mut identity_ok = true;
    for x in space.points() {
        if action.act(&identity, x) != *x {
            identity_ok = false;
            record(format!("identity moves {x}"));
        }
    }

    let ball: Vec<&ElementOf<A>> = bundle
        .group_window
        .elements()
        .iter()
        .filter(|g| bundle.group_window.word_length(g).is_some_and(|l| l <= radius))
        .collect();
    let probes: Vec<&PointOf<A>> = std::iter::once(&bundle.basepoint)
        .chain(space.points().iter().take(4))
        .collect();
    let mut homomorphism_checks = 0;
    for g in &ball {
        for h in &ball {
            let gh = group.multiply(g, h);
            for x in &probes {
                homomorphism_checks += 1;
                if action.act(&gh, x) != action.act(g, &action.act(h, x)) {
                    record(format!("act({g}{h}, {x}) differs from act({g}, act({h}, {x}))"));
                }
            }
        }
    }

    let mut isometry_checks = 0;
    let points = space.points();
    if !points.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in &ball {
            for _ in 0..samples {
                let x = &points[rng.gen_range(0..points.len())];
                let y = &points[rng.gen_range(0..points.len())];
                isometry_checks += 1;
                let before = space.distance(x, y)?;
                let after = space.distance(&action.act(g, x), &action.act(g, y))?;
                if before != after {
                    record(format!("{g} changes d({x},{y}) from {before} to {after}"));
                }
            }
        }
    }

    let gaps = bundle.orbit_gaps();
    if let Some(first) = gaps.first() {
        record(format!("{} space points (first {first}) are outside the orbit", gaps.len()));
    }
    Ok(ActionReport {
        identity_ok,
        homomorphism_checks,
        isometry_checks,
        transitive: gaps.is_empty(),
        failures,
    })
}

/// The quasi-stabilizer `W_R(x0) = { g : d(x0, g x0) <= R }` inside a group
/// window, viewed as a metric window under the restricted word metric.
pub struct QuasiStabilizerWindow<G: Group> {
    radius: Distance,
    window: MetricWindow<WordMetric<G>>,
}

impl<G: Group> Clone for QuasiStabilizerWindow<G> {
    fn clone(&self) -> Self {
        QuasiStabilizerWindow {
            radius: self.radius,
            window: self.window.clone(),
        }
    }
}

impl<G: Group> std::fmt::Debug for QuasiStabilizerWindow<G> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuasiStabilizerWindow")
            .field("radius", &self.radius)
            .field("members", &self.window.len())
            .finish()
    }
}

impl<G: Group> QuasiStabilizerWindow<G> {
    pub fn radius(&self) -> Distance {
        self.radius
    }

    pub fn window(&self) -> &MetricWindow<WordMetric<G>> {
        &self.window
    }

    /// Members in group-window order.
    pub fn members(&self) -> &[G::Element] {
        self.window.points()
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn contains(&self, g: &G::Element) -> bool {
        self.window.contains(g)
    }

    pub fn as_block(&self) -> Option<Block<G::Element>> {
        Block::nonempty(self.members().iter().cloned())
    }
}

/// Members of the window with `d(x0, g x0) <= R`, cross-checked against the
/// preimage of the closed ball `B_R(x0)` computed separately.
pub fn quasi_stabilizer<A: IsometricAction>(
    bundle: &ActionBundle<A>,
    radius: Distance,
    window: &GroupWindow<A::Group>,
) -> Result<QuasiStabilizerWindow<A::Group>> {
    let space = bundle.action.space();
    let mut members = Vec::new();
    for g in window.elements() {
        if space.distance(&bundle.basepoint, &project(bundle, g))? <= radius {
            members.push(g.clone());
        }
    }
    let via_ball = ball_preimage(bundle, radius, window)?;
    if via_ball != members {
        return Err(Error::Consistency(format!(
            "quasi-stabilizer of radius {radius} has {} members but the preimage of the closed ball has {}",
            members.len(),
            via_ball.len()
        )));
    }
    let keep: HashSet<&ElementOf<A>> = members.iter().collect();
    let window = window.window().restrict(|g| keep.contains(g))?;
    Ok(QuasiStabilizerWindow { radius, window })
}

/// `pi^-1(B_R(x0))`: the closed ball is enumerated in the space window and
/// pulled back, in group-window order.
pub fn ball_preimage<A: IsometricAction>(
    bundle: &ActionBundle<A>,
    radius: Distance,
    window: &GroupWindow<A::Group>,
) -> Result<Vec<ElementOf<A>>> {
    let mut closed_ball = HashSet::new();
    for x in bundle.space.points() {
        if bundle.space.distance(&bundle.basepoint, x)? <= radius {
            closed_ball.insert(x.clone());
        }
    }
    Ok(window
        .elements()
        .iter()
        .filter(|g| closed_ball.contains(&project(bundle, g)))
        .cloned()
        .collect())
}

/// `{ g in window : pi(g) in F }`, or `None` when that set is empty.
pub fn preimage<A: IsometricAction>(
    bundle: &ActionBundle<A>,
    block: &Block<PointOf<A>>,
    window: &GroupWindow<A::Group>,
) -> Option<Block<ElementOf<A>>> {
    Block::nonempty(
        window
            .elements()
            .iter()
            .filter(|g| block.contains(&project(bundle, g)))
            .cloned(),
    )
}
