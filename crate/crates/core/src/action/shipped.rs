use super::IsometricAction;
use crate::error::{Error, Result};
use crate::group::{Group, Heisenberg, HeisenbergElement, IntegerLattice, LampState, Lamplighter, WordMetric};
use crate::limits::Limits;
use crate::metric::{lattice_ball, Distance, IntVector, L1Lattice, MetricWindow};

fn ball_radius(radius: Distance) -> u64 {
    radius.floor().max(0) as u64
}

/// Z^rank acting on Z^space_rank by translation through the first
/// `space_rank` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoordinateShift {
    group: IntegerLattice,
    space: L1Lattice,
}

impl CoordinateShift {
    pub fn new(rank: usize, space_rank: usize) -> Result<Self> {
        if space_rank == 0 || space_rank > rank {
            return Err(Error::Validation(format!(
                "coordinate shift needs 1 <= space rank <= group rank, got Z^{rank} on Z^{space_rank}"
            )));
        }
        Ok(CoordinateShift {
            group: IntegerLattice::new(rank),
            space: L1Lattice::new(space_rank),
        })
    }

    pub fn rank(&self) -> usize {
        self.group.rank
    }

    pub fn space_rank(&self) -> usize {
        self.space.rank
    }
}

impl IsometricAction for CoordinateShift {
    type Group = IntegerLattice;
    type Space = L1Lattice;

    fn name(&self) -> String {
        format!("Z^{} on Z^{} by coordinate shift", self.group.rank, self.space.rank)
    }

    fn group(&self) -> &IntegerLattice {
        &self.group
    }

    fn space(&self) -> &L1Lattice {
        &self.space
    }

    fn act(&self, g: &IntVector, x: &IntVector) -> IntVector {
        IntVector(x.0.iter().zip(&g.0).map(|(xi, gi)| xi + gi).collect())
    }

    fn space_ball(&self, center: &IntVector, radius: Distance, limits: Limits) -> Result<MetricWindow<L1Lattice>> {
        lattice_ball(center, ball_radius(radius), limits)
    }
}

/// The Heisenberg group acting on Z^2 through its abelianization,
/// `(a,b,c) . (x,y) = (x+a, y+b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Abelianization {
    space: L1Lattice,
}

impl Abelianization {
    pub fn new() -> Self {
        Abelianization {
            space: L1Lattice::new(2),
        }
    }
}

impl Default for Abelianization {
    fn default() -> Self {
        Self::new()
    }
}

impl IsometricAction for Abelianization {
    type Group = Heisenberg;
    type Space = L1Lattice;

    fn name(&self) -> String {
        "H3(Z) on Z^2 through the abelianization".into()
    }

    fn group(&self) -> &Heisenberg {
        &Heisenberg
    }

    fn space(&self) -> &L1Lattice {
        &self.space
    }

    fn act(&self, g: &HeisenbergElement, x: &IntVector) -> IntVector {
        IntVector(vec![x.0[0] + g.a, x.0[1] + g.b])
    }

    fn space_ball(&self, center: &IntVector, radius: Distance, limits: Limits) -> Result<MetricWindow<L1Lattice>> {
        lattice_ball(center, ball_radius(radius), limits)
    }
}

/// The lamplighter group acting on Z through the cursor, `(f,x) . y = y + x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CursorShift {
    space: L1Lattice,
}

impl CursorShift {
    pub fn new() -> Self {
        CursorShift {
            space: L1Lattice::new(1),
        }
    }
}

impl Default for CursorShift {
    fn default() -> Self {
        Self::new()
    }
}

impl IsometricAction for CursorShift {
    type Group = Lamplighter;
    type Space = L1Lattice;

    fn name(&self) -> String {
        "lamplighter on Z by cursor shift".into()
    }

    fn group(&self) -> &Lamplighter {
        &Lamplighter
    }

    fn space(&self) -> &L1Lattice {
        &self.space
    }

    fn act(&self, g: &LampState, x: &IntVector) -> IntVector {
        IntVector(vec![x.0[0] + g.cursor])
    }

    fn space_ball(&self, center: &IntVector, radius: Distance, limits: Limits) -> Result<MetricWindow<L1Lattice>> {
        lattice_ball(center, ball_radius(radius), limits)
    }
}

/// A group acting on itself by left multiplication, with its word metric.
pub struct LeftMultiplication<G: Group> {
    metric: WordMetric<G>,
}

impl<G: Group> Clone for LeftMultiplication<G> {
    fn clone(&self) -> Self {
        LeftMultiplication {
            metric: self.metric.clone(),
        }
    }
}

impl<G: Group> std::fmt::Debug for LeftMultiplication<G> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LeftMultiplication").field("metric", &self.metric).finish()
    }
}

impl<G: Group> LeftMultiplication<G> {
    pub fn new(metric: WordMetric<G>) -> Self {
        LeftMultiplication { metric }
    }
}

impl<G: Group> IsometricAction for LeftMultiplication<G> {
    type Group = G;
    type Space = WordMetric<G>;

    fn name(&self) -> String {
        format!("{} on itself by left multiplication", self.metric.group().name())
    }

    fn group(&self) -> &G {
        self.metric.group()
    }

    fn space(&self) -> &WordMetric<G> {
        &self.metric
    }

    fn act(&self, g: &G::Element, x: &G::Element) -> G::Element {
        self.metric.group().multiply(g, x)
    }

    /// `center * B_radius(e)`; pairwise distances need a table of twice the radius.
    fn space_ball(&self, center: &G::Element, radius: Distance, limits: Limits) -> Result<MetricWindow<WordMetric<G>>> {
        let rho = ball_radius(radius);
        if rho > u64::from(self.metric.radius()) {
            return Err(Error::OutOfWindow {
                from: center.to_string(),
                to: format!("radius {rho}"),
                radius: self.metric.radius(),
            });
        }
        let group = self.metric.group();
        let points = self
            .metric
            .elements()
            .iter()
            .take_while(|e| self.metric.word_length(e).is_some_and(|l| u64::from(l) <= rho))
            .map(|e| group.multiply(center, e));
        MetricWindow::with_limits(self.metric.clone(), points, limits)
    }
}
