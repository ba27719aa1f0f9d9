use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::Group;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::metric::{Block, Distance, Metric, MetricWindow};

struct WordTable<G: Group> {
    group: G,
    generators: Vec<G::Element>,
    lengths: HashMap<G::Element, u32>,
    /// Elements by (word length, canonical order).
    order: Vec<G::Element>,
    radius: u32,
}

/// The word metric `d(g, h) = |g^-1 h|`, backed by a breadth-first table of
/// word lengths up to a fixed radius. Distances whose quotient falls outside
/// the table are reported as errors.
pub struct WordMetric<G: Group> {
    table: Arc<WordTable<G>>,
}

impl<G: Group> Clone for WordMetric<G> {
    fn clone(&self) -> Self {
        WordMetric {
            table: Arc::clone(&self.table),
        }
    }
}

impl<G: Group> fmt::Debug for WordMetric<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WordMetric")
            .field("group", &self.table.group.name())
            .field("radius", &self.table.radius)
            .finish()
    }
}

impl<G: Group> WordMetric<G> {
    fn enumerate(group: G, radius: u32, limits: Limits) -> Result<Self> {
        let generators = group.generators();
        let identity = group.identity();
        let mut lengths = HashMap::new();
        lengths.insert(identity.clone(), 0u32);
        let mut order = vec![identity.clone()];
        let mut layer = vec![identity];
        for n in 1..=radius {
            let mut next = Vec::new();
            for g in &layer {
                for s in &generators {
                    let h = group.multiply(g, s);
                    if !lengths.contains_key(&h) {
                        lengths.insert(h.clone(), n);
                        next.push(h);
                    }
                }
                limits.check_points(lengths.len() as u64)?;
            }
            if next.is_empty() {
                break;
            }
            next.sort();
            order.extend(next.iter().cloned());
            layer = next;
        }
        Ok(WordMetric {
            table: Arc::new(WordTable {
                group,
                generators,
                lengths,
                order,
                radius,
            }),
        })
    }

    pub fn group(&self) -> &G {
        &self.table.group
    }

    pub fn generators(&self) -> &[G::Element] {
        &self.table.generators
    }

    /// Radius of the length table.
    pub fn radius(&self) -> u32 {
        self.table.radius
    }

    /// Word length, if the element lies in the table.
    pub fn word_length(&self, e: &G::Element) -> Option<u32> {
        self.table.lengths.get(e).copied()
    }

    /// All tabulated elements in enumeration order.
    pub fn elements(&self) -> &[G::Element] {
        &self.table.order
    }
}

impl<G: Group> Metric for WordMetric<G> {
    type Point = G::Element;

    fn distance(&self, a: &G::Element, b: &G::Element) -> Result<Distance> {
        let quotient = self.table.group.left_quotient(a, b);
        match self.table.lengths.get(&quotient) {
            Some(len) => Ok(Distance::from(*len)),
            None => Err(Error::OutOfWindow {
                from: a.to_string(),
                to: b.to_string(),
                radius: self.table.radius,
            }),
        }
    }
}

/// The ball of word length at most `radius`, as a metric window whose
/// distances are evaluated in a (possibly larger) length table.
pub struct GroupWindow<G: Group> {
    radius: u32,
    window: MetricWindow<WordMetric<G>>,
}

impl<G: Group> Clone for GroupWindow<G> {
    fn clone(&self) -> Self {
        GroupWindow {
            radius: self.radius,
            window: self.window.clone(),
        }
    }
}

impl<G: Group> fmt::Debug for GroupWindow<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupWindow")
            .field("group", &self.group().name())
            .field("radius", &self.radius)
            .field("elements", &self.window.len())
            .finish()
    }
}

impl<G: Group> GroupWindow<G> {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn group(&self) -> &G {
        self.window.metric().group()
    }

    pub fn metric(&self) -> &WordMetric<G> {
        self.window.metric()
    }

    pub fn window(&self) -> &MetricWindow<WordMetric<G>> {
        &self.window
    }

    /// Elements by (word length, canonical order).
    pub fn elements(&self) -> &[G::Element] {
        self.window.points()
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn contains(&self, e: &G::Element) -> bool {
        self.window.contains(e)
    }

    pub fn word_length(&self, e: &G::Element) -> Option<u32> {
        self.metric().word_length(e)
    }

    /// The sub-ball of radius `rho`, sharing this window's metric.
    pub fn sub_ball(&self, rho: u32) -> Result<MetricWindow<WordMetric<G>>> {
        let metric = self.metric().clone();
        self.window
            .restrict(|e| metric.word_length(e).is_some_and(|l| l <= rho))
    }
}

/// Elements of word length at most `radius`, found by breadth-first search
/// from the identity.
pub fn ball<G: Group>(group: G, radius: u32) -> Result<GroupWindow<G>> {
    ball_with_metric_radius(group, radius, radius, Limits::default())
}

/// As [`ball`], with word lengths tabulated up to `metric_radius >= radius`
/// so that distances between far-apart window elements are determinable.
/// `metric_radius = 2 * radius` makes every pairwise distance available.
pub fn ball_with_metric_radius<G: Group>(
    group: G,
    radius: u32,
    metric_radius: u32,
    limits: Limits,
) -> Result<GroupWindow<G>> {
    // Generators always get a table entry so that unit steps are measurable.
    let metric = WordMetric::enumerate(group, metric_radius.max(radius).max(1), limits)?;
    let points: Vec<G::Element> = metric
        .elements()
        .iter()
        .take_while(|e| metric.word_length(e).is_some_and(|l| l <= radius))
        .cloned()
        .collect();
    let window = MetricWindow::with_limits(metric, points, limits)?;
    Ok(GroupWindow { radius, window })
}

pub fn word_distance<G: Group>(
    window: &GroupWindow<G>,
    g: &G::Element,
    h: &G::Element,
) -> Result<Distance> {
    window.metric().distance(g, h)
}

/// `{a x : x in block}`; every product must stay inside the window.
pub fn left_translate<G: Group>(
    window: &GroupWindow<G>,
    a: &G::Element,
    block: &Block<G::Element>,
) -> Result<Block<G::Element>> {
    let group = window.group();
    let image = block
        .iter()
        .map(|x| {
            let y = group.multiply(a, x);
            if window.contains(&y) {
                Ok(y)
            } else {
                Err(Error::OutOfWindow {
                    from: a.to_string(),
                    to: y.to_string(),
                    radius: window.radius(),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Block::new(image)
}
