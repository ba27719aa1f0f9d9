use std::collections::HashMap;
use std::fmt::{Debug, Display};
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Distance;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// An exact distance oracle on some point type.
pub trait Metric: Send + Sync {
    type Point: Clone + Eq + Hash + Ord + Debug + Display + Send + Sync;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<Distance>;
}

/// A finite ordered point set together with the metric it is measured in.
pub struct MetricWindow<M: Metric> {
    metric: M,
    points: Vec<M::Point>,
    index: HashMap<M::Point, usize>,
    limits: Limits,
}

impl<M: Metric + Clone> Clone for MetricWindow<M> {
    fn clone(&self) -> Self {
        MetricWindow {
            metric: self.metric.clone(),
            points: self.points.clone(),
            index: self.index.clone(),
            limits: self.limits,
        }
    }
}

impl<M: Metric> Debug for MetricWindow<M> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MetricWindow")
            .field("points", &self.points.len())
            .finish()
    }
}

impl<M: Metric> MetricWindow<M> {
    pub fn new(metric: M, points: impl IntoIterator<Item = M::Point>) -> Result<Self> {
        Self::with_limits(metric, points, Limits::default())
    }

    /// Builds a window, keeping the first occurrence of repeated points.
    pub fn with_limits(
        metric: M,
        points: impl IntoIterator<Item = M::Point>,
        limits: Limits,
    ) -> Result<Self> {
        let mut ordered = Vec::new();
        let mut index = HashMap::new();
        for p in points {
            if index.contains_key(&p) {
                continue;
            }
            index.insert(p.clone(), ordered.len());
            ordered.push(p);
            limits.check_points(ordered.len() as u64)?;
        }
        Ok(MetricWindow {
            metric,
            points: ordered,
            index,
            limits,
        })
    }

    pub fn metric(&self) -> &M {
        &self.metric
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn points(&self) -> &[M::Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &M::Point) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &M::Point) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn distance(&self, a: &M::Point, b: &M::Point) -> Result<Distance> {
        self.metric.distance(a, b)
    }

    pub(crate) fn require_member(&self, p: &M::Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                point: p.to_string(),
            })
        }
    }

    /// The sub-window of points satisfying `keep`, in the same order.
    pub fn restrict(&self, mut keep: impl FnMut(&M::Point) -> bool) -> Result<Self>
    where
        M: Clone,
    {
        let points = self.points.iter().filter(|p| keep(p)).cloned();
        MetricWindow::with_limits(self.metric.clone(), points, self.limits)
    }

    /// Checks symmetry, identity of indiscernibles and the triangle inequality.
    ///
    /// Pairs are checked exhaustively up to `exhaustive_pairs` points and
    /// triples up to `exhaustive_triples` points; above those sizes a seeded
    /// random sample of `samples` pairs/triples is used.
    pub fn check_axioms(
        &self,
        exhaustive_pairs: usize,
        exhaustive_triples: usize,
        samples: usize,
        seed: u64,
    ) -> Result<AxiomReport> {
        let n = self.points.len();
        let mut report = AxiomReport::default();
        if n == 0 {
            return Ok(report);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = &self.points;

        let check_pair = |i: usize, j: usize, report: &mut AxiomReport| -> Result<()> {
            let dij = self.distance(&pts[i], &pts[j])?;
            let dji = self.distance(&pts[j], &pts[i])?;
            report.pairs_checked += 1;
            if dij != dji {
                report.record(format!("asymmetric: d({},{})={dij} but reverse is {dji}", pts[i], pts[j]));
            }
            if (i == j) != dij.is_zero() {
                report.record(format!("identity: d({},{})={dij}", pts[i], pts[j]));
            }
            Ok(())
        };
        if n <= exhaustive_pairs {
            for i in 0..n {
                for j in i..n {
                    check_pair(i, j, &mut report)?;
                }
            }
        } else {
            for _ in 0..samples {
                let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
                check_pair(i, j, &mut report)?;
            }
        }

        let check_triple = |i: usize, j: usize, k: usize, report: &mut AxiomReport| -> Result<()> {
            let dij = self.distance(&pts[i], &pts[j])?;
            let dik = self.distance(&pts[i], &pts[k])?;
            let dkj = self.distance(&pts[k], &pts[j])?;
            report.triples_checked += 1;
            if dij > dik.saturating_add(&dkj) {
                report.record(format!(
                    "triangle: d({},{})={dij} exceeds {dik} + {dkj} via {}",
                    pts[i], pts[j], pts[k]
                ));
            }
            Ok(())
        };
        if n <= exhaustive_triples {
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in 0..n {
                        check_triple(i, j, k, &mut report)?;
                    }
                }
            }
        } else {
            for _ in 0..samples {
                let (i, j, k) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                check_triple(i, j, k, &mut report)?;
            }
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub pairs_checked: u64,
    pub triples_checked: u64,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, message: String) {
        if self.violations.len() < 16 {
            self.violations.push(message);
        }
    }
}
