//! Exact finite metric spaces, blocks, families and the cover predicates.

mod distance;
mod family;
mod lattice;
mod predicates;
mod window;

pub use distance::Distance;
pub use family::{Block, CoverWitness, Extension, Family, ScaleSequence};
pub use lattice::{l1_ball_points, l1_ball_size, lattice_ball, lattice_box, IntVector, L1Lattice};
pub use predicates::{
    closest_pair, covers, covers_subset, diameter, family_diameters, is_r_disjoint,
    is_uniformly_bounded, min_block_distance, pairwise_separations, verify_witness,
    BlockViolation, Boundedness, Coverage, Disjointness, FamilyCheck, PairSeparation,
    VerificationReport,
};
pub use window::{AxiomReport, Metric, MetricWindow};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::limits::Limits;

    fn z(lo: i64, hi: i64) -> MetricWindow<L1Lattice> {
        lattice_box(&IntVector(vec![lo]), &IntVector(vec![hi]), Limits::default()).unwrap()
    }

    fn ints(xs: impl IntoIterator<Item = i64>) -> Block<IntVector> {
        Block::new(xs.into_iter().map(|x| IntVector(vec![x]))).unwrap()
    }

    fn d(v: u64) -> Distance {
        Distance::integer(v)
    }

    #[test]
    fn min_block_distance_examples() {
        let w = z(-10, 10);
        assert_eq!(min_block_distance(&w, &ints([0, 1]), &ints([5, 9])).unwrap(), d(4));
        assert_eq!(min_block_distance(&w, &ints([3]), &ints([3])).unwrap(), d(0));

        let plane = lattice_ball(&IntVector::zero(2), 6, Limits::default()).unwrap();
        let a = Block::singleton(IntVector(vec![0, 0]));
        let b = Block::singleton(IntVector(vec![2, 3]));
        assert_eq!(min_block_distance(&plane, &a, &b).unwrap(), d(5));
    }

    #[test]
    fn min_block_distance_rejects_foreign_points() {
        let w = z(0, 3);
        let err = min_block_distance(&w, &ints([0]), &ints([9])).unwrap_err();
        assert!(matches!(err, Error::DomainMismatch { .. }));
    }

    #[test]
    fn diameter_examples() {
        let w = z(-10, 10);
        assert_eq!(diameter(&w, &ints(0..=5)).unwrap(), d(5));
        assert_eq!(diameter(&w, &ints([4])).unwrap(), d(0));

        let plane = lattice_ball(&IntVector::zero(2), 4, Limits::default()).unwrap();
        let tri = Block::new(
            [[0, 0], [1, 0], [0, 2]]
                .iter()
                .map(|p| IntVector(p.to_vec())),
        )
        .unwrap();
        assert_eq!(diameter(&plane, &tri).unwrap(), d(3));
    }

    #[test]
    fn disjointness_is_strict() {
        let w = z(0, 10);
        let blocks = vec![ints(0..=2), ints(6..=8)];
        let at2 = is_r_disjoint(&w, &blocks, d(2)).unwrap();
        assert!(at2.holds);
        assert_eq!(at2.min_separation, Some(d(4)));

        let at4 = is_r_disjoint(&w, &blocks, d(4)).unwrap();
        assert!(!at4.holds);
        assert_eq!(
            at4.violation,
            Some(PairSeparation {
                first: 0,
                second: 1,
                distance: d(4)
            })
        );

        let single = is_r_disjoint(&w, &blocks[..1], d(1000)).unwrap();
        assert!(single.holds);
        assert_eq!(single.min_separation, None);
    }

    #[test]
    fn boundedness_is_strict() {
        let w = z(0, 20);
        let fam = Family::new(vec![ints(0..=5), ints(10..=12)], d(1), d(6));
        let ok = is_uniformly_bounded(&w, std::slice::from_ref(&fam), d(6)).unwrap();
        assert!(ok.holds);
        assert_eq!(ok.max_diameter, Some(d(5)));

        let tight = Family::new(vec![ints(0..=6)], d(1), d(6));
        let bad = is_uniformly_bounded(&w, std::slice::from_ref(&tight), d(6)).unwrap();
        assert!(!bad.holds);
        assert_eq!(
            bad.violation,
            Some(BlockViolation {
                family: 0,
                block: 0,
                diameter: d(6)
            })
        );

        let empty = is_uniformly_bounded(&w, &[], d(1)).unwrap();
        assert!(empty.holds);
        assert_eq!(empty.max_diameter, None);
    }

    #[test]
    fn coverage_reports_missing_points() {
        let w = z(-10, 10);
        let evens: Vec<_> = (-10..=10)
            .step_by(4)
            .map(|s| ints(s..=(s + 1).min(10)))
            .collect();
        let odds: Vec<_> = (-8..=10).step_by(4).map(|s| ints(s..=(s + 1).min(10))).collect();
        let fams = vec![
            Family::new(evens, d(2), d(2)),
            Family::new(odds.clone(), d(2), d(2)),
        ];
        assert!(covers(&w, &fams).unwrap().holds);

        let mut cut = fams.clone();
        cut[1].blocks.remove(0);
        let cov = covers(&w, &cut).unwrap();
        assert!(!cov.holds);
        assert_eq!(cov.missing, odds[0].members().to_vec());

        let empty = z(1, 0);
        assert!(empty.is_empty());
        assert!(covers(&empty, &[]).unwrap().holds);
        assert!(!covers(&w, &[]).unwrap().holds);
    }

    #[test]
    fn verify_witness_combines_three_predicates() {
        let w = z(0, 7);
        let fams = vec![
            Family::new(vec![ints(0..=1), ints(4..=5)], d(1), d(2)),
            Family::new(vec![ints(2..=3), ints(6..=7)], d(1), d(2)),
        ];
        let cw = CoverWitness::new(fams);
        let report = verify_witness(&w, &cw).unwrap();
        assert!(report.passed);

        let mut lowered = cw.clone();
        lowered.bound = d(1);
        let report = verify_witness(&w, &lowered).unwrap();
        assert!(!report.passed);
        assert!(!report.boundedness.holds);
        assert!(report.disjointness_holds() && report.coverage.holds);
    }

    #[test]
    fn lattice_windows_satisfy_metric_axioms() {
        let w = lattice_ball(&IntVector::zero(2), 5, Limits::default()).unwrap();
        let report = w.check_axioms(2000, 200, 5000, 7).unwrap();
        assert!(report.holds(), "{:?}", report.violations);
        assert!(report.triples_checked > 0);
    }
}
