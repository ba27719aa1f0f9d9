//! Every cover builder on a small window, each checked by the verifier.

use coarse_cover::action::{quasi_stabilizer, ActionBundle, CoordinateShift};
use coarse_cover::builders::{
    brick_cover, cluster_cover, interval_cover, product_cover, search_layered_cover, strip_cover,
};
use coarse_cover::group::{ball_with_metric_radius, Heisenberg, IntegerLattice, Lamplighter};
use coarse_cover::metric::{lattice_ball, verify_witness, CoverWitness, Distance, IntVector, Metric, MetricWindow};
use coarse_cover::Limits;

fn show<M: Metric>(name: &str, window: &MetricWindow<M>, w: &CoverWitness<M::Point>) -> coarse_cover::Result<()> {
    let report = verify_witness(window, w)?;
    println!(
        "{name:>10}: {} points, {} families, {} blocks, bound {}, passed = {}",
        window.len(),
        w.families.len(),
        w.block_count(),
        w.bound,
        report.passed
    );
    Ok(())
}

fn main() -> coarse_cover::Result<()> {
    let r = Distance::integer(3);
    let line = lattice_ball(&IntVector(vec![0]), 40, Limits::default())?;
    show("interval", &line, &interval_cover(r, &line)?)?;
    let plane = lattice_ball(&IntVector(vec![0, 0]), 20, Limits::default())?;
    show("product", &plane, &product_cover(r, &plane)?)?;
    show("brick", &plane, &brick_cover(r, &plane)?)?;

    let window = ball_with_metric_radius(IntegerLattice::new(2), 20, 40, Limits::default())?;
    let bundle = ActionBundle::over_ball(CoordinateShift::new(2, 1)?, window, IntVector(vec![0]))?;
    let qs = quasi_stabilizer(&bundle, Distance::integer(4), bundle.group_window())?;
    show("strip", qs.window(), &strip_cover(r, &qs, bundle.action())?)?;

    let h = ball_with_metric_radius(Heisenberg, 4, 8, Limits::default())?;
    show("layers", h.window(), &search_layered_cover(Distance::integer(2), h.window(), 64, |g| g.c)?)?;
    let l = ball_with_metric_radius(Lamplighter, 4, 8, Limits::default())?;
    show("clusters", l.window(), &cluster_cover(Distance::integer(1), l.window())?)?;
    Ok(())
}
