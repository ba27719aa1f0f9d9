//! The Z^2-on-Z instance end to end through the library: space witness,
//! quasi-stabilizer witness, transfer and independent verification.

use coarse_cover::action::{quasi_stabilizer, ActionBundle, CoordinateShift};
use coarse_cover::builders::{interval_cover, strip_cover};
use coarse_cover::group::{ball_with_metric_radius, IntegerLattice};
use coarse_cover::metric::{Distance, Extension, IntVector, ScaleSequence};
use coarse_cover::transfer::{build_transfer, plan_scales, verify_transfer, TransferOptions, TransferPlan};
use coarse_cover::Limits;

fn main() -> coarse_cover::Result<()> {
    let n_radius = 30;
    let scales = ScaleSequence::new((1..=5).map(Distance::integer).collect(), Extension::Double)?;
    let window = ball_with_metric_radius(IntegerLattice::new(2), n_radius, 2 * n_radius, Limits::default())?;
    let bundle = ActionBundle::over_ball(CoordinateShift::new(2, 1)?, window, IntVector(vec![0]))?;
    let n = 1;

    let s = plan_scales(&scales, bundle.lambda(), n, 2)?;
    let space_witness = interval_cover(s[1], bundle.space())?;
    let plan = TransferPlan::new(scales, n, bundle.lambda(), 2, space_witness.bound, n_radius, None)?;
    let qs = quasi_stabilizer(&bundle, plan.bound, bundle.group_window())?;
    let qs_witness = strip_cover(plan.quasi_stabilizer_scale()?, &qs, bundle.action())?;
    println!("space scales {:?}, R = {}, |W_R| = {}", s, plan.bound, qs.len());

    let report = build_transfer(&bundle, &space_witness, &qs, &qs_witness, &plan, &TransferOptions::default())?;
    let check = verify_transfer(&bundle, &space_witness, &report, &plan, plan.core_radius())?;
    for c in &check.families {
        println!(
            "W_{} (i={}, j={}): {} blocks, needs > {}, min separation {:?}",
            c.k, c.i, c.j, c.blocks, c.required, c.min_separation
        );
    }
    println!(
        "core radius {} covered = {}, measured margin {:?}, passed = {}",
        check.core_radius, check.coverage.holds, check.measured_margin, check.passed
    );
    for note in &report.notes {
        println!("note: {note}");
    }
    Ok(())
}
