//! Checks a cover witness of an interval in Z with the three predicates,
//! then breaks it in each of the ways the verifier names.

use coarse_cover::builders::interval_cover;
use coarse_cover::metric::{lattice_box, verify_witness, Distance, IntVector};
use coarse_cover::Limits;

fn main() -> coarse_cover::Result<()> {
    let window = lattice_box(&IntVector(vec![-6]), &IntVector(vec![8]), Limits::default())?;
    let r = Distance::integer(2);
    let witness = interval_cover(r, &window)?;
    for (i, f) in witness.families.iter().enumerate() {
        let blocks: Vec<String> = f.blocks.iter().map(|b| b.to_string()).collect();
        println!("family {i} at scale {}: {}", f.scale, blocks.join(" "));
    }
    let report = verify_witness(&window, &witness)?;
    println!("bound {}: passed = {}", witness.bound, report.passed);

    let mut lowered = witness.clone();
    lowered.bound = Distance::integer(2);
    let report = verify_witness(&window, &lowered)?;
    println!("bound lowered to 2: bounded = {}", report.boundedness.holds);

    let mut raised = witness.clone();
    raised.families[0].scale = Distance::integer(4);
    let report = verify_witness(&window, &raised)?;
    println!(
        "scale raised to 4: family 0 disjoint = {} (min separation {:?})",
        report.families[0].disjointness.holds, report.families[0].disjointness.min_separation
    );

    let mut deleted = witness;
    deleted.families[1].blocks.remove(0);
    let report = verify_witness(&window, &deleted)?;
    println!("block deleted: uncovered points {:?}", report.coverage.missing);
    Ok(())
}
