//! A two-step decomposition chain on [-200, 200] in Z, verified, then
//! printed in the chain file format when `--json` is given.

use coarse_cover::format::{to_json, ChainDoc, WindowSpec};
use coarse_cover::metric::{lattice_box, Distance, Extension, IntVector, ScaleSequence};
use coarse_cover::sfdc::{nested_interval_chain, verify_sfdc_chain};
use coarse_cover::Limits;

fn main() -> coarse_cover::Result<()> {
    let last: i64 = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(3);
    let window = lattice_box(&IntVector(vec![-200]), &IntVector(vec![200]), Limits::default())?;
    let scales = ScaleSequence::non_decreasing(vec![Distance::integer(2), Distance::integer(last as u64)], Extension::None)?;
    let chain = nested_interval_chain(-200, 200, &[12, 3], scales, Distance::integer(4))?;
    let report = verify_sfdc_chain(&window, &chain)?;
    if std::env::args().nth(1).as_deref() == Some("--json") {
        let spec = WindowSpec::LatticeBox {
            lower: "(-200)".into(),
            upper: "(200)".into(),
        };
        print!("{}", to_json(&ChainDoc::from_chain(spec, &chain))?);
        return Ok(());
    }
    println!("{}", report.direction);
    for (i, step) in report.steps.iter().enumerate() {
        println!("step {} at r = {}: passed = {}", i + 1, step.r, step.passed);
    }
    println!("terminal max diameter {:?}, passed = {}", report.terminal.max_diameter, report.passed);
    Ok(())
}
