use std::collections::HashSet;
use std::path::PathBuf;

use coarse_cover::format::Scenario;
use coarse_cover::pipeline::{check_witness, run_scenario, RunOptions, Status};
use coarse_cover::Limits;

fn shipped() -> Vec<PathBuf> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| !p.to_string_lossy().contains("weakened"))
        .collect();
    out.sort();
    out
}

#[test]
fn every_shipped_scenario_passes_and_its_witnesses_reverify() {
    let paths = shipped();
    assert_eq!(paths.len(), 4);
    for p in paths {
        let scenario = Scenario::load(&p).unwrap();
        let report = run_scenario(&scenario, &RunOptions::default()).unwrap();
        assert_eq!(report.status, Status::Pass, "{}: {:?}", p.display(), report.failures);
        let t = report.transfer.as_ref().unwrap();
        assert_eq!(t.families.len(), (report.plan.m + 1) * (report.plan.n + 1), "{}", p.display());
        let space = check_witness(&report.space_witness.witness, Limits::default()).unwrap();
        assert_eq!(space, report.space_witness.check, "{}", p.display());

        // The quasi-stabilizer witness names the ambient ball but covers W_R only.
        let qs = check_witness(&report.qs_witness.witness, Limits::default()).unwrap();
        assert_eq!(qs.families, report.qs_witness.check.families);
        assert!(qs.bounded);
        let covered: HashSet<&String> = report.qs_witness.witness.families.iter().flat_map(|f| f.blocks.iter().flatten()).collect();
        let members = &report.quasi_stabilizer.members;
        assert_eq!(members.len(), report.quasi_stabilizer.size);
        assert!(members.iter().all(|g| covered.contains(g)), "{}", p.display());
    }
}
