//! Acceptance suite: one line per criterion with its measured values and
//! pinned time limit. Oracles here are written independently of the
//! library's predicates (plain L1 arithmetic on parsed coordinates).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use coarse_cover::action::{
    quasi_stabilizer, verify_lipschitz, Abelianization, ActionBundle, CoordinateShift, CursorShift, IsometricAction,
    LeftMultiplication,
};
use coarse_cover::builders::{brick_cover, interval_cover, product_cover};
use coarse_cover::format::{to_json, ChainDoc, Scenario, WindowSpec, WitnessDoc};
use coarse_cover::group::{ball_with_metric_radius, Group, Heisenberg, IntegerLattice, Lamplighter};
use coarse_cover::metric::{lattice_ball, lattice_box, Distance, IntVector};
use coarse_cover::pipeline::{check_chain, check_witness, run_scenario, Report, RunOptions, Status};
use coarse_cover::transfer::{index_pair, pair_index};
use coarse_cover::Limits;

type Check = Result<String, String>;

fn root(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `(x1,...,xk)` to coordinates, without the library's parser.
fn coords(text: &str) -> Vec<i64> {
    text.trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .map(|x| x.trim().parse().expect("integer coordinate"))
        .collect()
}

fn l1(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

fn min_distance(a: &[Vec<i64>], b: &[Vec<i64>]) -> i64 {
    a.iter()
        .flat_map(|p| b.iter().map(move |q| l1(p, q)))
        .min()
        .expect("nonempty blocks")
}

fn diameter(a: &[Vec<i64>]) -> i64 {
    a.iter().flat_map(|p| a.iter().map(move |q| l1(p, q))).max().unwrap_or(0)
}

/// Exact `d > r` for integer `d` and rational `r = p/q`.
fn exceeds(d: i64, r: Distance) -> bool {
    d * r.denom() > r.numer()
}

// ---------------------------------------------------------------- criterion 1

fn mutation_failures(doc: &WitnessDoc) -> Result<Vec<String>, String> {
    Ok(check_witness(doc, Limits::default()).map_err(err)?.failures)
}

/// Moves a copy of block 0 of family 0 by `floor(r)` along the first axis
/// over block 1, which puts two same-family blocks within `r`.
fn moved(doc: &WitnessDoc) -> WitnessDoc {
    let mut d = doc.clone();
    let f = &mut d.families[0];
    let shift = f.scale.floor();
    let copy: Vec<String> = f.blocks[0]
        .iter()
        .map(|p| {
            let mut c = coords(p);
            c[0] += shift;
            format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        })
        .collect();
    f.blocks[1] = copy;
    d
}

fn tamper_suite(name: &str, doc: &WitnessDoc) -> Result<usize, String> {
    ensure(mutation_failures(doc)?.is_empty(), format!("{name}: untampered witness fails"))?;
    let check = check_witness(doc, Limits::default()).map_err(err)?;
    let mut cases: Vec<(&str, WitnessDoc, &str)> = Vec::new();
    cases.push(("block moved", moved(doc), "disjointness"));
    let mut deleted = doc.clone();
    deleted.families[0].blocks.remove(0);
    cases.push(("block deleted", deleted, "coverage"));
    let mut lowered = doc.clone();
    lowered.bound = check.max_diameter.ok_or("no blocks")?;
    cases.push(("bound lowered", lowered, "boundedness"));
    let mut raised = doc.clone();
    raised.families[0].scale = check.families[0].min_separation.ok_or("single block")?;
    cases.push(("scale raised", raised, "disjointness"));
    for (what, tampered, expected) in &cases {
        let failures = mutation_failures(tampered)?;
        ensure(
            failures.iter().any(|f| f.starts_with(expected)),
            format!("{name}/{what}: expected a {expected} violation, got {failures:?}"),
        )?;
    }
    Ok(cases.len())
}

fn load_witness(rel: &str) -> Result<WitnessDoc, String> {
    WitnessDoc::load(&root(rel)).map_err(err)
}

fn criterion_1() -> Check {
    let limits = Limits::default();
    let line = lattice_box(&IntVector(vec![-4999]), &IntVector(vec![5000]), limits).map_err(err)?;
    let mut verified = 0;
    for r in ["1", "5/2", "7", "40"] {
        let r: Distance = r.parse().map_err(err)?;
        let w = interval_cover(r, &line).map_err(err)?;
        // Independent oracle: runs of L = floor(r) + 1 consecutive integers,
        // alternating families, so same-family gaps are L + 1 > r.
        let l = r.floor() + 1;
        for (i, f) in w.families.iter().enumerate() {
            for b in &f.blocks {
                let xs: Vec<i64> = b.iter().map(|p| p.0[0]).collect();
                ensure(xs.windows(2).all(|p| p[1] == p[0] + 1), "interval block is not a run")?;
                ensure(xs.len() as i64 <= l, "interval block too long")?;
                ensure((xs[0].div_euclid(l) as usize) % 2 == i, "interval block in the wrong family")?;
            }
        }
        ensure(exceeds(l + 1, r), "interval gap does not exceed r")?;
        let doc = WitnessDoc::from_witness(
            WindowSpec::LatticeBox {
                lower: "(-4999)".into(),
                upper: "(5000)".into(),
            },
            &w,
        );
        ensure(check_witness(&doc, limits).map_err(err)?.passed, format!("interval cover fails at r = {r}"))?;
        verified += 1;
    }
    let plane_spec = WindowSpec::LatticeBall {
        center: "(0,0)".into(),
        radius: 70,
    };
    let plane = lattice_ball(&IntVector(vec![0, 0]), 70, limits).map_err(err)?;
    ensure(plane.len() <= 10_000, "plane window exceeds 10^4 points")?;
    for (name, w) in [
        ("product", product_cover(Distance::integer(3), &plane).map_err(err)?),
        ("brick", brick_cover(Distance::integer(3), &plane).map_err(err)?),
    ] {
        let doc = WitnessDoc::from_witness(plane_spec.clone(), &w);
        ensure(check_witness(&doc, limits).map_err(err)?.passed, format!("{name} cover fails"))?;
        verified += 1;
    }

    let mut suites: Vec<(String, WitnessDoc)> = Vec::new();
    for rel in [
        "fixtures/interval-z.witness.json",
        "fixtures/product-z2.witness.json",
        "fixtures/brick-z2.witness.json",
    ] {
        suites.push((rel.to_string(), load_witness(rel)?));
    }
    let mid = lattice_box(&IntVector(vec![-500]), &IntVector(vec![500]), limits).map_err(err)?;
    suites.push((
        "interval Z r=5/2".into(),
        WitnessDoc::from_witness(
            WindowSpec::LatticeBox {
                lower: "(-500)".into(),
                upper: "(500)".into(),
            },
            &interval_cover("5/2".parse().map_err(err)?, &mid).map_err(err)?,
        ),
    ));
    let disc = lattice_ball(&IntVector(vec![0, 0]), 30, limits).map_err(err)?;
    suites.push((
        "brick Z^2 r=2".into(),
        WitnessDoc::from_witness(
            WindowSpec::LatticeBall {
                center: "(0,0)".into(),
                radius: 30,
            },
            &brick_cover(Distance::integer(2), &disc).map_err(err)?,
        ),
    ));
    let mut mutations = 0;
    for (name, doc) in &suites {
        mutations += tamper_suite(name, doc)?;
    }
    ensure(mutations == 20, format!("{mutations} mutations instead of 20"))?;
    Ok(format!(
        "{verified} builder witnesses on windows up to {} points verified; {mutations}/20 mutations rejected with the named violation",
        line.len()
    ))
}

// ---------------------------------------------------------------- criteria 2, 3

/// Coordinates of the projection of `g`, from its printed form.
#[derive(Clone, Copy)]
enum Projection {
    /// First coordinate of an element of Z^2.
    FirstCoordinate,
    /// `(a, b)` of a Heisenberg triple.
    Abelian,
    /// The cursor of a lamp state `[..]@c`.
    Cursor,
    /// The element itself, in Z^k.
    Identity,
}

impl Projection {
    fn of(self, g: &str) -> Vec<i64> {
        match self {
            Projection::FirstCoordinate => vec![coords(g)[0]],
            Projection::Abelian => coords(g)[..2].to_vec(),
            Projection::Cursor => vec![g.rsplit('@').next().unwrap().parse().unwrap()],
            Projection::Identity => coords(g),
        }
    }
}

struct Probe {
    name: &'static str,
    lambda: Distance,
    steps: u64,
    violations: usize,
    oracle_lambda: i64,
    oracle_violations: usize,
}

fn lipschitz_probe<A: IsometricAction>(
    name: &'static str,
    action: A,
    group: A::Group,
    basepoint: &str,
    proj: Projection,
    n: u32,
) -> Result<Probe, String>
where
    <A::Space as coarse_cover::metric::Metric>::Point: std::str::FromStr<Err = coarse_cover::Error>,
{
    // Generator steps leave the ball by at most one letter.
    let window = ball_with_metric_radius(group.clone(), n, n + 1, Limits::default()).map_err(err)?;
    let x0: Vec<i64> = coords(basepoint);
    let bundle = ActionBundle::over_ball(action, window, basepoint.parse().map_err(err)?).map_err(err)?;
    let report = verify_lipschitz(&bundle, bundle.group_window(), 0, 0).map_err(err)?;
    let oracle_lambda = group
        .generators()
        .iter()
        .map(|s| l1(&proj.of(&s.to_string()), &x0))
        .max()
        .unwrap_or(0);
    let mut oracle_violations = 0;
    for g in bundle.group_window().elements() {
        let pg = proj.of(&g.to_string());
        for s in group.generators() {
            let gs = group.multiply(g, &s);
            if l1(&proj.of(&gs.to_string()), &pg) > oracle_lambda {
                oracle_violations += 1;
            }
        }
    }
    Ok(Probe {
        name,
        lambda: bundle.lambda(),
        steps: report.steps_checked,
        violations: report.violations.len(),
        oracle_lambda,
        oracle_violations,
    })
}

fn criterion_2() -> Check {
    let n = 10;
    let probes = [
        lipschitz_probe(
            "z2-over-z",
            CoordinateShift::new(2, 1).map_err(err)?,
            IntegerLattice::new(2),
            "(0)",
            Projection::FirstCoordinate,
            n,
        )?,
        lipschitz_probe("heisenberg-over-z2", Abelianization::new(), Heisenberg, "(0,0)", Projection::Abelian, n)?,
        lipschitz_probe("lamplighter-over-z", CursorShift::new(), Lamplighter, "(0)", Projection::Cursor, n)?,
    ];
    let mut parts = Vec::new();
    for p in &probes {
        ensure(p.violations == 0 && p.oracle_violations == 0, format!("{}: Lipschitz violations", p.name))?;
        ensure(p.lambda == Distance::integer(p.oracle_lambda as u64), format!("{}: lambda differs from the oracle", p.name))?;
        ensure(p.lambda == Distance::integer(1), format!("{}: lambda is {}, not 1", p.name, p.lambda))?;
        parts.push(format!("{} lambda={} ({} steps)", p.name, p.lambda, p.steps));
    }
    Ok(format!("N={n}: {}", parts.join(", ")))
}

fn qs_identity<A: IsometricAction>(
    action: impl Fn(&coarse_cover::group::GroupWindow<A::Group>) -> A,
    group: A::Group,
    basepoint: &str,
    proj: Projection,
) -> Result<usize, String>
where
    <A::Space as coarse_cover::metric::Metric>::Point: std::str::FromStr<Err = coarse_cover::Error>,
{
    let x0 = coords(basepoint);
    let mut checked = 0;
    for n in 0..=8u32 {
        let window = ball_with_metric_radius(group.clone(), n, 2 * n, Limits::default()).map_err(err)?;
        let bundle = ActionBundle::over_ball(action(&window), window, basepoint.parse().map_err(err)?).map_err(err)?;
        for r in 0..=n {
            let qs = quasi_stabilizer(&bundle, Distance::from(r), bundle.group_window()).map_err(err)?;
            let from_definition: HashSet<String> = qs.members().iter().map(|g| g.to_string()).collect();
            let preimage: HashSet<String> = bundle
                .group_window()
                .elements()
                .iter()
                .map(|g| g.to_string())
                .filter(|g| l1(&proj.of(g), &x0) <= i64::from(r))
                .collect();
            ensure(
                from_definition == preimage,
                format!("W_{r} differs from the preimage of the closed ball at N = {n}"),
            )?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn criterion_3() -> Check {
    let mut total = 0;
    total += qs_identity(
        |_| CoordinateShift::new(2, 1).unwrap(),
        IntegerLattice::new(2),
        "(0)",
        Projection::FirstCoordinate,
    )?;
    total += qs_identity(|_| Abelianization::new(), Heisenberg, "(0,0)", Projection::Abelian)?;
    total += qs_identity(|_| CursorShift::new(), Lamplighter, "(0)", Projection::Cursor)?;
    total += qs_identity(
        |w| LeftMultiplication::new(w.metric().clone()),
        IntegerLattice::new(2),
        "(0,0)",
        Projection::Identity,
    )?;
    Ok(format!("{total} (action, N, R) cases with R <= N <= 8 agree with the closed-ball preimage"))
}

// ---------------------------------------------------------------- criteria 4, 6

fn z2_report() -> Result<Report, String> {
    let scenario = Scenario::load(&root("scenarios/z2-over-z.example.json")).map_err(err)?;
    run_scenario(&scenario, &RunOptions::default()).map_err(err)
}

struct Instance {
    report: Report,
}

fn criterion_4(inst: &Instance) -> Check {
    let report = &inst.report;
    ensure(report.status == Status::Pass, format!("status {:?}: {:?}", report.status, report.failures))?;
    ensure(report.lambda == Distance::integer(1), "lambda is not 1")?;
    let t = report.transfer.as_ref().ok_or("no transfer")?;
    let (m, n) = (report.plan.m, report.plan.n);
    ensure(t.families.len() == (m + 1) * (n + 1) && t.families.len() == 4, "family count is not 4")?;
    let r = |k: usize| report.plan.scales[k];
    let top = r((m + 1) * (n + 1));
    ensure(top == Distance::integer(5), "r_4 is not 5")?;
    let bound = t.bound;

    let mut min_distinct = i64::MAX;
    let mut min_same = i64::MAX;
    for (k, fam) in t.families.iter().enumerate() {
        let (i, _) = index_pair(k, n);
        let blocks: Vec<Vec<Vec<i64>>> = fam.blocks.iter().map(|b| b.members.iter().map(|p| coords(p)).collect()).collect();
        for a in 0..blocks.len() {
            let diam = diameter(&blocks[a]);
            ensure(!exceeds(diam, bound) && diam * bound.denom() != bound.numer(), format!("W_{k} block {a} is not bounded by {bound}"))?;
            for b in a + 1..blocks.len() {
                let d = min_distance(&blocks[a], &blocks[b]);
                ensure(exceeds(d, r(k)), format!("W_{k} blocks {a}, {b} at distance {d} <= r_{k}"))?;
                if fam.blocks[a].space_block == fam.blocks[b].space_block {
                    ensure(exceeds(d, top), format!("W_{k}: same space block, distance {d} <= {top}"))?;
                    min_same = min_same.min(d);
                } else {
                    let need = r((i + 1) * (n + 1));
                    ensure(exceeds(d, need), format!("W_{k}: distinct space blocks, distance {d} <= {need}"))?;
                    min_distinct = min_distinct.min(d);
                }
            }
        }
    }

    let core = report.window.radius - report.plan.margin;
    let covered: HashSet<Vec<i64>> = t
        .families
        .iter()
        .flat_map(|f| f.blocks.iter().flat_map(|b| b.members.iter().map(|p| coords(p))))
        .collect();
    let c = i64::from(core);
    let mut core_points = 0;
    for a in -c..=c {
        for b in -(c - a.abs())..=(c - a.abs()) {
            core_points += 1;
            ensure(covered.contains(&vec![a, b]), format!("core point ({a},{b}) is uncovered"))?;
        }
    }
    Ok(format!(
        "4 families; min separation {min_distinct} across space blocks, {min_same} within (need > r_(i+1)(n+1), > {top}); \
         blocks < {bound}; core radius {core} ({core_points} points) fully covered"
    ))
}

fn criterion_6(inst: &Instance) -> Check {
    let report = &inst.report;
    let t = report.transfer.as_ref().ok_or("no transfer")?;
    let big_r = report.plan.bound.floor();
    let anchors: BTreeMap<(usize, usize), Vec<i64>> =
        t.anchors.iter().map(|a| ((a.i, a.space_block), coords(&a.anchor))).collect();
    let big_n = i64::from(report.window.radius);
    let mut owner: HashMap<i64, Vec<(usize, usize)>> = HashMap::new();
    for (i, f) in report.space_witness.witness.families.iter().enumerate() {
        for (b, block) in f.blocks.iter().enumerate() {
            for p in block {
                owner.entry(coords(p)[0]).or_default().push((i, b));
            }
        }
    }
    let mut checked = 0;
    for a in -big_n..=big_n {
        for b in -(big_n - a.abs())..=(big_n - a.abs()) {
            for key in owner.get(&a).into_iter().flatten() {
                let g_f = anchors.get(key).ok_or("space block without anchor")?;
                // g in pi^-1(F) must satisfy d(pi(g), g_F x0) = |a - g_F.a| <= R.
                ensure(
                    (a - g_f[0]).abs() <= big_r,
                    format!("({a},{b}) escapes g_F W_R(x0) for anchor {g_f:?}"),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (element, block) incidences over {} space blocks lie in g_F W_R(x0)", anchors.len()))
}

// ---------------------------------------------------------------- criteria 5, 7, 8

fn criterion_5() -> Check {
    let mut pairs = 0;
    for m in 0..=6usize {
        for n in 0..=6usize {
            let count = (m + 1) * (n + 1);
            let mut seen = vec![false; count];
            for i in 0..=m {
                for j in 0..=n {
                    let k = pair_index(i, j, n).map_err(err)?;
                    ensure(k < count && !seen[k], format!("k = {k} repeated or out of range for m={m}, n={n}"))?;
                    seen[k] = true;
                    ensure(index_pair(k, n) == (i, j), "index_pair does not invert pair_index")?;
                    pairs += 1;
                }
            }
            ensure(seen.iter().all(|&s| s), "some k has no pair")?;
            ensure(pair_index(0, n + 1, n).is_err(), "j > n accepted")?;
        }
    }
    Ok(format!("{pairs} pairs over all m, n <= 6 map bijectively onto 0..(m+1)(n+1)"))
}

fn criterion_7() -> Check {
    let good = ChainDoc::load(&root("fixtures/sfdc-chain.json")).map_err(err)?;
    let check = check_chain(&good, Limits::default()).map_err(err)?;
    ensure(check.passed, format!("shipped chain fails: {:?}", check.steps))?;
    let boundary = ChainDoc::load(&root("fixtures/sfdc-chain.boundary.json")).map_err(err)?;
    let check_b = check_chain(&boundary, Limits::default()).map_err(err)?;
    ensure(!check_b.passed, "boundary chain passes")?;
    ensure(check_b.steps[0].passed && !check_b.steps[1].passed, "boundary chain fails at the wrong step")?;
    // The closest pieces of a step-2 half sit exactly r apart.
    let r = boundary.scales.prefix[1].floor();
    let mut closest = i64::MAX;
    for dec in &boundary.steps[1] {
        for half in [&dec.u, &dec.v] {
            let pieces: Vec<Vec<Vec<i64>>> = half.iter().map(|b| b.iter().map(|p| coords(p)).collect()).collect();
            for a in 0..pieces.len() {
                for b in a + 1..pieces.len() {
                    closest = closest.min(min_distance(&pieces[a], &pieces[b]));
                }
            }
        }
    }
    ensure(closest == r, format!("closest step-2 pieces at {closest}, not exactly {r}"))?;
    Ok(format!(
        "2-step chain on [-200,200] passes (terminal max diameter {}); boundary tamper at separation exactly {r} fails at step 2",
        check.terminal_max_diameter.map_or("-".into(), |d| d.to_string())
    ))
}

fn criterion_8(first: &Report) -> Check {
    let reference = to_json(first).map_err(err)?;
    for run in 0..2 {
        ensure(to_json(&z2_report()?).map_err(err)? == reference, format!("run {} differs", run + 2))?;
    }
    for threads in [1, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(err)?;
        let text = pool.install(|| z2_report().and_then(|r| to_json(&r).map_err(err)))?;
        ensure(text == reference, format!("report differs with {threads} threads"))?;
    }
    Ok(format!("{} bytes identical across 3 runs and 1/2/4 threads", reference.len()))
}

// ----------------------------------------------------------------------------

fn timed(f: impl FnOnce() -> Check) -> (Check, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn main() {
    let mut failed = 0;
    let mut line = |n: u32, title: &str, limit: Option<u64>, (out, took): (Check, Duration)| {
        let over = limit.is_some_and(|l| took > Duration::from_secs(l));
        let limit_text = limit.map_or("no limit".to_string(), |l| format!("limit {l}s"));
        let (status, detail) = match &out {
            Ok(d) if !over => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("too slow; {d}")),
            Err(e) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {n} [{title}]: {status} in {:.2}s ({limit_text}): {detail}",
            took.as_secs_f64()
        );
    };

    line(1, "definitional predicates", Some(10), timed(criterion_1));
    line(2, "Lipschitz projection", Some(5), timed(criterion_2));
    line(3, "quasi-stabilizer identity", Some(5), timed(criterion_3));

    let start = Instant::now();
    let instance = z2_report().map(|report| Instance { report });
    let built = start.elapsed();
    match &instance {
        Ok(inst) => {
            let (out4, t4) = timed(|| criterion_4(inst));
            line(4, "end-to-end transfer, z2-over-z N=60", Some(60), (out4, built + t4));
            line(5, "index bijection", Some(1), timed(criterion_5));
            line(6, "containment in g_F W_R(x0)", Some(60), timed(|| criterion_6(inst)));
        }
        Err(e) => {
            line(4, "end-to-end transfer, z2-over-z N=60", Some(60), (Err(e.clone()), built));
            line(5, "index bijection", Some(1), timed(criterion_5));
            line(5, "index bijection", Some(1), timed(criterion_5));
            line(6, "containment in g_F W_R(x0)", Some(60), (Err(e.clone()), built));
        }
    }
    line(7, "sFDC chain", Some(2), timed(criterion_7));
    match &instance {
        Ok(inst) => line(8, "determinism", None, timed(|| criterion_8(&inst.report))),
        Err(e) => line(8, "determinism", None, (Err(e.clone()), Duration::ZERO)),
    }

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
