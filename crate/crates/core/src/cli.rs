//! The `coarse-cover` command line. Exit codes: 0 pass, 1 verification
//! failure, 2 usage or validation error, 3 resource cap exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::{to_json, write_text, ChainDoc, CoverRecipe, GroupSpec, Scenario, WindowSpec, WitnessDoc};
use crate::limits::Limits;
use crate::metric::Distance;
use crate::pipeline::{
    ball_listing, check_chain, check_witness, cover_window, quasi_stabilizer_listing, run_scenario, RunOptions,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "coarse-cover",
    version,
    about = "Build and verify coarse cover witnesses on finite windows",
    after_help = "Resource caps: COARSE_COVER_MAX_POINTS, COARSE_COVER_MAX_PAIRS"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a scenario end to end and write its report
    Run {
        scenario: PathBuf,
        /// Report path; defaults to the scenario's `output`, else stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Re-verify a witness file on its window
    Verify {
        witness: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List the ball of radius N in a group
    Ball {
        /// lattice:K, free:K, lamplighter or heisenberg
        #[arg(long)]
        group: GroupSpec,
        #[arg(short = 'N', long)]
        radius: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List the quasi-stabilizer W_R(x0) of a scenario's action
    Quasistab {
        scenario: PathBuf,
        #[arg(short = 'R', long = "qs-radius")]
        radius: Distance,
        /// Group window radius; defaults to the scenario's
        #[arg(short = 'N', long)]
        window: Option<u32>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a witness on a window by a named recipe
    Cover {
        /// interval, product, brick, layers or clusters
        #[arg(long)]
        recipe: String,
        #[arg(short = 'r', long)]
        scale: Distance,
        /// box:LOWER:UPPER, ball:CENTER:R or group:GROUP:R
        #[arg(long)]
        window: WindowSpec,
        /// Height function for layers: center, cursor or axis:K
        #[arg(long, default_value = "axis:0")]
        key: String,
        #[arg(long, default_value_t = 1024)]
        max_period: i64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Transfer explicit witnesses along a scenario's action
    Transfer {
        scenario: PathBuf,
        #[arg(long)]
        space_witness: Option<PathBuf>,
        #[arg(long)]
        qs_witness: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verify a decomposition chain file
    SfdcCheck {
        chain: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::ResourceCap { .. } => EXIT_RESOURCE,
        Error::Consistency(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

/// Where the machine-readable result goes, and the human summary with it.
struct Sink<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Sink<'_> {
    /// Writes `doc` to `path` (summary to stdout) or to stdout (summary to stderr).
    fn emit<T: Serialize>(&mut self, doc: &T, path: Option<&Path>, summary: &str) -> Result<()> {
        let text = to_json(doc)?;
        match path {
            Some(p) => {
                write_text(p, &text)?;
                self.out.write_all(summary.as_bytes())?;
            }
            None => {
                self.out.write_all(text.as_bytes())?;
                self.err.write_all(summary.as_bytes())?;
            }
        }
        Ok(())
    }
}

/// Summaries list at most this many failures.
const SHOWN_FAILURES: usize = 8;

fn push_failures(summary: &mut String, failures: &[String]) {
    for f in failures.iter().take(SHOWN_FAILURES) {
        summary.push_str(&format!("FAILED {f}\n"));
    }
    if failures.len() > SHOWN_FAILURES {
        summary.push_str(&format!("... and {} more\n", failures.len() - SHOWN_FAILURES));
    }
}

fn status_code(passed: bool) -> i32 {
    if passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn recipe_from_flags(kind: &str, scale: Distance, key: String, max_period: i64) -> Result<CoverRecipe> {
    let scale = Some(scale);
    Ok(match kind {
        "interval" => CoverRecipe::Interval { scale },
        "product" => CoverRecipe::Product { scale },
        "brick" => CoverRecipe::Brick { scale },
        "layers" => CoverRecipe::Layers { scale, key, max_period },
        "clusters" => CoverRecipe::Clusters { scale },
        "strip" => {
            return Err(Error::Unsupported(
                "the strip recipe applies to quasi-stabilizers; use it inside a scenario".into(),
            ))
        }
        other => return Err(Error::parse("recipe (interval, product, brick, layers, clusters)", other)),
    })
}

/// A scenario's `output` is taken relative to the scenario file.
fn report_path(scenario_path: &Path, scenario: &Scenario, flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| {
        scenario.output.as_ref().map(|o| match scenario_path.parent() {
            Some(dir) => dir.join(o),
            None => PathBuf::from(o),
        })
    })
}

fn execute(command: Command, limits: Limits, sink: &mut Sink<'_>) -> Result<i32> {
    match command {
        Command::Run { scenario, output } => {
            let sc = Scenario::load(&scenario)?;
            let report = run_scenario(
                &sc,
                &RunOptions {
                    limits,
                    ..RunOptions::default()
                },
            )?;
            let path = report_path(&scenario, &sc, output);
            sink.emit(&report, path.as_deref(), &report.summary())?;
            Ok(status_code(report.passed()))
        }
        Command::Transfer {
            scenario,
            space_witness,
            qs_witness,
            output,
        } => {
            let sc = Scenario::load(&scenario)?;
            let load = |p: Option<PathBuf>| p.map(|p| WitnessDoc::load(&p)).transpose();
            let options = RunOptions {
                limits,
                space_witness: load(space_witness)?,
                qs_witness: load(qs_witness)?,
            };
            let report = run_scenario(&sc, &options)?;
            let path = report_path(&scenario, &sc, output);
            sink.emit(&report, path.as_deref(), &report.summary())?;
            Ok(status_code(report.passed()))
        }
        Command::Verify { witness, output } => {
            let doc = WitnessDoc::load(&witness)?;
            let check = check_witness(&doc, limits)?;
            let mut summary = format!(
                "witness {}: {} families on {}, bound {}\n",
                witness.display(),
                check.families.len(),
                doc.window,
                check.bound
            );
            push_failures(&mut summary, &check.failures);
            summary.push_str(if check.passed { "status: pass\n" } else { "status: fail\n" });
            sink.emit(&check, output.as_deref(), &summary)?;
            Ok(status_code(check.passed))
        }
        Command::Ball { group, radius, output } => {
            #[derive(Serialize)]
            struct Entry {
                element: String,
                length: u32,
            }
            #[derive(Serialize)]
            struct BallDoc {
                group: GroupSpec,
                radius: u32,
                size: usize,
                elements: Vec<Entry>,
            }
            let elements: Vec<Entry> = ball_listing(&group, radius, limits)?
                .into_iter()
                .map(|(element, length)| Entry { element, length })
                .collect();
            let summary = format!("ball of radius {radius} in {group}: {} elements\n", elements.len());
            let doc = BallDoc {
                group,
                radius,
                size: elements.len(),
                elements,
            };
            sink.emit(&doc, output.as_deref(), &summary)?;
            Ok(EXIT_PASS)
        }
        Command::Quasistab {
            scenario,
            radius,
            window,
            output,
        } => {
            let sc = Scenario::load(&scenario)?;
            let doc = quasi_stabilizer_listing(&sc, radius, window.unwrap_or(sc.radius), limits)?;
            let summary = format!(
                "W_{} over the ball of radius {}: {} members\n",
                doc.radius, doc.window_radius, doc.size
            );
            sink.emit(&doc, output.as_deref(), &summary)?;
            Ok(EXIT_PASS)
        }
        Command::Cover {
            recipe,
            scale,
            window,
            key,
            max_period,
            output,
        } => {
            let recipe = recipe_from_flags(&recipe, scale, key, max_period)?;
            let doc = cover_window(&recipe, &window, limits)?;
            let summary = format!(
                "{} cover of {} at scale {}: {} families, bound {}\n",
                recipe.kind(),
                window,
                scale,
                doc.families.len(),
                doc.bound
            );
            sink.emit(&doc, output.as_deref(), &summary)?;
            Ok(EXIT_PASS)
        }
        Command::SfdcCheck { chain, output } => {
            let doc = ChainDoc::load(&chain)?;
            let check = check_chain(&doc, limits)?;
            let mut summary = format!("chain {}: {} steps\n", chain.display(), check.steps.len());
            let failures: Vec<String> = check
                .steps
                .iter()
                .flat_map(|s| s.failures.iter().map(move |f| format!("step {} (r = {}): {f}", s.step, s.scale)))
                .collect();
            push_failures(&mut summary, &failures);
            if !check.terminal_bounded {
                summary.push_str(&format!("FAILED terminal family is not bounded by {}\n", check.terminal_bound));
            }
            summary.push_str(if check.passed { "status: pass\n" } else { "status: fail\n" });
            sink.emit(&check, output.as_deref(), &summary)?;
            Ok(status_code(check.passed))
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let limits = match Limits::from_env() {
        Ok(l) => l,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut sink = Sink { out, err };
    match execute(cli.command, limits, &mut sink) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(sink.err, "error: {e}");
            exit_code(&e)
        }
    }
}
