//! The `virmod` command line.
//!
//! Exit codes: 0 when every check passed, 1 when an identity failed (the
//! report carries the witness), 2 for usage or configuration errors.

pub mod config;

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use virmod_core::av::{to_h_basis, AvModule};
use virmod_core::dynamic::{DynElem, DynModule};
use virmod_core::fmod::FModule;
use virmod_core::probe::{dyn_sweep_seeds, generate, sweep, OperatorSet, ProbeConfig, ProbeVerdict, SweepVerdict};
use virmod_core::text::{fmt_h_basis, parse_element, Registry};
use virmod_core::verify::{parameter_sweep, suite_gm_lemma, Suite, SuiteResult, SuiteWindow, SweepPoint};
use virmod_core::weighting::{expected_image, FWeightTable, WeightTable};
use virmod_core::{int, Error};

pub use config::ModuleFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "virmod", version, about = "Exact workbench for polynomial modules over the Virasoro algebra")]
pub struct Cli {
    /// JSON file of named module definitions.
    #[arg(long, global = true, value_name = "PATH")]
    pub module_file: Option<PathBuf>,
    /// Emit a JSON document instead of the line format.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply d:<m>, x:<m>, g:<m> or c to an element.
    Act {
        module: String,
        op: String,
        #[arg(allow_hyphen_values = true)]
        elem: String,
        /// Also print an Omega element in the h_m^n basis.
        #[arg(long)]
        h_basis: bool,
        /// Anchor m of the h_m^n basis.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        anchor: i64,
    },
    /// Run identity suites: bracket, compat, g, gm, ff, h, weighting or all.
    Verify {
        suite: String,
        /// Module to check instead of the default fixtures.
        #[arg(long)]
        module: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        /// Modes |m| ≤ window.
        #[arg(long, default_value_t = 4)]
        window: i64,
        /// Degree cap of the inner space.
        #[arg(long, default_value_t = 5)]
        dt_cap: usize,
        /// Degree cap of polynomial B_r carriers.
        #[arg(long, default_value_t = 5)]
        dx_cap: usize,
    },
    /// Probe the submodule generated by a seed, or sweep the default seeds.
    Closure {
        module: String,
        #[arg(long, allow_hyphen_values = true)]
        seed: Option<String>,
        #[arg(long, default_value_t = 4)]
        window: i64,
        #[arg(long, default_value_t = 5)]
        dt_cap: usize,
        #[arg(long, default_value_t = 3)]
        dx_cap: usize,
        /// Close under x^m as well as d_m.
        #[arg(long)]
        full_ops: bool,
        /// Print the basis of a proper subspace.
        #[arg(long)]
        basis: bool,
    },
    /// Rescaled action table of the weighted module.
    Weight {
        module: String,
        /// Indices |m|, |n| ≤ window.
        #[arg(long, default_value_t = 5)]
        window: i64,
        #[arg(long, default_value_t = 3)]
        dx_cap: usize,
    },
}

/// Outcome of a command that ran: the report and whether every check held.
struct Report {
    text: String,
    passed: bool,
}

impl Report {
    fn ok(text: String) -> Self {
        Report { text, passed: true }
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn json_text(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn registry(cli: &Cli) -> virmod_core::Result<Registry> {
    match &cli.module_file {
        Some(path) => ModuleFile::load(path)?.registry(),
        None => Ok(Registry::new()),
    }
}

fn parse_input(module: &DynModule, s: &str) -> virmod_core::Result<DynElem> {
    let e = parse_element(module, s)?;
    if !module.accepts(&e) {
        return Err(usage(format!("`{s}` is not an element of {}", module.label())));
    }
    Ok(e)
}

fn cmd_act(
    reg: &Registry,
    json: bool,
    module: &str,
    op: &str,
    elem: &str,
    h_basis: bool,
    anchor: i64,
) -> virmod_core::Result<Report> {
    let module = reg.parse_module(module)?;
    let op = op.trim();
    let result = if op == "c" {
        DynElem::Zero
    } else {
        let (kind, m) = op
            .split_once(':')
            .ok_or_else(|| usage(format!("operator must be d:<m>, x:<m>, g:<m> or c, got `{op}`")))?;
        let m: i64 = m.trim().parse().map_err(|_| usage(format!("bad mode in `{op}`")))?;
        let v = parse_input(&module, elem)?;
        match kind.trim() {
            "d" => module.d(m, &v),
            "x" => module.x(m, &v),
            "g" => module.g(m, &v),
            other => return Err(usage(format!("unknown operator `{other}`"))),
        }
    };
    let h = if h_basis {
        match (&module, &result) {
            (DynModule::Omega(_), DynElem::Poly(p)) => Some(fmt_h_basis(&to_h_basis(p, anchor))),
            (DynModule::Omega(_), DynElem::Zero) => Some("0".to_string()),
            _ => return Err(usage("--h-basis applies to Omega elements")),
        }
    } else {
        None
    };
    let text = if json {
        json_text(&json!({
            "module": module.label(),
            "op": op,
            "input": elem,
            "result": result.to_string(),
            "h_basis": h,
        }))
    } else {
        let mut s = format!("{result}\n");
        if let Some(h) = h {
            let _ = writeln!(s, "{h}");
        }
        s
    };
    Ok(Report::ok(text))
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    reg: &Registry,
    json: bool,
    suite: &str,
    module: Option<&str>,
    params: [Option<&str>; 4],
    window: SuiteWindow,
) -> virmod_core::Result<Report> {
    let all = suite == "all";
    let suites: Vec<Suite> = if all { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    let mut results: Vec<SuiteResult> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();
    match module {
        Some(name) => {
            if params.iter().any(Option::is_some) {
                return Err(usage("--lambda/--beta/--alpha/--gamma apply to the default fixtures, not --module"));
            }
            for s in suites {
                let outcome = if s == Suite::Gm {
                    reg.parse_br(name).map(|br| vec![suite_gm_lemma(&br, window)])
                } else {
                    reg.parse_module(name).and_then(|m| s.run_on_module(&m, window))
                };
                match outcome {
                    Ok(r) => results.extend(r),
                    Err(e) if all => skipped.push(format!("SKIP {} {name} ({e})", s.name())),
                    Err(e) => return Err(e),
                }
            }
        }
        None => {
            let points = if params.iter().any(Option::is_some) {
                let q = |p: Option<&str>| p.map(virmod_core::exact::parse_rational).transpose();
                let [l, b, a, g] = params;
                let point = SweepPoint::new(
                    q(l)?.unwrap_or_else(|| int(1)),
                    q(b)?.unwrap_or_else(|| int(0)),
                    q(a)?.unwrap_or_else(|| int(0)),
                    q(g)?.unwrap_or_else(|| int(0)),
                );
                // rejects λ = 0 and the like before any suite runs
                point.av_fixtures()?;
                vec![point]
            } else {
                parameter_sweep()
            };
            for s in suites {
                for p in &points {
                    results.extend(s.run_on_point(p, window)?);
                }
            }
        }
    }
    if results.is_empty() {
        return Err(usage(format!("no suite applies to {}", module.unwrap_or("the fixtures"))));
    }
    let failed = results.iter().filter(|r| !r.passed()).count();
    let text = if json {
        json_text(&results)
    } else {
        let mut s = String::new();
        for r in &results {
            let _ = writeln!(s, "{}", r.summary());
            for f in &r.failures {
                let _ = writeln!(s, "  {} on {}: {} != {}", f.op, f.witness, f.lhs, f.rhs);
            }
        }
        for line in &skipped {
            let _ = writeln!(s, "{line}");
        }
        if failed == 0 {
            let _ = writeln!(s, "all {} suite runs passed", results.len());
        } else {
            let _ = writeln!(s, "{failed} of {} suite runs failed", results.len());
        }
        s
    };
    Ok(Report {
        text,
        passed: failed == 0,
    })
}

fn verdict_json(v: &ProbeVerdict<DynElem>, with_basis: bool) -> serde_json::Value {
    let (kind, window_dim, basis) = match v {
        ProbeVerdict::ProperInvariantSubspaceFound { basis, window_dim } => ("proper", window_dim, Some(basis)),
        ProbeVerdict::FullWindowReached { window_dim } => ("full", window_dim, None),
        ProbeVerdict::Inconclusive { window_dim, .. } => ("inconclusive", window_dim, None),
    };
    json!({
        "verdict": kind,
        "summary": v.summary(),
        "window_dim": window_dim,
        "basis": basis.filter(|_| with_basis).map(|b| b.iter().map(|e| e.to_string()).collect::<Vec<_>>()),
    })
}

fn cmd_closure(
    reg: &Registry,
    json: bool,
    module: &str,
    seed: Option<&str>,
    cfg: ProbeConfig,
    with_basis: bool,
) -> virmod_core::Result<Report> {
    let module = reg.parse_module(module)?;
    let mut s = String::new();
    match seed {
        Some(seed) => {
            let seed = parse_input(&module, seed)?;
            let v = generate(&module, &seed, &cfg)?;
            if json {
                let mut doc = verdict_json(&v, with_basis);
                doc["module"] = json!(module.label());
                doc["seed"] = json!(seed.to_string());
                s = json_text(&doc);
            } else {
                let _ = writeln!(s, "{}", v.summary());
                if let (true, ProbeVerdict::ProperInvariantSubspaceFound { basis, .. }) = (with_basis, &v) {
                    for b in basis {
                        let _ = writeln!(s, "  {b}");
                    }
                }
            }
        }
        None => {
            let seeds = dyn_sweep_seeds(&module);
            let v = sweep(&module, &seeds, &cfg)?;
            let (kind, summary, basis) = match &v {
                SweepVerdict::Reducible { seed, basis, window_dim } => (
                    "proper",
                    format!("PROPER SUBSPACE (dim {} of {window_dim}) from seed {seed}", basis.len()),
                    Some(basis),
                ),
                SweepVerdict::IrreducibleEvidence { seeds } => {
                    ("full", format!("FULL WINDOW from all {seeds} seeds"), None)
                }
                SweepVerdict::Inconclusive { seed, profile } => {
                    let dims: Vec<String> = profile.iter().map(|d| d.to_string()).collect();
                    ("inconclusive", format!("INCONCLUSIVE (dims {}) from seed {seed}", dims.join(",")), None)
                }
            };
            let basis: Option<Vec<String>> =
                basis.filter(|_| with_basis).map(|b| b.iter().map(|e| e.to_string()).collect());
            if json {
                s = json_text(&json!({
                    "module": module.label(),
                    "verdict": kind,
                    "summary": summary,
                    "basis": basis,
                }));
            } else {
                let _ = writeln!(s, "{summary}");
                for b in basis.iter().flatten() {
                    let _ = writeln!(s, "  {b}");
                }
            }
        }
    }
    Ok(Report::ok(s))
}

fn cmd_weight(reg: &Registry, json: bool, module: &str, window: i64, dx_cap: usize) -> virmod_core::Result<Report> {
    if window < 0 {
        return Err(Error::EmptyWindow);
    }
    let module = reg.parse_module(module)?;
    match &module {
        DynModule::Omega(w) => {
            let image = expected_image(w);
            let table = WeightTable::of_omega(w, window);
            let diff = table.first_difference(&WeightTable::of_a(&image, window));
            let text = if json {
                let entries: Vec<_> = table
                    .entries
                    .iter()
                    .map(|((m, n), c)| json!({"m": m, "n": n, "coefficient": c.to_string()}))
                    .collect();
                json_text(&json!({
                    "image": image.label(),
                    "matches_image": diff.is_none(),
                    "first_difference": diff,
                    "entries": entries,
                }))
            } else {
                let mut s = format!("image {}\n{table}", image.label());
                match diff {
                    None => {
                        let _ = writeln!(s, "matches {}", image.label());
                    }
                    Some((m, n)) => {
                        let _ = writeln!(s, "differs from {} at m={m} n={n}", image.label());
                    }
                }
                s
            };
            Ok(Report {
                text,
                passed: diff.is_none(),
            })
        }
        DynModule::F(f) => {
            let DynModule::Omega(w) = f.inner() else {
                return Err(Error::Unsupported(format!(
                    "weighting is implemented for Omega and F(M, Omega), not {}",
                    module.label()
                )));
            };
            let typed = FModule::new(f.br().clone(), w.clone())?;
            let image = FModule::new(f.br().clone(), expected_image(w))?;
            let table = FWeightTable::of_f_omega(&typed, window, dx_cap);
            let diff = table.first_difference(&FWeightTable::of_f_a(&image, window, dx_cap));
            let text = if json {
                let entries: Vec<_> = table
                    .entries
                    .iter()
                    .map(|((m, n, k), e)| {
                        json!({"m": m, "n": n, "v": k, "image": e.to_string()})
                    })
                    .collect();
                json_text(&json!({
                    "image": image.label(),
                    "matches_image": diff.is_none(),
                    "entries": entries,
                }))
            } else {
                let mut s = format!("image {}\n{table}", image.label());
                match &diff {
                    None => {
                        let _ = writeln!(s, "matches {}", image.label());
                    }
                    Some((m, n, k)) => {
                        let _ = writeln!(s, "differs from {} at m={m} n={n} v={k:?}", image.label());
                    }
                }
                s
            };
            Ok(Report {
                text,
                passed: diff.is_none(),
            })
        }
        _ => Err(Error::Unsupported(format!(
            "weighting is implemented for Omega and F(M, Omega), not {}",
            module.label()
        ))),
    }
}

fn dispatch(cli: &Cli) -> virmod_core::Result<Report> {
    let reg = registry(cli)?;
    match &cli.command {
        Command::Act {
            module,
            op,
            elem,
            h_basis,
            anchor,
        } => cmd_act(&reg, cli.json, module, op, elem, *h_basis, *anchor),
        Command::Verify {
            suite,
            module,
            lambda,
            beta,
            alpha,
            gamma,
            window,
            dt_cap,
            dx_cap,
        } => {
            if *window < 1 || *dt_cap < 1 || *dx_cap < 1 {
                return Err(Error::EmptyWindow);
            }
            cmd_verify(
                &reg,
                cli.json,
                suite,
                module.as_deref(),
                [lambda.as_deref(), beta.as_deref(), alpha.as_deref(), gamma.as_deref()],
                SuiteWindow::new(*window, *dt_cap, *dx_cap),
            )
        }
        Command::Closure {
            module,
            seed,
            window,
            dt_cap,
            dx_cap,
            full_ops,
            basis,
        } => {
            let ops = if *full_ops { OperatorSet::Full } else { OperatorSet::Virasoro };
            let cfg = ProbeConfig::default()
                .with_modes(*window)
                .with_caps(*dt_cap, *dx_cap)
                .with_operators(ops);
            cmd_closure(&reg, cli.json, module, seed.as_deref(), cfg, *basis)
        }
        Command::Weight { module, window, dx_cap } => cmd_weight(&reg, cli.json, module, *window, *dx_cap),
    }
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
                return EXIT_OK;
            }
            let _ = err.write_all(text.as_bytes());
            return EXIT_USAGE;
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let _ = out.write_all(report.text.as_bytes());
            if report.passed {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
