use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use cplkit::cpl::decide_cpl;
use cplkit::lp::{
    ground, parse_atom, parse_program, query, saturate_with, stratify, Mode, SaturateOptions,
};
use cplkit::nd::{check_nd_diag, extract_nd, parse_nd};
use cplkit::syntax::{parse_frame, parse_sequent, Frame, Sequent};
use cplkit::validation::{run_suite, SuiteConfig};
use cplkit::Logic;

#[derive(Parser)]
#[command(name = "cplkit", version, about = "Deciders and tools for constructive provability logic")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide a sequent.
    Prove(ProveArgs),
    /// Check a natural-deduction term against a sequent.
    Check(CheckArgs),
    /// Saturate a stratified Datalog program.
    Run(RunArgs),
    /// Run the axiom validation suite.
    Axioms(AxiomArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum LogicArg {
    Cpl,
    Cpls,
}

impl From<LogicArg> for Logic {
    fn from(l: LogicArg) -> Logic {
        match l {
            LogicArg::Cpl => Logic::Cpl,
            LogicArg::Cpls => Logic::CplStar,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Print one JSON document instead of text.
    #[arg(long)]
    json: bool,
    /// Include wall-clock timings in JSON output.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct ProveArgs {
    #[arg(long, value_enum)]
    logic: LogicArg,
    #[arg(long)]
    frame: PathBuf,
    #[arg(long)]
    sequent: PathBuf,
    /// Write the extracted proof term here (cpl only).
    #[arg(long)]
    certificate: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    logic: LogicArg,
    #[arg(long)]
    frame: PathBuf,
    #[arg(long)]
    sequent: PathBuf,
    #[arg(long)]
    nd: PathBuf,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct RunArgs {
    program: PathBuf,
    /// Ground atom to query.
    #[arg(long, conflicts_with = "all")]
    query: Option<String>,
    /// Print the whole saturated database (the default).
    #[arg(long)]
    all: bool,
    /// Use semi-naive instead of naive iteration.
    #[arg(long)]
    semi_naive: bool,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct AxiomArgs {
    /// Battery seed; `CPLKIT_SEED` takes precedence.
    #[arg(long, default_value_t = 2011)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    frames: usize,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    max_worlds: u64,
    #[command(flatten)]
    out: Output,
}

/// A failure that maps to exit code 2.
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(InputError)
}

fn load(frame: &Path, sequent: &Path) -> Result<(Frame, Sequent), InputError> {
    let f = parse_frame(&read(frame)?).map_err(|e| anyhow!("{}: {e}", frame.display()))?;
    let s = parse_sequent(&read(sequent)?, &f).map_err(|e| anyhow!("{}: {e}", sequent.display()))?;
    Ok((f, s))
}

fn emit(out: &Output, start: Instant, mut doc: serde_json::Value, text: &str) {
    if out.json {
        if out.timings {
            doc["elapsed_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
        }
        println!("{}", serde_json::to_string_pretty(&doc).expect("json values serialize"));
    } else {
        print!("{text}");
    }
}

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn prove(a: ProveArgs) -> Result<ExitCode, InputError> {
    let start = Instant::now();
    let logic = Logic::from(a.logic);
    if a.certificate.is_some() && logic != Logic::Cpl {
        return Err(anyhow!("--certificate is only available with --logic cpl").into());
    }
    let (frame, s) = load(&a.frame, &a.sequent)?;
    let (provable, term) = match logic {
        Logic::Cpl => {
            let r = decide_cpl(&frame, &s.ctx, &s.goal, s.world);
            let term = match (&a.certificate, r.proof()) {
                (Some(_), Some(p)) => Some(extract_nd(&frame, &s.ctx, &s.goal, s.world, p)?),
                _ => None,
            };
            (r.is_provable(), term)
        }
        Logic::CplStar => (logic.provable(&frame, &s.ctx, &s.goal, s.world), None),
    };
    let mut written = None;
    if let (Some(path), Some(t)) = (&a.certificate, &term) {
        check_nd_diag(logic, &frame, &s.ctx, t, &s.goal, s.world)
            .map_err(|e| anyhow!("extracted certificate does not check: {e}"))?;
        fs::write(path, format!("{}\n", t.display(&frame)))
            .with_context(|| format!("cannot write {}", path.display()))?;
        written = Some(path.display().to_string());
    }
    let verdict = if provable { "provable" } else { "refuted" };
    let doc = json!({
        "command": "prove",
        "logic": logic.name(),
        "verdict": verdict,
        "certificate": written,
    });
    let mut text = format!("{verdict}\n");
    if let Some(p) = &written {
        text.push_str(&format!("certificate written to {p}\n"));
    }
    emit(&a.out, start, doc, &text);
    Ok(exit(provable))
}

fn check(a: CheckArgs) -> Result<ExitCode, InputError> {
    let start = Instant::now();
    let logic = Logic::from(a.logic);
    let (frame, s) = load(&a.frame, &a.sequent)?;
    let term = parse_nd(&read(&a.nd)?, &frame).map_err(|e| anyhow!("{}: {e}", a.nd.display()))?;
    let r = check_nd_diag(logic, &frame, &s.ctx, &term, &s.goal, s.world);
    let doc = json!({
        "command": "check",
        "logic": logic.name(),
        "verdict": if r.is_ok() { "accepted" } else { "rejected" },
        "failure": r.as_ref().err(),
    });
    let text = match &r {
        Ok(()) => "accepted\n".to_string(),
        Err(e) => format!("rejected: {e}\n"),
    };
    emit(&a.out, start, doc, &text);
    Ok(exit(r.is_ok()))
}

fn run(a: RunArgs) -> Result<ExitCode, InputError> {
    let start = Instant::now();
    let src = read(&a.program)?;
    let name = a.program.display();
    let sp = parse_program(&src)
        .and_then(|p| ground(&p))
        .and_then(|g| stratify(&g))
        .map_err(|e| anyhow!("{name}: {e}"))?;
    let mode = if a.semi_naive { Mode::SemiNaive } else { Mode::Naive };
    let (db, _) = saturate_with(&sp, SaturateOptions { mode, shuffle_seed: None });
    match a.query {
        Some(q) => {
            let atom = parse_atom(&q).map_err(|e| anyhow!("query: {e}"))?;
            let holds = query(&sp, &db, &atom);
            let doc = json!({ "command": "run", "query": atom.to_string(), "result": holds });
            emit(&a.out, start, doc, &format!("{holds}\n"));
            Ok(exit(holds))
        }
        None => {
            let doc = json!({ "command": "run", "database": db.lines() });
            emit(&a.out, start, doc, &db.to_string());
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct Row<'a> {
    schema: &'a str,
    logic: &'a str,
    frames: usize,
    instances: usize,
    verdict: &'a str,
    deviates: bool,
    counterexample: Option<String>,
}

fn axioms(a: AxiomArgs) -> Result<ExitCode, InputError> {
    let start = Instant::now();
    let seed = match std::env::var("CPLKIT_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| anyhow!("CPLKIT_SEED must be an unsigned integer, got `{s}`"))?,
        Err(_) => a.seed,
    };
    let cfg = SuiteConfig { seed, frames: a.frames, max_worlds: a.max_worlds as usize };
    let suite = run_suite(cfg);
    let mut text = format!(
        "battery: seed {} frames {} max-worlds {}\n",
        cfg.seed, cfg.frames, cfg.max_worlds
    );
    text.push_str(&suite.table());
    let found: Vec<_> = suite.rows.iter().filter_map(|r| r.counterexample.as_ref().map(|c| (r, c))).collect();
    if !found.is_empty() {
        text.push_str("\ncounterexamples:\n");
        for (r, c) in &found {
            text.push_str(&format!("  {} [{}]: {c}\n", r.name, r.logic.name()));
        }
    }
    text.push_str(if suite.passed() { "\nall verdicts match\n" } else { "\ndeviations found\n" });
    let rows: Vec<Row> = suite
        .rows
        .iter()
        .map(|r| Row {
            schema: &r.name,
            logic: r.logic.name(),
            frames: r.frames,
            instances: r.instances,
            verdict: if r.counterexample.is_some() { "invalid" } else { "valid" },
            deviates: r.deviates(),
            counterexample: r.counterexample.as_ref().map(|c| c.to_string()),
        })
        .collect();
    let cms: Vec<_> = suite
        .countermodels
        .iter()
        .map(|(l, c, ok)| json!({ "name": c.name, "logic": l.name(), "refuted": ok }))
        .collect();
    let doc = json!({
        "command": "axioms",
        "config": cfg,
        "rows": rows,
        "countermodels": cms,
        "passed": suite.passed(),
    });
    emit(&a.out, start, doc, &text);
    Ok(exit(suite.passed()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Prove(a) => prove(a),
        Cmd::Check(a) => check(a),
        Cmd::Run(a) => run(a),
        Cmd::Axioms(a) => axioms(a),
    };
    match r {
        Ok(code) => code,
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
