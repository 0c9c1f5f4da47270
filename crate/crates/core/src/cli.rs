//! Command-line front end. [`run`] does everything except touching the
//! process: it returns the exit code and the text for stdout/stderr.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::backward::{branches, sample_branches};
use crate::birkhoff::{verify_neighborhood, verify_theorem, Neighborhood, NeighborhoodLabel, Target, VerifyParams};
use crate::chain::{chain_check, ChainParams, Verdict};
use crate::error::{Error, Result};
use crate::fixtures::{fixture_map, list_fixtures};
use crate::limit_sets::{alpha_approx, alpha_branch_approx, omega_approx, periodic_points, salpha_approx, SalphaMode};
use crate::parallel::{configured_threads, with_threads};
use crate::plmap::{parse_map, PLMap};
use crate::rat::Rat;
use crate::report::Report;
use crate::sampler::BranchSampler;
use crate::svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "backlimit",
    version,
    about = "Backward dynamics of piecewise-linear interval maps, in exact rational arithmetic"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fixed and periodic points, limit-set approximations and the inclusion chain.
    Analyze(AnalyzeArgs),
    /// Backward orbit branches of a point, all of them or a seeded sample.
    Branches(BranchesArgs),
    /// One limit set of one point.
    Limitset(LimitsetArgs),
    /// Subcover and excursion scan for a neighborhood of A(f), SA(f), or a custom U.
    Birkhoff(BirkhoffArgs),
    /// Inclusion chain Fix ⊂ Per ⊂ Rec ⊂ SA ⊂ cl(Rec) ⊂ ω(f) ⊂ NW ⊂ A.
    Chain(ChainArgs),
    /// Built-in maps.
    #[command(subcommand)]
    Fixture(FixtureCmd),
    /// SVG figure of the map, a cobweb, or a preimage tree.
    Render(RenderArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct AnalyzeArgs {
    /// Map file or fixture name.
    pub map: String,
    #[arg(long, default_value = "1/32")]
    pub eps: Rat,
    #[arg(long, default_value_t = 14)]
    pub depth: usize,
    #[arg(long, default_value_t = 6)]
    pub tail: usize,
    #[arg(long, default_value_t = 2)]
    pub min_hits: usize,
    #[arg(long, default_value_t = 3)]
    pub p_max: usize,
    #[arg(long, default_value_t = 32)]
    pub nw_steps: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub node_cap: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct BranchesArgs {
    pub map: String,
    #[arg(long)]
    pub point: Rat,
    #[arg(long)]
    pub depth: usize,
    /// Every branch (the default when --sample is absent).
    #[arg(long, conflicts_with = "sample")]
    pub all: bool,
    /// Number of sampled branches.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100_000)]
    pub branch_cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Omega,
    Alpha,
    Salpha,
    Branch,
}

#[derive(Args, Debug, Serialize)]
pub struct LimitsetArgs {
    pub map: String,
    #[arg(long)]
    pub point: Rat,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, default_value_t = 20)]
    pub depth: usize,
    #[arg(long, default_value = "1/64")]
    pub eps: Rat,
    #[arg(long, default_value_t = 10)]
    pub tail: usize,
    /// Defaults to 2 for alpha/salpha and 1 for a single branch.
    #[arg(long)]
    pub min_hits: Option<usize>,
    #[arg(long, default_value_t = 64)]
    pub n_skip: usize,
    #[arg(long, default_value_t = 128)]
    pub n_keep: usize,
    /// salpha: use this many sampled branches instead of all of them.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub branch_cap: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub node_cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum TargetArg {
    #[value(name = "A")]
    A,
    #[value(name = "SA")]
    SA,
    #[value(name = "custom")]
    Custom,
}

#[derive(Args, Debug, Serialize)]
pub struct BirkhoffArgs {
    pub map: String,
    #[arg(long, value_enum, ignore_case = true)]
    pub target: TargetArg,
    /// Open intervals `lo:hi,lo:hi,…` (custom target).
    #[arg(long)]
    pub u: Option<String>,
    #[arg(long, default_value = "1/50")]
    pub margin: Rat,
    #[arg(long, default_value_t = 40)]
    pub depth: usize,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Resolution of the limit-set approximation behind U.
    #[arg(long, default_value = "1/64")]
    pub eps: Rat,
    #[arg(long, default_value = "1/32")]
    pub grid_step: Rat,
    /// Spacing of the excursion-scan seeds.
    #[arg(long, default_value = "1/16")]
    pub seed_step: Rat,
}

#[derive(Args, Debug, Serialize)]
pub struct ChainArgs {
    pub map: String,
    #[arg(long, default_value = "1/32")]
    pub eps: Rat,
    #[arg(long, default_value_t = 14)]
    pub depth: usize,
    #[arg(long, default_value_t = 6)]
    pub tail: usize,
    #[arg(long, default_value_t = 1)]
    pub slack: i64,
}

#[derive(Subcommand, Debug)]
pub enum FixtureCmd {
    /// Names of the built-in maps.
    List,
    /// Canonical map file of a built-in map.
    Emit { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WhatArg {
    Graph,
    Cobweb,
    PreimageTree,
}

#[derive(Args, Debug, Serialize)]
pub struct RenderArgs {
    pub map: String,
    #[arg(long, value_enum, default_value = "graph")]
    pub what: WhatArg,
    #[arg(long)]
    pub point: Option<Rat>,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    #[arg(long, default_value_t = 100_000)]
    pub node_cap: usize,
    /// Output file; the SVG goes to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a CLI invocation produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A map file path or a fixture name.
pub fn load_map(source: &str) -> Result<PLMap> {
    let p = Path::new(source);
    if p.is_file() {
        let text =
            std::fs::read_to_string(p).map_err(|e| Error::InvalidParameter(format!("cannot read {source}: {e}")))?;
        return parse_map(&text);
    }
    match fixture_map(source) {
        Err(Error::UnknownFixture(_)) => Err(Error::InvalidParameter(format!(
            "`{source}` is neither a map file nor a fixture ({})",
            list_fixtures().join(", ")
        ))),
        other => other,
    }
}

/// Parses `lo:hi,lo:hi` into open intervals.
pub fn parse_u(text: &str) -> Result<Neighborhood> {
    let mut parts = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = item
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("expected lo:hi, got `{item}`")))?;
        let lo: Rat = a.parse().map_err(|e| Error::InvalidParameter(format!("{a}: {e}")))?;
        let hi: Rat = b.parse().map_err(|e| Error::InvalidParameter(format!("{b}: {e}")))?;
        parts.push((lo, hi));
    }
    if parts.is_empty() {
        return Err(Error::InvalidParameter("--u lists no intervals".into()));
    }
    Neighborhood::open_union(&parts, NeighborhoodLabel::Custom)
}

enum Output {
    Report(Report, i32),
    Text(String),
}

fn exit_for(v: Verdict) -> i32 {
    if v == Verdict::Fail {
        EXIT_FAIL
    } else {
        EXIT_OK
    }
}

fn analyze(a: &AnalyzeArgs, argv: &[String]) -> Result<Output> {
    let f = load_map(&a.map)?;
    let mut p = ChainParams::new(a.eps.clone());
    p.point.depth = a.depth;
    p.point.tail_start = a.tail;
    p.point.min_hits = a.min_hits;
    p.point.node_cap = a.node_cap;
    p.point.periodic.p_max = a.p_max;
    p.nw_n_max = a.nw_steps;
    let census = periodic_points(&f, a.p_max, p.point.periodic.lap_cap)?;
    let chain = chain_check(&f, &p)?;
    let result = json!({
        "fixed_points": f.fixed_points(),
        "periodic": census,
        "chain": chain,
    });
    let rep = Report::new(
        argv.to_vec(),
        Some(f.digest()),
        json!({"args": a, "chain": p}),
        result,
        chain.verdict.name(),
    );
    Ok(Output::Report(rep, exit_for(chain.verdict)))
}

fn branches_cmd(a: &BranchesArgs, argv: &[String]) -> Result<Output> {
    let f = load_map(&a.map)?;
    let (mode, bs) = match a.sample {
        Some(n) => (
            "sampled",
            sample_branches(&f, &a.point, a.depth, n, &BranchSampler::new(a.seed))?,
        ),
        None => ("all", branches(&f, &a.point, a.depth, a.branch_cap)?),
    };
    let consistent = bs.iter().all(|b| b.is_consistent(&f));
    let result = json!({"mode": mode, "count": bs.len(), "consistent": consistent, "branches": bs});
    let rep = Report::new(argv.to_vec(), Some(f.digest()), a, result, "OK");
    Ok(Output::Report(rep, EXIT_OK))
}

fn limitset(a: &LimitsetArgs, argv: &[String]) -> Result<Output> {
    let f = load_map(&a.map)?;
    let result = match a.kind {
        KindArg::Omega => {
            let s = omega_approx(&f, &a.point, a.n_skip, a.n_keep, &a.eps)?;
            json!({"kind": a.kind, "cells": s})
        }
        KindArg::Alpha => {
            let min_hits = a.min_hits.unwrap_or(2);
            let s = alpha_approx(&f, &a.point, a.depth, a.tail, min_hits, &a.eps, a.node_cap)?;
            json!({"kind": a.kind, "min_hits": min_hits, "cells": s})
        }
        KindArg::Salpha => {
            let mode = match a.samples {
                Some(n) => SalphaMode::Sampled { n, seed: a.seed },
                None => SalphaMode::Exhaustive {
                    branch_cap: a.branch_cap,
                },
            };
            let min_hits = a.min_hits.unwrap_or(2);
            let s = salpha_approx(&f, &a.point, a.depth, a.tail, min_hits, &a.eps, mode)?;
            json!({"kind": a.kind, "mode": mode, "min_hits": min_hits, "cells": s})
        }
        KindArg::Branch => {
            let b = crate::backward::sample_branch(&f, &a.point, a.depth, &BranchSampler::new(a.seed))?;
            let min_hits = a.min_hits.unwrap_or(1);
            let s = alpha_branch_approx(&f, &b, a.tail, min_hits, &a.eps)?;
            json!({"kind": a.kind, "min_hits": min_hits, "branch": b, "cells": s})
        }
    };
    let rep = Report::new(argv.to_vec(), Some(f.digest()), a, result, "OK");
    Ok(Output::Report(rep, EXIT_OK))
}

fn birkhoff_cmd(a: &BirkhoffArgs, argv: &[String]) -> Result<Output> {
    let f = load_map(&a.map)?;
    let mut p = VerifyParams::new(a.depth, a.samples, a.seed);
    p.point.eps = a.eps.clone();
    p.grid_step = a.grid_step.clone();
    p.seed_step = a.seed_step.clone();
    let (result, verdict) = match a.target {
        TargetArg::Custom => {
            let u = parse_u(
                a.u.as_deref()
                    .ok_or_else(|| Error::InvalidParameter("--target custom needs --u lo:hi,…".into()))?,
            )?;
            let check = verify_neighborhood(&f, &u, &p)?;
            let r = json!({
                "neighborhood": u,
                "certificate": check.certificate,
                "cover_failed_at": check.cover_failed_at,
                "scan": check.scan,
            });
            (r, check.verdict)
        }
        t => {
            if a.u.is_some() {
                return Err(Error::InvalidParameter("--u is only used with --target custom".into()));
            }
            let target = if t == TargetArg::A { Target::A } else { Target::SA };
            let rep = verify_theorem(&f, target, &a.margin, &p)?;
            let v = rep.verdict;
            (serde_json::to_value(rep).unwrap(), v)
        }
    };
    let rep = Report::new(
        argv.to_vec(),
        Some(f.digest()),
        json!({"args": a, "verify": p}),
        result,
        verdict.name(),
    );
    Ok(Output::Report(rep, exit_for(verdict)))
}

fn chain_cmd(a: &ChainArgs, argv: &[String]) -> Result<Output> {
    let f = load_map(&a.map)?;
    let mut p = ChainParams::new(a.eps.clone());
    p.point.depth = a.depth;
    p.point.tail_start = a.tail;
    p.slack = a.slack;
    let chain = chain_check(&f, &p)?;
    let v = chain.verdict;
    let rep = Report::new(
        argv.to_vec(),
        Some(f.digest()),
        json!({"args": a, "chain": p}),
        chain,
        v.name(),
    );
    Ok(Output::Report(rep, exit_for(v)))
}

fn render_cmd(a: &RenderArgs, argv: &[String]) -> Result<Output> {
    let f = load_map(&a.map)?;
    let point = || {
        a.point
            .clone()
            .ok_or_else(|| Error::InvalidParameter("--point is required for this figure".into()))
    };
    let doc = match a.what {
        WhatArg::Graph => svg::render_graph(&f),
        WhatArg::Cobweb => svg::render_cobweb(&f, &point()?, a.depth)?,
        WhatArg::PreimageTree => svg::render_preimage_tree(&f, &point()?, a.depth, a.node_cap)?,
    };
    let Some(out) = &a.out else {
        return Ok(Output::Text(doc));
    };
    std::fs::write(out, &doc).map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", out.display())))?;
    let result = json!({
        "out": out.display().to_string(),
        "bytes": doc.len(),
        "sha256": hex::encode(Sha256::digest(doc.as_bytes())),
        "labelled": a.what != WhatArg::PreimageTree || a.depth <= svg::LABEL_DEPTH,
    });
    let rep = Report::new(argv.to_vec(), Some(f.digest()), a, result, "OK");
    Ok(Output::Report(rep, EXIT_OK))
}

fn dispatch(cli: &Cli, argv: &[String]) -> Result<Output> {
    match &cli.command {
        Command::Analyze(a) => analyze(a, argv),
        Command::Branches(a) => branches_cmd(a, argv),
        Command::Limitset(a) => limitset(a, argv),
        Command::Birkhoff(a) => birkhoff_cmd(a, argv),
        Command::Chain(a) => chain_cmd(a, argv),
        Command::Fixture(FixtureCmd::List) => {
            Ok(Output::Text(list_fixtures().iter().map(|n| format!("{n}\n")).collect()))
        }
        Command::Fixture(FixtureCmd::Emit { name }) => Ok(Output::Text(fixture_map(name)?.to_map_text())),
        Command::Render(a) => render_cmd(a, argv),
    }
}

/// Runs one command line (including the program name) on a pool of
/// `BACKLIMIT_THREADS` workers.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let start = Instant::now();
    let out = with_threads(configured_threads(), || dispatch(&cli, &argv));
    match out {
        Ok(Output::Text(t)) => Outcome {
            code: EXIT_OK,
            stdout: t,
            stderr: String::new(),
        },
        Ok(Output::Report(mut rep, code)) => {
            rep.timing_ms = start.elapsed().as_millis() as u64;
            Outcome {
                code,
                stdout: rep.to_json(),
                stderr: String::new(),
            }
        }
        Err(e) => {
            let code = if e.is_cap() { EXIT_CAP } else { EXIT_INPUT };
            let mut rep = Report::new(argv, None, json!({}), json!({ "error": e.to_string() }), "ERROR");
            rep.timing_ms = start.elapsed().as_millis() as u64;
            Outcome {
                code,
                stdout: rep.to_json(),
                stderr: format!("error: {e}\n"),
            }
        }
    }
}
