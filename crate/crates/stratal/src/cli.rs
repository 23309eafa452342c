//! Command-line front end.
//!
//! One thin binary dispatches to the library: graph enumeration and poset
//! assembly, attach/peel/whitehead surgery on JSON-encoded graphs, the
//! index filtration and witness search, and the trace-coordinate numerics.
//!
//! Conventions: successful runs exit 0 and print a single deterministic
//! artifact to standard output (JSON unless another `--format` is chosen);
//! domain validation failures exit 2 with a one-line JSON error object on
//! standard error; malformed flags exit 64; file-system problems exit 74.
//! Output collections are sorted (by canonical code or construction
//! order), so identical invocations produce byte-identical output.

use std::io::Write;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::attach::{attach, peel, whitehead, AttachSpec, Perm, Repartition};
use crate::filtration::{
    candidate_strata, generation_witness, verify_bounds, FiltrationOptions, IndexOracle,
};
use crate::graph::{RawGraph, StableGraph};
use crate::strata::{build_poset, enumerate_stable_graphs};
use crate::torus::{
    eutactic_check, find_critical, maximize_sys, syst, Branch, CriticalOptions, EutacticOptions,
    FrickePoint, MaxSysOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Parser)]
#[command(
    name = "stratal",
    version,
    about = "Stable graphs, boundary strata, and systole numerics for moduli of curves"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate stable graphs (boundary strata) for fixed genus and legs.
    Enumerate(EnumerateArgs),
    /// Build the contraction poset of strata for fixed genus and legs.
    Poset(PosetArgs),
    /// Glue marked points of a graph to a new three-marked sphere vertex.
    Attach(AttachArgs),
    /// List the ways a graph arises from such a gluing.
    Peel(PeelArgs),
    /// Exchange an edge: contract, then re-expand with a new partition.
    Whitehead(WhiteheadArgs),
    /// List strata whose summed index lower bound is within a cap.
    Filtrate(FiltrateArgs),
    /// Explain each filtration candidate by attachments from a base set.
    Witness(WitnessArgs),
    /// Evaluate the smoothed systole at a point in trace coordinates.
    SystEval(SystEvalArgs),
    /// Maximize the systole from a starting point.
    SysMax(SysMaxArgs),
    /// Decide eutacticity of the shortest-curve configuration at a point.
    Eutactic(EutacticArgs),
    /// Locate and classify a critical point of the smoothed systole.
    Critical(CriticalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Json,
    Dot,
    Count,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    legs: usize,
    /// Refuse requests whose complex dimension 3g-3+n exceeds this.
    #[arg(long)]
    dim_cap: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    format: ListFormat,
    /// Also write the output to this file.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct PosetArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    legs: usize,
    #[arg(long)]
    dim_cap: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    format: ListFormat,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AttachFormat {
    Json,
    Dot,
    /// Print only the number of legs of the result.
    CountLegs,
}

#[derive(Args)]
struct AttachArgs {
    /// Path to the input graph (JSON: genus, edges, legs).
    #[arg(long = "in")]
    input: String,
    /// Number of marked points glued to the new sphere vertex (1..=3).
    #[arg(long)]
    arity: usize,
    /// Marking permutation, one-based images like "2 1 3" (default identity).
    #[arg(long)]
    sigma: Option<String>,
    /// Final marking relabel, one-based images (default none).
    #[arg(long)]
    relabel: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: AttachFormat,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct PeelArgs {
    #[arg(long = "in")]
    input: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(Args)]
struct WhiteheadArgs {
    #[arg(long = "in")]
    input: String,
    /// Index of the (non-loop) edge to exchange.
    #[arg(long)]
    edge: usize,
    /// Genus assigned to the first of the two re-expanded vertices.
    #[arg(long)]
    genus_first: u32,
    /// Slot indices kept on the first vertex, like "0 2" (may be empty).
    #[arg(long, default_value = "")]
    first_slots: String,
    #[arg(long, value_enum, default_value = "json")]
    format: GraphFormat,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Count,
}

#[derive(Args)]
struct FiltrateArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    legs: usize,
    /// Largest admitted summed index lower bound.
    #[arg(long)]
    index_cap: u32,
    /// JSON array of {"g", "n", "ind_lb"} overriding the default rule.
    #[arg(long)]
    oracle: Option<String>,
    /// Also include every stratum in the closure of a candidate.
    #[arg(long)]
    closure: bool,
    #[arg(long)]
    dim_cap: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    genus: u32,
    #[arg(long)]
    legs: usize,
    #[arg(long)]
    index_cap: u32,
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long)]
    dim_cap: Option<i64>,
    /// File receiving the full witness report (bases and attach steps).
    #[arg(long)]
    out: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Branch {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

#[derive(Args)]
struct PointArgs {
    /// First trace coordinate.
    #[arg(long)]
    x: f64,
    /// Second trace coordinate.
    #[arg(long)]
    y: f64,
    /// Third trace coordinate; must satisfy the trace relation exactly.
    #[arg(long, conflicts_with = "branch")]
    z: Option<f64>,
    /// Solve for the third coordinate on this branch instead.
    #[arg(long, value_enum, default_value = "minus")]
    branch: BranchArg,
}

impl PointArgs {
    fn resolve(&self) -> Result<FrickePoint, Failure> {
        let point = match self.z {
            Some(z) => FrickePoint::new(self.x, self.y, z),
            None => FrickePoint::solve(self.x, self.y, self.branch.into()),
        };
        point.map_err(|e| validation(&e))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SystFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct SystEvalArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Temperature in (0, 1).
    #[arg(long = "T")]
    temperature: f64,
    /// Relative accuracy of the truncation tail.
    #[arg(long, default_value_t = 1e-12)]
    eps: f64,
    /// Evaluate over a temperature sweep "start:stop:count" instead.
    #[arg(long)]
    sweep_t: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: SystFormat,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SysMaxArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Certificate threshold on the minimum-norm gradient combination.
    #[arg(long, default_value_t = 1e-9)]
    dir_tol: f64,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct EutacticArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Relative length tolerance for the shortest set.
    #[arg(long, default_value_t = 1e-8)]
    eps_sys: f64,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct CriticalArgs {
    #[command(flatten)]
    point: PointArgs,
    #[arg(long = "T")]
    temperature: f64,
    /// Stationarity tolerance on the chart gradient norm.
    #[arg(long, default_value_t = 1e-8)]
    grad_tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    #[arg(long)]
    out: Option<String>,
}

/// A failed run: what to print on standard error and which code to exit.
enum Failure {
    Validation(serde_json::Value),
    Io { path: String, message: String },
}

fn validation<E: Serialize>(e: &E) -> Failure {
    Failure::Validation(
        serde_json::to_value(e).unwrap_or_else(|_| json!({ "error": "unserializable" })),
    )
}

fn io_failure(path: &str, e: &std::io::Error) -> Failure {
    Failure::Io {
        path: path.to_string(),
        message: e.to_string(),
    }
}

/// Parse arguments and run; output goes to `out`, errors to `err`.
/// Returns the process exit code.
pub fn dispatch(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match run(&cli.cmd) {
        Ok(rendered) => match emit(&rendered, out) {
            Ok(()) => EXIT_OK,
            Err(f) => fail(f, err),
        },
        Err(f) => fail(f, err),
    }
}

fn fail(f: Failure, err: &mut dyn Write) -> i32 {
    match f {
        Failure::Validation(v) => {
            let _ = writeln!(err, "{v}");
            EXIT_VALIDATION
        }
        Failure::Io { path, message } => {
            let _ = writeln!(
                err,
                "{}",
                json!({ "error": "io", "path": path, "message": message })
            );
            EXIT_IO
        }
    }
}

/// Finished output: the text plus an optional copy destination.
struct Rendered {
    text: String,
    copy_to: Option<String>,
}

impl Rendered {
    fn new(text: String, copy_to: Option<&String>) -> Self {
        Rendered {
            text,
            copy_to: copy_to.cloned(),
        }
    }
}

fn emit(r: &Rendered, out: &mut dyn Write) -> Result<(), Failure> {
    if let Some(path) = &r.copy_to {
        std::fs::write(path, &r.text).map_err(|e| io_failure(path, &e))?;
    }
    out.write_all(r.text.as_bytes())
        .map_err(|e| io_failure("<stdout>", &e))
}

fn run(cmd: &Command) -> Result<Rendered, Failure> {
    match cmd {
        Command::Enumerate(a) => run_enumerate(a),
        Command::Poset(a) => run_poset(a),
        Command::Attach(a) => run_attach(a),
        Command::Peel(a) => run_peel(a),
        Command::Whitehead(a) => run_whitehead(a),
        Command::Filtrate(a) => run_filtrate(a),
        Command::Witness(a) => run_witness(a),
        Command::SystEval(a) => run_syst_eval(a),
        Command::SysMax(a) => run_sys_max(a),
        Command::Eutactic(a) => run_eutactic(a),
        Command::Critical(a) => run_critical(a),
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report types serialize");
    s.push('\n');
    s
}

fn read_graph(path: &str) -> Result<StableGraph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, &e))?;
    let raw: RawGraph = serde_json::from_str(&text).map_err(|e| {
        Failure::Validation(json!({ "error": "malformed_graph_json", "message": e.to_string() }))
    })?;
    StableGraph::validate(&raw).map_err(|e| validation(&e))
}

fn parse_images(text: &str, flag: &str) -> Result<Vec<usize>, Failure> {
    text.replace(',', " ")
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| {
                Failure::Validation(json!({
                    "error": "bad_integer_list",
                    "flag": flag,
                    "token": tok,
                }))
            })
        })
        .collect()
}

fn parse_perm(text: &str, flag: &str) -> Result<Perm, Failure> {
    let images = parse_images(text, flag)?;
    Perm::from_one_based(&images).ok_or_else(|| {
        Failure::Validation(json!({
            "error": "not_a_permutation",
            "flag": flag,
            "images": images,
        }))
    })
}

fn load_oracle(path: Option<&String>) -> Result<IndexOracle, Failure> {
    match path {
        None => Ok(IndexOracle::new()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| io_failure(p, &e))?;
            IndexOracle::from_json_str(&text).map_err(|e| {
                Failure::Validation(json!({
                    "error": "malformed_oracle_json",
                    "message": e.to_string(),
                }))
            })
        }
    }
}

fn graph_entry(g: &StableGraph) -> serde_json::Value {
    json!({
        "code": g.canonical_code().hex(),
        "graph": g,
        "stratum": g.stratum_info(),
        "automorphisms": g.automorphism_group().order,
    })
}

fn run_enumerate(a: &EnumerateArgs) -> Result<Rendered, Failure> {
    let graphs = enumerate_stable_graphs(a.genus, a.legs, a.dim_cap).map_err(|e| validation(&e))?;
    let text = match a.format {
        ListFormat::Count => format!("{}\n", graphs.len()),
        ListFormat::Json => json_line(&json!({
            "g": a.genus,
            "n": a.legs,
            "count": graphs.len(),
            "graphs": graphs.iter().map(graph_entry).collect::<Vec<_>>(),
        })),
        ListFormat::Dot => {
            let mut s = String::new();
            for (i, g) in graphs.iter().enumerate() {
                s.push_str(&g.to_dot(&format!("s{i}")));
            }
            s
        }
    };
    Ok(Rendered::new(text, a.out.as_ref()))
}

fn run_poset(a: &PosetArgs) -> Result<Rendered, Failure> {
    let poset = build_poset(a.genus, a.legs, a.dim_cap).map_err(|e| validation(&e))?;
    let text = match a.format {
        ListFormat::Count => format!("{} {}\n", poset.nodes.len(), poset.covers.len()),
        ListFormat::Json => json_line(&json!({
            "g": poset.g,
            "n": poset.n,
            "nodes": poset
                .nodes
                .iter()
                .map(|g| json!({ "code": g.canonical_code().hex(), "graph": g }))
                .collect::<Vec<_>>(),
            "covers": &poset.covers,
        })),
        ListFormat::Dot => {
            let mut s = String::from("digraph poset {\n  rankdir=BT;\n");
            for (i, g) in poset.nodes.iter().enumerate() {
                s.push_str(&format!(
                    "  s{i} [label=\"s{i}: E={} V={}\"];\n",
                    g.num_edges(),
                    g.num_vertices()
                ));
            }
            for &(i, j) in &poset.covers {
                s.push_str(&format!("  s{i} -> s{j};\n"));
            }
            s.push_str("}\n");
            s
        }
    };
    Ok(Rendered::new(text, a.out.as_ref()))
}

fn run_attach(a: &AttachArgs) -> Result<Rendered, Failure> {
    let input = read_graph(&a.input)?;
    let sigma = match &a.sigma {
        Some(text) => parse_perm(text, "--sigma")?,
        None => Perm::identity(input.num_legs()),
    };
    let relabel = a
        .relabel
        .as_ref()
        .map(|t| parse_perm(t, "--relabel"))
        .transpose()?;
    let spec = AttachSpec {
        arity: a.arity,
        sigma,
        relabel,
    };
    let result = attach(&input, &spec).map_err(|e| validation(&e))?;
    let text = match a.format {
        AttachFormat::CountLegs => format!("{}\n", result.num_legs()),
        AttachFormat::Dot => result.to_dot("attach_result"),
        AttachFormat::Json => json_line(&json!({
            "input": graph_entry(&input),
            "spec": spec,
            "result": graph_entry(&result),
        })),
    };
    Ok(Rendered::new(text, a.out.as_ref()))
}

fn run_peel(a: &PeelArgs) -> Result<Rendered, Failure> {
    let input = read_graph(&a.input)?;
    let entries = peel(&input);
    let text = json_line(&json!({
        "input": graph_entry(&input),
        "count": entries.len(),
        "entries": entries
            .iter()
            .map(|e| json!({
                "vertex": e.vertex,
                "base": graph_entry(&e.base),
                "spec": e.spec,
            }))
            .collect::<Vec<_>>(),
    }));
    Ok(Rendered::new(text, a.out.as_ref()))
}

fn run_whitehead(a: &WhiteheadArgs) -> Result<Rendered, Failure> {
    let input = read_graph(&a.input)?;
    let first_slots = parse_images(&a.first_slots, "--first-slots")?;
    let repartition = Repartition {
        genus_first: a.genus_first,
        first_slots,
    };
    let result = whitehead(&input, a.edge, &repartition).map_err(|e| validation(&e))?;
    let text = match a.format {
        GraphFormat::Dot => result.graph.to_dot("whitehead_result"),
        GraphFormat::Json => json_line(&json!({
            "input": graph_entry(&input),
            "edge": a.edge,
            "repartition": repartition,
            "new_edge": result.new_edge,
            "result": graph_entry(&result.graph),
        })),
    };
    Ok(Rendered::new(text, a.out.as_ref()))
}

fn run_filtrate(a: &FiltrateArgs) -> Result<Rendered, Failure> {
    let oracle = load_oracle(a.oracle.as_ref())?;
    let opts = FiltrationOptions {
        include_closure: a.closure,
        dim_cap: a.dim_cap,
    };
    let report = candidate_strata(a.genus, a.legs, a.index_cap, &oracle, &opts)
        .map_err(|e| validation(&e))?;
    let bounds = verify_bounds(&report);
    let text = match a.format {
        ReportFormat::Count => format!("{}\n", report.candidates.len()),
        ReportFormat::Json => json_line(&json!({ "report": report, "bounds": bounds })),
    };
    Ok(Rendered::new(text, a.out.as_ref()))
}

fn run_witness(a: &WitnessArgs) -> Result<Rendered, Failure> {
    let oracle = load_oracle(a.oracle.as_ref())?;
    let report = generation_witness(a.genus, a.legs, a.index_cap, &oracle, a.dim_cap)
        .map_err(|e| validation(&e))?;
    std::fs::write(&a.out, json_line(&report)).map_err(|e| io_failure(&a.out, &e))?;
    let summary = json_line(&json!({
        "g": report.g,
        "n": report.n,
        "index_cap": report.index_cap,
        "candidates": report.witnesses.len(),
        "bases": report.bases.len(),
        "all_verified": report.witnesses.iter().all(|w| w.verified),
        "written": &a.out,
    }));
    Ok(Rendered::new(summary, None))
}

fn parse_sweep(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || {
        Failure::Validation(json!({
            "error": "bad_sweep",
            "expected": "start:stop:count",
            "got": text,
        }))
    };
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
        .collect())
}

fn syst_eval_record(p: &FrickePoint, t: f64, eps: f64) -> Result<serde_json::Value, Failure> {
    let v = syst(p, t, eps).map_err(|e| validation(&e))?;
    Ok(json!({
        "x": p.x(),
        "y": p.y(),
        "z": p.z(),
        "T": v.temperature,
        "value": v.value,
        "systole": v.systole,
        "tail_bound": v.value_error_bound,
        "truncation_length": v.truncation_length,
        "terms_used": v.terms_used,
    }))
}

fn run_syst_eval(a: &SystEvalArgs) -> Result<Rendered, Failure> {
    let p = a.point.resolve()?;
    let temps = match &a.sweep_t {
        Some(spec) => parse_sweep(spec)?,
        None => vec![a.temperature],
    };
    let mut records = Vec::with_capacity(temps.len());
    for &t in &temps {
        records.push(syst_eval_record(&p, t, a.eps)?);
    }
    let text = match a.format {
        SystFormat::Json => {
            if records.len() == 1 {
                json_line(&records[0])
            } else {
                json_line(&records)
            }
        }
        SystFormat::Csv => {
            let mut s = String::from("T,value,systole,tail_bound,terms_used\n");
            for r in &records {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r["T"], r["value"], r["systole"], r["tail_bound"], r["terms_used"]
                ));
            }
            s
        }
    };
    Ok(Rendered::new(text, a.out.as_ref()))
}

fn run_sys_max(a: &SysMaxArgs) -> Result<Rendered, Failure> {
    let start = a.point.resolve()?;
    let opts = MaxSysOptions {
        dir_tol: a.dir_tol,
        max_iters: a.max_iters,
        ..Default::default()
    };
    let report = maximize_sys(&start, &opts).map_err(|e| validation(&e))?;
    let text = json_line(&json!({
        "start": [start.x(), start.y(), start.z()],
        "report": report,
    }));
    Ok(Rendered::new(text, a.out.as_ref()))
}

fn run_eutactic(a: &EutacticArgs) -> Result<Rendered, Failure> {
    let p = a.point.resolve()?;
    let opts = EutacticOptions {
        eps_sys: a.eps_sys,
        ..Default::default()
    };
    let report = eutactic_check(&p, &opts).map_err(|e| validation(&e))?;
    Ok(Rendered::new(json_line(&report), a.out.as_ref()))
}

fn run_critical(a: &CriticalArgs) -> Result<Rendered, Failure> {
    let start = a.point.resolve()?;
    let opts = CriticalOptions {
        grad_tol: a.grad_tol,
        max_iters: a.max_iters,
        ..Default::default()
    };
    let report = find_critical(&start, a.temperature, &opts).map_err(|e| validation(&e))?;
    Ok(Rendered::new(json_line(&report), a.out.as_ref()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let argv: Vec<String> = std::iter::once("stratal")
            .chain(args.iter().copied())
            .map(String::from)
            .collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = dispatch(&argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn enumerate_count_zero_five() {
        let (code, out, _) = run_cli(&[
            "enumerate",
            "--genus",
            "0",
            "--legs",
            "5",
            "--format",
            "count",
        ]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "26\n");
    }

    #[test]
    fn enumerate_json_round_trips() {
        let (code, out, _) = run_cli(&["enumerate", "--genus", "1", "--legs", "1"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["count"], 2);
        for entry in v["graphs"].as_array().unwrap() {
            let raw: RawGraph = serde_json::from_value(entry["graph"].clone()).unwrap();
            let g = StableGraph::validate(&raw).unwrap();
            assert_eq!(g.canonical_code().hex(), entry["code"].as_str().unwrap());
        }
    }

    #[test]
    fn unstable_pair_is_validation_error() {
        let (code, out, err) = run_cli(&["enumerate", "--genus", "0", "--legs", "2"]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(out.is_empty());
        let v: serde_json::Value = serde_json::from_str(&err).unwrap();
        assert_eq!(v["error"], "unstable_pair");
    }

    #[test]
    fn usage_error_is_64() {
        let (code, _, err) = run_cli(&["enumerate", "--genus", "zero", "--legs", "4"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
    }

    #[test]
    fn missing_file_is_io_error() {
        let (code, _, err) = run_cli(&["peel", "--in", "/nonexistent/graph.json"]);
        assert_eq!(code, EXIT_IO);
        let v: serde_json::Value = serde_json::from_str(&err).unwrap();
        assert_eq!(v["error"], "io");
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_cli(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("enumerate"));
        assert!(out.contains("syst-eval"));
    }

    #[test]
    fn syst_eval_matches_library() {
        let (code, out, _) = run_cli(&[
            "syst-eval",
            "--x",
            "3",
            "--y",
            "3",
            "--branch",
            "minus",
            "--T",
            "0.2",
            "--eps",
            "1e-8",
        ]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!((v["value"].as_f64().unwrap() - 1.7050578).abs() < 1e-3);
        assert!(v["tail_bound"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn syst_eval_csv_sweep() {
        let (code, out, _) = run_cli(&[
            "syst-eval",
            "--x",
            "3",
            "--y",
            "3",
            "--T",
            "0.2",
            "--sweep-t",
            "0.1:0.3:3",
            "--format",
            "csv",
        ]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "T,value,systole,tail_bound,terms_used");
    }

    #[test]
    fn bad_sweep_is_validation_error() {
        let (code, _, err) = run_cli(&[
            "syst-eval",
            "--x",
            "3",
            "--y",
            "3",
            "--T",
            "0.2",
            "--sweep-t",
            "nope",
        ]);
        assert_eq!(code, EXIT_VALIDATION);
        let v: serde_json::Value = serde_json::from_str(&err).unwrap();
        assert_eq!(v["error"], "bad_sweep");
    }

    #[test]
    fn explicit_z_must_satisfy_relation() {
        let (code, _, err) = run_cli(&["eutactic", "--x", "3", "--y", "3", "--z", "3.5"]);
        assert_eq!(code, EXIT_VALIDATION);
        let v: serde_json::Value = serde_json::from_str(&err).unwrap();
        assert_eq!(v["error"], "relation_violated");
    }

    #[test]
    fn attach_count_legs_example() {
        let dir = std::env::temp_dir().join("stratal-cli-attach-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p03.json");
        std::fs::write(&path, r#"{"genus": [0], "edges": [], "legs": [0, 0, 0]}"#).unwrap();
        let (code, out, _) = run_cli(&[
            "attach",
            "--in",
            path.to_str().unwrap(),
            "--arity",
            "3",
            "--sigma",
            "1 2 3",
            "--format",
            "count-legs",
        ]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "0\n");
    }

    #[test]
    fn dot_output_smoke() {
        let (code, out, _) = run_cli(&[
            "enumerate",
            "--genus",
            "1",
            "--legs",
            "1",
            "--format",
            "dot",
        ]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("graph \"s0\""));
        assert!(out.contains("graph \"s1\""));
    }
}
