//! `mshopf`: command-line front end to the scale-assigned graph Hopf algebra.
//!
//! Exit codes: 0 success, 1 parse error, 2 precondition violation (bad
//! flags included), 3 verification failure. Diagnostics go to stderr as a
//! single JSON object.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mshopf_core::effective::{self, EffectiveCatalog};
use mshopf_core::graph::spec::{self, GraphSpec};
use mshopf_core::graph::{AssignedGraph, Scale};
use mshopf_core::hopf::{self, HopfAlgebra};
use mshopf_core::multiscale::{CoproductKind, GnTree};
use mshopf_core::poly::rational_json;
use mshopf_core::renorm::{tau_character, Renormalizer, Tau, ToyAmplitude};
use mshopf_core::verify::{self, Bounds, Suite, SuiteReport};
use mshopf_core::wick;
use mshopf_core::Error;

const CATALOG_ENV: &str = "MSHOPF_CATALOG_DIR";

#[derive(Parser, Debug)]
#[command(name = "mshopf", version, about = "Hopf algebra of scale-assigned Feynman graphs")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Output format. `dot` is accepted by gn-tree and `morphism --pi-gn`.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Scale cutoff. Defaults to the largest scale in the input.
    #[arg(long, global = true)]
    rho: Option<Scale>,
    /// Truncation order in the couplings.
    #[arg(long, default_value_t = 3, global = true)]
    order: u32,
    /// Extract every divergent subgraph, not only the high ones.
    #[arg(long, global = true)]
    all_divergent: bool,
    /// Pad GN trees with repeated decorations down to depth ρ.
    #[arg(long, global = true)]
    pad_gn: bool,
    /// Toy amplitude for counterterms and effective couplings.
    #[arg(long, value_enum, default_value_t = Amplitude::Toy, global = true)]
    amplitude: Amplitude,
    /// Subtraction applied to amplitude values.
    #[arg(long, value_enum, default_value_t = TauArg::Identity, global = true)]
    tau: TauArg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Amplitude {
    Toy,
    Symbols,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TauArg {
    Identity,
    Constant,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse graph specs and report basic invariants.
    Parse { files: Vec<PathBuf> },
    /// Coproduct of every graph in the input.
    Coproduct { files: Vec<PathBuf> },
    /// Antipode, recursive and by forests.
    Antipode { files: Vec<PathBuf> },
    /// Forests of extracted subgraphs.
    Forests { files: Vec<PathBuf> },
    /// Gallavotti-Nicolò tree.
    GnTree { files: Vec<PathBuf> },
    /// Projections to GN trees, rooted trees or the unassigned algebra.
    Morphism {
        #[command(flatten)]
        which: MorphismArg,
        files: Vec<PathBuf>,
    },
    /// Useful counterterms and renormalized amplitudes.
    Counterterms { files: Vec<PathBuf> },
    /// Effective couplings Ψ(τA) and the bare/effective expansions.
    Effective,
    /// Insertion identity for two quadrupeds (assigned when --rho is given).
    Lemma { g1: PathBuf, g2: PathBuf },
    /// Run the invariant suites.
    Verify {
        /// Suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        max_loops: usize,
        #[arg(long, default_value_t = 4)]
        max_vertices: usize,
    },
}

#[derive(Args, Debug, Clone, Copy)]
#[group(required = true, multiple = false)]
struct MorphismArg {
    #[arg(long)]
    pi_ck: bool,
    #[arg(long)]
    pi_gn: bool,
    #[arg(long)]
    pi_rt: bool,
}

struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
    /// Printed on stdout before exiting (verification reports).
    output: Option<String>,
}

impl Failure {
    fn precondition(message: impl Into<String>) -> Self {
        Failure { code: 2, kind: "precondition", message: message.into(), output: None }
    }

    fn parse(message: impl Into<String>) -> Self {
        Failure { code: 1, kind: "parse", message: message.into(), output: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Malformed(_) => Failure::parse(e.to_string()),
            _ => Failure::precondition(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<String, Failure>;

fn amplitude(a: Amplitude) -> ToyAmplitude {
    match a {
        Amplitude::Toy => ToyAmplitude::ScalePower,
        Amplitude::Symbols => ToyAmplitude::Symbols,
    }
}

fn tau(t: TauArg) -> Tau {
    match t {
        TauArg::Identity => Tau::Identity,
        TauArg::Constant => Tau::Constant,
    }
}

fn validate(cli: &Cli) -> std::result::Result<(), Failure> {
    let o = &cli.opts;
    if let Some(r) = o.rho {
        if r < 0 {
            return Err(Failure::precondition(format!("--rho must be non-negative, got {r}")));
        }
    }
    if o.format == Format::Dot {
        let dot_ok = matches!(cli.command, Command::GnTree { .. })
            || matches!(cli.command, Command::Morphism { which, .. } if which.pi_gn);
        if !dot_ok {
            return Err(Failure::precondition("--format dot is only available for GN trees"));
        }
    }
    match &cli.command {
        Command::Parse { files }
        | Command::Coproduct { files }
        | Command::Antipode { files }
        | Command::Forests { files }
        | Command::GnTree { files }
        | Command::Counterterms { files }
        | Command::Morphism { files, .. } => {
            if files.is_empty() {
                return Err(Failure::precondition("no input files"));
            }
        }
        Command::Effective => {
            if o.order == 0 || o.order as usize > effective::CATALOG_DEPTH {
                return Err(Failure::precondition(format!(
                    "--order must be in 1..={}, got {}",
                    effective::CATALOG_DEPTH,
                    o.order
                )));
            }
        }
        Command::Lemma { .. } => {}
        Command::Verify { suite, max_vertices, .. } => {
            if suite != "all" {
                suite.parse::<Suite>().map_err(|e| Failure::precondition(e.to_string()))?;
            }
            if *max_vertices == 0 || *max_vertices > wick::MAX_VERTICES {
                return Err(Failure::precondition(format!(
                    "--max-vertices must be in 1..={}, got {max_vertices}",
                    wick::MAX_VERTICES
                )));
            }
        }
    }
    if let Command::Morphism { which, .. } = &cli.command {
        if which.pi_ck && o.rho.is_none() {
            return Err(Failure::precondition("--pi-ck needs --rho"));
        }
    }
    Ok(())
}

struct Loaded {
    spec: GraphSpec,
    graph: AssignedGraph,
    rho: Scale,
}

fn read_specs(path: &Path) -> std::result::Result<Vec<GraphSpec>, Failure> {
    let src = fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    spec::parse_any(&src).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn load(files: &[PathBuf], rho: Option<Scale>) -> std::result::Result<Vec<Loaded>, Failure> {
    let mut out = Vec::new();
    for path in files {
        for spec in read_specs(path)? {
            spec.to_graph().map_err(|e| Failure::parse(format!("{}: {}: {e}", path.display(), spec.name)))?;
            let max = spec.internal.iter().filter_map(|e| e.scale).max().unwrap_or(0);
            let r = rho.unwrap_or(max);
            let graph = spec.to_assigned(r).map_err(|e| {
                let mut f = Failure::from(e);
                f.message = format!("{}: {}: {}", path.display(), spec.name, f.message);
                f
            })?;
            out.push(Loaded { spec, graph, rho: r });
        }
    }
    Ok(out)
}

fn hopf_for(o: &Opts) -> Arc<HopfAlgebra> {
    if o.all_divergent {
        HopfAlgebra::all_divergent()
    } else {
        HopfAlgebra::high()
    }
}

fn kind_name(h: &HopfAlgebra) -> &'static str {
    match h.kind() {
        CoproductKind::High => "high",
        CoproductKind::AllDivergent => "all-divergent",
    }
}

fn emit(format: Format, json: Value, text: impl FnOnce() -> String) -> String {
    match format {
        Format::Text => text(),
        _ => serde_json::to_string_pretty(&json).expect("json serializes") + "\n",
    }
}

fn edge_list(mask: u64) -> Vec<u32> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

fn cmd_parse(o: &Opts, files: &[PathBuf]) -> Outcome {
    let gs = load(files, o.rho)?;
    let rows: Vec<Value> = gs
        .iter()
        .map(|l| {
            let g = &l.graph;
            json!({
                "name": l.spec.name,
                "rho": l.rho,
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "legs": g.leg_count(),
                "loops": g.loop_number(),
                "one_pi": g.is_one_pi(),
                "biped_free": g.is_biped_free(),
                "sigma": g.automorphism_order().to_string(),
                "N": g.external_labelings().to_string(),
                "canonical": hopf::generator_key(g).to_string(),
            })
        })
        .collect();
    Ok(emit(o.format, Value::Array(rows.clone()), || {
        rows.iter()
            .map(|r| {
                format!(
                    "{}: v={} e={} legs={} L={} σ={} N={} {}\n",
                    r["name"].as_str().unwrap_or(""),
                    r["vertices"],
                    r["edges"],
                    r["legs"],
                    r["loops"],
                    r["sigma"].as_str().unwrap_or(""),
                    r["N"].as_str().unwrap_or(""),
                    r["canonical"].as_str().unwrap_or(""),
                )
            })
            .collect()
    }))
}

fn cmd_coproduct(o: &Opts, files: &[PathBuf]) -> Outcome {
    let h = hopf_for(o);
    let mut rows = Vec::new();
    let mut text = String::new();
    for l in load(files, o.rho)? {
        let d = h.coproduct_generator(&l.graph)?;
        text += &format!("Δ({}) = {}\n", l.spec.name, d);
        rows.push(json!({
            "name": l.spec.name,
            "graph": l.graph.to_string(),
            "kind": kind_name(&h),
            "terms": d.len(),
            "coproduct": d.to_json(),
        }));
    }
    Ok(emit(o.format, Value::Array(rows), || text))
}

fn cmd_antipode(o: &Opts, files: &[PathBuf]) -> Outcome {
    let h = hopf_for(o);
    let mut rows = Vec::new();
    let mut text = String::new();
    for l in load(files, o.rho)? {
        let s = h.antipode_generator(&l.graph)?;
        let by_forests = h.antipode_by_forests(&l.graph)?;
        text += &format!("S({}) = {}\n", l.spec.name, s);
        rows.push(json!({
            "name": l.spec.name,
            "graph": l.graph.to_string(),
            "kind": kind_name(&h),
            "antipode": s.to_json(),
            "forest_formula_agrees": *s == by_forests,
        }));
    }
    Ok(emit(o.format, Value::Array(rows), || text))
}

fn cmd_forests(o: &Opts, files: &[PathBuf]) -> Outcome {
    let h = hopf_for(o);
    let mut rows = Vec::new();
    let mut text = String::new();
    for l in load(files, o.rho)? {
        let key = hopf::generator_key(&l.graph);
        let forests = h.forests(&key)?;
        text += &format!("{}: {} forests\n", l.spec.name, forests.len());
        let mut fs = Vec::new();
        for f in &forests {
            let mut members = Vec::new();
            for &m in f {
                let sub = key.subgraph(m)?;
                members.push(json!({ "edges": edge_list(m), "subgraph": sub.generator().to_string() }));
                text += &format!("  {:?}", edge_list(m));
            }
            text.push('\n');
            fs.push(Value::Array(members));
        }
        rows.push(json!({
            "name": l.spec.name,
            "graph": key.to_string(),
            "kind": kind_name(&h),
            "count": forests.len(),
            "forests": fs,
        }));
    }
    Ok(emit(o.format, Value::Array(rows), || text))
}

fn gn_tree(o: &Opts, l: &Loaded) -> std::result::Result<GnTree, Failure> {
    let t = hopf::pi_gn(&l.graph)?;
    Ok(if o.pad_gn { t.padded(l.rho) } else { t })
}

fn gn_text(name: &str, t: &GnTree) -> String {
    let mut s = format!("{name}: depth {} grade {}\n", t.depth(), t.grade());
    for (i, n) in t.nodes().iter().enumerate() {
        let indent = "  ".repeat(n.depth as usize + 1);
        s += &format!("{indent}#{i} d={} edges={:?} {}\n", n.depth, edge_list(n.edges), t.decoration(i));
    }
    s
}

fn cmd_gn_tree(o: &Opts, files: &[PathBuf]) -> Outcome {
    let mut rows = Vec::new();
    let mut dot = String::new();
    let mut text = String::new();
    for l in load(files, o.rho)? {
        let t = gn_tree(o, &l)?;
        dot += &t.to_dot();
        text += &gn_text(&l.spec.name, &t);
        let mut j = t.to_json();
        j["name"] = json!(l.spec.name);
        rows.push(j);
    }
    if o.format == Format::Dot {
        return Ok(dot);
    }
    Ok(emit(o.format, Value::Array(rows), || text))
}

fn cmd_morphism(o: &Opts, which: MorphismArg, files: &[PathBuf]) -> Outcome {
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut dot = String::new();
    if which.pi_ck {
        let rho = o.rho.expect("validated");
        for path in files {
            for spec in read_specs(path)? {
                let g = spec.to_graph()?;
                let patterns = hopf::pi_ck_patterns(&g, rho)?;
                let total = hopf::pi_ck_total(&g, rho)?;
                let morphism = hopf::check_pi_ck_morphism(&g, rho)?;
                text += &format!("π_CK({}) at ρ={rho}: total {total}\n", spec.name);
                for p in &patterns {
                    text += &format!("  {:?} × {} ({} classes)\n", p.pattern, p.coefficient, p.classes);
                }
                let mut coefficients: Vec<u64> = patterns.iter().map(|p| p.coefficient).collect();
                coefficients.sort_unstable_by(|a, b| b.cmp(a));
                rows.push(json!({
                    "name": spec.name,
                    "rho": rho,
                    "patterns": patterns,
                    "coefficients": coefficients,
                    "total": rational_json(&total),
                    "morphism": morphism,
                }));
            }
        }
    } else {
        for l in load(files, o.rho)? {
            if which.pi_gn {
                let t = gn_tree(o, &l)?;
                let d = hopf::gn_coproduct(&hopf::pi_gn(&l.graph)?)?;
                let morphism = hopf::check_pi_gn_morphism(&l.graph)?;
                dot += &t.to_dot();
                text += &gn_text(&l.spec.name, &t);
                text += &format!("  Δ_GN = {d}\n  morphism: {morphism}\n");
                rows.push(json!({
                    "name": l.spec.name,
                    "tree": t.to_json(),
                    "coproduct": d.to_json(),
                    "morphism": morphism,
                }));
            } else {
                let t = hopf::pi_rt_graph(&l.graph)?;
                let d = t.coproduct();
                let morphism = hopf::check_pi_rt_morphism(&l.graph)?;
                text += &format!("π_RT({}) = {t}\n  Δ = {d}\n  morphism: {morphism}\n", l.spec.name);
                rows.push(json!({
                    "name": l.spec.name,
                    "tree": t.to_string(),
                    "nodes": t.node_count(),
                    "coproduct": d.to_string(),
                    "morphism": morphism,
                }));
            }
        }
    }
    if o.format == Format::Dot {
        return Ok(dot);
    }
    Ok(emit(o.format, Value::Array(rows), || text))
}

fn cmd_counterterms(o: &Opts, files: &[PathBuf]) -> Outcome {
    let r = Arc::new(Renormalizer::new(amplitude(o.amplitude), tau(o.tau)));
    let mut rows = Vec::new();
    let mut text = String::new();
    for l in load(files, o.rho)? {
        let g = &l.graph;
        let c = r.useful_counterterm(g)?;
        let via_s = r.counterterm_via_antipode(g)?;
        let via_f = r.counterterm_via_forests(g)?;
        let ur = r.renormalized_amplitude(g)?;
        text += &format!("{}: C_U = {c}\n  A = {}\n  A_UR = {ur}\n", l.spec.name, r.amplitude().value(g));
        rows.push(json!({
            "name": l.spec.name,
            "graph": g.to_string(),
            "amplitude": r.amplitude().value(g).to_json(),
            "counterterm": c.to_json(),
            "antipode_formula_agrees": c == via_s,
            "forest_formula_agrees": c == via_f,
            "renormalized": ur.to_json(),
            "coaction": r.coaction(g)?.to_json(),
        }));
    }
    Ok(emit(o.format, Value::Array(rows), || text))
}

fn cmd_effective(o: &Opts) -> Outcome {
    let rho = o.rho.unwrap_or(1);
    let amp = amplitude(o.amplitude);
    let t = tau(o.tau);
    let catalog = EffectiveCatalog::new(rho, o.order)?;
    let psi = effective::psi(&tau_character(amp, t), &catalog);
    let report = effective::check_effective_corollary(amp, t, rho, o.order)?;
    let out = json!({
        "rho": rho,
        "order": o.order,
        "amplitude": amp.to_string(),
        "tau": t.to_string(),
        "catalog_size": catalog.graphs().len(),
        "couplings": psi.to_json(),
        "expansion": report.to_json(),
    });
    Ok(emit(o.format, out, || {
        let mut s = format!("Ψ(τA) at ρ={rho}, order {}:\n{psi}\n", o.order);
        s += &format!("bare = effective through order {}: {}\n", o.order, report.holds());
        s
    }))
}

fn first_graph(path: &Path, rho: Option<Scale>) -> std::result::Result<AssignedGraph, Failure> {
    load(&[path.to_path_buf()], rho)?
        .into_iter()
        .next()
        .map(|l| l.graph)
        .ok_or_else(|| Failure::parse(format!("{}: no graph", path.display())))
}

fn cmd_lemma(o: &Opts, g1: &Path, g2: &Path) -> Outcome {
    let a = first_graph(g1, o.rho)?;
    let b = first_graph(g2, o.rho)?;
    let report = match o.rho {
        Some(rho) => effective::check_assigned_lemma(&a, &b, rho)?,
        None => {
            let plain = |g: &AssignedGraph| AssignedGraph::plain(g.graph());
            effective::check_combinatorial_lemma(&plain(&a), &plain(&b), verify::Bounds::default().max_vertices)?
        }
    };
    Ok(emit(o.format, report.to_json(), || format!("lhs {} rhs {} holds {}\n", report.lhs, report.rhs, report.holds())))
}

fn cached_generators(bounds: &Bounds) -> mshopf_core::Result<Vec<AssignedGraph>> {
    let Some(dir) = std::env::var_os(CATALOG_ENV) else {
        return verify::generators(bounds);
    };
    let path = PathBuf::from(dir).join(format!(
        "generators-l{}-r{}-v{}.json",
        bounds.max_loops, bounds.rho, bounds.max_vertices
    ));
    if let Ok(src) = fs::read_to_string(&path) {
        return wick::import_catalog(&src, bounds.rho);
    }
    let gens = verify::generators(bounds)?;
    if fs::create_dir_all(path.parent().unwrap_or(Path::new("."))).is_ok() {
        // A cache that cannot be written is not an error.
        let _ = fs::write(&path, wick::export_catalog(&gens));
    }
    Ok(gens)
}

fn cmd_verify(o: &Opts, suite: &str, max_loops: usize, max_vertices: usize) -> Outcome {
    let bounds = Bounds { max_loops, rho: o.rho.unwrap_or(3), max_vertices };
    let suites: Vec<Suite> = if suite == "all" { Suite::ALL.to_vec() } else { vec![suite.parse()?] };
    let needs_gens = suites.iter().any(|s| {
        matches!(s, Suite::Hopf | Suite::Forest | Suite::Antipode | Suite::Morphisms | Suite::Counterterms)
    });
    let gens = if needs_gens { cached_generators(&bounds)? } else { Vec::new() };
    let mut reports = Vec::new();
    for s in suites {
        reports.push(verify::run_with(s, &bounds, || Ok(gens.clone()))?);
    }
    verdict(o.format, &bounds, &reports)
}

/// Serialized reports; exit 3 when any property failed.
fn verdict(format: Format, bounds: &Bounds, reports: &[SuiteReport]) -> Outcome {
    let passed = reports.iter().all(|r| r.passed());
    let out = json!({ "bounds": bounds, "passed": passed, "suites": reports });
    let rendered = emit(format, out, || {
        let mut s = String::new();
        for r in reports {
            for p in &r.properties {
                let status = if p.passed() { "PASS" } else { "FAIL" };
                s += &format!("[{status}] {}/{} ({} checked)\n", r.suite, p.property, p.checked);
                for f in p.failures.iter().take(3) {
                    s += &format!("    {}\n", f.detail);
                    if let Some(g) = &f.graph {
                        for line in g.lines() {
                            s += &format!("      {line}\n");
                        }
                    }
                }
            }
        }
        s
    });
    if passed {
        return Ok(rendered);
    }
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.properties.iter().filter(|p| !p.passed()).map(move |p| format!("{}/{}", r.suite, p.property)))
        .collect();
    Err(Failure { code: 3, kind: "verification", message: format!("failed: {}", failed.join(", ")), output: Some(rendered) })
}

fn run(cli: &Cli) -> Outcome {
    validate(cli)?;
    let o = &cli.opts;
    match &cli.command {
        Command::Parse { files } => cmd_parse(o, files),
        Command::Coproduct { files } => cmd_coproduct(o, files),
        Command::Antipode { files } => cmd_antipode(o, files),
        Command::Forests { files } => cmd_forests(o, files),
        Command::GnTree { files } => cmd_gn_tree(o, files),
        Command::Morphism { which, files } => cmd_morphism(o, *which, files),
        Command::Counterterms { files } => cmd_counterterms(o, files),
        Command::Effective => cmd_effective(o),
        Command::Lemma { g1, g2 } => cmd_lemma(o, g1, g2),
        Command::Verify { suite, max_loops, max_vertices } => cmd_verify(o, suite, *max_loops, *max_vertices),
    }
}

fn diagnose(code: u8, kind: &str, message: &str) {
    eprintln!("{}", json!({ "error": { "exit": code, "kind": kind, "message": message } }));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            diagnose(2, "usage", e.to_string().trim());
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(out) = &f.output {
                print!("{out}");
            }
            diagnose(f.code, f.kind, &f.message);
            ExitCode::from(f.code)
        }
    }
}
