//! Command-line front end: argument parsing, a checksummed on-disk cache of
//! cell inventories, and JSON / CSV / text reports.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arrangements::{enumerate_cells, Budget, CellInventory};
use crate::chern::{
    chern_pairings, chern_power, is_cocycle, necklace_at, rational_string, Necklace,
};
use crate::complexes::{BdComplex, DComplex};
use crate::contraction::{ContractionKind, FiberShape, ForgetfulMap};
use crate::error::{Error, Result};
use crate::SurfaceSignature;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "diagcx", version, about = "Diagonal complexes of marked surfaces")]
pub struct Cli {
    /// Genus.
    #[arg(short = 'g', long = "genus", global = true, default_value_t = 0)]
    pub genus: u32,
    /// Number of boundary components.
    #[arg(short = 'b', long = "boundaries", global = true, default_value_t = 0)]
    pub boundaries: u32,
    /// Number of free marked points.
    #[arg(short = 'n', long = "free", global = true, default_value_t = 0)]
    pub free: u32,
    /// Marked points per boundary component, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub bpts: Vec<u32>,
    #[arg(long, global = true, default_value_t = 5_000_000)]
    pub budget_cells: usize,
    #[arg(long, global = true, default_value_t = 3600.0)]
    pub budget_seconds: f64,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Enumerate admissible arrangements and report f-vectors.
    Enumerate,
    /// Betti numbers and torsion of the subdivided complex.
    Homology,
    /// Contract a boundary edge and check the segment fibers.
    ContractEdge {
        #[arg(long, default_value_t = 1)]
        component: u32,
    },
    /// Contract a one-point boundary component and check the circle fibers.
    ContractBoundary {
        #[arg(long, default_value_t = 1)]
        component: u32,
    },
    /// Per-simplex fiber report for one of the two contractions.
    Fiber {
        #[arg(long, conflicts_with = "contract_boundary")]
        contract_edge: Option<u32>,
        #[arg(long)]
        contract_boundary: Option<u32>,
    },
    /// Fiberwise Morse matching of an edge contraction.
    Morse {
        #[arg(long, default_value_t = 1)]
        component: u32,
    },
    /// Chern cochain (or its power) at a free vertex.
    Chern {
        #[arg(long, default_value_t = 1)]
        vertex: u32,
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Run every applicable invariant check for the signature.
    Verify,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub signature: SurfaceSignature,
    pub command: Command,
    pub budget: Budget,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        if cli.bpts.len() != cli.boundaries as usize {
            return Err(Error::BadInput(format!(
                "-b {} but {} boundary point counts",
                cli.boundaries,
                cli.bpts.len()
            )));
        }
        if cli.budget_cells == 0 || cli.budget_seconds.is_nan() || cli.budget_seconds <= 0.0 {
            return Err(Error::BadInput("budgets must be positive".into()));
        }
        Ok(RunConfig {
            signature: SurfaceSignature::new(cli.genus, cli.free, cli.bpts)?,
            command: cli.command,
            budget: Budget {
                max_cells: cli.budget_cells,
                max_seconds: cli.budget_seconds,
            },
            cache_dir: cli.cache_dir,
            format: cli.format,
        })
    }
}

/// A finished report. `failure` names a violated invariant discovered while
/// building an otherwise complete report.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub failure: Option<String>,
}

impl Report {
    fn new(mut json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        json["schema_version"] = json!(SCHEMA_VERSION);
        Report {
            json,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
            failure: None,
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
            Format::Text => {
                let mut out = String::new();
                if let Value::Object(map) = &self.json {
                    for (k, v) in map {
                        let shown = match v {
                            Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                                format!("{} entries", items.len())
                            }
                            other => other.to_string(),
                        };
                        out.push_str(&format!("{k}: {shown}\n"));
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Checksummed, content-addressed store of cell inventories.
pub struct Cache {
    dir: PathBuf,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: PathBuf) -> Result<Self> {
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn path(&self, sig: &SurfaceSignature) -> PathBuf {
        let address = format!("inventory/{}/{}", env!("CARGO_PKG_VERSION"), sig.key());
        self.dir.join(format!("{}.json", &sha256_hex(address.as_bytes())[..32]))
    }

    /// The cached inventory, or `None` if absent or corrupted.
    pub fn load(&self, sig: &SurfaceSignature) -> Option<CellInventory> {
        let text = fs::read_to_string(self.path(sig)).ok()?;
        let (sum, payload) = text.split_once('\n')?;
        if sha256_hex(payload.as_bytes()) != sum {
            eprintln!("cache entry for {sig} failed its checksum; recomputing");
            return None;
        }
        let mut inv: CellInventory = serde_json::from_str(payload).ok()?;
        if &inv.signature != sig {
            return None;
        }
        inv.rebuild_index();
        Some(inv)
    }

    pub fn store(&self, inv: &CellInventory) -> Result<()> {
        let payload = serde_json::to_string(inv)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        writeln!(tmp, "{}", sha256_hex(payload.as_bytes()))?;
        tmp.write_all(payload.as_bytes())?;
        tmp.persist(self.path(&inv.signature)).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }
}

fn inventory(cfg: &RunConfig, sig: &SurfaceSignature) -> Result<CellInventory> {
    let cache = cfg.cache_dir.clone().map(Cache::new).transpose()?;
    if let Some(inv) = cache.as_ref().and_then(|c| c.load(sig)) {
        return Ok(inv);
    }
    let inv = enumerate_cells(sig, cfg.budget)?;
    if let Some(c) = &cache {
        c.store(&inv)?;
    }
    Ok(inv)
}

fn bd(cfg: &RunConfig, sig: &SurfaceSignature) -> Result<BdComplex> {
    BdComplex::build(inventory(cfg, sig)?)
}

fn forgetful(cfg: &RunConfig, kind: ContractionKind) -> Result<ForgetfulMap> {
    let target = kind.target_signature(&cfg.signature)?;
    ForgetfulMap::build(bd(cfg, &cfg.signature)?, bd(cfg, &target)?, kind)
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(T::to_string).collect()
}

fn cmd_enumerate(cfg: &RunConfig) -> Result<Report> {
    let sig = &cfg.signature;
    let inv = inventory(cfg, sig)?;
    let fd = inv.f_vector();
    let d = DComplex::build(inv.clone())?;
    let b = BdComplex::build(inv)?;
    let fb = b.f_vector();
    let max = sig.max_diagonals();
    let cells: Vec<Value> = d
        .inventory
        .cells
        .iter()
        .map(|c| json!({"code": c.code_hex(), "diagonals": c.m(), "dimension": max - c.m() as i64}))
        .collect();
    let mut rows = Vec::new();
    for (name, f) in [("D", &fd), ("BD", &fb)] {
        for (k, n) in f.iter().enumerate() {
            rows.push(vec![name.to_string(), k.to_string(), n.to_string()]);
        }
    }
    Ok(Report::new(
        json!({
            "signature": sig.to_string(),
            "max_diagonals": max,
            "min_diagonals": sig.min_diagonals(),
            "empty_top_cell_omitted": d.inventory.has_empty_top_cell(),
            "f_vector_d": fd,
            "f_vector_bd": fb,
            "coverings": d.coverings,
            "cells": cells,
        }),
        &["complex", "dimension", "count"],
        rows,
    ))
}

fn cmd_homology(cfg: &RunConfig) -> Result<Report> {
    let inv = inventory(cfg, &cfg.signature)?;
    let chi_d = DComplex::build(inv.clone())?.euler_characteristic();
    let b = BdComplex::build(inv)?;
    let h = b.homology()?;
    let rows = h
        .betti
        .iter()
        .zip(&h.torsion)
        .enumerate()
        .map(|(k, (b, t))| vec![k.to_string(), b.to_string(), strings(t).join(" ")])
        .collect();
    let mut report = Report::new(
        json!({
            "signature": cfg.signature.to_string(),
            "f_vector": b.f_vector(),
            "betti": h.betti,
            "torsion": h.torsion,
            "euler_characteristic": b.euler_characteristic(),
            "euler_characteristic_d": chi_d,
        }),
        &["dimension", "betti", "torsion"],
        rows,
    );
    if chi_d != b.euler_characteristic() {
        report.failure = Some("euler characteristics of D and BD differ".into());
    }
    Ok(report)
}

fn contraction_summary(f: &ForgetfulMap) -> Value {
    json!({
        "source": f.source.signature().to_string(),
        "target": f.target.signature().to_string(),
        "kind": f.kind,
        "source_f_vector": f.source.f_vector(),
        "target_f_vector": f.target.f_vector(),
    })
}

fn cmd_contract(cfg: &RunConfig, kind: ContractionKind) -> Result<Report> {
    let f = forgetful(cfg, kind)?;
    f.check_monotone()?;
    f.check_surjective()?;
    let mut fibers = f.fibers()?;
    let mut json = contraction_summary(&f);
    let mut rows = Vec::new();
    let mut failure = None;
    json["monotone"] = json!(true);
    json["surjective"] = json!(true);
    json["fibers"] = json!(fibers.iter().map(Vec::len).sum::<usize>());
    match kind {
        ContractionKind::Edge(_) => {
            let m = f.morse_matching(&mut fibers)?;
            let hs = f.source.homology()?.trimmed_betti();
            let ht = f.target.homology()?.trimmed_betti();
            json["shape"] = json!(FiberShape::Segment);
            json["critical_cells"] = json!(m.critical.len());
            json["matched_pairs"] = json!(m.pairs.len());
            json["betti_source"] = json!(hs);
            json["betti_target"] = json!(ht);
            if hs != ht {
                failure = Some("Betti numbers change under edge contraction".into());
            }
            rows.push(vec!["segments".into(), json["fibers"].to_string()]);
            rows.push(vec!["critical_cells".into(), m.critical.len().to_string()]);
        }
        ContractionKind::Boundary(_) => {
            let mut pass = 0;
            let mut total = 0;
            for fiber in fibers.iter_mut().flatten() {
                total += 1;
                if f.grid_report(fiber)?.pass {
                    pass += 1;
                }
            }
            f.check_fiber_continuity(&fibers)?;
            let chi = f.source.euler_characteristic();
            json["shape"] = json!(FiberShape::Circle);
            json["grid_pass"] = json!(pass);
            json["euler_characteristic_total"] = json!(chi);
            if pass != total {
                failure = Some(format!("{} fibers fail the grid check", total - pass));
            } else if chi != 0 {
                failure = Some(format!("total space has euler characteristic {chi}"));
            }
            rows.push(vec!["circles".into(), total.to_string()]);
            rows.push(vec!["grid_pass".into(), pass.to_string()]);
        }
    }
    let mut report = Report::new(json, &["quantity", "value"], rows);
    report.failure = failure;
    Ok(report)
}

fn cmd_fiber(cfg: &RunConfig, kind: ContractionKind) -> Result<Report> {
    let f = forgetful(cfg, kind)?;
    let mut fibers = f.fibers()?;
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut failed = 0;
    for fiber in fibers.iter_mut().flatten() {
        let (k, s) = fiber.base;
        let code = f.target.inventory.cells[f.target.simplices[k][s].cell].code_hex();
        let mut entry = json!({
            "base_dimension": k,
            "base_index": s,
            "base_code": code,
            "shape": fiber.shape,
            "vertices": fiber.vertices.len(),
            "edges": fiber.edges.len(),
        });
        let mut grid = String::new();
        if let ContractionKind::Boundary(_) = kind {
            let r = f.grid_report(fiber)?;
            entry["germ_set_indices"] = json!(r.set_indices);
            entry["predicted"] = json!(r.predicted);
            entry["observed"] = json!(r.observed);
            entry["grid_check"] = json!(if r.pass { "pass" } else { "fail" });
            grid = if r.pass { "pass".into() } else { "fail".into() };
            if !r.pass {
                failed += 1;
            }
        }
        rows.push(vec![
            k.to_string(),
            s.to_string(),
            format!("{:?}", fiber.shape).to_lowercase(),
            fiber.vertices.len().to_string(),
            grid,
        ]);
        entries.push(entry);
    }
    let mut json = contraction_summary(&f);
    json["fibers"] = Value::Array(entries);
    let mut report = Report::new(json, &["base_dimension", "base_index", "shape", "vertices", "grid_check"], rows);
    if failed > 0 {
        report.failure = Some(format!("{failed} fibers fail the grid check"));
    }
    Ok(report)
}

fn cmd_morse(cfg: &RunConfig, component: u32) -> Result<Report> {
    let f = forgetful(cfg, ContractionKind::Edge(component))?;
    let mut fibers = f.fibers()?;
    let m = f.morse_matching(&mut fibers)?;
    let rows = m
        .pairs
        .iter()
        .map(|((a, b), (c, d))| vec!["pair".into(), format!("{a}:{b}"), format!("{c}:{d}")])
        .chain(m.critical.iter().map(|(a, b)| vec!["critical".into(), format!("{a}:{b}"), String::new()]))
        .collect();
    let mut json = contraction_summary(&f);
    json["acyclic"] = json!(true);
    json["pairs"] = json!(m.pairs);
    json["critical"] = json!(m.critical);
    Ok(Report::new(json, &["role", "cell", "partner"], rows))
}

fn cmd_chern(cfg: &RunConfig, vertex: u32, power: u32) -> Result<Report> {
    if vertex == 0 || vertex > cfg.signature.free_points {
        return Err(Error::BadInput(format!("{} has no free vertex {vertex}", cfg.signature)));
    }
    let base = bd(cfg, &cfg.signature)?;
    let c = chern_power(&base, vertex, power)?;
    let dim = 2 * power as usize;
    if c.values.is_empty() {
        eprintln!("{} has no {dim}-simplices; the cochain is empty", cfg.signature);
    }
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for (s, v) in c.values.iter().enumerate() {
        let nu: Necklace = necklace_at(&base, &base.simplices[dim][s], vertex)?;
        let p = nu.parity_count()?.p();
        let counts = nu.counts();
        let mut row = vec![s.to_string(), nu.to_string(), p.to_string()];
        row.extend(strings(&counts));
        row.push(rational_string(v));
        rows.push(row);
        values.push(json!({
            "simplex": s,
            "necklace": nu.beads(),
            "p": p,
            "counts": counts,
            "value": rational_string(v),
        }));
    }
    let cocycle = if base.dimension() > dim { Some(is_cocycle(&base, &c)?) } else { None };
    let pairings = if power == 1 { chern_pairings(&base, vertex)? } else { Vec::new() };
    let mut header = vec!["simplex", "necklace", "p"];
    let names: Vec<String> = (1..=dim + 1).map(|i| format!("n{i}")).collect();
    header.extend(names.iter().map(String::as_str));
    header.push("value");
    let mut report = Report::new(
        json!({
            "signature": cfg.signature.to_string(),
            "vertex": vertex,
            "power": power,
            "dimension": dim,
            "cocycle": cocycle,
            "values": values,
            "pairings": pairings,
        }),
        &header,
        rows,
    );
    if cocycle == Some(false) {
        report.failure = Some("the Chern cochain is not a cocycle".into());
    } else if pairings.iter().any(|p| !p.integral) {
        report.failure = Some("a pairing with an integral cycle is not an integer".into());
    }
    Ok(report)
}

fn check(name: &str, outcome: Result<String>) -> Result<(String, bool, String)> {
    match outcome {
        Ok(detail) => Ok((name.to_string(), true, detail)),
        Err(e @ Error::Budget(_)) => Err(e),
        Err(e) => Ok((name.to_string(), false, e.to_string())),
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invariant(what()))
    }
}

fn cmd_verify(cfg: &RunConfig) -> Result<Report> {
    let sig = &cfg.signature;
    let inv = inventory(cfg, sig)?;
    let mut checks = Vec::new();
    checks.push(check("diagonal_counts", {
        let max = inv.cells.iter().map(|c| c.m()).max().unwrap_or(0) as i64;
        let mut min = inv.cells.iter().map(|c| c.m()).min().unwrap_or(0) as i64;
        if inv.has_empty_top_cell() {
            min = 0;
        }
        ensure(max == sig.max_diagonals() && min == sig.min_diagonals(), || {
            format!("observed {min}..{max}, expected {}..{}", sig.min_diagonals(), sig.max_diagonals())
        })
        .map(|_| format!("{min}..{max}"))
    })?);
    let built = BdComplex::build(inv.clone());
    checks.push(check("regularity", built.as_ref().map(|_| "every facet distinct".to_string()).map_err(clone_err))?);
    let Ok(b) = built else { return Ok(verify_report(sig, checks)) };
    checks.push(check("boundary_squared", b.chain_complex().check_boundary_squared().map(|_| "zero".into()))?);
    checks.push(check("euler_d_equals_bd", {
        let d = DComplex::build(inv)?.euler_characteristic();
        ensure(d == b.euler_characteristic(), || format!("{d} vs {}", b.euler_characteristic())).map(|_| d.to_string())
    })?);
    if sig.min_diagonals() > 0 {
        checks.push(check("dimension", {
            ensure(b.dimension() as i64 == sig.dimension(), || format!("{} vs {}", b.dimension(), sig.dimension()))
                .map(|_| b.dimension().to_string())
        })?);
    }
    for (i, &k) in sig.boundary_points.iter().enumerate() {
        let i = i as u32 + 1;
        let kind = if k > 1 { ContractionKind::Edge(i) } else { ContractionKind::Boundary(i) };
        let target = kind.target_signature(sig)?;
        if target.min_diagonals() == 0 {
            continue;
        }
        let name = match kind {
            ContractionKind::Edge(_) => format!("edge_contraction_{i}"),
            ContractionKind::Boundary(_) => format!("boundary_contraction_{i}"),
        };
        let outcome = (|| -> Result<String> {
            let report = cmd_contract(cfg, kind)?;
            match report.failure {
                Some(f) => Err(Error::Invariant(f)),
                None => Ok(format!("{} fibers", report.json["fibers"])),
            }
        })();
        checks.push(check(&name, outcome)?);
    }
    if b.dimension() >= 3 {
        for v in 1..=sig.free_points {
            let outcome = cmd_chern(cfg, v, 1).and_then(|r| match r.failure {
                Some(f) => Err(Error::Invariant(f)),
                None => Ok(format!("{} pairings", r.json["pairings"].as_array().map_or(0, Vec::len))),
            });
            checks.push(check(&format!("chern_cocycle_{v}"), outcome)?);
        }
    }
    Ok(verify_report(sig, checks))
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::Budget(s) => Error::Budget(s.clone()),
        other => Error::Invariant(other.to_string()),
    }
}

fn verify_report(sig: &SurfaceSignature, checks: Vec<(String, bool, String)>) -> Report {
    let failed: Vec<String> = checks.iter().filter(|c| !c.1).map(|c| c.0.clone()).collect();
    let rows = checks
        .iter()
        .map(|(n, p, d)| vec![n.clone(), if *p { "pass" } else { "fail" }.into(), d.clone()])
        .collect();
    let entries: Vec<Value> = checks
        .iter()
        .map(|(n, p, d)| json!({"name": n, "pass": p, "detail": d}))
        .collect();
    let mut report = Report::new(
        json!({"signature": sig.to_string(), "checks": entries, "failed": failed}),
        &["check", "result", "detail"],
        rows,
    );
    if !failed.is_empty() {
        report.failure = Some(format!("failed: {}", failed.join(", ")));
    }
    report
}

pub fn execute(cfg: &RunConfig) -> Result<Report> {
    match cfg.command {
        Command::Enumerate => cmd_enumerate(cfg),
        Command::Homology => cmd_homology(cfg),
        Command::ContractEdge { component } => cmd_contract(cfg, ContractionKind::Edge(component)),
        Command::ContractBoundary { component } => cmd_contract(cfg, ContractionKind::Boundary(component)),
        Command::Fiber {
            contract_edge,
            contract_boundary,
        } => match (contract_edge, contract_boundary) {
            (Some(i), None) => cmd_fiber(cfg, ContractionKind::Edge(i)),
            (None, Some(i)) => cmd_fiber(cfg, ContractionKind::Boundary(i)),
            _ => Err(Error::BadInput("give exactly one of --contract-edge, --contract-boundary".into())),
        },
        Command::Morse { component } => cmd_morse(cfg, component),
        Command::Chern { vertex, power } => cmd_chern(cfg, vertex, power),
        Command::Verify => cmd_verify(cfg),
    }
}

/// Parses `args`, runs the command and writes the report to `out`.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = RunConfig::from_cli(cli).and_then(|cfg| {
        let report = execute(&cfg)?;
        out.write_all(report.render(cfg.format)?.as_bytes())?;
        Ok(report)
    });
    match result {
        Ok(Report { failure: None, .. }) => 0,
        Ok(Report { failure: Some(f), .. }) => {
            eprintln!("invariant failure: {f}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
