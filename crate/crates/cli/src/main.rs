mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use niemeier_theta::congruence::{cross_validate_leech, reproduce_table, Claim, Lab, TABLE_IDS};
use niemeier_theta::forms::{format_factored, parse_ozeki, parse_table_spec, HalfIntegralMatrix};
use niemeier_theta::lattice::{build, coxeter_number, Label};
use niemeier_theta::shortvec::load_or_enumerate;
use niemeier_theta::theta::{CountOptions, Engine};
use niemeier_theta::Error;

use output::{Emit, Format};

#[derive(Parser)]
#[command(name = "ntheta", version, about = "Exact Siegel theta coefficients and mod-p congruence checks")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct RunConfig {
    /// Root for shell caches, pair tables, checkpoints and the ledger.
    #[arg(long, global = true, env = "THETA_CACHE_DIR", default_value = "theta-cache")]
    cache_dir: PathBuf,
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Maximum number of filter tests per count, e.g. `1e12`.
    #[arg(long, global = true, value_parser = parse_budget)]
    budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct a lattice, check its invariants and export its Gram matrix.
    Build {
        #[arg(long)]
        label: String,
    },
    /// Compute one theta coefficient.
    Coeff {
        #[arg(long)]
        lat: String,
        #[arg(long)]
        deg: usize,
        /// `a,b,c` (degree 2), `a,b,c:d,e,f` (degree 3) or `a` (degree 1).
        #[arg(long, conflicts_with = "ozeki")]
        t: Option<String>,
        /// Ten-entry degree-4 tuple.
        #[arg(long)]
        ozeki: Option<String>,
    },
    /// Reproduce a stored table and diff it against the expected values.
    Table {
        #[arg(long)]
        id: String,
        /// Comma-separated row selection.
        #[arg(long, value_delimiter = ',')]
        rows: Option<Vec<String>>,
    },
    /// Run a congruence verifier.
    Verify {
        #[arg(long)]
        claim: String,
    },
    /// Print the Gram matrix of a lattice.
    Export {
        #[arg(long)]
        label: String,
    },
    /// Count one degree-4 Leech row by several methods.
    Crosscheck {
        #[arg(long, default_value = "d64")]
        row: String,
        /// Also count a degenerate degree-4 index without factoring (slow).
        #[arg(long)]
        direct: bool,
    },
}

fn parse_budget(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let bad = || format!("`{s}` is not a budget");
    match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let m: u64 = m.parse().map_err(|_| bad())?;
            let e: u32 = e.parse().map_err(|_| bad())?;
            10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(bad)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// Stable process exit codes.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnknownLabel(_) | Error::Parse(_) | Error::NotSemidefinite(_) | Error::BoxUnderflow { .. } => 1,
        Error::BudgetExceeded(_) => 3,
        Error::CacheMiss(_) | Error::CorruptCache(_) | Error::ShellMissing { .. } | Error::Io(_) | Error::Json(_) => 4,
        Error::NotPositiveDefinite
        | Error::InvalidRank { .. }
        | Error::ConstructionFailure { .. }
        | Error::AssertionUnverified(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.run.workers as usize).build_global();
    match run(&cli) {
        Ok(pass) => ExitCode::from(if pass { 0 } else { 2 }),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn options(rc: &RunConfig) -> CountOptions {
    let mut o = CountOptions::default().with_partitions(rc.workers as usize);
    o.node_budget = rc.budget;
    o.checkpoint_dir = Some(rc.cache_dir.join("checkpoints"));
    o
}

fn lab(rc: &RunConfig) -> Result<Lab, Error> {
    std::fs::create_dir_all(rc.cache_dir.join("checkpoints"))?;
    Lab::new(Some(&rc.cache_dir), options(rc))
}

fn label(s: &str) -> Result<Label, Error> {
    match s.parse::<Label>()? {
        Label::AdHoc(x) => Err(Error::UnknownLabel(x)),
        l => Ok(l),
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let rc = &cli.run;
    let out = Emit::new(rc.format);
    match &cli.cmd {
        Cmd::Build { label: l } => cmd_build(&out, rc, &label(l)?),
        Cmd::Coeff { lat, deg, t, ozeki } => {
            let t = match (t, ozeki) {
                (Some(s), None) => parse_table_spec(s)?,
                (None, Some(s)) => parse_ozeki(s)?,
                _ => return Err(Error::Parse("give exactly one of --t or --ozeki".into())),
            };
            if t.degree() != *deg {
                return Err(Error::Parse(format!("index has degree {} but --deg is {deg}", t.degree())));
            }
            cmd_coeff(&out, rc, &label(lat)?, &t)
        }
        Cmd::Table { id, rows } => {
            if !TABLE_IDS.contains(&id.as_str()) {
                return Err(Error::Parse(format!("unknown table `{id}`; expected one of {}", TABLE_IDS.join(", "))));
            }
            let lab = lab(rc)?;
            let rep = reproduce_table(&lab, id, rows.as_deref())?;
            out.table(&rep)?;
            Ok(rep.pass)
        }
        Cmd::Verify { claim } => {
            let claim: Claim = claim.parse()?;
            let lab = lab(rc)?;
            let rep = lab.verify(claim)?;
            let dir = rc.cache_dir.join("reports");
            std::fs::create_dir_all(&dir)?;
            std::fs::write(dir.join(format!("{claim}.json")), serde_json::to_string_pretty(&rep)?)?;
            out.report(&rep)?;
            Ok(rep.pass)
        }
        Cmd::Export { label: l } => {
            let lat = build(&label(l)?)?;
            out.gram(lat.label.name(), lat.gram.entries())?;
            Ok(true)
        }
        Cmd::Crosscheck { row, direct } => {
            let lab = lab(rc)?;
            let checks = cross_validate_leech(&lab, row, *direct)?;
            out.crosscheck(&checks)?;
            Ok(checks.iter().all(|c| c.agree))
        }
    }
}

fn cmd_build(out: &Emit, rc: &RunConfig, label: &Label) -> Result<bool, Error> {
    let lat = build(label)?;
    let det = lat.gram.det();
    let bound = if *label == Label::Omega { 4 } else { 2 };
    std::fs::create_dir_all(&rc.cache_dir)?;
    let v = load_or_enumerate(Some(&rc.cache_dir), &lat, bound)?;
    let roots = v.count(2);
    let (want_det, want_roots) = if label.is_niemeier() {
        (1, Some(24 * coxeter_number(label)? as usize))
    } else {
        (121, None)
    };
    let mut failures = Vec::new();
    if det != want_det.into() {
        failures.push(format!("det {det} ≠ {want_det}"));
    }
    if let Some(r) = want_roots.filter(|&r| r != roots) {
        failures.push(format!("{roots} roots ≠ {r}"));
    }
    if *label == Label::Omega && v.count(4) != 196560 {
        failures.push(format!("{} minimal vectors ≠ 196560", v.count(4)));
    }
    let gram_file = rc.cache_dir.join(format!("{}.gram.json", lat.label.name()));
    std::fs::write(&gram_file, serde_json::to_string(lat.gram.entries())?)?;
    let counts: serde_json::Map<String, serde_json::Value> =
        v.counts().into_iter().map(|(n, c)| (n.to_string(), json!(c))).collect();
    let value = json!({
        "kind": "build",
        "label": lat.label.name(),
        "rank": lat.rank(),
        "det": det.to_string(),
        "even": true,
        "roots": roots,
        "shell_counts": counts,
        "gram_hash": lat.gram.hash(),
        "gram_file": gram_file.display().to_string(),
        "pass": failures.is_empty(),
        "failures": failures,
    });
    out.object(&value)?;
    if !failures.is_empty() {
        return Err(Error::ConstructionFailure { label: lat.label.name().into(), reason: failures.join("; ") });
    }
    Ok(true)
}

fn cmd_coeff(out: &Emit, rc: &RunConfig, label: &Label, t: &HalfIntegralMatrix) -> Result<bool, Error> {
    let lat = build(label)?;
    let bound = (2 * t.max_diag()).max(2) as u32;
    std::fs::create_dir_all(&rc.cache_dir)?;
    let lab = lab(rc)?;
    let engine: Engine = {
        let v = load_or_enumerate(Some(&rc.cache_dir), &lat, bound)?;
        Engine::new(lat, v)?.with_table_dir(&rc.cache_dir)
    };
    let key = t.canonical_key().to_string();
    let cached = lab.ledger().get(label.name(), &key);
    let c = engine.coefficient(t, lab.options(), lab.ledger())?;
    let record = lab.ledger().get(label.name(), &key).expect("recorded");
    let value = json!({
        "kind": "coeff",
        "lattice": label.name(),
        "degree": t.degree(),
        "t": t.to_string(),
        "key": key,
        "coeff": c.to_string(),
        "factored": format_factored(&c),
        "d_T": t.discriminant().to_string(),
        "method": record.method,
        "source": if cached.is_some() { "ledger" } else { "computed" },
        "ledger": ledger_path(&rc.cache_dir),
    });
    out.object(&value)?;
    Ok(true)
}

fn ledger_path(dir: &Path) -> String {
    dir.join(niemeier_theta::theta::LEDGER_FILE).display().to_string()
}
