//! Command implementations behind the `polarlat` binary. Everything a
//! command does is determined by its config file; the only flags are
//! plumbing (--out, --workers, --format).

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polarlat_core::analysis::{
    bareiss_det, distance_report, multilevel_dmin_of_spec, nvnr, nvnr_db, CountConvention,
};
use polarlat_core::channel::partition_capacity;
use polarlat_core::lattice::LatticeSpec;
use polarlat_core::reliability::select_profile;
use polarlat_core::sim::StopRule;
use polarlat_core::Error as CoreError;

use crate::config::{spec_record, RunConfig};
use crate::relcache;
use crate::run;
use crate::specfile::SpecFile;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "polarlat", version, about = "Polar and PAC lattice toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads. Never changes results, only wall time.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Format echoed to stdout for record-producing commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build the lattice generator and write the spec file.
    Construct,
    /// Estimate subchannel reliabilities and derive a rate profile.
    Profile,
    /// Minimum-distance / NVNR report for the configured lattice.
    Analyze,
    /// Monte Carlo error-rate runs over the configured noise grid.
    Simulate,
    /// Per-level capacities of the mod-2 partition chain.
    Capacity,
}

/// Failure classes, mapped one-to-one onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad config file or arguments (exit 2).
    Config(String),
    /// Structurally valid input violating an operation precondition (exit 3).
    Precondition(String),
    /// Internal numeric failure (exit 4).
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Precondition(m) | CliError::Numeric(m) => m,
        }
    }
}

fn core_err(e: CoreError) -> CliError {
    CliError::Precondition(e.to_string())
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

pub fn main_result(cli: &Cli) -> Result<(), CliError> {
    let config_path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    let cfg = RunConfig::load(config_path).map_err(CliError::Config)?;
    std::fs::create_dir_all(&cli.out).map_err(|e| io_err(&cli.out, e))?;
    let pool = run::make_pool(cli.workers).map_err(CliError::Config)?;
    match cli.command {
        Command::Construct => cmd_construct(&cfg, cli, &pool),
        Command::Profile => cmd_profile(&cfg, cli, &pool),
        Command::Analyze => cmd_analyze(&cfg, cli, &pool),
        Command::Simulate => cmd_simulate(&cfg, cli, &pool),
        Command::Capacity => cmd_capacity(&cfg),
    }
}

/// Resolve the configured profile source into a spec record + generator.
/// A `spec_file` source is checked against the declared hash; any other
/// source never has a hash to disagree with.
fn resolve_spec(
    cfg: &RunConfig,
    cli: &Cli,
    pool: &rayon::ThreadPool,
) -> Result<(SpecFile, LatticeSpec), CliError> {
    let l = &cfg.lattice;
    let record = if let Some(path) = &l.spec_file {
        let record = SpecFile::load(Path::new(path)).map_err(CliError::Config)?;
        if let Some(expected) = &l.spec_hash {
            let got = record.hash();
            if &got != expected {
                return Err(CliError::Precondition(format!(
                    "spec hash mismatch: file {path} hashes to {got}, config expects {expected}"
                )));
            }
        }
        if record.n != l.n || record.r != l.r {
            return Err(CliError::Precondition(format!(
                "spec file is N={}, r={} but config declares N={}, r={}",
                record.n, record.r, l.n, l.r
            )));
        }
        record
    } else if let Some(sets) = &l.sets {
        let profile = polarlat_core::RateProfile::new(l.n, sets.clone()).map_err(core_err)?;
        if profile.levels() != l.r {
            return Err(CliError::Config(format!(
                "config gives {} sets but r = {}",
                profile.levels(),
                l.r
            )));
        }
        spec_record(cfg, &profile).map_err(CliError::Config)?
    } else {
        let table = load_or_estimate_reliabilities(cfg, cli, pool)?;
        let policy = cfg.select_policy().expect("validated: derive has a policy");
        let profile = select_profile(&table, &policy).map_err(core_err)?;
        spec_record(cfg, &profile).map_err(CliError::Config)?
    };
    let spec = record.build().map_err(CliError::Precondition)?;
    Ok((record, spec))
}

fn load_or_estimate_reliabilities(
    cfg: &RunConfig,
    cli: &Cli,
    pool: &rayon::ThreadPool,
) -> Result<polarlat_core::reliability::ReliabilityTable, CliError> {
    let l = &cfg.lattice;
    let d = l.derive.as_ref().expect("caller checked");
    if let Some(cache) = &d.cache {
        let path = cli.out.join(cache);
        if path.exists() {
            return relcache::load(&path, l.n, l.r, d.sigma, d.trials, d.seed)
                .map_err(CliError::Precondition);
        }
    }
    let table = run::estimate_reliabilities_parallel(d.sigma, l.n, l.r, d.trials, d.seed, pool)
        .map_err(core_err)?;
    if let Some(cache) = &d.cache {
        let path = cli.out.join(cache);
        relcache::save(&table, &path).map_err(|e| io_err(&path, e))?;
    }
    Ok(table)
}

fn write_spec(record: &SpecFile, cfg: &RunConfig, cli: &Cli) -> Result<PathBuf, CliError> {
    let path = cli.out.join(format!("{}.spec.json", cfg.stem()));
    record.save(&path).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

fn cmd_construct(cfg: &RunConfig, cli: &Cli, pool: &rayon::ThreadPool) -> Result<(), CliError> {
    let (record, spec) = resolve_spec(cfg, cli, pool)?;
    let path = write_spec(&record, cfg, cli)?;
    let profile = spec.profile();
    println!("kind: {}", run::kind_str(spec.kind()));
    println!("N: {}  r: {}", spec.n(), spec.levels());
    let sizes: Vec<String> = (1..=spec.levels()).map(|l| profile.size(l).to_string()).collect();
    println!("K_l: [{}]", sizes.join(", "));
    println!("log2 volume: {}", spec.log2_volume());
    if spec.n() <= 64 {
        let m: Vec<Vec<i128>> = spec
            .gen()
            .iter()
            .map(|row| row.iter().map(|&e| e as i128).collect())
            .collect();
        let det = bareiss_det(&m).unsigned_abs();
        let ok = det == 1u128 << spec.log2_volume();
        println!("det check: |det G| = {det} ({})", if ok { "ok" } else { "MISMATCH" });
        if !ok {
            return Err(CliError::Numeric(
                "determinant disagrees with the volume formula".into(),
            ));
        }
    }
    if spec.n() <= 16 {
        println!("generator rows:");
        for row in spec.gen() {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            println!("  [{}]", cells.join(", "));
        }
    }
    println!("spec: {} (hash {})", path.display(), record.hash());
    Ok(())
}

fn cmd_profile(cfg: &RunConfig, cli: &Cli, pool: &rayon::ThreadPool) -> Result<(), CliError> {
    if cfg.lattice.derive.is_none() {
        return Err(CliError::Config("profile command needs a lattice.derive block".into()));
    }
    let table = load_or_estimate_reliabilities(cfg, cli, pool)?;
    let cache_path = cli.out.join(format!("{}.relcache.txt", cfg.stem()));
    relcache::save(&table, &cache_path).map_err(|e| io_err(&cache_path, e))?;
    let policy = cfg.select_policy().expect("validated");
    let profile = select_profile(&table, &policy).map_err(core_err)?;
    let record = spec_record(cfg, &profile).map_err(CliError::Config)?;
    let path = write_spec(&record, cfg, cli)?;
    println!(
        "reliabilities: {} ({} trials at sigma {})",
        cache_path.display(),
        table.trials,
        table.sigma
    );
    for (i, set) in profile.sets().iter().enumerate() {
        let cells: Vec<String> = set.iter().map(|k| k.to_string()).collect();
        println!("I_{}: {{{}}}", i + 1, cells.join(", "));
    }
    println!("spec: {} (hash {})", path.display(), record.hash());
    Ok(())
}

#[derive(Serialize)]
struct AnalysisReport {
    tool_version: String,
    spec_hash: String,
    kind: String,
    n: usize,
    r: usize,
    d2_min: u64,
    n_min: Option<u64>,
    convention: Option<String>,
    level_terms: Option<Vec<Option<u64>>>,
    top_term: Option<u64>,
    n_lattice_vectors: Option<u64>,
    n_antipodal_pairs: Option<u64>,
    n_codewords: Option<u64>,
    nvnr: Vec<NvnrRow>,
}

#[derive(Serialize)]
struct NvnrRow {
    sigma: f64,
    nvnr: f64,
    nvnr_db: f64,
}

fn convention_name(c: CountConvention) -> &'static str {
    match c {
        CountConvention::LatticeVectors => "lattice-vectors",
        CountConvention::AntipodalPairs => "antipodal-pairs",
        CountConvention::Codewords => "codewords",
    }
}

fn cmd_analyze(cfg: &RunConfig, cli: &Cli, pool: &rayon::ThreadPool) -> Result<(), CliError> {
    let (record, spec) = resolve_spec(cfg, cli, pool)?;
    let d2 = multilevel_dmin_of_spec(&spec).map_err(core_err)?;
    let dist = match distance_report(&spec) {
        Ok(d) => Some(d),
        Err(CoreError::MinVectorPrecondition) | Err(CoreError::EnumerationTooLarge { .. }) => None,
        Err(e) => return Err(core_err(e)),
    };
    let sigmas: Vec<f64> = cfg.channel.as_ref().map(|c| c.sigmas.clone()).unwrap_or_default();
    let nvnr_rows: Vec<NvnrRow> = sigmas
        .iter()
        .map(|&s| NvnrRow {
            sigma: s,
            nvnr: nvnr(spec.profile(), s),
            nvnr_db: nvnr_db(spec.profile(), s),
        })
        .collect();
    let report = AnalysisReport {
        tool_version: TOOL_VERSION.into(),
        spec_hash: record.hash(),
        kind: run::kind_str(spec.kind()).into(),
        n: spec.n(),
        r: spec.levels(),
        d2_min: d2,
        n_min: dist.as_ref().map(|d| d.n_min),
        convention: dist.as_ref().map(|d| convention_name(d.convention).into()),
        level_terms: dist.as_ref().map(|d| d.level_terms.clone()),
        top_term: dist.as_ref().map(|d| d.top_term),
        n_lattice_vectors: dist.as_ref().map(|d| d.n_lattice_vectors),
        n_antipodal_pairs: dist.as_ref().map(|d| d.n_antipodal_pairs),
        n_codewords: dist.as_ref().map(|d| d.n_codewords),
        nvnr: nvnr_rows,
    };
    let path = cli.out.join(format!("{}.analysis.json", cfg.stem()));
    let text = serde_json::to_string_pretty(&report).expect("report serialization cannot fail");
    std::fs::write(&path, text.clone() + "\n").map_err(|e| io_err(&path, e))?;
    println!("spec hash: {}", report.spec_hash);
    println!("d2_min: {d2}");
    match &dist {
        Some(d) => println!(
            "N_min: {} (convention: {}; vectors {}, pairs {}, codewords {})",
            d.n_min,
            convention_name(d.convention),
            d.n_lattice_vectors,
            d.n_antipodal_pairs,
            d.n_codewords
        ),
        None => println!("N_min: not computed (enumeration limits exceeded)"),
    }
    for row in &report.nvnr {
        println!("sigma {}: nvnr {} ({} dB)", row.sigma, row.nvnr, row.nvnr_db);
    }
    println!("report: {}", path.display());
    Ok(())
}

fn cmd_simulate(cfg: &RunConfig, cli: &Cli, pool: &rayon::ThreadPool) -> Result<(), CliError> {
    let channel = cfg
        .channel
        .as_ref()
        .ok_or_else(|| CliError::Config("simulate needs a channel block".into()))?;
    let sim = cfg
        .sim
        .as_ref()
        .ok_or_else(|| CliError::Config("simulate needs a sim block".into()))?;
    let (record, spec) = resolve_spec(cfg, cli, pool)?;
    let decoder = cfg.decoder(&spec).map_err(CliError::Config)?;
    let stop = if sim.stop_at_errors > 0 {
        StopRule::until_errors(sim.trials, sim.stop_at_errors)
    } else {
        StopRule::fixed(sim.trials)
    };
    let records = run::sweep_parallel(&spec, &channel.sigmas, &decoder, sim.seed, stop, pool)
        .map_err(core_err)?;
    if records.iter().any(|r| !r.p_e.is_finite()) {
        return Err(CliError::Numeric("non-finite error-rate estimate".into()));
    }
    let hash = record.hash();
    let csv = run::records_to_csv(&hash, spec.kind(), spec.n(), spec.levels(), &decoder, &records);
    let json = run::records_to_json(&hash, spec.kind(), spec.n(), spec.levels(), &decoder, &records);
    let csv_path = cli.out.join(format!("{}.csv", cfg.stem()));
    let json_path = cli.out.join(format!("{}.json", cfg.stem()));
    std::fs::write(&csv_path, &csv).map_err(|e| io_err(&csv_path, e))?;
    std::fs::write(&json_path, json.clone() + "\n").map_err(|e| io_err(&json_path, e))?;
    match cli.format {
        Format::Csv => print!("{csv}"),
        Format::Json => println!("{json}"),
    }
    eprintln!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

fn cmd_capacity(cfg: &RunConfig) -> Result<(), CliError> {
    let channel = cfg
        .channel
        .as_ref()
        .ok_or_else(|| CliError::Config("capacity needs a channel block".into()))?;
    let r = cfg.lattice.r;
    for &sigma in &channel.sigmas {
        let caps = partition_capacity(sigma, r);
        println!("sigma {sigma} (r = {r}):");
        for (l, c) in caps.levels.iter().enumerate() {
            println!("  C(Z/2Z, sigma^2/4^{}) = {c}", l);
        }
        println!("  C(Z, sigma^2) = {}", caps.c_z);
        println!("  chain total = {}", caps.chain_total);
        let sum_levels: f64 = caps.levels.iter().sum();
        println!(
            "  telescoping check: sum C_l = {sum_levels} (|delta from chain total| = {:e})",
            (sum_levels - caps.chain_total).abs()
        );
        if !sum_levels.is_finite() {
            return Err(CliError::Numeric("capacity evaluation diverged".into()));
        }
    }
    Ok(())
}
