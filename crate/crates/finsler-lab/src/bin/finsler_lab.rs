//! Configuration-driven command line front end: run verification
//! campaigns, split connections into their potential and covector parts,
//! integrate geodesics, and publish the report schema.
//!
//! Exit codes: 0 pass, 1 check failure, 2 configuration error,
//! 3 evaluation error. Thread count is controlled by RAYON_NUM_THREADS.

use clap::{Args, Parser, Subcommand, ValueEnum};
use finsler_lab::campaign::run_campaign;
use finsler_lab::config::{parse_config, RunConfig};
use finsler_lab::connection::connection_jets;
use finsler_lab::metric::{properness_probe, space_for, FundJets};
use finsler_lab::report::{self, CheckStatus};
use finsler_lab::sampling::sample_points;
use finsler_lab::{geodesic, palatini, tol, Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "finsler-lab", version, about = "Verification campaigns for homogeneous metric geometry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured residual checks and emit a campaign report.
    Check(RunArgs),
    /// Split the configured connection's deviation from the canonical one
    /// into its vector-potential and covector parts at sampled points.
    Decompose(RunArgs),
    /// Integrate the configured geodesic and emit the trajectory.
    Geodesic(RunArgs),
    /// Print the JSON schema that campaign reports validate against.
    ReportSchema,
}

#[derive(Args)]
struct RunArgs {
    /// Path to a JSON run configuration.
    config: PathBuf,
    /// Override the configured sample seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the configured per-check sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Override the configured tolerance scale.
    #[arg(long)]
    tol_scale: Option<f64>,
    /// Write the primary output to this path instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Primary output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::ReportSchema => {
            print!("{}", report::REPORT_SCHEMA);
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(args) => cmd_check(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Geodesic(args) => cmd_geodesic(args),
    }
}

fn load_config(args: &RunArgs) -> Result<RunConfig> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(s) = args.samples {
        if s == 0 {
            return Err(Error::Config("samples: must be at least 1".into()));
        }
        cfg.samples = s;
    }
    if let Some(t) = args.tol_scale {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Config("tol-scale: must be a positive number".into()));
        }
        cfg.tol_scale = t;
    }
    // Metric health probe: advisory, never fatal. A degenerate or
    // misdeclared metric shows up here before any check consumes it.
    match properness_probe(&cfg.metric, cfg.seed, 32) {
        Ok(p) => eprintln!(
            "probe[{}]: {:?}, signature (+{} / -{}), worst condition {:.2e}",
            cfg.metric.name, p.class, p.signature.0, p.signature.1, p.worst_cond
        ),
        Err(e) => eprintln!("probe[{}] did not complete: {e}", cfg.metric.name),
    }
    Ok(cfg)
}

fn emit(args: &RunArgs, payload: &str) -> Result<()> {
    match &args.out {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| Error::Eval(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn cmd_check(args: RunArgs) -> Result<ExitCode> {
    let cfg = load_config(&args)?;
    if cfg.checks.is_empty() {
        eprintln!("warning: no checks selected");
    }
    let rep = run_campaign(&cfg)?;
    for c in &rep.checks {
        let verdict = match &c.status {
            CheckStatus::Pass => "pass".to_string(),
            CheckStatus::Fail => "FAIL".to_string(),
            CheckStatus::Error(m) => format!("ERROR ({m})"),
        };
        eprintln!("check {:<22} {} [{} ms]", c.id, verdict, c.elapsed_ms);
        for w in &c.warnings {
            eprintln!("  note: {w}");
        }
    }
    let payload = match args.format {
        Format::Json => {
            let mut s = report::to_json(&rep)?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let gaps: Vec<_> = rep
                .checks
                .iter()
                .flat_map(|c| c.gaps.iter().cloned())
                .collect();
            report::gaps_to_csv(&gaps)
        }
    };
    emit(&args, &payload)?;
    eprintln!("content hash: {}", rep.content_hash);
    if rep.any_errored() {
        return Ok(ExitCode::from(3));
    }
    if !rep.all_passed() {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_decompose(args: RunArgs) -> Result<ExitCode> {
    let cfg = load_config(&args)?;
    let m = &cfg.metric;
    let pts = sample_points(m, cfg.seed, cfg.samples)?;
    let space = space_for(m, tol::H_ORD, tol::V_ORD);
    let mut rows = Vec::with_capacity(pts.len());
    for p in &pts {
        let fund = FundJets::new(m, &p.x, &p.y, &space)?;
        let cj = connection_jets(&cfg.connection, &fund)?;
        let dec = palatini::decompose(&fund, &cj)?;
        let z: Vec<f64> = dec.z_torsion.iter().map(|e| e.val()).collect();
        let a: Vec<f64> = dec.a_torsion.iter().map(|e| e.val()).collect();
        rows.push((p, z, a, dec.torsion_roundtrip_gap, dec.route_gap));
    }
    let payload = match args.format {
        Format::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|(p, z, a, roundtrip, route)| {
                    serde_json::json!({
                        "x": p.x, "y": p.y,
                        "z": z, "a": a,
                        "roundtrip_gap": roundtrip,
                        "route_gap": route,
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "metric": m.name,
                "seed": cfg.seed,
                "samples": items,
            });
            let mut s = serde_json::to_string_pretty(&doc)
                .map_err(|e| Error::Eval(format!("serialization: {e}")))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let join = |v: &[f64]| {
                v.iter()
                    .map(|c| format!("{c:.17e}"))
                    .collect::<Vec<_>>()
                    .join(";")
            };
            let mut s = String::from("x,y,z,a,roundtrip_gap,route_gap\n");
            for (p, z, a, roundtrip, route) in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{roundtrip:.17e},{route:.17e}\n",
                    join(&p.x),
                    join(&p.y),
                    join(z),
                    join(a)
                ));
            }
            s
        }
    };
    emit(&args, &payload)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_geodesic(args: RunArgs) -> Result<ExitCode> {
    let cfg = load_config(&args)?;
    let g = cfg.geodesic.as_ref().ok_or_else(|| {
        Error::Config("geodesic: config has no \"geodesic\" block".into())
    })?;
    let tr = geodesic::integrate(&cfg.metric, &cfg.connection, &g.x0, &g.y0, g.t_end, g.grid)?;
    if let Some(exit) = &tr.exit {
        eprintln!("note: trajectory truncated: {exit:?}");
    }
    let payload = match args.format {
        Format::Csv => report::trajectory_to_csv(&tr),
        Format::Json => {
            let doc = serde_json::json!({
                "metric": cfg.metric.name,
                "t": tr.t,
                "x": tr.x,
                "y": tr.y,
                "l": tr.l,
                "truncated": tr.exit.as_ref().map(|e| format!("{e:?}")),
                "steps": tr.steps,
            });
            let mut s = serde_json::to_string_pretty(&doc)
                .map_err(|e| Error::Eval(format!("serialization: {e}")))?;
            s.push('\n');
            s
        }
    };
    emit(&args, &payload)?;
    Ok(ExitCode::SUCCESS)
}
