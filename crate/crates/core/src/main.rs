use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use curvlens::experiments::{consolidate, exit_code_for, run_subcommand, ExperimentConfig};
use curvlens::Error;

#[derive(Parser)]
#[command(name = "curvlens", version, about = "Resolvent and spectral-projector norm experiments on spheres and hyperbolic space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory; falls back to the config, then `./curvlens-out`.
    #[arg(long, env = "CURVLENS_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Projector algebra, sup and norm growth, asymptotics.
    SphereProjector(RunArgs),
    /// Region uniformity, off-region blowup, wave identity and periodicity.
    SphereResolvent(RunArgs),
    /// Curvature transport identities.
    SphereScaling(RunArgs),
    /// Band-projector L2 -> L4 scan on H3.
    HypSteinTomas(RunArgs),
    /// H3 resolvent: Plancherel, dyadic pieces, all-zeta scan.
    HypResolvent(RunArgs),
    /// Oscillatory-integral decay on S2 and S3.
    OscCheck(RunArgs),
    /// Merge run directories into one report.
    Report {
        /// Run directories containing manifest.json.
        dirs: Vec<PathBuf>,
        #[arg(long, env = "CURVLENS_OUT")]
        out: Option<PathBuf>,
    },
}

fn init_workers(workers: Option<usize>) -> Result<usize, Error> {
    let n = workers.unwrap_or(0);
    if let Some(0) = workers {
        return Err(Error::Config("--workers must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(rayon::current_num_threads())
}

fn run(name: &str, args: RunArgs) -> Result<i32, Error> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if cfg.experiment.is_empty() {
        cfg.experiment = name.to_string();
    }
    let workers = init_workers(args.workers)?;
    let out = args.out.or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("curvlens-out"));
    let run = run_subcommand(name, cfg, workers)?;
    let manifest = run.write(&out)?;
    for a in &run.assertions {
        let tag = a.criterion.map(|c| format!("[{c:>2}]")).unwrap_or_else(|| "[  ]".into());
        println!("{} {tag} {:<36} {:.6e}  ({})", if a.passed { "PASS" } else { "FAIL" }, a.name, a.measured, a.threshold);
    }
    for s in run.stages.iter().filter(|s| s.reason.is_some()) {
        println!("{:?} {}: {}", s.status, s.name, s.reason.as_deref().unwrap_or(""));
    }
    let failed: Vec<&str> = run.assertions.iter().filter(|a| !a.passed).map(|a| a.name.as_str()).collect();
    if !failed.is_empty() {
        eprintln!("failed assertions: {}", failed.join(", "));
    }
    println!("wrote {}", manifest.display());
    Ok(run.exit_code())
}

fn report(dirs: Vec<PathBuf>, out: Option<PathBuf>) -> Result<i32, Error> {
    let rep = consolidate(&dirs)?;
    let out = out.unwrap_or_else(|| PathBuf::from("curvlens-report"));
    std::fs::create_dir_all(&out)?;
    std::fs::write(out.join("report.json"), serde_json::to_string_pretty(&rep)?)?;
    let md = rep.to_markdown();
    std::fs::write(out.join("report.md"), &md)?;
    print!("{md}");
    Ok(if rep.all_present_pass { 0 } else { 2 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::SphereProjector(a) => run("sphere-projector", a),
        Command::SphereResolvent(a) => run("sphere-resolvent", a),
        Command::SphereScaling(a) => run("sphere-scaling", a),
        Command::HypSteinTomas(a) => run("hyp-stein-tomas", a),
        Command::HypResolvent(a) => run("hyp-resolvent", a),
        Command::OscCheck(a) => run("osc-check", a),
        Command::Report { dirs, out } => report(dirs, out),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    ExitCode::from(code as u8)
}
