use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;
use trotter_cli::{run, ExperimentConfig, Kind};

/// Environment variable that overrides the output directory (the `--out` flag still wins).
const OUT_ENV: &str = "TROTTER_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "trotter", version, about = "Run Trotter-error experiments from a key = value config file")]
struct Args {
    /// Experiment config file
    #[arg(long, value_name = "PATH", required_unless_present = "list_kinds")]
    config: Option<PathBuf>,
    /// Output directory (default: `out` from the config, else `out/<kind>`)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Overrides the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Print the supported experiment kinds and exit
    #[arg(long)]
    list_kinds: bool,
}

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if args.list_kinds {
        for k in Kind::ALL {
            println!("{:<22}{}", k.name(), k.summary());
        }
        return ExitCode::SUCCESS;
    }
    if let Some(n) = args.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_CONFIG);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    }
    let path = args.config.expect("clap enforces --config");
    let mut cfg = match ExperimentConfig::from_file(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let out = args
        .out
        .or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(cfg.kind.name()));

    match run(&cfg, &out) {
        Ok(summary) => {
            for a in &summary.assertions {
                println!("{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
            }
            println!("{} artifacts in {}", summary.artifacts.len(), out.display());
            if summary.green() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
