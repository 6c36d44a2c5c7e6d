//! Command-line front end: one seeded experiment per invocation, written as
//! a JSON report. Exit status 0 on success, 1 on usage or runtime errors,
//! 2 when an invariant check fails.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sftlab::experiment::{
    execute, AnimalsParams, ArtifactKind, EntropyParams, Experiment, ExperimentConfig, FactorDecomposeParams,
    HochmanAlphaParams, HochmanGenParams, WrPeierlsParams, WrSampleParams, WrVerifyParams, YmnEntropyParams,
};
use sftlab::factor::CodeKind;
use sftlab::wr::BoundaryKind;

#[derive(Parser)]
#[command(name = "sftlab", version, about = "Experiments on 2D shifts of finite type")]
struct Cli {
    /// Report destination, `-` for stdout. For hochman-gen and hochman-alpha
    /// this receives the pattern or CSV instead.
    #[arg(long, global = true, default_value = "-")]
    out: String,
    /// Report path for commands whose `--out` is a pattern or table.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Where to write the CSV series of entropy and wr-sample.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; all cores when unset.
    #[arg(long, global = true, env = "SFTLAB_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Boundary {
    Plus,
    Minus,
    Free,
}

#[derive(Clone, Copy, ValueEnum)]
enum Code {
    Identity,
    Collapse,
    Parity,
}

#[derive(Subcommand)]
enum Cmd {
    /// Finite-size and strip upper bounds on topological entropy.
    Entropy {
        /// Rules JSON; Widom-Rowlinson with --r1/--r2 when absent.
        #[arg(long)]
        rules: Option<String>,
        #[arg(long, default_value_t = 1)]
        r1: u32,
        #[arg(long, default_value_t = 1)]
        r2: u32,
        #[arg(long = "N", value_delimiter = ',', default_value = "1,2,3,4")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        widths: Vec<usize>,
    },
    /// Heat-bath chains for Widom-Rowlinson in a box.
    WrSample {
        #[arg(long)]
        r1: u32,
        #[arg(long)]
        r2: u32,
        #[arg(long)]
        k: i32,
        #[arg(long)]
        sweeps: usize,
        #[arg(long, default_value_t = 0)]
        burn_in: usize,
        #[arg(long, default_value_t = 1)]
        chains: usize,
        #[arg(long, value_enum, default_value = "plus")]
        boundary: Boundary,
    },
    /// The Peierls exponent and bound for given distances.
    WrPeierls {
        #[arg(long)]
        r1: u32,
        #[arg(long)]
        r2: u32,
        #[arg(long, default_value_t = 2)]
        d: u32,
    },
    /// Exhaustive contour checks over a whole plus-boundary ensemble.
    WrVerify {
        #[arg(long)]
        k: i32,
        #[arg(long)]
        r1: u32,
        #[arg(long)]
        r2: u32,
        #[arg(
            long,
            value_delimiter = ',',
            num_args = 2,
            default_value = "0,0",
            allow_negative_numbers = true
        )]
        v: Vec<i32>,
    },
    /// Writes the level-n square of X_k as a pattern document.
    HochmanGen {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        k: u32,
        /// Constant blank label; seeded random labels when absent.
        #[arg(long)]
        label: Option<u32>,
    },
    /// Level-n corner frequency in P_K for K up to --max-k, as CSV.
    HochmanAlpha {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        max_k: u32,
    },
    /// Exact N×N pattern count of Y_{m,n}.
    YmnEntropy {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long)]
        level: Option<u32>,
    },
    /// Checks the two-step factor decomposition of a code on x_ω windows.
    FactorDecompose {
        #[arg(long, value_enum)]
        code: Code,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        radius: u32,
        #[arg(long)]
        window_radius: i32,
        #[arg(long, default_value_t = 20)]
        windows: usize,
    },
    /// Fixed lattice animal counts for sizes 1..=n.
    Animals {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        contours: bool,
    },
    /// Runs an experiment described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn to_config(cmd: Cmd, seed: u64) -> Result<ExperimentConfig, String> {
    let experiment = match cmd {
        Cmd::Entropy {
            rules,
            r1,
            r2,
            sizes,
            widths,
        } => Experiment::Entropy(EntropyParams {
            rules,
            r1,
            r2,
            sizes,
            widths,
        }),
        Cmd::WrSample {
            r1,
            r2,
            k,
            sweeps,
            burn_in,
            chains,
            boundary,
        } => {
            let boundary = match boundary {
                Boundary::Plus => BoundaryKind::Plus,
                Boundary::Minus => BoundaryKind::Minus,
                Boundary::Free => BoundaryKind::Free,
            };
            Experiment::WrSample(WrSampleParams {
                r1,
                r2,
                k,
                sweeps,
                burn_in,
                chains,
                boundary,
            })
        }
        Cmd::WrPeierls { r1, r2, d } => Experiment::WrPeierls(WrPeierlsParams { r1, r2, d }),
        Cmd::WrVerify { k, r1, r2, v } => Experiment::WrVerify(WrVerifyParams {
            k,
            r1,
            r2,
            v: [v[0], v[1]],
        }),
        Cmd::HochmanGen { level, k, label } => Experiment::HochmanGen(HochmanGenParams { level, k, label }),
        Cmd::HochmanAlpha { level, max_k } => Experiment::HochmanAlpha(HochmanAlphaParams { level, max_k }),
        Cmd::YmnEntropy { m, n, big_n, level } => {
            Experiment::YmnEntropy(YmnEntropyParams { m, n, big_n, level })
        }
        Cmd::FactorDecompose {
            code,
            k,
            n,
            radius,
            window_radius,
            windows,
        } => {
            let code = match code {
                Code::Identity => CodeKind::Identity,
                Code::Collapse => CodeKind::Collapse,
                Code::Parity => CodeKind::Parity,
            };
            Experiment::FactorDecompose(FactorDecomposeParams {
                code,
                k,
                n,
                radius,
                window_radius,
                windows,
            })
        }
        Cmd::Animals { n, contours } => Experiment::Animals(AnimalsParams { n, contours }),
        Cmd::Run { config } => {
            let text = fs::read_to_string(&config).map_err(|e| format!("{}: {e}", config.display()))?;
            return serde_json::from_str(&text).map_err(|e| format!("{}: {e}", config.display()));
        }
    };
    Ok(ExperimentConfig { experiment, seed })
}

fn write_to(dest: &str, text: &str) -> std::io::Result<()> {
    if dest == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        if !text.ends_with('\n') {
            out.write_all(b"\n")?;
        }
        out.flush()
    } else {
        fs::write(dest, text)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads.filter(|&n| n > 0) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let cfg = match to_config(cli.cmd, cli.seed) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let report = outcome.report.to_json();
    let written = if cfg.experiment.artifact_is_primary() {
        let artifact = outcome.artifact.as_ref().map_or("", |a| a.text.as_str());
        write_to(&cli.out, artifact).and_then(|_| match &cli.report {
            Some(p) => fs::write(p, &report),
            None => Ok(()),
        })
    } else {
        write_to(&cli.out, &report).and_then(|_| match (&cli.csv, &outcome.artifact) {
            (Some(p), Some(a)) if a.kind == ArtifactKind::Csv => fs::write(p, &a.text),
            _ => Ok(()),
        })
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    let violations = outcome.report.violations();
    if violations.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("invariant violated: {}", violations.join(", "));
        ExitCode::from(2)
    }
}
