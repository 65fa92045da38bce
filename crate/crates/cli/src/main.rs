use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use owct_cli::{
    generate, load_instance, oracle_report, read_csv, report, run, violations, write_csv,
    GenParams, RunConfig,
};
use owct_core::framework::GridKind;
use owct_core::model::{parse_rational, write_instance, Model};
use owct_core::muwp::MuwpSolver;
use owct_core::offline::OfflineScheduler;
use owct_core::oracle::PERM_CAP;

/// Online scheduling for total weighted completion time.
#[derive(Parser)]
#[command(name = "owct", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write random instances.
    Gen(GenArgs),
    /// Run the online framework and write one CSV row per instance and trial.
    Run(RunArgs),
    /// Summarize result CSVs.
    Report {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
    },
    /// Brute-force reference values for a small instance.
    Oracle {
        instance: PathBuf,
        /// Also compute the best weight schedulable by this deadline.
        #[arg(long)]
        deadline: Option<String>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    model: Model,
    #[arg(long)]
    n: usize,
    /// Machines, switch ports, or clusters.
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    pmin: u64,
    #[arg(long, default_value_t = 20)]
    pmax: u64,
    #[arg(long, default_value_t = 1)]
    wmin: u64,
    #[arg(long, default_value_t = 10)]
    wmax: u64,
    /// Releases uniform over [0, horizon]; 0 releases everything at time 0.
    #[arg(long, default_value_t = 0)]
    horizon: u64,
    #[arg(long, default_value_t = 3)]
    max_size: usize,
    #[arg(long, default_value_t = 4)]
    max_tasks: usize,
    /// Instances with seeds seed, seed + 1, ...; more than one needs --out as a directory.
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    instances: Vec<PathBuf>,
    #[arg(long)]
    model: Model,
    #[arg(long, default_value = "exact")]
    muwp: MuwpSolver,
    #[arg(long, default_value = "dp")]
    offline: OfflineScheduler,
    #[arg(long, default_value = "det")]
    grid: GridKind,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Accuracy of the knapsack solver.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest instance handed to an optimum oracle.
    #[arg(long, default_value_t = PERM_CAP)]
    cap_n: usize,
    /// Exit with status 2 if any bound check fails.
    #[arg(long)]
    strict: bool,
    /// Leave runtime_ms blank so the output is reproducible.
    #[arg(long)]
    no_timing: bool,
    /// Print the round log of every run to stderr.
    #[arg(long)]
    log: bool,
}

fn write_out(out: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(bytes).context("writing to stdout"),
    }
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    if a.count == 0 {
        bail!("--count must be at least 1");
    }
    let base = GenParams {
        pmin: a.pmin,
        pmax: a.pmax,
        wmin: a.wmin,
        wmax: a.wmax,
        horizon: a.horizon,
        max_size: a.max_size,
        max_tasks: a.max_tasks,
        ..GenParams::new(a.model, a.n, a.m, a.seed)
    };
    if a.count == 1 {
        return write_out(a.out.as_ref(), write_instance(&generate(&base)?).as_bytes());
    }
    let Some(dir) = a.out else {
        bail!("--count above 1 needs --out DIR")
    };
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    for i in 0..a.count {
        let p = GenParams {
            seed: a.seed + i,
            ..base.clone()
        };
        let path = dir.join(format!("{}-n{}-m{}-s{}.txt", a.model, a.n, a.m, p.seed));
        fs::write(&path, write_instance(&generate(&p)?))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_run(a: RunArgs) -> Result<usize> {
    let mut muwp = a.muwp;
    if let (MuwpSolver::Knap { eps }, Some(e)) = (&mut muwp, &a.eps) {
        *eps = parse_rational(e)
            .map_err(anyhow::Error::msg)
            .context("--eps")?;
        if *eps <= num::Zero::zero() {
            bail!("--eps must be positive");
        }
    }
    let config = RunConfig {
        trials: a.trials,
        seed: a.seed,
        cap_n: a.cap_n,
        timing: !a.no_timing,
        log_rounds: a.log,
        ..RunConfig::new(a.model, muwp, a.offline, a.grid)
    };
    let instances = a
        .instances
        .iter()
        .map(|p| load_instance(p))
        .collect::<Result<Vec<_>>>()?;
    let rows = run(&config, &instances)?;
    if a.log {
        let mut err = io::stderr().lock();
        for r in &rows {
            writeln!(err, "# {} seed {}", r.instance_id, r.seed)?;
            for line in &r.rounds {
                writeln!(err, "{line}")?;
            }
        }
    }
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    write_out(a.out.as_ref(), &buf)?;
    let bad = violations(&rows);
    if bad > 0 {
        eprintln!("{bad} bound check(s) failed");
    }
    Ok(if a.strict { bad } else { 0 })
}

fn cmd_report(files: &[PathBuf]) -> Result<()> {
    let mut rows = Vec::new();
    for f in files {
        let file = fs::File::open(f).with_context(|| format!("opening {}", f.display()))?;
        rows.extend(read_csv(file).with_context(|| format!("reading {}", f.display()))?);
    }
    print!("{}", report(&rows));
    Ok(())
}

fn cmd_oracle(instance: &Path, deadline: Option<&str>) -> Result<()> {
    let (_, inst) = load_instance(instance)?;
    let d = deadline
        .map(parse_rational)
        .transpose()
        .map_err(anyhow::Error::msg)
        .context("--deadline")?;
    print!("{}", oracle_report(&inst, d.as_ref())?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a).map(|_| 0),
        Cmd::Run(a) => cmd_run(a),
        Cmd::Report { csv } => cmd_report(&csv).map(|_| 0),
        Cmd::Oracle { instance, deadline } => cmd_oracle(&instance, deadline.as_deref()).map(|_| 0),
    };
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
