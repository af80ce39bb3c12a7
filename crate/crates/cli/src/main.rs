//! Command-line interface: generate instances, run solvers, verify families,
//! sweep benchmarks, and plot results.
//!
//! Exit codes: 0 success, 1 invalid input (parsing, validation, or a solver
//! precondition), 2 solver gave up (retry or resample limits), 3 a size or
//! copy cap was exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use covlife::instance::{stats, verify, CoverFamily, Instance};
use covlife::rational::{format_rat, rat_to_f64};
use covlife_cli::bench::{bench_run, gen_random, run_algo, AlgoKind, AlgoOutcome, BenchConfig};
use covlife_cli::exit_code_for;
use covlife_cli::plot::render_svg;

#[derive(Parser)]
#[command(
    name = "covlife",
    version,
    about = "Sensor-cover lifetime toolkit: disjoint set covers and lifetime schedules"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random instance and write it as JSON.
    Gen {
        /// Number of targets.
        #[arg(long)]
        n: usize,
        /// Number of subsets.
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        size_min: usize,
        /// Defaults to n/4 (at least size_min).
        #[arg(long)]
        size_max: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one solver on an instance file.
    Solve {
        #[arg(long, value_enum)]
        algo: AlgoKind,
        /// Approximation parameter for the packing solver.
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Instance JSON file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the cover family or schedule JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a cover family file is valid for an instance.
    Verify {
        /// Instance JSON file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Cover family JSON file.
        #[arg(long)]
        covers: PathBuf,
    },
    /// Run the benchmark sweep described by a JSON config.
    Bench {
        /// JSON file mirroring the sweep configuration; defaults apply.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Render a benchmark CSV as an SVG plot.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

fn run(cmd: Cmd) -> anyhow::Result<()> {
    match cmd {
        Cmd::Gen {
            n,
            m,
            size_min,
            size_max,
            seed,
            out,
        } => {
            let size_max = size_max.unwrap_or(n / 4);
            let inst = gen_random(n, m, size_min, size_max, seed)?;
            fs::write(&out, inst.to_json()?)
                .with_context(|| format!("writing {}", out.display()))?;
            println!(
                "generated n={n} m={m} f_min={} -> {}",
                stats(&inst).f_min,
                out.display()
            );
        }
        Cmd::Solve {
            algo,
            epsilon,
            seed,
            input,
            out,
        } => {
            let text = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let inst = Instance::from_json(&text)?;
            let f_min = stats(&inst).f_min;
            let outcome = run_algo(algo, &inst, seed, epsilon)?;
            let (z, json) = match &outcome {
                AlgoOutcome::Family(fam) => {
                    debug_assert!(verify(&inst, fam).is_valid());
                    (fam.len() as f64, fam.to_json()?)
                }
                AlgoOutcome::Sched(sched) => {
                    (rat_to_f64(&sched.value()), sched.to_json()?)
                }
            };
            if let AlgoOutcome::Sched(sched) = &outcome {
                println!(
                    "algo={} z={} f_min={f_min}",
                    algo.name(),
                    format_rat(&sched.value())
                );
            } else {
                println!("algo={} z={z} f_min={f_min}", algo.name());
            }
            if let Some(out) = out {
                fs::write(&out, json)
                    .with_context(|| format!("writing {}", out.display()))?;
            }
        }
        Cmd::Verify { input, covers } => {
            let inst = Instance::from_json(
                &fs::read_to_string(&input)
                    .with_context(|| format!("reading {}", input.display()))?,
            )?;
            let fam = CoverFamily::from_json(
                &fs::read_to_string(&covers)
                    .with_context(|| format!("reading {}", covers.display()))?,
            )?;
            let report = verify(&inst, &fam);
            match report.violation {
                None => println!("valid: {} disjoint covers", fam.len()),
                Some(v) => anyhow::bail!("invalid cover family: {v:?}"),
            }
        }
        Cmd::Bench { config, csv } => {
            let cfg = match config {
                Some(path) => serde_json::from_str::<BenchConfig>(
                    &fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?,
                )
                .with_context(|| format!("parsing {}", path.display()))?,
                None => BenchConfig::default(),
            };
            let table = bench_run(&cfg)?;
            fs::write(&csv, table)
                .with_context(|| format!("writing {}", csv.display()))?;
            println!("wrote {}", csv.display());
        }
        Cmd::Plot { csv, svg } => {
            let table = fs::read_to_string(&csv)
                .with_context(|| format!("reading {}", csv.display()))?;
            let rendered = render_svg(&table)?;
            fs::write(&svg, rendered)
                .with_context(|| format!("writing {}", svg.display()))?;
            println!("wrote {}", svg.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err
                .downcast_ref::<covlife::Error>()
                .map(exit_code_for)
                .unwrap_or(1);
            ExitCode::from(code as u8)
        }
    }
}
