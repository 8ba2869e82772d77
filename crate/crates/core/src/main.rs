use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use netdeploy::gradcheck::{check_all, GradCheckConfig};
use netdeploy::optimizer::{cluster_sensors, initial_sensors, run_pipeline, run_step1, run_step2, Mode, RunTrace};
use netdeploy::scenario::{benchmark_scenario, emit_svg, load_scenario, save_scenario, write_trace, Scenario, SvgOptions};
use netdeploy::voronoi::clip_network_cells;
use netdeploy::{Density, Error, Network, Point2, SensorSet};

#[derive(Parser)]
#[command(name = "netdeploy", version, about = "Sensor deployment over planar networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Step {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Run the deployment pipeline and write traces (and SVGs).
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        step: Step,
        /// Overrides `pipeline.rng_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; defaults to `output.dir`, then the current directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: bool,
    },
    /// Check a network file and list its violations.
    Validate {
        #[arg(long)]
        network: PathBuf,
    },
    /// Write the synthetic 63-vertex benchmark scenario.
    Benchmark {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare analytic derivatives with central finite differences.
    CheckGradients {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// 1 for bad input, 2 for failures while computing.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidNetwork(_) | Error::Config { .. } | Error::Parse { .. } => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("NETDEPLOY_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            Err(_) => {
                eprintln!("error: NETDEPLOY_THREADS must be a non-negative integer, got {v:?}");
                return ExitCode::from(1);
            }
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { scenario, step, seed, out, svg } => run(&scenario, step, seed, out, svg),
        Command::Validate { network } => return validate(&network),
        Command::Benchmark { seed, out } => benchmark(seed, &out),
        Command::CheckGradients { scenario, samples, seed } => return check_gradients(&scenario, samples, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn validate(path: &Path) -> ExitCode {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    };
    let data: netdeploy::network::NetworkData = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    };
    let violations = data.validate();
    if violations.is_empty() {
        println!("{}: valid ({} vertices, {} segments)", path.display(), data.vertices.len(), data.segments.len());
        ExitCode::SUCCESS
    } else {
        for v in &violations {
            println!("{v}");
        }
        eprintln!("{}: {} violation(s)", path.display(), violations.len());
        ExitCode::from(1)
    }
}

fn benchmark(seed: u64, out: &Path) -> netdeploy::Result<()> {
    std::fs::create_dir_all(out).map_err(|e| Error::Io { path: out.into(), source: e })?;
    let config = benchmark_scenario(seed)?;
    let path = out.join("benchmark.json");
    save_scenario(&config, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn svg(s: &Scenario, sensors: &[Point2], radius: f64, on_network: bool, path: &Path) -> netdeploy::Result<()> {
    let opts = SvgOptions {
        radius,
        contours: s.config.output.contours,
        color_cells: s.config.output.cells && on_network,
        ..Default::default()
    };
    let cells = if opts.color_cells { Some(clip_network_cells(&s.network, &SensorSet::new(sensors.to_vec())?)?) } else { None };
    emit_svg(&s.network, Some(&s.density as &dyn Density), sensors, cells.as_ref(), path, &opts)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn save_trace(trace: &RunTrace, path: &Path) -> netdeploy::Result<()> {
    write_trace(trace, path)?;
    let h = trace.h_values();
    println!(
        "wrote {} ({} rows, H {:.6} -> {:.6})",
        path.display(),
        trace.rows.len(),
        h.first().copied().unwrap_or(f64::NAN),
        h.last().copied().unwrap_or(f64::NAN)
    );
    Ok(())
}

fn run(path: &Path, step: Step, seed: Option<u64>, out: Option<PathBuf>, svg_flag: bool) -> netdeploy::Result<()> {
    let mut s = load_scenario(path)?;
    if let Some(seed) = seed {
        s.config.pipeline.rng_seed = seed;
    }
    let cfg = &s.config.pipeline;
    let out = out.or_else(|| s.config.output.dir.clone()).unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out).map_err(|e| Error::Io { path: out.clone(), source: e })?;
    let want_svg = svg_flag || s.config.output.svg;
    let network: &Network = &s.network;
    match step {
        Step::Both => {
            let r = run_pipeline(cfg, network, &s.density, &s.performance)?;
            save_trace(&r.step1.trace, &out.join("step1_trace.csv"))?;
            save_trace(&r.step2.trace, &out.join("step2_trace.csv"))?;
            if want_svg {
                svg(&s, &r.step1.positions, cfg.r_final, false, &out.join("step1.svg"))?;
                svg(&s, r.final_sensors(), cfg.r_final, true, &out.join("step2.svg"))?;
            }
            eprintln!("step 1: {:.2?}, step 2: {:.2?}", r.timing.step1, r.timing.step2);
        }
        Step::One => {
            let initial = initial_sensors(cfg, network)?;
            let clustering = cluster_sensors(&initial, cfg.cluster_count, cfg.rng_seed.wrapping_add(1))?;
            let r = run_step1(cfg, network, &s.density, &s.performance, &clustering.centers)?;
            save_trace(&r.trace, &out.join("step1_trace.csv"))?;
            if want_svg {
                svg(&s, &r.positions, cfg.r_final, false, &out.join("step1.svg"))?;
            }
        }
        Step::Two => {
            let initial = initial_sensors(cfg, network)?;
            let r = run_step2(cfg, network, &s.density, &s.performance, &initial)?;
            save_trace(&r.trace, &out.join("step2_trace.csv"))?;
            if want_svg {
                svg(&s, &r.positions, cfg.r_final, true, &out.join("step2.svg"))?;
            }
        }
    }
    Ok(())
}

fn check_gradients(path: &Path, samples: usize, seed: u64) -> ExitCode {
    let s = match load_scenario(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let cfg = GradCheckConfig {
        samples,
        seed,
        r_collapse: s.config.pipeline.r_collapse,
        ..Default::default()
    };
    let f = s.performance.with_radius(s.config.pipeline.r_final);
    let reports = match check_all(&s.network, &s.density, &f, &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let mut ok = true;
    let mut worst = 0.0f64;
    for r in &reports {
        let limit = if r.mode == Mode::NetworkFull { 1e-4 } else { 1e-5 };
        let pass = r.max_rel_error < limit;
        ok &= pass;
        worst = worst.max(r.max_rel_error);
        println!(
            "{:<18} samples {:>4}  rejected {:>4}  max relative error {:.3e}  (limit {:.0e}) {}",
            format!("{:?}", r.mode),
            r.samples,
            r.rejected,
            r.max_rel_error,
            limit,
            if pass { "ok" } else { "FAILED" }
        );
    }
    println!("max relative error {worst:.3e}");
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
