use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use capcover::bodies::{to_canonical, Body, BodySpec, ConvexBodyOracle};
use capcover::caps::{boundary_packing, CapBody};
use capcover::construction::{approximate, verify_witness_collector, ApproxConfig};
use capcover::metrics::{self, Experiment, ExperimentRecord, Grid, Method};
use capcover::polar::{cap_product_sweep, polar_capbody};
use capcover::{sampling, Error, Result};

#[derive(Parser)]
#[command(name = "capcover", version, about = "Polytope approximation of convex bodies through cap covers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Inner ε-approximation by the layered construction.
    Approximate {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: OutFormat,
    },
    /// Macbeath packing at depth ε with its volume histogram.
    Pack {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 2000)]
        dirs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cap/polar-cap volume products over a direction sweep.
    PolarCheck {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 256)]
        dirs: usize,
        #[arg(long, default_value_t = capcover::polar::DEFAULT_C)]
        c: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep a grid of bodies, ε values, methods and seeds.
    Experiment {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "json,csv,svg")]
        format: String,
    },
    /// Witness-collector report; exits 2 when a property fails.
    Verify {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1000)]
        halfspaces: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.display().to_string(), cause: e.to_string() })
}

fn load_body(path: &Path) -> Result<(String, Body)> {
    let spec = BodySpec::from_json(&read(path)?)?;
    let id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| spec.kind().into());
    Ok((id, spec.build()?))
}

fn write(dir: &Path, name: &str, text: &str) -> Result<PathBuf> {
    let io = |p: &Path, e: std::io::Error| Error::Io { path: p.display().to_string(), cause: e.to_string() };
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| io(&path, e))?;
    Ok(path)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Approximate { body, eps, seed, out, format } => {
            let (id, k) = load_body(&body)?;
            let r = approximate(&k, eps, &ApproxConfig { seed, ..Default::default() })?;
            let mut rec = r.record.clone();
            rec.body = id;
            let path = match format {
                OutFormat::Json => write(&out, "approximation.json", &json(&rec))?,
                OutFormat::Csv => {
                    let row = ExperimentRecord {
                        body: rec.body.clone(),
                        dim: rec.dim,
                        eps,
                        method: Method::Layered,
                        seed,
                        counts: rec.counts.clone(),
                        hausdorff_est: rec.hausdorff_est,
                        witness_count: Some(rec.witness_count),
                        collector_max_points: Some(rec.collector_max_points),
                        constants: Some(rec.constants.clone()),
                        histogram: None,
                        error: None,
                        runtime_ms: rec.runtime_ms,
                    };
                    write(&out, "approximation.csv", &metrics::to_csv(&[row])?)?
                }
            };
            println!(
                "{} vertices, {} faces, hausdorff {:.3e} ≤ {eps} -> {}",
                rec.counts.vertices,
                rec.counts.total,
                rec.hausdorff_est,
                path.display()
            );
            Ok(true)
        }
        Cmd::Pack { body, eps, dirs, seed, out } => {
            let (_, k) = load_body(&body)?;
            let p = boundary_packing(&k, eps, seed, dirs)?;
            let path = write(&out, "packing.json", &json(&p))?;
            println!("{} regions, coverage {:.3} -> {}", p.entries.len(), p.coverage, path.display());
            for (j, n) in &p.histogram {
                println!("  class {j:>3}: {n}");
            }
            Ok(true)
        }
        Cmd::PolarCheck { body, eps, dirs, c, out } => {
            let (_, k) = load_body(&body)?;
            let canon = to_canonical(&k)?;
            let kc = CapBody::new(&canon.body, eps)?;
            let polar = polar_capbody(&kc)?;
            let us = sampling::sphere_directions(k.dim(), dirs, 0);
            let products = cap_product_sweep(&kc, &polar, &us, eps, c)?;
            let vals: Vec<f64> = products.iter().map(|p| p.normalized_product).collect();
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().copied().fold(0.0, f64::max);
            let path = write(&out, "polar_products.json", &json(&products))?;
            println!("normalized products in [{lo:.4}, {hi:.4}], band {:.2} -> {}", hi / lo, path.display());
            Ok(true)
        }
        Cmd::Experiment { grid, out, format } => {
            let formats = metrics::parse_formats(&format)?;
            let grid = Grid::from_json(&read(&grid)?)?;
            let exp: Experiment = metrics::run_experiment(&grid);
            for p in metrics::emit(&exp, &formats, &out)? {
                println!("{}", p.display());
            }
            for f in &exp.fits {
                println!("{}/{}/{}: slope {:.3}, R² {:.3}", f.body, f.dim, f.method.name(), f.slope, f.r2);
            }
            Ok(true)
        }
        Cmd::Verify { body, eps, halfspaces, seed } => {
            let (_, k) = load_body(&body)?;
            let r = approximate(&k, eps, &ApproxConfig { seed, ..Default::default() })?;
            let report =
                verify_witness_collector(&r.system, &r.canonical_points, r.stats.canonical_eps, halfspaces, seed);
            println!("{}", json(&report));
            let inner = r.hausdorff_est <= eps;
            println!("hausdorff {:.3e} (ε = {eps}), layer violations {}", r.hausdorff_est, r.stats.layer_violations);
            Ok(report.passed() && inner)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(n) = std::env::var("CAPCOVER_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: CAPCOVER_THREADS must be a positive integer, got {n:?}");
                return ExitCode::from(3);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_)
                | Error::Io { .. }
                | Error::EpsilonTooLarge { .. }
                | Error::UnsupportedDimension(_) => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
