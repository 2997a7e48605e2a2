use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use expander_core::flow::{direct_flow_check, evolve, FlowCheckOptions};
use expander_core::io::svg::{render, Chart};
use expander_core::io::{flow_csv, parse_list, NetworkDocument, RunConfig};
use expander_core::steiner::{solve_expander, Mode, RelaxOptions};

#[derive(Parser)]
#[command(name = "expander", version, about = "Self-similar expanding networks of curve-shortening flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find the regular geodesic networks spanning the given rays.
    Solve {
        /// Ray angles in radians, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        rays: String,
        #[arg(long, default_value = "connected")]
        mode: Mode,
        /// Balance defect at which each relaxation stage stops.
        #[arg(long, default_value_t = RelaxOptions::default().stage_tol)]
        tol: f64,
        /// Anchor radii of the continuation, comma separated.
        #[arg(long = "R-schedule", default_value = "4,6,8,12")]
        r_schedule: String,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Write frames of the self-similar flow of a solved network.
    Flow {
        /// A network document written by `solve`.
        network: PathBuf,
        /// Times, comma separated.
        #[arg(long, default_value = "0.5,1,2")]
        t: String,
        /// Also run the front-tracking check up to the largest time.
        #[arg(long)]
        check: bool,
        /// Node spacing of the front-tracking check.
        #[arg(long, default_value_t = FlowCheckOptions::default().h)]
        h: f64,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Draw a network document as SVG.
    Render {
        network: PathBuf,
        /// plane, ball or blowup.
        #[arg(long, default_value = "ball")]
        chart: String,
        /// Output file; defaults to the document name with the chart and `.svg`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Failure {
    edges: Vec<(usize, usize)>,
    message: String,
}

#[derive(Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    config: RunConfig,
    config_hash: String,
    solutions: usize,
    connected_solutions: usize,
    duplicates: usize,
    failures: Vec<Failure>,
    files: Vec<String>,
    blowup_chart: &'static str,
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn load(path: &Path) -> Result<expander_core::steiner::Network> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (_, network) = NetworkDocument::from_json(&text).with_context(|| format!("loading {}", path.display()))?;
    Ok(network)
}

fn solve(rays: &str, mode: Mode, tol: f64, schedule: &str, out_dir: &Path) -> Result<bool> {
    let config = RunConfig {
        rays: parse_list(rays)?,
        mode,
        relax: RelaxOptions {
            stage_tol: tol,
            schedule: parse_list(schedule)?,
            ..RelaxOptions::default()
        },
    };
    config.validate()?;
    let solutions = solve_expander(&config.rays, config.mode, &config.relax)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut files = Vec::new();
    for (i, n) in solutions.networks.iter().enumerate() {
        let name = format!("solution_{i:02}.json");
        write(&out_dir.join(&name), &NetworkDocument::from_network(n).to_json()?)?;
        files.push(name);
    }
    let connected = solutions.networks.iter().filter(|n| n.topology.is_connected()).count();
    let config_json = serde_json::to_string(&config)?;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config_hash: format!("{:x}", Sha256::digest(config_json.as_bytes())),
        config,
        solutions: solutions.networks.len(),
        connected_solutions: connected,
        duplicates: solutions.duplicates,
        failures: solutions
            .failures
            .iter()
            .map(|n| Failure {
                edges: n.topology.edges.clone(),
                message: n.diagnostics.message.clone().unwrap_or_default(),
            })
            .collect(),
        files,
        blowup_chart: "face F in (x, y)/sqrt(2t), compactified by p/(sqrt(1+|p|^2)+1)",
    };
    write(&out_dir.join("manifest.json"), &serde_json::to_string_pretty(&manifest)?)?;
    println!(
        "{} solution(s), {} connected, {} failed topologies; written to {}",
        manifest.solutions,
        connected,
        manifest.failures.len(),
        out_dir.display()
    );
    for f in &manifest.failures {
        eprintln!("topology {:?}: {}", f.edges, f.message);
    }
    Ok(match mode {
        Mode::Matchings => manifest.solutions > 0,
        _ => connected > 0,
    })
}

fn flow(network: &Path, times: &str, check: bool, h: f64, out_dir: &Path) -> Result<()> {
    let base = load(network)?;
    let times = parse_list(times)?;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    for (i, &t) in times.iter().enumerate() {
        let frame = evolve(&base, t)?;
        write(&out_dir.join(format!("frame_{i:02}.json")), &serde_json::to_string_pretty(&frame)?)?;
    }
    println!("{} frame(s) written to {}", times.len(), out_dir.display());
    if check {
        let t_end = times.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let opts = FlowCheckOptions { h, ..FlowCheckOptions::default() };
        let report = direct_flow_check(&base, t_end, &opts)?;
        write(&out_dir.join("flow_check.csv"), &flow_csv(&report))?;
        println!("max normalized deviation {:e} over {} steps", report.max_deviation, report.steps);
    }
    Ok(())
}

fn render_cmd(network: &Path, chart: &str, out: Option<PathBuf>) -> Result<()> {
    let chart_kind: Chart = chart.parse()?;
    let base = load(network)?;
    let svg = render(&base, chart_kind)?;
    let out = out.unwrap_or_else(|| network.with_extension(format!("{chart}.svg")));
    write(&out, &svg)?;
    println!("{}", out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve {
            rays,
            mode,
            tol,
            r_schedule,
            out_dir,
        } => solve(&rays, mode, tol, &r_schedule, &out_dir),
        Command::Flow {
            network,
            t,
            check,
            h,
            out_dir,
        } => flow(&network, &t, check, h, &out_dir).map(|_| true),
        Command::Render { network, chart, out } => render_cmd(&network, &chart, out).map(|_| true),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("no connected solution found");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
