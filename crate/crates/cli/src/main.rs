//! `catspan`: generate instances, build and certify spanners, check schemes,
//! and run corpus sweeps.
//!
//! Exit codes: 0 success, 1 a check failed, 2 an error (reported as one JSON
//! object on standard error).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use catspan::graph::{format_rational, parse_rational, Rational};
use catspan::spanner::{max_stretch, pipeline, prepare_with};
use catspan::toolkit::format::{parse_spanner, spanner_to_text, GraphFile};
use catspan::toolkit::generate::{gen_kcaterpillar, FlapProfile, InstanceSpec, WeightModel};
use catspan::toolkit::report::{to_json, CertificateDocument, SchemeDocument};
use catspan::toolkit::sweep::{run_sweep, write_csv, SweepConfig};
use catspan::Error;
use clap::{Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "catspan", version, about = "Light spanners for k-paths and k-caterpillars")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded k-caterpillar with its decomposition.
    Gen {
        /// Total vertex count, flap vertices included.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Flap profile `p:q:count`; repeatable.
        #[arg(long = "flaps")]
        flaps: Vec<FlapProfile>,
        /// `uniform:W`, `unit` or `exp`.
        #[arg(long, default_value = "uniform:1000")]
        weights: WeightModel,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-mille chance of each optional edge towards the current bag.
        #[arg(long, default_value_t = 1000)]
        density: u32,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full pipeline and write the spanner of the input graph.
    Spanner {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = epsilon)]
        epsilon: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Certificate JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a spanner file against its graph by exact all-pairs distances.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        spanner: PathBuf,
        #[arg(long, value_parser = epsilon)]
        epsilon: Rational,
    },
    /// Build the charging scheme on the completed graph and verify it.
    Scheme {
        #[arg(long = "in")]
        input: PathBuf,
        /// Scheme JSON with all moves.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Exit with 1 unless the scheme is valid and acyclic.
        #[arg(long)]
        check: bool,
        /// Apply the degree reduction first, as the spanner pipeline does.
        #[arg(long)]
        reduce: bool,
    },
    /// Run the pipeline over a generated corpus and write one CSV row per run.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn epsilon(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a number"))
}

fn read(path: &Path) -> catspan::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read_graph(path: &Path) -> catspan::Result<GraphFile> {
    GraphFile::parse(&read(path)?)
}

fn emit(out: Option<&Path>, text: &str) -> catspan::Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(command: Command) -> catspan::Result<bool> {
    match command {
        Command::Gen { n, k, flaps, weights, seed, density, out } => {
            let mut spec = InstanceSpec::new(n, k, seed);
            spec.flaps = flaps;
            spec.weights = weights;
            spec.density_permille = density;
            let (graph, decomposition) = gen_kcaterpillar(&spec)?;
            emit(out.as_deref(), &GraphFile { graph, decomposition }.to_text())?;
            Ok(true)
        }
        Command::Spanner { input, epsilon, out, report } => {
            let file = read_graph(&input)?;
            let result = pipeline(&file.graph, &file.decomposition, epsilon)?;
            let lifted = result.lifted.iter().copied().collect();
            if let Some(path) = &report {
                fs::write(path, to_json(&CertificateDocument::new(result.clone()))?)?;
            }
            let cert = &result.certificate;
            let ok = cert.certified && result.lifted_stretch_ok;
            emit(out.as_deref(), &spanner_to_text(&file.graph, &lifted))?;
            if out.is_some() {
                println!(
                    "certified {} edges {} weight {} lightness {:.6} value {}",
                    ok,
                    result.lifted.len(),
                    format_rational(&result.w_lifted),
                    result.lightness,
                    format_rational(&cert.scheme_value)
                );
            }
            Ok(ok)
        }
        Command::Verify { graph, spanner, epsilon } => {
            let file = read_graph(&graph)?;
            let edges = parse_spanner(&file.graph, &read(&spanner)?)?;
            let report = max_stretch(&file.graph, &edges);
            let ok = report.within(epsilon);
            let stretch = report.max.map_or("inf".to_string(), |s| format_rational(&s));
            match report.witness {
                Some((u, v)) => println!("stretch {stretch} witness {} {} within {ok}", u.0, v.0),
                None => println!("stretch {stretch} within {ok}"),
            }
            Ok(ok)
        }
        Command::Scheme { input, dump, check, reduce } => {
            let file = read_graph(&input)?;
            let prepared = prepare_with(&file.graph, &file.decomposition, reduce)?;
            let document = SchemeDocument::new(&prepared.working, &prepared.scheme);
            if let Some(path) = &dump {
                fs::write(path, to_json(&document)?)?;
            }
            println!(
                "value {} valid {} acyclic {} moves {}",
                format_rational(&document.value),
                document.valid,
                document.acyclic,
                document.moves.len()
            );
            for violation in &document.violations {
                println!("violation {violation}");
            }
            Ok(!check || (document.valid && document.acyclic))
        }
        Command::Sweep { config, out } => {
            let config: SweepConfig = serde_json::from_str(&read(&config)?)?;
            let rows = run_sweep(&config)?;
            let mut buffer = Vec::new();
            write_csv(&rows, &mut buffer)?;
            emit(out.as_deref(), &String::from_utf8_lossy(&buffer))?;
            let failed = rows.iter().filter(|r| !r.bound_ok).count();
            if out.is_some() {
                println!("rows {} bound_failures {failed}", rows.len());
            }
            Ok(failed == 0)
        }
    }
}

fn report_error(kind: &str, message: String, stage: Option<&str>, line: Option<usize>) {
    let mut error = json!({ "error": kind, "message": message });
    if let Some(stage) = stage {
        error["stage"] = json!(stage);
    }
    if let Some(line) = line {
        error["line"] = json!(line);
    }
    eprintln!("{error}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let message = e.render().to_string();
            let first = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
            report_error("usage", first.to_string(), None, None);
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            report_error(e.kind(), e.to_string(), e.stage(), e.line());
            ExitCode::from(2)
        }
    }
}
