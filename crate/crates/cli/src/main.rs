//! Command-line surface: scenario subcommands, report documents, and the
//! exit-code contract (0 all checks pass, 1 check failure, 2 input or
//! resource error).

use clap::{Args, Parser, Subcommand, ValueEnum};
use sphadj::doc::{
    algebra_from_doc, complex_from_doc, diagram_from_doc, report_document, AlgebraDocument,
    ComplexDocument, DiagramDocument,
};
use sphadj::verifier::{
    monad_verdict_spherical, run_counterexample, run_monad, run_sphere, run_twist_zeta, Report,
};
use sphadj::{preset, Error, PrimeField};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "sphadj", about = "Exact verification of sphere-poset adjunctions and tensor-monad sphericalness over F_p", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report document to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress human-readable output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Args)]
struct RandomizedArgs {
    /// Sphere poset dimension.
    #[arg(long)]
    n: usize,
    /// Prime field modulus.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Total-dimension range LO..HI for random coefficient complexes.
    #[arg(long, default_value = "1..3", value_parser = parse_range)]
    dims: (usize, usize),
    /// Number of random trials.
    #[arg(long, default_value_t = 5)]
    trials: u32,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the sphere adjunction suite over P_n.
    Sphere(RandomizedArgs),
    /// Report the sphericalness verdict of a tensor monad.
    Monad {
        /// Preset algebra name (product2, product3, dual-numbers, square-zero(d)).
        #[arg(long, conflicts_with = "file")]
        preset: Option<String>,
        /// Algebra document path.
        #[arg(long, required_unless_present = "preset")]
        file: Option<PathBuf>,
        /// Prime field modulus (for documents, must match the document).
        #[arg(long)]
        p: Option<u64>,
        /// Turn the verdict into a pass/fail check.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Run the twist-equivalent-but-inequivalent monad pair suite.
    Counterexample {
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Compare the sphere twist against tensoring with zeta.
    TwistZeta(RandomizedArgs),
    /// Validate a complex, algebra, or diagram document.
    Validate {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Spherical,
    NotSpherical,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo: usize = lo.parse().map_err(|_| "invalid lower bound")?;
    let hi: usize = hi.parse().map_err(|_| "invalid upper bound")?;
    if lo > hi || hi == 0 {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

fn render_report(report: &Report) {
    for check in &report.checks {
        let verdict = if check.passed { "pass" } else { "FAIL" };
        println!("{:<40} {}", check.name, verdict);
        if let Some(h) = check.witnesses.get("homology").and_then(|h| h.as_object()) {
            let mut rows: Vec<(i64, u64)> = h
                .iter()
                .filter_map(|(k, v)| Some((k.parse().ok()?, v.as_u64()?)))
                .collect();
            rows.sort_by_key(|&(d, _)| std::cmp::Reverse(d));
            for (d, dim) in rows {
                println!("    H_{d} -> {dim}");
            }
        }
    }
    println!("overall: {}", if report.passed { "pass" } else { "FAIL" });
}

fn finish(report: Report, started: Instant, cli: &Cli, force_fail: bool) -> Result<ExitCode, Error> {
    let doc = report_document(&report, started.elapsed().as_millis() as u64);
    if let Some(path) = &cli.out {
        let json = serde_json::to_string_pretty(&doc)
            .map_err(|e| Error::Document(e.to_string()))?;
        std::fs::write(path, json + "\n")
            .map_err(|e| Error::Document(format!("cannot write {}: {e}", path.display())))?;
    }
    if !cli.quiet {
        render_report(&report);
    }
    Ok(if report.passed && !force_fail {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn load_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Document(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Document(e.to_string()))
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let started = Instant::now();
    match &cli.command {
        Command::Sphere(a) => {
            let report = run_sphere(a.n, a.p, a.dims, a.trials, a.seed)?;
            finish(report, started, cli, false)
        }
        Command::TwistZeta(a) => {
            let report = run_twist_zeta(a.n, a.p, a.dims, a.trials, a.seed)?;
            finish(report, started, cli, false)
        }
        Command::Counterexample { p } => {
            let report = run_counterexample(*p)?;
            finish(report, started, cli, false)
        }
        Command::Monad { preset: name, file, p, expect } => {
            let (construction, label, p) = match (name, file) {
                (Some(name), _) => {
                    let p = p.unwrap_or(2);
                    (preset(name, PrimeField::new(p)?), name.clone(), p)
                }
                (None, Some(path)) => {
                    let doc: AlgebraDocument = load_json(path)?;
                    if let Some(p) = p {
                        if *p != doc.p {
                            return Err(Error::Document(format!(
                                "--p {p} contradicts document modulus {}",
                                doc.p
                            )));
                        }
                    }
                    (algebra_from_doc(&doc), path.display().to_string(), doc.p)
                }
                (None, None) => unreachable!("clap enforces preset or file"),
            };
            // unknown presets and non-algebra errors are input errors
            let construction = match construction {
                Err(e @ Error::Algebra(_)) => Err(e),
                Err(e) => return Err(e),
                Ok(a) => Ok(a),
            };
            let report = run_monad(construction, &label, p)?;
            let force_fail = match expect {
                None => false,
                Some(want) => match monad_verdict_spherical(&report) {
                    None => true,
                    Some(is_spherical) => {
                        is_spherical != matches!(want, Expect::Spherical)
                    }
                },
            };
            finish(report, started, cli, force_fail)
        }
        Command::Validate { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::Document(format!("cannot read {}: {e}", file.display())))?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::Document(e.to_string()))?;
            let outcome: Result<&str, Error> = if value.get("mult").is_some() {
                serde_json::from_value::<AlgebraDocument>(value)
                    .map_err(|e| Error::Document(e.to_string()))
                    .and_then(|d| algebra_from_doc(&d).map(|_| ()))
                    .map(|()| "algebra")
            } else if value.get("poset").is_some() {
                serde_json::from_value::<DiagramDocument>(value)
                    .map_err(|e| Error::Document(e.to_string()))
                    .and_then(|d| diagram_from_doc(&d).map(|_| ()))
                    .map(|()| "diagram")
            } else if value.get("degrees").is_some() {
                serde_json::from_value::<ComplexDocument>(value)
                    .map_err(|e| Error::Document(e.to_string()))
                    .and_then(|d| complex_from_doc(&d).map(|_| ()))
                    .map(|()| "complex")
            } else {
                Err(Error::Document(
                    "unrecognized document: expected an algebra, diagram, or complex".into(),
                ))
            };
            match outcome {
                Ok(kind) => {
                    if !cli.quiet {
                        println!("valid {kind} document");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(Error::Document(msg)) => Err(Error::Document(msg)),
                Err(e) => {
                    // structurally readable but mathematically invalid
                    if !cli.quiet {
                        println!("invalid: {e}");
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
