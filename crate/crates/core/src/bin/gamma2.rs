//! Command line interface: variety profiles, gamma_2 verdicts, dataset
//! sweeps, and the bundled classification tables.
//!
//! Exit codes: 0 success (or exact table match), 1 verdict mismatch,
//! 2 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use toric_gamma2::classify::{self, Verdict};
use toric_gamma2::dataset::{self, DatasetRecord};
use toric_gamma2::intersection::Surface;
use toric_gamma2::report;

#[derive(Parser)]
#[command(
    name = "gamma2",
    about = "Exact gamma_2-nefness classification of Q-factorial complete toric surfaces and 3-folds"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the variety profile of every record in a dataset file.
    Check { file: PathBuf },
    /// Print gamma_2 verdicts, optionally with per-surface values.
    Gamma {
        file: PathBuf,
        /// Also print gamma_2 . S for every torus invariant surface.
        #[arg(long)]
        per_surface: bool,
    },
    /// Batch-classify a dataset and emit a JSON or CSV report.
    Sweep {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Number of worker threads (output order is independent of this).
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Run the bundled del Pezzo surface table against expected verdicts.
    Table1,
    /// Run the bundled Fano 3-fold table against expected verdicts.
    Table2,
    /// Enumerate the 16 reflexive polygon classes and classify each.
    Reflexive2d,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes instead of panicking.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn read_records(file: &PathBuf) -> Result<Vec<DatasetRecord>, String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    dataset::parse_dataset(&text).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Check { file } => {
            let records = read_records(&file)?;
            let mut failed = false;
            for rec in &records {
                match toric_gamma2::Fan::face_fan(rec.generators.clone())
                    .and_then(|fan| toric_gamma2::props::profile(&rec.generators, &fan))
                {
                    Ok(p) => println!(
                        "{}: q_factorial={} complete={} fano={} terminal={} gorenstein={} picard={}",
                        rec.id, p.q_factorial, p.complete, p.fano, p.terminal, p.gorenstein, p.picard
                    ),
                    Err(e) => {
                        println!("{}: error: {e}", rec.id);
                        failed = true;
                    }
                }
            }
            Ok(if failed {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            })
        }
        Cmd::Gamma { file, per_surface } => {
            let records = read_records(&file)?;
            let mut failed = false;
            for rec in &records {
                match classify::verdict(&rec.id, &rec.generators) {
                    Ok(rep) => {
                        println!(
                            "{}: {} witness={} gamma2={}",
                            rep.id,
                            rep.verdict,
                            rep.witness,
                            rep.witness_value()
                        );
                        if per_surface {
                            for s in &rep.surfaces {
                                println!(
                                    "  S({}): rho={} gamma2={}",
                                    s.surface, s.rho, s.gamma2
                                );
                            }
                        }
                    }
                    Err(e) => {
                        println!("{}: error: {e}", rec.id);
                        failed = true;
                    }
                }
            }
            Ok(if failed {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            })
        }
        Cmd::Sweep { file, format, jobs } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            let (records, parse_errors) = dataset::parse_dataset_lenient(&text);
            for e in &parse_errors {
                eprintln!("warning: {e}");
            }
            let entries: Vec<(String, Vec<toric_gamma2::LatticeVector>)> =
                records.iter().map(DatasetRecord::entry).collect();
            let outcome = classify::sweep(&entries, jobs);
            match format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report::sweep_to_json(&outcome))
                        .expect("serializable")
                ),
                Format::Csv => print!("{}", report::sweep_to_csv(&outcome)),
            }
            let clean = parse_errors.is_empty() && outcome.summary.errors == 0;
            Ok(if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_INPUT)
            })
        }
        Cmd::Table1 => run_table(&dataset::table1_records(), &dataset::table1_expected()),
        Cmd::Table2 => run_table(&dataset::table2_records(), &dataset::table2_expected()),
        Cmd::Reflexive2d => {
            let classes = classify::enumerate_reflexive_polygons();
            let mut nef = 0;
            for (i, poly) in classes.iter().enumerate() {
                let rep = classify::verdict(&format!("k{i}"), poly).map_err(|e| e.to_string())?;
                if rep.verdict.is_nef() {
                    nef += 1;
                }
                let verts: Vec<String> = poly.iter().map(ToString::to_string).collect();
                let gamma2 = rep
                    .surfaces
                    .iter()
                    .find(|s| s.surface == Surface::Whole)
                    .map(|s| s.gamma2.to_string())
                    .unwrap_or_default();
                println!(
                    "polygon {:2}: {:<40} gamma2={:<6} {}",
                    i + 1,
                    verts.join(" "),
                    gamma2,
                    rep.verdict
                );
            }
            println!("{} classes, {} gamma2-nef", classes.len(), nef);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_table(
    records: &[DatasetRecord],
    expected: &[(String, Verdict)],
) -> Result<ExitCode, String> {
    let mut nef = 0;
    let mut positive = 0;
    let mut mismatches = Vec::new();
    for (rec, (id, want)) in records.iter().zip(expected) {
        assert_eq!(&rec.id, id, "expected verdicts align with records");
        let rep = classify::verdict(&rec.id, &rec.generators).map_err(|e| e.to_string())?;
        if rep.verdict.is_nef() {
            nef += 1;
        }
        if rep.verdict == Verdict::Gamma2Positive {
            positive += 1;
        }
        if rep.verdict != *want {
            mismatches.push(format!("{}: got {}, expected {}", rec.id, rep.verdict, want));
        }
    }
    println!("{}/{} nef, {} positive", nef, records.len(), positive);
    if mismatches.is_empty() {
        println!("verdicts match the classification");
        Ok(ExitCode::SUCCESS)
    } else {
        for m in &mismatches {
            println!("mismatch {m}");
        }
        Ok(ExitCode::from(EXIT_MISMATCH))
    }
}
