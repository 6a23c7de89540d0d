mod config;
mod emit;
mod suites;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use flopgw::givental::genus_one::{genus_one_form, genus_one_table, GenusOneForm, GenusOneTable};
use rayon::prelude::*;

use config::{Format, Opts, RunConfig};
use suites::{run_suite, Suite};

#[derive(Parser, Debug)]
#[command(name = "flopgw", version, about = "Exact verification of Gromov-Witten identities for local simple flops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite and emit a report
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        opts: Opts,
    },
    /// Emit a table of invariants
    Table {
        #[arg(value_enum)]
        table: TableKind,
        #[command(flatten)]
        opts: Opts,
    },
    /// Dump an intermediate object
    Dump {
        #[arg(value_enum)]
        object: DumpKind,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableKind {
    Genus1,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DumpKind {
    #[value(name = "dG", alias = "dg")]
    DG,
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
    Identities,
}

fn write_out(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn forms(cfg: &RunConfig) -> Result<Vec<GenusOneForm>> {
    cfg.r
        .par_iter()
        .map(|&r| genus_one_form(r, &Default::default()).with_context(|| format!("genus-one form for r = {r}")))
        .collect()
}

fn emit_forms(forms: &[GenusOneForm], format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(forms)? + "\n",
        Format::Text => forms.iter().map(|f| format!("r={}: dG/dt = {}\n", f.r, f.coefficient.display_in("q"))).collect(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["r", "coefficient", "constant_at_zero", "remainder"])?;
            for f in forms {
                w.write_record([
                    f.r.to_string(),
                    f.coefficient.display_in("q"),
                    flopgw::algebra::rational::display_rational(&f.constant_at_zero),
                    f.remainder.display_in("q"),
                ])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    })
}

fn run(cli: Cli) -> std::result::Result<(), Failure> {
    match cli.command {
        Command::Verify { suite, opts } => {
            let cfg = RunConfig::resolve(&opts).map_err(Failure::Usage)?;
            let report = run_suite(suite, &cfg);
            let text = emit::emit_report(&report, cfg.format).map_err(Failure::Runtime)?;
            write_out(&cfg, &text).map_err(Failure::Runtime)?;
            if report.passed() {
                Ok(())
            } else {
                for c in report.failures() {
                    let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    eprintln!("FAIL {} id={} {}: {}", c.anchor, c.id, params.join(" "), c.residual);
                }
                Err(Failure::Identities)
            }
        }
        Command::Table { table: TableKind::Genus1, opts } => {
            let cfg = RunConfig::resolve(&opts).map_err(Failure::Usage)?;
            let tables: Vec<GenusOneTable> = forms(&cfg)
                .and_then(|fs| fs.iter().map(|f| Ok(genus_one_table(f, cfg.dmax)?)).collect())
                .map_err(Failure::Runtime)?;
            let text = emit::emit_tables(&tables, cfg.format).map_err(Failure::Runtime)?;
            write_out(&cfg, &text).map_err(Failure::Runtime)
        }
        Command::Dump { object: DumpKind::DG, opts } => {
            let cfg = RunConfig::resolve(&opts).map_err(Failure::Usage)?;
            let fs = forms(&cfg).map_err(Failure::Runtime)?;
            let text = emit_forms(&fs, cfg.format).map_err(Failure::Runtime)?;
            write_out(&cfg, &text).map_err(Failure::Runtime)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identities) => ExitCode::from(1),
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("usage error: {e:#}");
            ExitCode::from(2)
        }
    }
}
