use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use proxilab::scenarios::{builtin, is_config_error, list_builtins, load_path, run_all, to_csv, Report, Scenario};
use proxilab::{Error, Result};

#[derive(Parser)]
#[command(name = "proxilab", version, about = "Proximinality checks on finite-dimensional normed spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenarios and print a JSON array of reports.
    Run {
        /// Scenario file, directory of JSON files, or builtin name. Repeatable.
        #[arg(long = "scenario", short = 's')]
        scenarios: Vec<String>,
        /// Run every builtin scenario.
        #[arg(long)]
        all_builtins: bool,
        /// Seed applied to every scenario.
        #[arg(long, env = "PROXILAB_SEED")]
        seed: Option<u64>,
        /// Tolerance override, e.g. `--tol residual=1e-5`. Repeatable.
        #[arg(long = "tol", value_parser = parse_tol)]
        tolerances: Vec<(String, f64)>,
        /// Write the reports here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a long-format CSV table.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// List builtin scenarios.
    ListBuiltins {
        #[arg(long)]
        json: bool,
    },
}

fn parse_tol(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    let v: f64 = v.parse().map_err(|e| format!("bad tolerance `{v}`: {e}"))?;
    Ok((k.to_string(), v))
}

fn resolve(arg: &str) -> Result<Vec<Scenario>> {
    let path = Path::new(arg);
    if path.exists() {
        return load_path(path);
    }
    builtin(arg).map(|s| vec![s]).ok_or_else(|| Error::Config {
        path: arg.to_string(),
        message: "neither a readable path nor a builtin name".into(),
    })
}

fn write(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Error::Config { path: p.display().to_string(), message: e.to_string() })
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::ListBuiltins { json } => {
            let list = list_builtins();
            if json {
                println!("{}", serde_json::to_string_pretty(&list).expect("builtins serialize"));
            } else {
                for b in list {
                    println!(
                        "{:<24} {:<10} {}  [{}]",
                        b.name,
                        format!("{:?}", b.expect).to_lowercase(),
                        b.description,
                        b.anchor
                    );
                }
            }
            Ok(true)
        }
        Command::Run { scenarios, all_builtins, seed, tolerances, out, csv, jobs } => {
            let mut list = Vec::new();
            if all_builtins {
                list.extend(list_builtins().iter().filter_map(|b| builtin(b.name)));
            }
            for s in &scenarios {
                list.extend(resolve(s)?);
            }
            if list.is_empty() {
                return Err(Error::Config { path: "--scenario".into(), message: "no scenarios given".into() });
            }
            for s in &mut list {
                if let Some(seed) = seed {
                    s.seed = seed;
                }
                for (k, v) in &tolerances {
                    s.tolerances.insert(k.clone(), *v);
                }
            }
            let mut reports: Vec<Report> = Vec::with_capacity(list.len());
            let mut all_match = true;
            for (s, r) in list.iter().zip(run_all(&list, jobs)) {
                match r {
                    Ok(r) => {
                        if !r.status.matches(s.expect) {
                            eprintln!("{}: status {:?} does not match expectation {:?}", s.name, r.status, s.expect);
                            all_match = false;
                        }
                        reports.push(r);
                    }
                    Err(e) if is_config_error(&e) => return Err(e),
                    Err(e) => {
                        eprintln!("{}: {e}", s.name);
                        all_match = false;
                    }
                }
            }
            let text = serde_json::to_string_pretty(&reports).expect("reports serialize");
            write(out.as_deref(), &text)?;
            if let Some(p) = csv {
                write(Some(&p), &to_csv(&reports))?;
            }
            Ok(all_match)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_config_error(&e) { 2 } else { 1 })
        }
    }
}
