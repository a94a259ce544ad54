//! Command-line surface for the mating combinatorics library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 resource limit.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use mating_core::landing::{bounded_connection_check, forbidden_intervals, Landing};
use mating_core::miner::SearchOptions;
use mating_core::params::{conjugate_angle, limb_of};
use mating_core::{Angle, AngleUniverse, Error, MatingSpec, ParameterSpec};

mod cache;
mod output;
mod scenarios;
mod spec_arg;

use output::Format;
use spec_arg::parse_parameter;

#[derive(Parser)]
#[command(
    name = "mating",
    about = "Exact combinatorics of quadratic polynomial matings",
    version
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for the connection census.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Cache directory for census results.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect one rational angle: orbit data and binary expansion.
    Angle { angle: String },
    /// The co-landing partner of a periodic parameter angle.
    Conj { angle: String },
    /// Do two dynamic rays land together for the given parameter?
    Coland {
        #[arg(long)]
        param: String,
        a: String,
        b: String,
    },
    /// The ray-equivalence class of an angle in a formal mating.
    Class {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        angle: String,
        #[arg(long)]
        preperiod: Option<u32>,
        #[arg(long)]
        period: Option<u32>,
    },
    /// Census of maximal periodic ray connections for a ray period.
    Search {
        #[arg(long)]
        period: u32,
        /// Restrict to satellite-seeded connections (1/2-satellites beyond
        /// the table range).
        #[arg(long)]
        satellite_only: bool,
        /// Run all periods from --period up to this one.
        #[arg(long)]
        max_period: Option<u32>,
    },
    /// Run a named verification scenario, or all of them.
    Verify {
        /// Scenario name or `all`.
        scenario: String,
        /// Include the extended census periods 17..=24.
        #[arg(long)]
        extended: bool,
    },
    /// Hubbard-tree forbidden arcs and the one-sided spine test.
    Forbidden {
        #[arg(long)]
        param: String,
    },
    /// The limb of the main cardioid containing an angle.
    Limb { angle: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e.downcast_ref::<Error>() {
                Some(Error::Resource(_)) => 3,
                Some(Error::Parse(_)) | Some(Error::Domain(_)) => 2,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let fmt = cli.format;
    match &cli.command {
        Command::Angle { angle } => {
            let a = Angle::from_str(angle)?;
            let pp = a.preperiod_period();
            let expansion = a.binary_expansion();
            let orbit = a.orbit();
            output::emit(
                fmt,
                serde_json::json!({
                    "angle": a.to_string(),
                    "preperiod": pp.preperiod,
                    "period": pp.period,
                    "binary": expansion.to_string(),
                    "orbit": orbit.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                }),
                |j| {
                    format!(
                        "angle {}\npreperiod {}  period {}\nbinary {}\norbit {}",
                        j["angle"].as_str().unwrap(),
                        j["preperiod"],
                        j["period"],
                        j["binary"].as_str().unwrap(),
                        j["orbit"]
                            .as_array()
                            .unwrap()
                            .iter()
                            .map(|x| x.as_str().unwrap())
                            .collect::<Vec<_>>()
                            .join(" "/* angles */)
                    )
                },
            );
            Ok(true)
        }
        Command::Conj { angle } => {
            let a = Angle::from_str(angle)?;
            let b = conjugate_angle(&a)?;
            output::emit(fmt, serde_json::json!({ "conjugate": b.to_string() }), |j| {
                j["conjugate"].as_str().unwrap().to_string()
            });
            Ok(true)
        }
        Command::Coland { param, a, b } => {
            let spec = parse_parameter(param)?;
            let engine = Landing::new(spec);
            let (x, y) = (Angle::from_str(a)?, Angle::from_str(b)?);
            let co = engine.colands(&x, &y)?;
            output::emit(fmt, serde_json::json!({ "colands": co }), |j| {
                j["colands"].to_string()
            });
            Ok(true)
        }
        Command::Class { p, q, angle, preperiod, period } => {
            let spec = MatingSpec { p: parse_parameter(p)?, q: parse_parameter(q)? };
            let a = Angle::from_str(angle)?;
            let pp = a.preperiod_period();
            let u = AngleUniverse::new(
                preperiod.unwrap_or(pp.preperiod),
                period.unwrap_or(pp.period),
            );
            let mating = mating_core::graph::Mating::new(spec);
            let class = mating.class_of(&a, &u)?;
            output::emit(fmt, serde_json::to_value(&class)?, |j| {
                format!(
                    "rays {}\nshape {}\ndiameter {}\np_nodes {}\nq_nodes {}",
                    j["rays"].as_array().unwrap().len(),
                    j["shape"].as_str().unwrap(),
                    j["diameter"],
                    j["p_nodes"].as_array().unwrap().len(),
                    j["q_nodes"].as_array().unwrap().len(),
                )
            });
            Ok(true)
        }
        Command::Search { period, satellite_only, max_period } => {
            let last = max_period.unwrap_or(*period);
            if fmt == Format::Csv || fmt == Format::Text {
                println!("period,length,primitive,satellite");
            }
            let mut rows = Vec::new();
            for n in *period..=last {
                let opts = SearchOptions {
                    jobs: cli.jobs,
                    satellite_only: *satellite_only,
                    ..Default::default()
                };
                let result = cache::cached_search(cli.cache.as_deref(), n, &opts)?;
                match fmt {
                    Format::Json => rows.push(serde_json::to_value(&result)?),
                    _ => print!("{}", result.csv_rows()),
                }
            }
            if fmt == Format::Json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            }
            Ok(true)
        }
        Command::Verify { scenario, extended } => {
            let reports = scenarios::run(scenario, *extended, cli.jobs)?;
            let mut all_pass = true;
            for r in &reports {
                all_pass &= r.pass;
            }
            match fmt {
                Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
                _ => {
                    for r in &reports {
                        println!(
                            "{}: {} ({} ms){}",
                            r.scenario,
                            if r.pass { "pass" } else { "FAIL" },
                            r.millis,
                            if r.witness.is_null() {
                                String::new()
                            } else if r.pass {
                                String::new()
                            } else {
                                format!("\n  witness: {}", r.witness)
                            }
                        );
                    }
                }
            }
            Ok(all_pass)
        }
        Command::Forbidden { param } => {
            let spec = parse_parameter(param)?;
            let f = forbidden_intervals(spec)?;
            let arcs: Vec<String> =
                f.arcs.iter().map(|a| format!("({}, {})", a.from, a.to)).collect();
            output::emit(fmt, serde_json::json!({ "arcs": arcs }), |j| {
                j["arcs"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|x| x.as_str().unwrap())
                    .collect::<Vec<_>>()
                    .join(" ")
            });
            Ok(true)
        }
        Command::Limb { angle } => {
            let a = Angle::from_str(angle)?;
            match limb_of(&a) {
                Some(l) => {
                    let wake = mating_core::params::wake_angles(l);
                    let check = bounded_connection_check(l, ParameterSpec::airplane())?;
                    output::emit(
                        fmt,
                        serde_json::json!({
                            "limb": format!("{}/{}", l.k, l.r),
                            "wake": [wake.lo().to_string(), wake.hi().to_string()],
                            "airplane_spine_check": format!("{check:?}"),
                        }),
                        |j| format!("limb {}  wake {}", j["limb"].as_str().unwrap(), j["wake"]),
                    );
                    Ok(true)
                }
                None => {
                    output::emit(fmt, serde_json::json!({ "limb": null }), |_| {
                        "not inside any limb (wake boundary or angle 0)".to_string()
                    });
                    Ok(true)
                }
            }
        }
    }
}
