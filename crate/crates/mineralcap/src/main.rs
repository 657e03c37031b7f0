//! Thin command-line front end over the library pipelines.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mineralcap::chemistry::Chemistry;
use mineralcap::data::resolve_data_dir;
use mineralcap::emissions::Powertrain;
use mineralcap::model::{Assumption, Fleet, Model};
use mineralcap::report::{self, ReportBundle, Table};
use mineralcap::scenarios::ScenarioKind;
use mineralcap::supply::Basis;

#[derive(Parser)]
#[command(
    name = "mineralcap",
    about = "Mineral-constrained EV deployment model",
    version
)]
struct Cli {
    /// Data directory (defaults to MINERALCAP_DATA or the bundled data/).
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Production,
    Reserves,
}

#[derive(Clone, Copy, ValueEnum)]
enum AssumptionArg {
    Baseline,
    AddedSupply,
}

#[derive(Clone, Copy, ValueEnum)]
enum FleetArg {
    Sedan,
    Mixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum CapacityMode {
    PerChemistry,
    Optimal,
    Mix,
    Joint,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathwayMode {
    Thresholds,
    Ramp,
    HevOnly,
    Supplement,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Low,
    Medium,
    High,
}

impl From<KindArg> for ScenarioKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Low => ScenarioKind::Low,
            KindArg::Medium => ScenarioKind::Medium,
            KindArg::High => ScenarioKind::High,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// EV sales scenario for one adoption pathway.
    Scenarios {
        #[arg(long, value_enum)]
        kind: KindArg,
    },
    /// Battery-pack ceilings from mineral supply.
    Capacity {
        #[arg(long, value_enum, default_value_t = BasisArg::Production)]
        basis: BasisArg,
        #[arg(long, value_enum, default_value_t = AssumptionArg::Baseline)]
        assumption: AssumptionArg,
        #[arg(long, value_enum, default_value_t = FleetArg::Sedan)]
        fleet: FleetArg,
        #[arg(long, value_enum, default_value_t = CapacityMode::PerChemistry)]
        mode: CapacityMode,
        /// Chemistries for joint mode, comma separated (default: all six).
        #[arg(long, value_delimiter = ',')]
        chemistries: Vec<String>,
    },
    /// Lifecycle emissions for one powertrain and year.
    Emissions {
        #[arg(long)]
        year: i32,
        /// ICEV, HEV, or an EV chemistry such as NMC811.
        #[arg(long)]
        powertrain: String,
    },
    /// Resolution pathways: thresholds, ramp, hev-only, supplement.
    Pathways {
        #[arg(long, value_enum)]
        mode: PathwayMode,
        #[arg(long, value_enum, default_value_t = KindArg::Low)]
        scenario: KindArg,
        /// Required production level for ramp mode, tons per year
        /// (default: the peak graphite requirement for the scenario).
        #[arg(long)]
        required: Option<f64>,
    },
    /// Result tables keyed by reference id (for example T3.2).
    Report {
        /// Table id; omit to print the whole bundle.
        #[arg(long)]
        table: Option<String>,
        /// Write the table as (x, y, series) plot points to this file.
        #[arg(long)]
        emit_series: Option<PathBuf>,
    },
    /// Compare computed tables against the golden fixtures.
    Diff {
        /// Golden fixture directory (default: <data-dir>/golden).
        #[arg(long)]
        golden: Option<PathBuf>,
    },
}

fn print_table(table: &Table, format: Format) {
    match format {
        Format::Human => print!("{}", table.to_human()),
        Format::Csv => print!("{}", table.to_csv()),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(table).expect("serializes")
        ),
    }
}

fn print_tables(tables: &[Table], format: Format) {
    match format {
        Format::Json => {
            let bundle = ReportBundle {
                tables: tables.to_vec(),
            };
            println!("{}", bundle.to_json());
        }
        _ => {
            for table in tables {
                print_table(table, format);
                println!();
            }
        }
    }
}

fn run(cli: Cli) -> mineralcap::Result<()> {
    let data_dir = resolve_data_dir(cli.data_dir.as_deref());
    let model = Model::new(mineralcap::data::Dataset::load(&data_dir)?)?;
    match cli.command {
        Command::Scenarios { kind } => {
            print_table(&report::scenario_table(&model, kind.into()), cli.format);
        }
        Command::Capacity {
            basis,
            assumption,
            fleet,
            mode,
            chemistries,
        } => {
            let basis = match basis {
                BasisArg::Production => Basis::Production,
                BasisArg::Reserves => Basis::Reserves,
            };
            let assumption = match assumption {
                AssumptionArg::Baseline => Assumption::Baseline,
                AssumptionArg::AddedSupply => Assumption::AddedSupply,
            };
            let fleet = match fleet {
                FleetArg::Sedan => Fleet::Sedan,
                FleetArg::Mixed => Fleet::Mixed,
            };
            let table = match mode {
                CapacityMode::PerChemistry => {
                    report::capacity_table(&model, basis, assumption, fleet)?
                }
                CapacityMode::Optimal => report::optimal_table(&model, basis, assumption, fleet)?,
                CapacityMode::Mix => report::mix_table(&model, assumption, fleet)?,
                CapacityMode::Joint => {
                    let allowed: Vec<Chemistry> = if chemistries.is_empty() {
                        Chemistry::ALL.to_vec()
                    } else {
                        chemistries
                            .iter()
                            .map(|s| s.parse())
                            .collect::<mineralcap::Result<_>>()?
                    };
                    report::joint_table(&model, basis, &allowed)?
                }
            };
            print_table(&table, cli.format);
        }
        Command::Emissions { year, powertrain } => {
            let powertrain: Powertrain = powertrain.parse()?;
            print_table(
                &report::emissions_table(&model, powertrain, year)?,
                cli.format,
            );
        }
        Command::Pathways {
            mode,
            scenario,
            required,
        } => {
            let kind: ScenarioKind = scenario.into();
            let table = match mode {
                PathwayMode::Thresholds => report::thresholds_table(&model, kind)?,
                PathwayMode::Ramp => {
                    let required = match required {
                        Some(r) => r,
                        None => {
                            let thresholds = report::thresholds_table(&model, kind)?;
                            thresholds
                                .rows
                                .iter()
                                .find(|r| r.label == "graphite")
                                .and_then(|r| match &r.cells[2] {
                                    report::Cell::Num(v) => Some(*v),
                                    _ => None,
                                })
                                .unwrap_or(0.0)
                        }
                    };
                    report::ramp_table(&model, required)
                }
                PathwayMode::HevOnly => report::hev_only_table(&model, kind)?,
                PathwayMode::Supplement => report::supplement_table(&model, kind)?,
            };
            print_table(&table, cli.format);
        }
        Command::Report { table, emit_series } => {
            let bundle = report::run(&model)?;
            match (&table, &emit_series) {
                (Some(id), Some(path)) => {
                    let points = report::emit_plot_series(&bundle, id)?;
                    std::fs::write(path, report::series_to_csv(&points)).map_err(|source| {
                        mineralcap::Error::Io {
                            path: path.clone(),
                            source,
                        }
                    })?;
                }
                (Some(id), None) => print_table(bundle.get(id)?, cli.format),
                (None, Some(_)) => {
                    return Err(mineralcap::Error::validation(
                        "report",
                        "--emit-series needs --table",
                    ))
                }
                (None, None) => print_tables(&bundle.tables, cli.format),
            }
        }
        Command::Diff { golden } => {
            let golden = golden.unwrap_or_else(|| data_dir.join("golden"));
            let bundle = report::run(&model)?;
            let diff = report::diff_against_golden(&bundle, &golden)?;
            for table in &diff.tables {
                println!(
                    "{}: {} cells, {} failures, max deviation {:.4}% -> {}",
                    table.table,
                    table.cells,
                    table.failures,
                    table.max_deviation * 100.0,
                    if table.pass { "pass" } else { "FAIL" }
                );
            }
            for cell in diff.cells.iter().filter(|c| !c.pass) {
                eprintln!(
                    "FAIL {} [{} / {}]: computed {} vs golden {}",
                    cell.table, cell.row, cell.column, cell.ours, cell.golden
                );
            }
            if !diff.pass {
                return Err(mineralcap::Error::validation(
                    "diff",
                    "golden comparison failed",
                ));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
