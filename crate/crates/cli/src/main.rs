use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fda_isac_cli::experiments::{
    run_comm_ber, run_complexity_table, run_crb_table, run_fodc_check, run_rate_table,
    run_sensing_experiment,
};
use fda_isac_cli::report::{
    ber_csv, complexity_csv, crb_csv, fodc_csv, rate_csv, sense_csv, write_outputs,
};
use fda_isac_cli::scenario::{three_target_fodc, ExperimentKind, Scenario};
use fda_isac_cli::CliError;

/// FDA-MIMO integrated sensing-and-communication experiment runner.
#[derive(Debug, Parser)]
#[command(name = "fda-isac", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario JSON file; omit it to use the built-in three-target default.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    /// Comma-separated SNR grid in dB, overriding the scenario.
    #[arg(long, global = true, value_delimiter = ',', num_args = 1..)]
    snr: Option<Vec<f64>>,

    /// Monte-Carlo trials per sweep point, overriding the scenario.
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Master seed; overrides both the scenario and the ISAC_SEED variable.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for CSV reports and the run manifest.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Multi-target sensing RMSE / hit-rate sweep for both estimators.
    Sense,
    /// Monte-Carlo bit-error-rate sweep against the analytic bound.
    CommBer,
    /// Closed-form estimation bounds over the SNR grid.
    Crb,
    /// Search complexity (complex multiplications) for both estimators.
    Complexity,
    /// Frequency-offset design check: ambiguity period vs operating range.
    FodcCheck,
    /// Achievable bits per pulse versus a permutation-index baseline.
    Rate,
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Command::Sense => ExperimentKind::Sense,
            Command::CommBer => ExperimentKind::CommBer,
            Command::Crb => ExperimentKind::Crb,
            Command::Complexity => ExperimentKind::Complexity,
            Command::FodcCheck => ExperimentKind::FodcCheck,
            Command::Rate => ExperimentKind::Rate,
        }
    }
}

fn load_scenario(cli: &Cli) -> Result<Scenario, CliError> {
    let mut scn = match &cli.scenario {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read scenario file {}: {e}", path.display()))
            })?;
            Scenario::from_json(&text)?
        }
        None => three_target_fodc(cli.command.kind()),
    };
    scn.experiment.kind = cli.command.kind();
    if let Some(snr) = &cli.snr {
        scn.experiment.snr_grid_db = snr.clone();
    }
    if let Some(trials) = cli.trials {
        scn.experiment.trials = trials;
    }
    // Seed precedence: --seed flag, then ISAC_SEED, then the scenario value.
    if let Some(seed) = cli.seed {
        scn.experiment.master_seed = seed;
    } else if let Ok(env_seed) = std::env::var("ISAC_SEED") {
        scn.experiment.master_seed = env_seed
            .parse()
            .map_err(|_| CliError::Config(format!("ISAC_SEED must be an unsigned integer, got {env_seed:?}")))?;
    }
    scn.validate()?;
    Ok(scn)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let scn = load_scenario(cli)?;
    let seed = scn.experiment.master_seed;
    let (name, csv) = match cli.command {
        Command::Sense => ("sense.csv", sense_csv(&run_sensing_experiment(&scn)?)),
        Command::CommBer => ("ber.csv", ber_csv(&run_comm_ber(&scn)?)),
        Command::Crb => ("crb.csv", crb_csv(&run_crb_table(&scn)?)),
        Command::Complexity => ("complexity.csv", complexity_csv(&run_complexity_table(&scn)?)),
        Command::FodcCheck => {
            let row = run_fodc_check(&scn)?;
            let status = if row.pass { "PASS" } else { "FAIL" };
            println!(
                "offset design: period {} m vs operating range {} m (cT/2 = {} m): {status}",
                row.period_m, row.max_range_m, row.ct_half_m
            );
            ("fodc.csv", fodc_csv(&row))
        }
        Command::Rate => ("rate.csv", rate_csv(&run_rate_table(&scn)?)),
    };
    let written = write_outputs(&cli.out, &scn, seed, &[(name, csv)])?;
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
