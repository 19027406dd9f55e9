use std::fs;
use std::process::ExitCode;

use aesec::campaign::run_campaign_with_progress;
use aesec::selftest::run_selftest;
use aesec_cli::{format_selftest, plot_data, write_outputs, Cli, CliError, Command};
use clap::Parser;

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let plan = args.resolve()?;
            eprintln!(
                "{} n={} k={} grid={:?} workers={}",
                plan.config.series_label(),
                plan.config.params.n,
                plan.config.params.k,
                plan.config.ebn0_grid_db,
                plan.workers
            );
            let result = run_campaign_with_progress(&plan.config, plan.workers, |_, p| {
                eprintln!(
                    "  {:>5.2} dB  blocks={:<8} bler={:.3e} ber={:.3e} mean_q={:.1}",
                    p.ebn0_db, p.blocks, p.bler, p.ber, p.mean_queries
                );
            })?;
            eprintln!("done in {:.1} s", result.wall_time_s);
            write_outputs(&plan, &result)?;
            if plan.out.is_none() {
                println!("{}", result.to_json());
            }
            Ok(())
        }
        Command::Selftest => {
            let report = run_selftest();
            print!("{}", format_selftest(&report));
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::SelftestFailed)
            }
        }
        Command::PlotData(args) => {
            let csv = plot_data(&args)?;
            match &args.out {
                Some(path) => fs::write(path, csv)
                    .map_err(|e| CliError::File { path: path.clone(), message: e.to_string() }),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
