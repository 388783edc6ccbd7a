use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod svg;

use commands::{CameraCheckArgs, CompareArgs, IngestArgs, MetricsArgs};

const EXIT_CODES: &str = "\
Exit codes:
  0  success (camera-check: static camera)
  2  input error: unreadable, malformed or inconsistent input
  3  detection coverage below threshold (ingest --require-coverage)
  4  camera-check: moving camera
  5  camera-check: indeterminate (too few frames or trackable features)";

#[derive(Parser)]
#[command(name = "pedeval", version, about = "Pedestrian trajectory analytics", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Project tracker detections or read world trajectories into canonical JSON.
    #[command(after_help = EXIT_CODES)]
    Ingest(IngestArgs),
    /// Classify a clip of PGM frames as recorded by a static or moving camera.
    #[command(name = "camera-check", after_help = EXIT_CODES)]
    CameraCheck(CameraCheckArgs),
    /// Compute crowd-dynamics statistics and distributions for a trajectory file.
    #[command(after_help = EXIT_CODES)]
    Metrics(MetricsArgs),
    /// Tabulate candidate reports against reference reports.
    #[command(after_help = EXIT_CODES)]
    Compare(CompareArgs),
    /// Print the tool and schema versions.
    Version,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Ingest(a) => commands::ingest(&a),
        Command::CameraCheck(a) => commands::camera_check(&a),
        Command::Metrics(a) => commands::metrics(&a),
        Command::Compare(a) => commands::compare(&a),
        Command::Version => {
            println!(
                "pedeval {} (schema {})",
                env!("CARGO_PKG_VERSION"),
                pedeval_core::SCHEMA_VERSION
            );
            Ok(commands::Status::Ok)
        }
    };
    match status {
        Ok(s) => ExitCode::from(s as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::Status::InputError as u8)
        }
    }
}
