use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qlmass::cli::Cli;
use qlmass::commands;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let config = Cli::parse().into_config();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = commands::run(&config, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("qlmass: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
