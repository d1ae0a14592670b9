mod args;
mod cache;
mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Format};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let request = commands::request(&cli.command);
    let dir: Option<PathBuf> = if cli.global.no_cache {
        None
    } else {
        cli.global.cache_dir.clone().or_else(|| std::env::var_os("TSC_CACHE_DIR").map(PathBuf::from))
    };
    let mode = if cli.global.verify { cache::Mode::Verify } else { cache::Mode::Normal };
    match cache::get_or_compute(dir.as_deref(), mode, &request, || commands::compute(&cli.command)) {
        Ok(payload) => {
            match cli.global.format {
                Format::Json => println!("{}", render::json(&payload)),
                Format::Table => print!("{}", render::table(&payload)),
            }
            if payload.get("verdict").and_then(|v| v.as_str()) == Some("unknown") {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
