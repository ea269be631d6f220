use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use sdlab_cli::{run, Cli};

fn thread_cap() -> Result<usize, String> {
    match std::env::var("SDLAB_THREADS") {
        Err(_) => Ok(0),
        Ok(v) => v.trim().parse().map_err(|_| format!("SDLAB_THREADS must be a non-negative integer, got '{v}'")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = match thread_cap() {
        Ok(n) => n,
        Err(msg) => {
            eprintln!("sdlab: {msg}");
            return ExitCode::from(2);
        }
    };
    if threads > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().expect("thread pool starts once");
    }
    match run(&cli) {
        Ok(text) => {
            if std::io::stdout().write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("sdlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
