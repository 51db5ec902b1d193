//! `haus`: CSV experiment runner. Exit status 0 success, 2 configuration
//! error, 3 numerical failure. HAUS_THREADS caps the worker count.

use std::process::ExitCode;

fn main() -> ExitCode {
    let threads = match std::env::var("HAUS_THREADS") {
        Err(_) => None,
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Some(n),
            _ => {
                eprintln!("haus: configuration error: HAUS_THREADS must be a positive integer, got '{s}'");
                return ExitCode::from(2);
            }
        },
    };
    let args: Vec<_> = std::env::args_os().skip(1).collect();
    match haus_cli::run_args(args, threads) {
        Ok(out) => {
            if out.written_to.is_none() {
                print!("{}", out.csv);
            }
            ExitCode::SUCCESS
        }
        Err(e) if e.code == 0 => {
            print!("{}", e.message);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code)
        }
    }
}
