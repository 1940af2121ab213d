use std::process::ExitCode;

use certjulia::{dispatch, parse_config, EXIT_FAILURE, USAGE};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if argv.is_empty() || argv.iter().any(|a| a == "--help" || a == "-h") {
        println!("{USAGE}");
        return ExitCode::from(if argv.is_empty() { EXIT_FAILURE as u8 } else { 0 });
    }
    let code = match parse_config(&argv) {
        Ok(cfg) => dispatch(&cfg),
        Err(e) => {
            eprint!("{e}");
            eprintln!("{USAGE}");
            EXIT_FAILURE
        }
    };
    ExitCode::from(code as u8)
}
