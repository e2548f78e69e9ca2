use std::io::Write;
use std::process::ExitCode;

use khovanov::{cli, Error};

fn main() -> ExitCode {
    let mut out = std::io::stdout().lock();
    let code = match cli::run(std::env::args_os(), &mut out) {
        Ok(code) => code,
        Err(Error::Usage(msg)) => {
            eprint!("{msg}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
