use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = entlab_cli::run(std::env::args_os(), &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Err(e), _) => {
            eprintln!("entlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        (Ok(()), Err(e)) => {
            eprintln!("entlab: i/o error: {e}");
            ExitCode::from(entlab_cli::EXIT_FAILURE as u8)
        }
    }
}
