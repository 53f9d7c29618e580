use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut err = stderr.lock();
    let code = zeta_partition::cli::run(std::env::args_os(), &mut out, &mut err);
    ExitCode::from(code as u8)
}
