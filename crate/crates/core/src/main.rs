use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, text) = rsg::cli::run(std::env::args_os());
    let written = if code == rsg::cli::EXIT_OK { std::io::stdout().write_all(text.as_bytes()) } else { std::io::stderr().write_all(text.as_bytes()) };
    if written.is_err() {
        return ExitCode::from(rsg::cli::EXIT_FAILURE as u8);
    }
    ExitCode::from(code as u8)
}
