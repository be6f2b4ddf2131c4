use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = lame_tool::app::run_from(std::env::args_os());
    let text = outcome.output;
    if outcome.code == lame_tool::app::EXIT_OK || outcome.code == lame_tool::app::EXIT_MISMATCH {
        let _ = std::io::stdout().write_all(text.as_bytes());
    } else {
        let _ = std::io::stderr().write_all(text.as_bytes());
    }
    ExitCode::from(outcome.code)
}
