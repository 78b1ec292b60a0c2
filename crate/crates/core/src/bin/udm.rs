use std::io::Write;

fn main() {
    env_logger::init();
    let outcome = udm::cli::main_with_args(std::env::args_os());
    if outcome.report.starts_with("error") {
        let _ = std::io::stderr().write_all(outcome.report.as_bytes());
    } else {
        let _ = std::io::stdout().write_all(outcome.report.as_bytes());
    }
    std::process::exit(outcome.code);
}
