use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let (code, out) = itcalc::cli::run_argv(&argv);
    if !out.is_empty() {
        println!("{}", out);
    }
    ExitCode::from(code as u8)
}
