use std::io::Write;

fn main() {
    let outcome = dlbd::cli::run_command(std::env::args_os(), &mut std::io::stdin());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(outcome.code);
}
