fn main() {
    let outcome = flowcalc::cli::run(std::env::args_os());
    if outcome.code == 2 {
        eprint!("{}", outcome.output);
    } else {
        print!("{}", outcome.output);
    }
    std::process::exit(outcome.code);
}
