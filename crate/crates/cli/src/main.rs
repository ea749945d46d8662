fn main() {
    chowtool_cli::init_threads();
    let args: Vec<String> = std::env::args().collect();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    std::process::exit(chowtool_cli::main_with(args, &mut out, &mut err));
}
