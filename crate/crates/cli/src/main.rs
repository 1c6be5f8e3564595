use std::process;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let code = cspar_cli::run(&args, &mut std::io::stdout(), &mut std::io::stderr());
    process::exit(code);
}
