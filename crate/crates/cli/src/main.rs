use clap::Parser;
use contextdl_cli::{run, Cli, Diagnostics};

fn main() {
    let cli = Cli::parse();
    let code = run(
        cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
        Diagnostics::color_from_env(),
    );
    std::process::exit(code);
}
