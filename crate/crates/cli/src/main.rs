use clap::Parser;
use vibrad_cli::{emit, execute, Cli};

fn main() {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok((rendered, failure)) => match (emit(&rendered), failure) {
            (Err(e), _) | (Ok(()), Some(e)) => {
                eprintln!("vibrad: {e}");
                e.exit_code()
            }
            (Ok(()), None) => 0,
        },
        Err(e) => {
            eprintln!("vibrad: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
