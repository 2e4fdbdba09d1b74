use clap::Parser;
use inexact_pg_cli::{execute, exit, Cli};

fn main() {
    let cli = Cli::parse();
    let code = match cli.resolve().and_then(|cfg| execute(&cfg)) {
        Ok(out) => {
            print!("{}", out.text);
            println!("artifacts: {}", out.dir.display());
            match out.failure {
                Some(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
                None => exit::OK,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
