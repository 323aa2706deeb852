use clap::Parser;

use resdens_cli::{deliver, execute, Cli, CliError};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version exit 0 through clap's own printer
            if err.use_stderr() {
                let wrapped = CliError::Usage(err.to_string());
                eprintln!("{}", wrapped.to_json());
                std::process::exit(2);
            }
            err.exit();
        }
    };

    let threads = if cli.threads > 0 {
        cli.threads
    } else {
        std::env::var("RESDENS_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    };
    if threads > 0 {
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!(
                "{}",
                CliError::Usage(format!("thread pool: {err}")).to_json()
            );
            std::process::exit(2);
        }
    }

    match execute(&cli).and_then(|artifact| deliver(&cli, &artifact)) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("{}", err.to_json());
            std::process::exit(1);
        }
    }
}
