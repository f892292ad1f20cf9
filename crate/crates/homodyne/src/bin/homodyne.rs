use clap::Parser;
use homodyne::cli::Cli;

fn main() {
    let cli = Cli::parse();
    let result = cli.load().and_then(|cfg| {
        if let Some(n) = cfg.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| homodyne::CliError::Config(e.to_string()))?;
        }
        homodyne::cli::run(&cfg)
    });
    match result {
        Ok(summary) => println!("{summary}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code() as i32);
        }
    }
}
