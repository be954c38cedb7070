use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use potlab_cli::args::Cli;
use potlab_cli::{run, EXIT_INPUT};
use potlab_distortion::runner::default_workers;

fn main() -> ExitCode {
    let cli = Cli::parse();
    // the solver's parallel loops share one pool sized like the scenario runner
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(default_workers())
        .build_global();
    match run(&cli) {
        Ok(out) => {
            if let Some(s) = &out.summary {
                eprintln!("{s}");
            }
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &out.text)
                    .map_err(|e| format!("{}: {e}", path.display())),
                None => std::io::stdout()
                    .write_all(out.text.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INPUT as u8);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
