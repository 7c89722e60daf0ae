use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use qcs::cli::{self, exit, Command, OutputFormat, RunConfig};
use qcs::fem::Mesher;

#[derive(Parser)]
#[command(name = "qcs", version, about = "Neumann eigenvalue bounds via A-quasiconformal maps")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Every lower bound for a map, best one flagged.
    Estimate(Opts),
    /// FEM eigenvalues checked against every bound.
    Verify(Opts),
    /// Quasidisc constants M(K) over a list of K.
    Constants(Opts),
    /// Comparison table for the three worked examples and thin ellipses.
    ReproduceExamples(Opts),
    /// Bound table with parameters and quadrature errors.
    Bounds(Opts),
    /// Export the triangulation of a map's domain.
    Mesh(Opts),
    /// Run a JSON RunConfig.
    Run {
        config: PathBuf,
    },
}

#[derive(Args)]
struct Opts {
    /// Map id, e.g. `ellipse:a=2,b=1`, `rose_petal`, `cusp`, `shear:fprime=const1,a=1`.
    #[arg(long, default_value = "ellipse:a=2,b=1")]
    map: String,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 32)]
    nr: usize,
    #[arg(long, default_value_t = 128)]
    na: usize,
    /// Comma-separated ellipticity coefficients.
    #[arg(long, value_delimiter = ',', default_value = "1,1.5,2,4")]
    k_list: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    m_eigs: usize,
    #[arg(long, default_value = "pullback")]
    mesher: Mesher,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

impl Opts {
    fn into_config(self, command: Command) -> (RunConfig, bool) {
        let config = RunConfig {
            command,
            map_id: self.map,
            beta: self.beta,
            n_radial: self.nr,
            n_angular: self.na,
            out: self.out,
            format: self.format,
            seed: self.seed,
            m_eigs: self.m_eigs,
            k_list: self.k_list,
            mesher: self.mesher,
        };
        (config, self.print_config)
    }
}

fn resolve(sub: Sub) -> qcs::Result<(RunConfig, bool)> {
    Ok(match sub {
        Sub::Estimate(o) => o.into_config(Command::Estimate),
        Sub::Verify(o) => o.into_config(Command::Verify),
        Sub::Constants(o) => o.into_config(Command::Constants),
        Sub::ReproduceExamples(o) => o.into_config(Command::ReproduceExamples),
        Sub::Bounds(o) => o.into_config(Command::Bounds),
        Sub::Mesh(o) => o.into_config(Command::Mesh),
        Sub::Run { config } => (RunConfig::from_json(&std::fs::read_to_string(config)?)?, false),
    })
}

fn main() -> ExitCode {
    let args = Cli::parse();
    cli::init_threads();
    let (config, print_only) = match resolve(args.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit::CONFIG_ERROR as u8);
        }
    };
    if print_only {
        println!("{}", config.to_json());
        return ExitCode::SUCCESS;
    }
    let result = cli::run(&config).and_then(|o| cli::emit(&config, &o).map(|text| (o.violation, text)));
    match result {
        Ok((violation, text)) => {
            print!("{text}");
            ExitCode::from(if violation { exit::VIOLATION } else { exit::OK } as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
