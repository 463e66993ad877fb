mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use secular::exactnum::Rat;
use secular::{Error, PathRequest};

use commands::{Options, Output};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Verb {
    Charpoly,
    Roots,
    Eigvec,
    InvariantFactors,
    ElementaryDivisors,
    Diagonalizable,
    Inertia,
    DarbouxSteps,
    WeierstrassReduce,
    Expm,
    Solve,
    Classify,
    Trajectory,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PathArg {
    Exact,
    Float,
    Auto,
}

/// Exact and floating-point analysis of matrix pencils and small oscillations.
///
/// Exit codes: 0 success, 1 internal failure, 2 parse error,
/// 3 precondition violation, 4 exact path unavailable.
#[derive(Debug, Parser)]
#[command(name = "secular", version)]
struct Cli {
    verb: Verb,
    /// Input document (JSON); `-` or absent reads standard input.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Output file; absent writes standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Floating residual tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Root isolation width, as `p/q` or `1e-N`.
    #[arg(long, default_value = "1e-30")]
    width: String,
    #[arg(long, value_enum, default_value_t = PathArg::Auto)]
    path: PathArg,
    /// Overrides the scenario's t_grid end time.
    #[arg(long)]
    t_max: Option<f64>,
    /// Overrides the scenario's t_grid step count.
    #[arg(long)]
    t_steps: Option<usize>,
    /// Time argument of `expm`.
    #[arg(long, default_value_t = 1.0)]
    time: f64,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::PathUnavailable(_) => 4,
        Error::Internal(_) | Error::InexactDivision => 1,
        _ => 3,
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Error> {
    use std::io::Read;
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Error> {
    if !(cli.tolerance.is_finite() && cli.tolerance > 0.0) {
        return Err(Error::Parse("tolerance must be positive".into()));
    }
    let width: Rat = commands::parse_width(&cli.width)?;
    let opts = Options {
        tolerance: cli.tolerance,
        width,
        path: match cli.path {
            PathArg::Exact => PathRequest::Exact,
            PathArg::Float => PathRequest::Float,
            PathArg::Auto => PathRequest::Auto,
        },
        t_max: cli.t_max,
        t_steps: cli.t_steps,
        time: cli.time,
    };
    let text = read_input(&cli.input)?;
    match cli.verb {
        Verb::Charpoly => commands::charpoly(&text),
        Verb::Roots => commands::roots(&text, &opts),
        Verb::Eigvec => commands::eigvec(&text, &opts),
        Verb::InvariantFactors => commands::invariant_factors_cmd(&text),
        Verb::ElementaryDivisors => commands::elementary_divisors_cmd(&text),
        Verb::Diagonalizable => commands::diagonalizable(&text),
        Verb::Inertia => commands::inertia_cmd(&text),
        Verb::DarbouxSteps => commands::darboux_steps(&text),
        Verb::WeierstrassReduce => commands::weierstrass_reduce(&text, &opts),
        Verb::Expm => commands::expm(&text, &opts),
        Verb::Solve => commands::solve(&text, &opts),
        Verb::Classify => commands::classify(&text),
        Verb::Trajectory => commands::trajectory(&text, &opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let body = match out {
        Output::Json(v) => {
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s
        }
        Output::Csv(s) => s,
    };
    let written = match &cli.output {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string())
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
