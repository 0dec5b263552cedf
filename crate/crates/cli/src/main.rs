mod args;
mod cache;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Env;
use output::{CliError, Report};

fn run(cli: &Cli) -> Result<Report, CliError> {
    let mut env = Env::new(&cli.global)?;
    let report = match &cli.command {
        Command::Factor { lambda, n } => commands::factor(&mut env, *lambda, *n),
        Command::BadPrimes { lambda, n_max } => commands::bad_primes(&mut env, *lambda, *n_max),
        Command::Euler {
            module,
            lambda,
            prime,
            n,
            assert_irreducible,
        } => commands::euler(&mut env, module, *lambda, prime, *n, *assert_irreducible),
        Command::Scan {
            module,
            lambdas,
            primes,
            k_max,
            r_max,
            n_max,
            serial,
            assert_irreducible,
        } => commands::scan(
            &mut env,
            module,
            lambdas,
            primes,
            *k_max,
            *r_max,
            *n_max,
            *serial,
            *assert_irreducible,
        ),
        Command::AltProduct {
            file,
            prime,
            assert_irreducible,
        } => commands::alt_product(&mut env, file, prime, *assert_irreducible),
        Command::Oracle { ideal, kernel } => commands::oracle(&mut env, ideal, kernel.as_deref()),
        Command::ArithPrime { k, r } => commands::arith(&mut env, *k, *r),
    };
    env.cache.save();
    report
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.render(cli.global.json).as_bytes());
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
