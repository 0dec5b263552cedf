use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "iwasawa",
    version,
    about = "Twisted coinvariants, bad primes and Euler characteristics of Iwasawa modules"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Odd prime p.
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u64,
    /// Working precision N: residues are kept modulo p^N.
    #[arg(long, global = true, default_value_t = 12)]
    pub precision: u32,
    /// Digits of precision reserved against loss; results are certified
    /// below N - guard.
    #[arg(long, global = true, default_value_t = 4)]
    pub guard: u32,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cross-check against the finite-ring oracle and bypass the cache.
    #[arg(long, global = true)]
    pub verify: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factor (X+1)^{p^n} - (1+p*lambda)^{p^n} into F_0, ..., F_n.
    Factor {
        #[arg(long, allow_negative_numbers = true)]
        lambda: i64,
        #[arg(long)]
        n: u32,
    },
    /// Bad-prime sets of Λ/(X - T) twisted by lambda, levels 0..=n-max.
    BadPrimes {
        #[arg(long, allow_negative_numbers = true)]
        lambda: i64,
        #[arg(long)]
        n_max: u32,
    },
    /// h0, h1 and the Euler characteristic of a twisted, specialized module.
    Euler {
        /// Module file (JSON).
        module: PathBuf,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
        lambda: i64,
        /// Height-one prime, e.g. "X-3" or "X^2+6*X+21".
        #[arg(long)]
        prime: String,
        #[arg(long)]
        n: u32,
        /// Accept the prime without an irreducibility certificate.
        #[arg(long)]
        assert_irreducible: bool,
    },
    /// Coinvariants over a grid of twists, primes and levels.
    Scan {
        /// Module file (JSON).
        module: PathBuf,
        /// Inclusive range "a..b" or a comma list "0,1,5".
        #[arg(long, allow_hyphen_values = true)]
        lambdas: String,
        /// "auto" for arithmetic primes, or a ';'-separated list.
        #[arg(long, default_value = "auto")]
        primes: String,
        /// Weight bound for auto primes.
        #[arg(long, default_value_t = 2)]
        k_max: u32,
        /// Conductor exponent bound for auto primes.
        #[arg(long, default_value_t = 1)]
        r_max: u32,
        #[arg(long, default_value_t = 1)]
        n_max: u32,
        /// Evaluate cells on one thread.
        #[arg(long)]
        serial: bool,
        /// Accept listed primes without an irreducibility certificate.
        #[arg(long)]
        assert_irreducible: bool,
    },
    /// Signed exponent of the alternating product over a resolution.
    AltProduct {
        /// JSON file {"elements": ["X+3", ...]}.
        file: PathBuf,
        #[arg(long)]
        prime: String,
        #[arg(long)]
        assert_irreducible: bool,
    },
    /// Cardinality of Z_p[[X,T]]/(ideal) by truncated Smith forms.
    Oracle {
        /// Generators separated by ';'.
        #[arg(long, allow_hyphen_values = true)]
        ideal: String,
        /// Count the kernel of multiplication by this element instead.
        #[arg(long, allow_hyphen_values = true)]
        kernel: Option<String>,
    },
    /// Minimal polynomial of the arithmetic prime for weight k, level p^r.
    ArithPrime {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 0)]
        r: u32,
    },
}
