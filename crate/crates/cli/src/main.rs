//! `qfactor`: convert between the coefficients of `1 + sum r(n) q^n` and
//! the exponents of `prod (1-q^n)^(-a_n)`, in either direction, with the
//! q-analogue and an identity battery on the side.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 mathematical
//! cross-check failure, 4 network failure during an online OEIS lookup.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qfactor_core::Method;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qfactor", version, about = "Factor power series into infinite products and back, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute product exponents a_1..a_N from a series
    Prodmake(CommandArgs),
    /// Expand product exponents into series coefficients r(0)..r(N)
    Seriesmake(CommandArgs),
    /// Print the q-analogue polynomials r_q(0)..r_q(N) and verify the
    /// bivariate product identity
    Qanalogue(CommandArgs),
    /// Run the identity battery (lemma, log-sum closed forms, round trips)
    Verify(CommandArgs),
}

impl Command {
    fn split(self) -> (commands::Kind, CommandArgs) {
        match self {
            Command::Prodmake(a) => (commands::Kind::Prodmake, a),
            Command::Seriesmake(a) => (commands::Kind::Seriesmake, a),
            Command::Qanalogue(a) => (commands::Kind::Qanalogue, a),
            Command::Verify(a) => (commands::Kind::Verify, a),
        }
    }
}

#[derive(Args)]
struct CommandArgs {
    /// Series as a rational function in q, e.g. "1/(1-q-q^2)"
    #[arg(long, group = "input", value_name = "EXPR")]
    expr: Option<String>,

    /// Comma-separated series coefficients r(0),r(1),... ("1,1/2,-3" is valid)
    #[arg(long, group = "input", value_name = "LIST", allow_hyphen_values = true)]
    coeffs: Option<String>,

    /// Comma-separated product exponents a_1,a_2,...
    #[arg(long, group = "input", value_name = "LIST", allow_hyphen_values = true)]
    exps: Option<String>,

    /// Named family: partitions | overpartitions | plane | compositions |
    /// fibonacci | kcolor:K | broken_diamond:K | subset:1,4,7 | subset:mod5=1,4
    #[arg(long, group = "input", value_name = "NAME[:PARAMS]")]
    family: Option<String>,

    /// Truncation order N (at least 1)
    #[arg(long, default_value_t = 20, value_name = "N")]
    order: usize,

    /// Conversion route; "both" cross-checks the two
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,

    /// Output format
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,

    /// Never touch the network; OEIS lookups use bundled fixtures and the
    /// local cache only
    #[arg(long)]
    offline: bool,

    /// Append OEIS matches for the computed integer sequence
    #[arg(long)]
    oeis: bool,

    /// Largest n whose partitions may be enumerated (default 80)
    #[arg(long, value_name = "N")]
    max_partition_size: Option<usize>,

    /// Truncate displayed q-analogue polynomials above this q-degree
    #[arg(long, value_name = "D")]
    q_display_limit: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Direct,
    Recursive,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Direct => Method::Direct,
            MethodArg::Recursive => Method::Recursive,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Table,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    match commands::run(kind, args) {
        Ok(outcome) => {
            println!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
