//! Command-line front end: single-point reports, sweeps over p, numerical
//! self-checks and plot data.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod error;
pub mod format;

use args::{Cli, Command};
use error::{CliError, CliResult};

/// Runs a parsed command line inside a pool of `--jobs` threads.
pub fn run(cli: &Cli) -> CliResult<()> {
    let common = &cli.common;
    nikolskii::par::with_jobs(common.jobs, || match &cli.command {
        Command::Bounds(a) => commands::bounds(common, a),
        Command::Sweep(a) => commands::sweep(common, a),
        Command::Verify(a) => commands::verify(common, a),
        Command::Figure(a) => commands::figure(common, a),
    })
    .map_err(|e| CliError::Usage(e.to_string()))?
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[test]
    fn p_grid_endpoints() {
        let g = commands::p_grid(2.0, 4.0, 0.01).unwrap();
        assert_eq!(g.len(), 201);
        assert_eq!(g[0], 2.0);
        assert_eq!(g[200], 4.0);
        assert_eq!(g[1], 2.01);
        assert_eq!(commands::p_grid(3.0, 3.0, 0.1).unwrap(), vec![3.0]);
        assert!(commands::p_grid(4.0, 2.0, 0.1).is_err());
        assert!(commands::p_grid(2.0, 4.0, 0.0).is_err());
    }

    #[test]
    fn parses_method_lists() {
        let cli = Cli::try_parse_from(["nikolskii", "sweep", "--d", "2,3", "--methods", "kernel,lower_opt"]).unwrap();
        match cli.command {
            Command::Sweep(a) => {
                assert_eq!(a.d, vec![2, 3]);
                assert_eq!(a.methods.len(), 2);
            }
            _ => panic!("wrong subcommand"),
        }
        assert!(Cli::try_parse_from(["nikolskii", "sweep", "--d", "2", "--methods", ""]).is_err());
        assert!(Cli::try_parse_from(["nikolskii", "sweep", "--d", "2", "--methods", "bogus"]).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 1);
        assert_eq!(CliError::Failures(String::new()).exit_code(), 2);
        assert_eq!(CliError::Numerical(nikolskii::Error::Domain(String::new())).exit_code(), 2);
        assert_eq!(CliError::Invariant(String::new()).exit_code(), 3);
    }
}
