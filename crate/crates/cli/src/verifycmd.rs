//! The `verify` subcommand: runs the library's verification suites and exits
//! nonzero with a reproducer line on the first mismatch.

use clap::Args;

use oaprobe::verify;

use crate::CmdError;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suite: all, oracle, permutation, reduction, sim, metrics.
    #[arg(long, default_value = "all")]
    suite: String,

    #[arg(long, default_value_t = 42)]
    seed: u64,
}

const ALL_SUITES: [&str; 5] = ["oracle", "permutation", "reduction", "sim", "metrics"];

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CmdError> {
    let suites: Vec<&str> = match args.suite.as_str() {
        "all" => ALL_SUITES.to_vec(),
        one if ALL_SUITES.contains(&one) => vec![one],
        other => {
            return Err(CmdError::Usage(format!(
                "unknown suite '{other}' (expected all, oracle, permutation, reduction, sim, metrics)"
            )))
        }
    };

    let mut failed = false;
    for suite in suites {
        let result = match suite {
            "oracle" => verify::oracle_equivalence(args.seed, 100_000),
            "permutation" => verify::permutation_coverage(args.seed),
            "reduction" => verify::reduction_equivalence(args.seed),
            "sim" => verify::sim_differential(args.seed, 10, 10_000),
            "metrics" => verify::metrics_oracle(args.seed, 100_000),
            _ => unreachable!(),
        };
        match result {
            Ok(()) => println!("suite {suite}: ok"),
            Err(reproducer) => {
                println!("suite {suite}: FAIL {reproducer}");
                failed = true;
            }
        }
    }
    if failed {
        Err(CmdError::Verification)
    } else {
        Ok(())
    }
}
