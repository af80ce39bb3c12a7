//! Library half of the command-line tool: instance generation, benchmark
//! sweeps, SVG plotting, and the process exit-code policy.

pub mod bench;
pub mod plot;

use covlife::Error;

/// Process exit code for an error: 1 for anything wrong with the input or
/// the requested combination, 2 for a solver giving up, 3 for a size or
/// retry cap.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::ResampleLimit(_) | Error::RetryLimit { .. } | Error::SolverStall(_) => 2,
        Error::CapExceeded(_) | Error::CopyBudget { .. } => 3,
        _ => 1,
    }
}
