//! Library half of the `symcoh` command-line tool: problem files,
//! machine-readable reports, and the verification suite. The binary in
//! `main.rs` is a thin argument-parsing shell over these.

pub mod problem;
pub mod report;
pub mod verify;

use symcoh_core::cohomology::CohomologyError;

/// Exit codes: 0 success, 1 validity error, 2 internal assertion
/// (disagreement, `D^2 != 0`, negative dimension).
pub fn exit_code_for(err: &CohomologyError) -> i32 {
    if err.is_internal() {
        2
    } else {
        1
    }
}
