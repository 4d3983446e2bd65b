//! File formats, reports, verification suites and the command-line front end
//! for `supermech-core`.

pub mod analyze;
pub mod atlas_check;
pub mod atlas_file;
pub mod bundled;
pub mod error;
pub mod expr;
pub mod gen;
pub mod model;
pub mod oracle;
pub mod report;
pub mod verify;

pub use error::{CliError, ParseError};

/// Seed used by `verify` when neither `--seed` nor `SUPERMECH_SEED` is set.
pub const DEFAULT_SEED: u64 = 20240601;

/// Seed from the flag, else the environment, else the default.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("SUPERMECH_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| format!("SUPERMECH_SEED is not an unsigned integer: `{v}`")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}
