//! File formats, diagrams and the command-line front end for `shootcalc-core`.
//!
//! Formats:
//!
//! - scenario files: JSON lines, one scenario per line ([`scenario_io`]);
//! - labeled datasets: CSV with a fixed header ([`dataset_io`]);
//! - trained surrogates: a versioned line-oriented text format ([`model_io`]);
//! - per-target margin diagrams: SVG ([`svg`]).
//!
//! Every float that is written as text goes through [`fmt_f64`], so output
//! files are byte-identical across runs.

pub mod cli;
pub mod compare;
pub mod dataset_io;
mod error;
pub mod model_io;
pub mod scenario_io;
pub mod svg;

pub use error::{CliError, FormatError};

/// 17 significant digits in scientific notation; parses back to the same value.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}

/// Worker pool sized by `SHOOTCALC_THREADS` (unset or 0 means one per core).
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let threads = match std::env::var("SHOOTCALC_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("SHOOTCALC_THREADS must be a count, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for v in [0.0, -0.0, 1.0 / 3.0, 52.5, -6.51, 1e-300, 123456789.12345679, f64::MIN_POSITIVE] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(52.5), "5.2500000000000000e1");
    }
}
