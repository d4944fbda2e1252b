//! Command-line front end: spec parsers, report emission and the parallel
//! sweeps behind the `nal` binary.

pub mod boundary;
pub mod commands;
pub mod output;
pub mod plateau;
pub mod spec;
pub mod suite;
pub mod svg;

/// Caps rayon's global pool at `NAL_THREADS` when set. Later calls are
/// no-ops.
pub fn init_threads() {
    if let Some(n) = std::env::var("NAL_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// A core failure to converge or stay finite, as opposed to bad input.
#[derive(Debug)]
pub struct NumericalFailure(pub String);

impl std::fmt::Display for NumericalFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for NumericalFailure {}

pub fn core_error(e: nal_core::Error) -> anyhow::Error {
    match e {
        nal_core::Error::Numerical { .. } => anyhow::Error::new(NumericalFailure(e.to_string())),
        _ => anyhow::anyhow!("{e}"),
    }
}
