//! Engine settings and the precision-doubling restart loop.

use crate::error::{Error, Result};
use crate::ffield::set_global_seed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Initial working precision ν₀ (coefficients are kept modulo p^ν).
    pub start_precision: u32,
    /// Restart cap for ν.
    pub max_precision: u32,
    /// Print every Newton polygon to stderr.
    pub debug_polygons: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { start_precision: 30, max_precision: 1 << 20, debug_polygons: false }
    }
}

impl Config {
    /// Reads `OMVALS_START_PRECISION`, `OMVALS_MAX_PRECISION` and `OMVALS_SEED`.
    pub fn from_env() -> Result<Config> {
        let mut c = Config::default();
        let num = |key: &str| -> Result<Option<u64>> {
            match std::env::var(key) {
                Ok(v) => v
                    .trim()
                    .parse::<u64>()
                    .map(Some)
                    .map_err(|_| Error::Parse(format!("{key}={v} is not a non-negative integer"))),
                Err(_) => Ok(None),
            }
        };
        if let Some(v) = num("OMVALS_START_PRECISION")? {
            c.start_precision = v.max(1) as u32;
        }
        if let Some(v) = num("OMVALS_MAX_PRECISION")? {
            c.max_precision = v.max(1) as u32;
        }
        if let Some(v) = num("OMVALS_SEED")? {
            set_global_seed(v);
        }
        Ok(c)
    }
}

/// Runs `body` at ν₀, 2ν₀, 4ν₀, … until it stops asking for more precision.
pub(crate) fn with_precision<T>(cfg: &Config, mut body: impl FnMut(u32) -> Result<T>) -> Result<T> {
    let mut nu = cfg.start_precision.min(cfg.max_precision);
    loop {
        match body(nu) {
            Err(Error::InsufficientPrecision) => {
                if nu >= cfg.max_precision {
                    return Err(Error::PrecisionLimit(cfg.max_precision));
                }
                nu = nu.saturating_mul(2).min(cfg.max_precision);
            }
            other => return other,
        }
    }
}
