//! Resource caps for enumeration and brute-force verification.

use crate::error::{Error, Result};

pub const MAX_POINTS_ENV: &str = "COARSE_COVER_MAX_POINTS";
pub const MAX_PAIRS_ENV: &str = "COARSE_COVER_MAX_PAIRS";

/// Explicit caps on window sizes and on the number of point pairs a single
/// predicate may examine. Exceeding a cap is an error, never a silent sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_window_points: u64,
    pub max_pair_checks: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_window_points: 100_000,
            max_pair_checks: 1_000_000_000,
        }
    }
}

impl Limits {
    /// Defaults, overridden by `COARSE_COVER_MAX_POINTS` / `COARSE_COVER_MAX_PAIRS`.
    pub fn from_env() -> Result<Self> {
        let mut limits = Limits::default();
        if let Some(v) = read_env(MAX_POINTS_ENV)? {
            limits.max_window_points = v;
        }
        if let Some(v) = read_env(MAX_PAIRS_ENV)? {
            limits.max_pair_checks = v;
        }
        Ok(limits)
    }

    pub fn check_points(&self, requested: u64) -> Result<()> {
        if requested > self.max_window_points {
            return Err(Error::ResourceCap {
                cap: "max_window_points",
                limit: self.max_window_points,
                requested,
            });
        }
        Ok(())
    }

    pub fn check_pairs(&self, requested: u64) -> Result<()> {
        if requested > self.max_pair_checks {
            return Err(Error::ResourceCap {
                cap: "max_pair_checks",
                limit: self.max_pair_checks,
                requested,
            });
        }
        Ok(())
    }
}

fn read_env(name: &str) -> Result<Option<u64>> {
    match std::env::var(name) {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Error::Validation(format!("{name} must be a nonnegative integer, got `{text}`"))),
        Err(_) => Ok(None),
    }
}
