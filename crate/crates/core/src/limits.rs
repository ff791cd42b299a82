//! Resource caps on dyadic levels.
//!
//! Most kernels allocate `2^n` values, so every entry point checks its level
//! against a cap. `TM_MAX_LEVEL` raises (or lowers) all caps at once.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const ENV_MAX_LEVEL: &str = "TM_MAX_LEVEL";

/// Default cap for midpoint tables and grid scans (`2^n` evaluations).
pub const DEFAULT_SCAN_LEVEL: u32 = 26;
/// Default cap for Fourier tables (`2^N` coefficients).
pub const DEFAULT_FOURIER_LEVEL: u32 = 22;
/// Default cap for brute-force word enumeration.
pub const DEFAULT_ENUM_LEVEL: u32 = 24;

/// Hard ceiling regardless of the override; words are packed in a `u64`.
pub const ABSOLUTE_MAX_LEVEL: u32 = 40;

fn env_override() -> Option<u32> {
    static OVERRIDE: OnceLock<Option<u32>> = OnceLock::new();
    *OVERRIDE.get_or_init(|| {
        std::env::var(ENV_MAX_LEVEL)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .map(|v| v.min(ABSOLUTE_MAX_LEVEL))
    })
}

/// The effective cap: the environment override if present, otherwise `default`.
pub fn cap(default: u32) -> u32 {
    env_override().unwrap_or(default)
}

pub fn check_level(level: u32, default_cap: u32) -> Result<()> {
    let cap = cap(default_cap);
    if level > cap {
        Err(Error::LevelCap { level, cap })
    } else {
        Ok(())
    }
}
