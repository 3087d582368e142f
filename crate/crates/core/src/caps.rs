//! Guard caps for the exhaustive routines.

use thiserror::Error;

/// Environment variable read by [`Caps::from_env`].
pub const CAPS_ENV: &str = "DAGCLUST_CAPS";

/// Limits that keep exhaustive searches from running away.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest instance `brute_force_opt` accepts.
    pub brute_force_nodes: usize,
    /// Most maximal matchings an enumeration may produce.
    pub matchings: u64,
    /// Most source-to-sink paths a path enumeration may produce.
    pub paths: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            brute_force_nodes: 12,
            matchings: 1_000_000,
            paths: 1_000_000,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("bad {CAPS_ENV} entry `{entry}`: expected nodes=N, matchings=N or paths=N")]
pub struct CapsParseError {
    pub entry: String,
}

impl Caps {
    /// Parses a comma-separated override list such as `nodes=10,matchings=5000`.
    /// Keys that are not mentioned keep their defaults.
    pub fn parse(overrides: &str) -> Result<Self, CapsParseError> {
        let mut caps = Caps::default();
        for entry in overrides.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let bad = || CapsParseError { entry: entry.to_owned() };
            let (key, value) = entry.split_once('=').ok_or_else(bad)?;
            let value: u64 = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "nodes" => caps.brute_force_nodes = usize::try_from(value).map_err(|_| bad())?,
                "matchings" => caps.matchings = value,
                "paths" => caps.paths = value,
                _ => return Err(bad()),
            }
        }
        Ok(caps)
    }

    /// Defaults overridden by `DAGCLUST_CAPS` when it is set.
    pub fn from_env() -> Result<Self, CapsParseError> {
        match std::env::var(CAPS_ENV) {
            Ok(overrides) => Self::parse(&overrides),
            Err(_) => Ok(Caps::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_overrides() {
        let caps = Caps::parse("nodes=9, paths=50").unwrap();
        assert_eq!(caps.brute_force_nodes, 9);
        assert_eq!(caps.paths, 50);
        assert_eq!(caps.matchings, Caps::default().matchings);
        assert_eq!(Caps::parse("").unwrap(), Caps::default());
    }

    #[test]
    fn rejects_garbage() {
        assert!(Caps::parse("nodes").is_err());
        assert!(Caps::parse("widgets=3").is_err());
        assert!(Caps::parse("paths=-1").is_err());
    }
}
