//! Feasibility caps shared by the loaders, the module search and the
//! topology builder.

use crate::error::{Error, Result};

/// Name of the environment variable read by [`Caps::from_env`].
///
/// Format: comma-separated `key=value` pairs, e.g.
/// `order=20000,module=65536,matrices=1048576,points=20`.
pub const CAPS_ENV: &str = "NORMSPEC_CAPS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest group order materialized from either representation.
    pub max_order: usize,
    /// Largest `p^d` for which simplicity is decided by spinning.
    pub max_module_vectors: usize,
    /// Largest `p^(d*d)` for which the matrix space is enumerated.
    pub max_matrix_space: usize,
    /// Spaces with more points than this are queried lazily instead of
    /// materializing their closed-set family.
    pub materialize_points: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_order: 10_000,
            max_module_vectors: 1 << 16,
            max_matrix_space: 1 << 20,
            materialize_points: 20,
        }
    }
}

impl Caps {
    pub fn from_env() -> Result<Caps> {
        match std::env::var(CAPS_ENV) {
            Ok(spec) => Caps::parse(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn parse(spec: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("malformed cap `{part}`")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("malformed cap value in `{part}`")))?;
            match key.trim() {
                "order" => caps.max_order = value.min(u16::MAX as usize),
                "module" => caps.max_module_vectors = value,
                "matrices" => caps.max_matrix_space = value,
                "points" => caps.materialize_points = value,
                other => return Err(Error::Invalid(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }
}
