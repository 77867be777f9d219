//! Permutation groups acting on subsets: invariance groups of unordered
//! relations, regular sets, orbit closure, and imprimitive wreath products.
//!
//! Points are 0-based and permutations act on the right, so `p * q` applies
//! `p` first.

pub mod catalog;
pub mod census;
pub mod chains;
pub mod closure;
pub mod error;
mod field;
pub mod group;
pub mod notation;
pub mod orbits;
pub mod perm;
pub mod relation;
pub(crate) mod search;
pub mod structure;
pub mod subset;
pub mod wreath;

pub use error::{Error, Result};
pub use group::PermutationGroup;
pub use perm::{Permutation, MAX_DEGREE};
pub use relation::Relation;
pub use subset::Subset;

use serde::{Deserialize, Serialize};

/// Work limits shared by the exhaustive algorithms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest degree for unseeded searches over `Sym(n)`.
    pub max_degree_exhaustive: usize,
    /// Largest degree for k-closures and orbit closures.
    pub closure_max_degree: usize,
    /// Bound on `sum over g != 1 of 2^c(g)` for the census.
    pub census_work_cap: u128,
    pub census_max_degree: usize,
    /// Layers with more orbits than this are searched greedily.
    pub union_orbit_cap: usize,
    pub allow_greedy: bool,
    /// Groups up to this order are handled by listing elements.
    pub element_iteration_cap: u128,
    /// Largest table indexed by subsets.
    pub dense_universe_cap: u128,
    pub chain_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_degree_exhaustive: 12,
            closure_max_degree: 10,
            census_work_cap: 1 << 30,
            census_max_degree: 28,
            union_orbit_cap: 12,
            allow_greedy: false,
            element_iteration_cap: 1_000_000,
            dense_universe_cap: 1 << 24,
            chain_cap: 64,
        }
    }
}

/// Sizes the global worker pool from `RELKIT_THREADS` when it is set.
/// Later calls, and calls after the pool has started, have no effect.
pub fn configure_threads_from_env() {
    if let Some(n) = std::env::var("RELKIT_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
