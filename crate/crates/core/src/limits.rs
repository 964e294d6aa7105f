use serde::{Deserialize, Serialize};

/// Work limits shared by every search in the crate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest group order that may be constructed at all.
    pub max_group_order: usize,
    /// Largest group order kept as a dense multiplication table.
    pub dense_order: usize,
    /// Largest group order whose subgroup lattice may be computed.
    pub lattice_order: usize,
    /// Largest number of subgroups a lattice may hold.
    pub max_subgroups: usize,
    /// Node budget for homomorphism backtracking and the extension search space.
    pub search_nodes: u64,
    /// Pairs drawn in sampled verification.
    pub sample_count: u64,
    /// Largest group on which the graph-subgroup enumeration runs.
    pub enumerate_order: usize,
    /// Largest group on which exhaustive map iteration runs.
    pub brute_force_order: usize,
    /// Largest group order for which full verification is mandatory.
    pub full_verify_order: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_group_order: 200_000,
            dense_order: 10_000,
            lattice_order: 10_000,
            max_subgroups: 500_000,
            search_nodes: 100_000_000,
            sample_count: 1_000_000,
            enumerate_order: 16,
            brute_force_order: 8,
            full_verify_order: 10_000,
        }
    }
}
