//! Shared fixtures for the criterion benches.

use rbgroup::catalog::named_group;
use rbgroup::FiniteGroup;

/// Catalog group by id; panics on a bad id since bench ids are fixed.
pub fn group(id: &str) -> FiniteGroup {
    named_group(id).unwrap_or_else(|e| panic!("bench group {id}: {e}"))
}
