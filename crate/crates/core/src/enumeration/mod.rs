//! Graph form of operators, exhaustive enumeration, equivalence orbits,
//! the splitting classification, and the non-splitting obstruction filter.

mod classify;
mod graph;
mod obstruction;
mod orbit;
mod search;

pub use classify::{
    classify_splitting, expected_psl2_classes, psl2_expectation, ClassificationReport, ExpectationStatus, SplittingClass,
};
pub use graph::{graph_of, rb_from_graph, QTransform, RbGraph, TransformKind};
pub use obstruction::{nonsplitting_obstruction, ObstructionEntry, ObstructionReport, Survivor};
pub use orbit::{classify_equivalence, q_orbit, EquivalenceClass, OrbitContext};
pub use search::{brute_force_rb, enumerate_rb};
