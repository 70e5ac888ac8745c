//! Fractional triangle decompositions of tripartite graphs: weight functions
//! on a triangle set, the vertex-balancing start `φ₀`, the 6-cycle adjustment
//! map, and randomized rounding to a near-regular triangle subset.

mod adjust;
mod boost;
mod gadgets;
mod triangles;
mod weights;

pub use adjust::{adjust, Adjuster, CycleCensus, CycleMode, BALANCE_TOLERANCE};
pub use boost::{
    boost, check_conditions, edge_counts, round_weights, BoostOutcome, ConditionCheck, ConditionReport, RegParams,
    TraceRow,
};
pub use gadgets::{
    adjust_reference, apex_set, chi_part, chi_uv, cycles_through, f_values, phi0, psi_cycle, psi_edge, SixCycle,
};
pub use triangles::{EdgeId, TriangleSet};
pub use weights::WeightFunction;
