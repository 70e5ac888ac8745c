//! Exact substructure counters.

mod config;
mod cuboctahedra;
mod girth;
mod intercalates;
mod subsquares;

pub use config::{count_configuration, ColoredTripleSystem};
pub use cuboctahedra::{
    classify_degenerate_cuboctahedra, count_cuboctahedra_nondegenerate, count_cuboctahedra_nondegenerate_partial,
    count_cuboctahedra_total, count_cuboctahedra_total_partial, cuboctahedra_report, cuboctahedra_report_partial,
    CountReport, CuboctClass,
};
pub use girth::{girth, hypergraph_girth, is_free_through, Girth, Hypergraph3};
pub use intercalates::{count_intercalates, count_intercalates_partial, count_intercalates_rect};
pub use subsquares::count_subsquares;
#[allow(unused_imports)]
pub(crate) use subsquares::{binomial, next_combination};
