//! Random greedy triangle removal on `K_{n,n,n}`, plain and girth-constrained,
//! and the independent random models `B_{n,p}` / `G*`.

mod bnp;
mod indexed;
mod state;
mod trajectory;

pub use bnp::{expected_nondegenerate_cuboctahedra, g_star_filter, sample_bnp, RandomTripleSystem};
pub use state::{Exhausted, ProcessState, SelectionMode, REJECTION_LIMIT};
pub use trajectory::{
    a_of_t, analytic_log_count, analytic_partial, default_checkpoints, log_count_estimate, run_process,
    run_process_with_rng, unconstrained_profile, Observation, ProcessConfig, ProcessRun, Trajectory,
};
