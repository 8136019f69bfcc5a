// SPDX-License-Identifier: Apache-2.0

//! Search for a controlled-input pattern that keeps scan-chain transitions
//! out of the combinational logic, followed by leakage-driven don't-care
//! fill and gate input reordering.
//!
//! During shifting the controlled inputs (primary inputs and multiplexer
//! constants) hold fixed values while the non-multiplexed pseudo-inputs
//! toggle. Their lines start the transition node set; gates reached by
//! transitions whose side inputs are still X are candidates for blocking,
//! which is attempted by justifying the controlling value on a side input.

mod fill;
mod frontier;
mod justify;
mod reorder;
mod search;

pub use fill::{fill_dont_cares, scan_leakage};
pub use frontier::{update_frontier, TransitionFrontier};
pub use justify::{backtrace, justify, scan_mode_assignment};
pub use reorder::{reorder_inputs, reorder_inputs_multi};
pub use search::{find_controlled_input_pattern, iteration_budget, BlockRecord, SearchOutcome};

/// How leakage observability is computed for the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoMode {
    /// Exhaustive up to 16 controlled inputs, otherwise sampled with 4096
    /// vectors per line and value.
    Auto,
    Exhaustive,
    Sampled(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Backtracks allowed per justification objective.
    pub backtrack_limit: usize,
    /// Completions tried by the don't-care fill.
    pub fill_trials: usize,
    pub seed: u64,
    pub lo_mode: LoMode,
    /// Order side inputs and backtrace choices by leakage observability;
    /// otherwise by pin order.
    pub directed: bool,
    /// Add the output of every processed gate to the transition nodes, even
    /// when it was blocked.
    pub literal_step_f: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            backtrack_limit: 1000,
            fill_trials: 1000,
            seed: 1,
            lo_mode: LoMode::Auto,
            directed: true,
            literal_step_f: false,
        }
    }
}
