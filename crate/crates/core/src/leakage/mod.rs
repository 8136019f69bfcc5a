// SPDX-License-Identifier: Apache-2.0

//! Static power: analytic device leakage, per-cell leakage tables and
//! leakage observability.

mod model;
mod observability;
mod table;

use thiserror::Error;

use crate::netlist::GateKind;

pub use model::{
    gate_current, gate_tunneling_density, subthreshold_current, DeviceParams, Technology,
};
pub use observability::{
    leakage_observability, leakage_observability_over, mean_leakage, ObsMode, Observability,
    EXHAUSTIVE_LIMIT_BITS,
};
pub use table::{
    build_leakage_table, calibration_scale, cell_leakage, reference_table, static_power,
    BoundTable, LeakageTable, TableSource, NAND2_REFERENCE, STANDARD_CELLS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LeakageError {
    #[error("no leakage entry for {kind}/{arity} pattern {pattern}")]
    MissingEntry {
        kind: GateKind,
        arity: usize,
        pattern: String,
    },
    #[error("{0} cells are not characterized")]
    Unsupported(String),
    #[error("gate input `{0}` is X; leakage is undefined")]
    UnknownValue(String),
    #[error("oxide voltage {vox} V outside [0, {phi_ox}) V")]
    Domain { vox: f64, phi_ox: f64 },
    #[error("invalid device parameter: {0}")]
    Param(String),
    #[error("leakage table line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("exhaustive enumeration over {0} inputs exceeds the limit of 2^20 vectors")]
    TooManyInputs(usize),
}
