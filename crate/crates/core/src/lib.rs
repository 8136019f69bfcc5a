// SPDX-License-Identifier: Apache-2.0

//! Scan-mode power analysis and reduction for gate-level circuits.
//!
//! The crate reads `.bench` netlists, maps them onto a NAND/NOR/INV library,
//! multiplexes the scan-cell outputs that have timing slack, and searches for
//! a pattern on the controllable inputs that keeps scan-chain transitions out
//! of the combinational logic while parking it in a low-leakage state.
//!
//! The pipeline is split into:
//!
//! * [`netlist`]: parsing, validation, technology mapping, levelization
//! * [`timing`]: static timing and multiplexer insertion
//! * [`leakage`]: analytic leakage model, leakage tables, leakage observability
//! * [`simulate`]: three-valued simulation, scan-shift replay, dynamic power
//! * [`pattern`]: transition-blocking pattern search, don't-care fill, input reordering
//! * [`report`]: the three-way comparison and its text/CSV output

pub mod leakage;
pub mod netlist;
pub mod pattern;
pub mod report;
pub mod rng;
pub mod simulate;
pub mod timing;

pub use leakage::{LeakageTable, Technology};
pub use netlist::{Circuit, GateId, GateKind, LineId};
pub use simulate::{Assignment, Logic3};
