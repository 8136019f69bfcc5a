// SPDX-License-Identifier: Apache-2.0

use crate::leakage::Observability;
use crate::netlist::{Circuit, Driver, GateKind, LineId};
use crate::simulate::{Assignment, Logic3};

use super::SearchConfig;

/// Scan-mode starting point: scan enable at 1, every other source X.
pub fn scan_mode_assignment(c: &Circuit) -> Assignment {
    let mut a = Assignment::unknown(c);
    if let Some(se) = c.scan_enable() {
        a.set(se, Logic3::One);
    }
    a.propagate(c);
    a
}

fn is_controlled(c: &Circuit, l: LineId) -> bool {
    matches!(c.driver(l), Driver::PrimaryInput | Driver::MuxConstant)
}

/// Lines that are X and reachable from an X controlled input over X lines.
fn x_paths(c: &Circuit, a: &Assignment) -> Vec<bool> {
    let mut reach: Vec<bool> = (0..c.num_lines())
        .map(|l| a.get(l).is_x() && is_controlled(c, l))
        .collect();
    for &g in c.topo_order() {
        let gate = c.gate(g);
        if a.get(gate.output).is_x() && gate.inputs.iter().any(|&l| reach[l]) {
            reach[gate.output] = true;
        }
    }
    reach
}

fn pick(cands: impl Iterator<Item = LineId>, want: bool, lo: &Observability, directed: bool) -> Option<LineId> {
    let mut best: Option<LineId> = None;
    for l in cands {
        best = match best {
            None => Some(l),
            Some(b) if directed => {
                let (lb, ll) = (lo.get(b), lo.get(l));
                // Setting 1: least observable; setting 0: most observable.
                let better = if want { ll < lb } else { ll > lb } || (ll == lb && l < b);
                Some(if better { l } else { b })
            }
            keep => keep,
        };
    }
    best
}

fn trace(
    c: &Circuit,
    a: &Assignment,
    objective: (LineId, bool),
    lo: &Observability,
    directed: bool,
) -> Option<(LineId, bool)> {
    let reach = x_paths(c, a);
    let (mut l, mut v) = objective;
    loop {
        if !reach[l] {
            return None;
        }
        if is_controlled(c, l) {
            return Some((l, v));
        }
        let gate = c.gate(c.driving_gate(l)?);
        let x_inputs = || gate.inputs.iter().copied().filter(|&i| reach[i]);
        let (next, want) = match gate.kind {
            GateKind::Inv | GateKind::Buf => (gate.inputs[0], v ^ (gate.kind == GateKind::Inv)),
            GateKind::Nand | GateKind::Nor | GateKind::And | GateKind::Or => {
                let want = v ^ gate.kind.is_inverting();
                (pick(x_inputs(), want, lo, directed)?, want)
            }
            GateKind::Xor | GateKind::Xnor => {
                let parity = gate
                    .inputs
                    .iter()
                    .filter_map(|&i| a.get(i).to_bool())
                    .fold(gate.kind == GateKind::Xnor, |p, b| p ^ b);
                (x_inputs().next()?, v ^ parity)
            }
            GateKind::Mux2 => {
                let pin = match a.get(gate.inputs[0]) {
                    Logic3::One => 2,
                    Logic3::Zero => 1,
                    Logic3::X => {
                        if reach[gate.inputs[2]] {
                            2
                        } else {
                            1
                        }
                    }
                };
                (gate.inputs[pin], v)
            }
        };
        l = next;
        v = want;
    }
}

/// Maps an objective `(line, value)` to a controlled input and the value to
/// try on it.
///
/// The walk goes backward over X lines. At an AND-like gate the value
/// needed on its inputs is the objective value corrected for inversion; for
/// a needed 1 the input with the lowest leakage observability is taken, for
/// a needed 0 the highest (ties go to the lowest line id). Returns `None`
/// when no X path connects the objective to an unassigned controlled input.
pub fn backtrace(
    c: &Circuit,
    a: &Assignment,
    objective: (LineId, bool),
    lo: &Observability,
) -> Option<(LineId, bool)> {
    trace(c, a, objective, lo, true)
}

/// PODEM-style justification of `objective` using only controlled inputs.
///
/// Decisions come from backtrace; after each one the assignment is
/// re-simulated. When the objective takes the opposite value or loses its
/// X path, the newest untried decision is flipped and exhausted ones are
/// undone. Gives up after `cfg.backtrack_limit` flips. On failure `a` is
/// restored exactly.
pub fn justify(
    c: &Circuit,
    a: &mut Assignment,
    objective: (LineId, bool),
    lo: &Observability,
    cfg: &SearchConfig,
) -> bool {
    let (line, value) = objective;
    if !a.is_simulated() {
        a.propagate(c);
    }
    let target = Logic3::from_bool(value);
    if a.get(line) == target {
        return true;
    }
    if a.get(line) == !target {
        return false;
    }
    let saved = a.clone();
    let mut decisions: Vec<(LineId, bool, bool)> = Vec::new();
    let mut flips = 0;
    loop {
        let v = a.get(line);
        if v == target {
            return true;
        }
        if v.is_x() {
            if let Some((input, bit)) = trace(c, a, objective, lo, cfg.directed) {
                a.set(input, Logic3::from_bool(bit));
                a.propagate(c);
                decisions.push((input, bit, false));
                continue;
            }
        }
        // Conflict: flip the newest decision that still has an alternative.
        loop {
            match decisions.pop() {
                None => {
                    *a = saved;
                    return false;
                }
                Some((input, bit, false)) => {
                    flips += 1;
                    if flips > cfg.backtrack_limit {
                        *a = saved;
                        return false;
                    }
                    a.set(input, Logic3::from_bool(!bit));
                    a.propagate(c);
                    decisions.push((input, !bit, true));
                    break;
                }
                Some((input, _, true)) => a.set(input, Logic3::X),
            }
        }
    }
}
