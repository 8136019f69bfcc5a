// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use crate::leakage::Observability;
use crate::netlist::{Circuit, GateId, LineId};
use crate::simulate::{Assignment, CapacitanceModel, InputPattern};

use super::frontier::update_frontier;
use super::justify::{justify, scan_mode_assignment};
use super::SearchConfig;

/// Outcome of one blocking attempt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockRecord {
    pub gate: GateId,
    pub blocked: bool,
    /// Side input that received the controlling value.
    pub side_input: Option<LineId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    /// Values on every controlled input, X where the search left it free.
    pub pattern: InputPattern,
    pub report: Vec<BlockRecord>,
    /// Scan-mode assignment under the pattern, non-controlled sources at X.
    pub assignment: Assignment,
    pub iterations: usize,
    /// Transition nodes when the search stopped.
    pub tns: BTreeSet<LineId>,
}

impl SearchOutcome {
    pub fn blocked_gates(&self) -> impl Iterator<Item = GateId> + '_ {
        self.report.iter().filter(|r| r.blocked).map(|r| r.gate)
    }

    /// `gate_id,blocked,assigned_side_input` rows.
    pub fn report_csv(&self, c: &Circuit) -> String {
        let mut s = String::from("gate_id,blocked,assigned_side_input\n");
        for r in &self.report {
            let side = r.side_input.map(|l| c.line_name(l)).unwrap_or("");
            s.push_str(&format!("{},{},{}\n", r.gate, r.blocked, side));
        }
        s
    }
}

/// Iteration budget of the search loop.
pub fn iteration_budget(c: &Circuit) -> usize {
    c.num_gates().max(1) * c.max_fanout().max(1)
}

/// Finds values for the controlled inputs that block transitions from the
/// non-multiplexed pseudo-inputs.
///
/// Starting from those pseudo-inputs as transition nodes, the gate with the
/// largest output load among the transition gates is taken and the
/// controlling value is justified on one of its X side inputs, tried in
/// leakage-observability order (ascending for a controlling 1, descending
/// for 0). A blocked gate's output carries no transition and is dropped; an
/// unblocked one adds its output to the transition nodes. The loop ends when
/// no transition gate is left.
pub fn find_controlled_input_pattern(
    c: &Circuit,
    lo: &Observability,
    cfg: &SearchConfig,
    cap: &CapacitanceModel,
) -> SearchOutcome {
    let mut a = scan_mode_assignment(c);
    let multiplexed = c.multiplexed();
    let mut tns: BTreeSet<LineId> = c
        .scan_chain()
        .iter()
        .copied()
        .filter(|l| !multiplexed.contains(l))
        .collect();
    let mut processed = BTreeSet::new();
    let mut report = Vec::new();
    let budget = iteration_budget(c);
    let mut iterations = 0;
    loop {
        if !cfg.literal_step_f {
            tns.retain(|&l| a.get(l).is_x());
        }
        let frontier = update_frontier(c, &a, &tns, cap);
        tns = frontier.tns;
        let Some(g) = frontier.tgs.into_iter().find(|g| !processed.contains(g)) else {
            break;
        };
        iterations += 1;
        assert!(iterations <= budget, "search exceeded its iteration budget");
        processed.insert(g);
        let gate = c.gate(g);
        let cv = gate.kind.controlling_value().expect("transition gates are AND-like");
        let mut candidates: Vec<LineId> = gate
            .inputs
            .iter()
            .copied()
            .filter(|l| a.get(*l).is_x() && !tns.contains(l))
            .collect();
        candidates.dedup();
        if cfg.directed {
            candidates.sort_by(|&x, &y| {
                let ord = lo.get(x).total_cmp(&lo.get(y));
                let ord = if cv { ord } else { ord.reverse() };
                ord.then(x.cmp(&y))
            });
        }
        let side = candidates
            .into_iter()
            .find(|&l| justify(c, &mut a, (l, cv), lo, cfg));
        report.push(BlockRecord {
            gate: g,
            blocked: side.is_some(),
            side_input: side,
        });
        if side.is_none() || cfg.literal_step_f {
            tns.insert(gate.output);
        }
    }
    let mut pattern = InputPattern::new();
    for l in c.controlled_inputs() {
        pattern.set(l, a.get(l));
    }
    SearchOutcome {
        pattern,
        report,
        assignment: a,
        iterations,
        tns,
    }
}
