// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use crate::netlist::{Circuit, GateId, GateKind, LineId};
use crate::simulate::{Assignment, CapacitanceModel, Logic3};

/// Lines that may carry scan transitions (TNS) and the gates where such a
/// transition could still be stopped (TGS), largest output load first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TransitionFrontier {
    pub tns: BTreeSet<LineId>,
    pub tgs: Vec<GateId>,
}

/// Pushes transitions forward from `tns` until every reached gate either
/// blocks, propagates or waits on an X side input.
///
/// Inverters, buffers and parity gates always propagate. An AND-like gate
/// blocks when a side input holds its controlling value, propagates when
/// every side input holds the other value, and otherwise joins the TGS. A
/// multiplexer whose select is 1 passes only its constant leg.
pub fn update_frontier(
    c: &Circuit,
    a: &Assignment,
    tns: &BTreeSet<LineId>,
    cap: &CapacitanceModel,
) -> TransitionFrontier {
    let mut out = tns.clone();
    let mut work: Vec<LineId> = tns.iter().copied().collect();
    let mut pending = BTreeSet::new();
    while let Some(l) = work.pop() {
        for &(g, pin) in c.fanout(l) {
            let gate = c.gate(g);
            if out.contains(&gate.output) {
                continue;
            }
            let propagate = match gate.kind {
                GateKind::Inv | GateKind::Buf | GateKind::Xor | GateKind::Xnor => true,
                GateKind::Mux2 => !(pin == 1 && a.get(gate.inputs[0]) == Logic3::One),
                kind => {
                    let cv = Logic3::from_bool(kind.controlling_value().expect("AND-like gate"));
                    let sides = gate
                        .inputs
                        .iter()
                        .enumerate()
                        .filter(|&(p, _)| p != pin)
                        .map(|(_, &s)| a.get(s));
                    let mut all_nc = true;
                    let mut blocked = false;
                    for v in sides {
                        blocked |= v == cv;
                        all_nc &= v == !cv;
                    }
                    if blocked {
                        false
                    } else if all_nc {
                        true
                    } else {
                        pending.insert(g);
                        false
                    }
                }
            };
            if propagate {
                out.insert(gate.output);
                work.push(gate.output);
            }
        }
    }
    let mut tgs: Vec<GateId> = pending
        .into_iter()
        .filter(|&g| !out.contains(&c.gate(g).output))
        .collect();
    tgs.sort_by(|&x, &y| cap.load(c, y).total_cmp(&cap.load(c, x)).then(x.cmp(&y)));
    TransitionFrontier { tns: out, tgs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;

    fn frontier(text: &str, side: Logic3) -> (Circuit, TransitionFrontier) {
        let c = parse_bench(text, "f").unwrap();
        let mut a = Assignment::unknown(&c);
        if let Some(b) = c.line_id("b") {
            a.set(b, side);
        }
        a.propagate(&c);
        let tns = BTreeSet::from([c.line_id("q").unwrap()]);
        let f = update_frontier(&c, &a, &tns, &CapacitanceModel::default());
        (c, f)
    }

    const NAND: &str = "INPUT(b)\nOUTPUT(y)\nq = DFF(y)\ny = NAND(q, b)\n";

    #[test]
    fn inverter_always_propagates() {
        let (c, f) = frontier("INPUT(b)\nOUTPUT(y)\nq = DFF(y)\ny = NOT(q)\n", Logic3::X);
        assert!(f.tns.contains(&c.line_id("y").unwrap()));
        assert!(f.tgs.is_empty());
    }

    #[test]
    fn controlling_side_input_blocks() {
        let (c, f) = frontier(NAND, Logic3::Zero);
        assert!(!f.tns.contains(&c.line_id("y").unwrap()));
        assert!(f.tgs.is_empty());
    }

    #[test]
    fn non_controlling_side_input_propagates() {
        let (c, f) = frontier(NAND, Logic3::One);
        assert!(f.tns.contains(&c.line_id("y").unwrap()));
        assert!(f.tgs.is_empty());
    }

    #[test]
    fn unknown_side_input_waits() {
        let (c, f) = frontier(NAND, Logic3::X);
        assert_eq!(f.tgs, vec![0]);
        assert!(!f.tns.contains(&c.line_id("y").unwrap()));
    }

    #[test]
    fn larger_load_first() {
        let text = "INPUT(b)\nOUTPUT(y)\nOUTPUT(z)\nOUTPUT(w)\nq = DFF(y)\n\
                    y = NAND(q, b)\nz = NOR(q, b)\nw = NOT(z)\nv = NOT(z)\n";
        let (c, f) = frontier(text, Logic3::X);
        let z = c.driving_gate(c.line_id("z").unwrap()).unwrap();
        let y = c.driving_gate(c.line_id("y").unwrap()).unwrap();
        assert_eq!(f.tgs, vec![z, y]);
    }
}
