// SPDX-License-Identifier: Apache-2.0

//! Mapping onto the NAND/NOR/INV library.

use std::collections::HashSet;

use super::{Circuit, GateKind, LineId, RawCircuit};

struct Mapper {
    raw: RawCircuit,
    names: HashSet<String>,
}

impl Mapper {
    fn fresh(&mut self, base: &str, tag: &str) -> LineId {
        let mut k = 0;
        loop {
            let name = format!("{base}_{tag}{k}");
            if self.names.insert(name.clone()) {
                return self.raw.add_line(name);
            }
            k += 1;
        }
    }

    fn gate(&mut self, kind: GateKind, inputs: Vec<LineId>, output: LineId) {
        self.raw.add_gate(kind, inputs, output);
    }

    /// Four-NAND exclusive-or of two lines into `out`.
    fn xor2(&mut self, a: LineId, b: LineId, out: LineId, base: &str) {
        let n1 = self.fresh(base, "x");
        let n2 = self.fresh(base, "x");
        let n3 = self.fresh(base, "x");
        self.gate(GateKind::Nand, vec![a, b], n1);
        self.gate(GateKind::Nand, vec![a, n1], n2);
        self.gate(GateKind::Nand, vec![b, n1], n3);
        self.gate(GateKind::Nand, vec![n2, n3], out);
    }
}

/// Rewrites every gate with library cells.
///
/// `AND`/`OR` become `NAND`/`NOR` plus an inverter, `BUFF` a pair of
/// inverters and two-input `XOR` the four-NAND network (wider ones are
/// chained); `XNOR` adds an inverter. Wide NAND/NOR stay n-ary. Original
/// line names are kept, new internal lines get a suffix of the form
/// `<output>_<tag><k>`.
pub fn tech_map(c: &Circuit) -> Circuit {
    if c.is_mapped() {
        return c.clone();
    }
    let src = c.to_raw();
    let mut m = Mapper {
        names: src.line_names.iter().cloned().collect(),
        raw: RawCircuit {
            gates: Vec::new(),
            gate_origin: Vec::new(),
            ..src.clone()
        },
    };
    for gate in &src.gates {
        let out = gate.output;
        let base = src.line_names[out].clone();
        let ins = gate.inputs.clone();
        match gate.kind {
            GateKind::Nand | GateKind::Nor | GateKind::Inv | GateKind::Mux2 => {
                m.gate(gate.kind, ins, out)
            }
            GateKind::And | GateKind::Or => {
                let t = m.fresh(&base, "n");
                let k = if gate.kind == GateKind::And {
                    GateKind::Nand
                } else {
                    GateKind::Nor
                };
                m.gate(k, ins, t);
                m.gate(GateKind::Inv, vec![t], out);
            }
            GateKind::Buf => {
                let t = m.fresh(&base, "b");
                m.gate(GateKind::Inv, ins, t);
                m.gate(GateKind::Inv, vec![t], out);
            }
            GateKind::Xor | GateKind::Xnor => {
                let last = if gate.kind == GateKind::Xnor {
                    m.fresh(&base, "p")
                } else {
                    out
                };
                let mut acc = ins[0];
                for (i, &b) in ins.iter().enumerate().skip(1) {
                    let target = if i + 1 == ins.len() {
                        last
                    } else {
                        m.fresh(&base, "p")
                    };
                    m.xor2(acc, b, target, &base);
                    acc = target;
                }
                if gate.kind == GateKind::Xnor {
                    m.gate(GateKind::Inv, vec![last], out);
                }
            }
        }
    }
    Circuit::from_raw(m.raw).expect("technology mapping preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;
    use crate::simulate::simulate_bool;

    fn truth_table(c: &Circuit) -> Vec<Vec<bool>> {
        let ins = c.primary_inputs().to_vec();
        (0..1u32 << ins.len())
            .map(|v| {
                let bits: Vec<bool> = (0..ins.len()).map(|i| v >> i & 1 == 1).collect();
                let vals = simulate_bool(c, &ins, &bits);
                c.primary_outputs().iter().map(|&o| vals[o]).collect()
            })
            .collect()
    }

    #[test]
    fn mapped_circuit_is_unchanged() {
        let c = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n", "inv").unwrap();
        let m = tech_map(&c);
        assert_eq!(m.num_gates(), 1);
        assert_eq!(m.gate(0).kind, GateKind::Inv);
    }

    #[test]
    fn and_becomes_nand_inv() {
        let c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n", "and").unwrap();
        let m = tech_map(&c);
        assert!(m.is_mapped());
        let kinds: Vec<GateKind> = m.topo_order().iter().map(|&g| m.gate(g).kind).collect();
        assert_eq!(kinds, [GateKind::Nand, GateKind::Inv]);
        assert_eq!(truth_table(&c), truth_table(&m));
        assert_eq!(truth_table(&m), vec![vec![false], vec![false], vec![false], vec![true]]);
    }

    #[test]
    fn xor_becomes_four_nands() {
        let c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR(a, b)\n", "xor").unwrap();
        let m = tech_map(&c);
        assert_eq!(m.num_gates(), 4);
        assert!(m.gates().iter().all(|g| g.kind == GateKind::Nand));
        assert_eq!(truth_table(&m), vec![vec![false], vec![true], vec![true], vec![false]]);
    }

    #[test]
    fn wide_and_mixed_gates_keep_function() {
        let text = "INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(x)\nOUTPUT(y)\nOUTPUT(z)\n\
                    x = XNOR(a, b, c)\ny = OR(a, b, c)\nz = BUFF(x)\n";
        let c = parse_bench(text, "mix").unwrap();
        let m = tech_map(&c);
        assert!(m.is_mapped());
        assert_eq!(truth_table(&c), truth_table(&m));
        assert_eq!(m.line_id("x"), c.line_id("x"));
    }
}
