// SPDX-License-Identifier: Apache-2.0

//! Gate-level circuit representation.
//!
//! A [`Circuit`] is the combinational part of a full-scan design: flip-flops
//! are cut, their outputs become pseudo-inputs and their data inputs become
//! pseudo-outputs. Every line has exactly one driver and the gate graph is
//! acyclic; both properties are checked on construction, after which the
//! circuit is immutable. Transformations return new circuits.

mod bench;
pub mod generate;
mod techmap;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub use bench::{parse_bench, to_bench};
pub use techmap::tech_map;
pub use generate::{surrogate, Shape, ISCAS89_SHAPES};

pub type LineId = usize;
pub type GateId = usize;

/// Cell kinds. `Nand`, `Nor`, `Inv` and `Mux2` form the target library; the
/// rest only exist before technology mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    Nand,
    Nor,
    Inv,
    /// Scan isolation multiplexer with pins `(select, data, constant)`.
    Mux2,
    And,
    Or,
    Xor,
    Xnor,
    Buf,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::Nand,
        GateKind::Nor,
        GateKind::Inv,
        GateKind::Mux2,
        GateKind::And,
        GateKind::Or,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Buf,
    ];

    /// Input value that alone decides the output.
    pub fn controlling_value(self) -> Option<bool> {
        match self {
            GateKind::Nand | GateKind::And => Some(false),
            GateKind::Nor | GateKind::Or => Some(true),
            _ => None,
        }
    }

    pub fn is_inverting(self) -> bool {
        matches!(self, GateKind::Nand | GateKind::Nor | GateKind::Inv | GateKind::Xnor)
    }

    pub fn is_library_cell(self) -> bool {
        matches!(self, GateKind::Nand | GateKind::Nor | GateKind::Inv | GateKind::Mux2)
    }

    pub fn arity_ok(self, arity: usize) -> bool {
        match self {
            GateKind::Inv | GateKind::Buf => arity == 1,
            GateKind::Mux2 => arity == 3,
            _ => arity >= 2,
        }
    }

    /// Keyword used by the `.bench` writer.
    pub fn keyword(self) -> &'static str {
        match self {
            GateKind::Nand => "NAND",
            GateKind::Nor => "NOR",
            GateKind::Inv => "NOT",
            GateKind::Mux2 => "MUX2",
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Buf => "BUFF",
        }
    }

    /// Case-insensitive keyword lookup. `NOT`/`INV` and `BUF`/`BUFF` are synonyms.
    pub fn from_keyword(word: &str) -> Option<GateKind> {
        let kind = match word.to_ascii_uppercase().as_str() {
            "NAND" => GateKind::Nand,
            "NOR" => GateKind::Nor,
            "NOT" | "INV" => GateKind::Inv,
            "MUX2" | "MUX" => GateKind::Mux2,
            "AND" => GateKind::And,
            "OR" => GateKind::Or,
            "XOR" => GateKind::Xor,
            "XNOR" => GateKind::Xnor,
            "BUF" | "BUFF" => GateKind::Buf,
            _ => return None,
        };
        Some(kind)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<LineId>,
    pub output: LineId,
}

/// A scan flip-flop, seen from the combinational side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipFlop {
    /// Flip-flop output, a pseudo-input of the combinational part.
    pub q: LineId,
    /// Flip-flop data input, a pseudo-output.
    pub d: LineId,
}

/// An inserted isolation multiplexer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuxCell {
    pub gate: GateId,
    /// The multiplexed scan-cell output.
    pub pseudo_input: LineId,
    /// Constant leg selected during shifting; a controlled input.
    pub constant: LineId,
}

/// What drives a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Driver {
    PrimaryInput,
    PseudoInput,
    ScanEnable,
    MuxConstant,
    Gate(GateId),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetlistError {
    #[error("{}syntax error: {message}", at(*line))]
    Syntax { line: usize, message: String },
    #[error("{}unknown gate keyword `{keyword}`", at(*line))]
    UnknownGate { line: usize, keyword: String },
    #[error("{}undefined signal `{name}`", at_opt(*line))]
    Undefined { line: Option<usize>, name: String },
    #[error("{}signal `{name}` has more than one driver", at_opt(*line))]
    DuplicateDriver { line: Option<usize>, name: String },
    #[error("{}combinational cycle through `{name}`", at_opt(*line))]
    Cycle { line: Option<usize>, name: String },
    #[error("{}{kind} gate cannot have {arity} inputs", at_opt(*line))]
    Arity {
        line: Option<usize>,
        kind: GateKind,
        arity: usize,
    },
    #[error("scan order: {0}")]
    ScanOrder(String),
    #[error("circuit is not mapped to the NAND/NOR/INV library")]
    NotMapped,
}

fn at(line: usize) -> String {
    format!("line {line}: ")
}

fn at_opt(line: Option<usize>) -> String {
    line.map(at).unwrap_or_default()
}

/// Unvalidated circuit parts, turned into a [`Circuit`] by [`Circuit::from_raw`].
#[derive(Debug, Clone, Default)]
pub(crate) struct RawCircuit {
    pub name: String,
    pub line_names: Vec<String>,
    pub gates: Vec<Gate>,
    /// Source line number of each gate, for error messages.
    pub gate_origin: Vec<Option<usize>>,
    pub primary_inputs: Vec<LineId>,
    pub primary_outputs: Vec<LineId>,
    pub flip_flops: Vec<FlipFlop>,
    pub scan_chain: Vec<LineId>,
    pub muxes: Vec<MuxCell>,
    pub scan_enable: Option<LineId>,
}

impl RawCircuit {
    pub fn add_line(&mut self, name: impl Into<String>) -> LineId {
        self.line_names.push(name.into());
        self.line_names.len() - 1
    }

    pub fn add_gate(&mut self, kind: GateKind, inputs: Vec<LineId>, output: LineId) -> GateId {
        self.gates.push(Gate { kind, inputs, output });
        self.gate_origin.push(None);
        self.gates.len() - 1
    }
}

#[derive(Debug, Clone)]
pub struct Circuit {
    name: String,
    line_names: Vec<String>,
    drivers: Vec<Driver>,
    gates: Vec<Gate>,
    primary_inputs: Vec<LineId>,
    primary_outputs: Vec<LineId>,
    flip_flops: Vec<FlipFlop>,
    scan_chain: Vec<LineId>,
    muxes: Vec<MuxCell>,
    scan_enable: Option<LineId>,
    mapped: bool,
    // derived
    fanouts: Vec<Vec<(GateId, usize)>>,
    topo: Vec<GateId>,
    by_name: HashMap<String, LineId>,
}

impl Circuit {
    pub(crate) fn from_raw(raw: RawCircuit) -> Result<Circuit, NetlistError> {
        let n = raw.line_names.len();
        let mut drivers: Vec<Option<Driver>> = vec![None; n];
        let mut set_driver = |line: LineId, d: Driver, origin: Option<usize>| {
            if drivers[line].is_some() {
                return Err(NetlistError::DuplicateDriver {
                    line: origin,
                    name: raw.line_names[line].clone(),
                });
            }
            drivers[line] = Some(d);
            Ok(())
        };
        for &l in &raw.primary_inputs {
            set_driver(l, Driver::PrimaryInput, None)?;
        }
        for ff in &raw.flip_flops {
            set_driver(ff.q, Driver::PseudoInput, None)?;
        }
        if let Some(se) = raw.scan_enable {
            set_driver(se, Driver::ScanEnable, None)?;
        }
        for m in &raw.muxes {
            set_driver(m.constant, Driver::MuxConstant, None)?;
        }
        for (g, gate) in raw.gates.iter().enumerate() {
            let origin = raw.gate_origin.get(g).copied().flatten();
            if !gate.kind.arity_ok(gate.inputs.len()) {
                return Err(NetlistError::Arity {
                    line: origin,
                    kind: gate.kind,
                    arity: gate.inputs.len(),
                });
            }
            set_driver(gate.output, Driver::Gate(g), origin)?;
        }
        let drivers: Vec<Driver> = drivers
            .into_iter()
            .enumerate()
            .map(|(l, d)| {
                d.ok_or_else(|| NetlistError::Undefined {
                    line: None,
                    name: raw.line_names[l].clone(),
                })
            })
            .collect::<Result<_, _>>()?;

        let mut fanouts = vec![Vec::new(); n];
        for (g, gate) in raw.gates.iter().enumerate() {
            for (pin, &l) in gate.inputs.iter().enumerate() {
                fanouts[l].push((g, pin));
            }
        }

        let pseudo: HashSet<LineId> = raw.flip_flops.iter().map(|ff| ff.q).collect();
        let chain: HashSet<LineId> = raw.scan_chain.iter().copied().collect();
        if raw.scan_chain.len() != pseudo.len() || chain != pseudo {
            return Err(NetlistError::ScanOrder(
                "scan chain must list every pseudo-input exactly once".into(),
            ));
        }

        let mapped = raw.gates.iter().all(|g| g.kind.is_library_cell());
        let by_name = raw
            .line_names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut circuit = Circuit {
            name: raw.name,
            line_names: raw.line_names,
            drivers,
            gates: raw.gates,
            primary_inputs: raw.primary_inputs,
            primary_outputs: raw.primary_outputs,
            flip_flops: raw.flip_flops,
            scan_chain: raw.scan_chain,
            muxes: raw.muxes,
            scan_enable: raw.scan_enable,
            mapped,
            fanouts,
            topo: Vec::new(),
            by_name,
        };
        circuit.topo = levelize(&circuit).map_err(|e| match e {
            NetlistError::Cycle { name, .. } => {
                let line = circuit
                    .line_id(&name)
                    .and_then(|l| match circuit.drivers[l] {
                        Driver::Gate(g) => raw.gate_origin.get(g).copied().flatten(),
                        _ => None,
                    });
                NetlistError::Cycle { line, name }
            }
            other => other,
        })?;
        Ok(circuit)
    }

    pub(crate) fn to_raw(&self) -> RawCircuit {
        RawCircuit {
            name: self.name.clone(),
            line_names: self.line_names.clone(),
            gates: self.gates.clone(),
            gate_origin: vec![None; self.gates.len()],
            primary_inputs: self.primary_inputs.clone(),
            primary_outputs: self.primary_outputs.clone(),
            flip_flops: self.flip_flops.clone(),
            scan_chain: self.scan_chain.clone(),
            muxes: self.muxes.clone(),
            scan_enable: self.scan_enable,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Circuit {
        self.name = name.into();
        self
    }

    pub fn num_lines(&self) -> usize {
        self.line_names.len()
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn line_name(&self, line: LineId) -> &str {
        &self.line_names[line]
    }

    pub fn line_id(&self, name: &str) -> Option<LineId> {
        self.by_name.get(name).copied()
    }

    pub fn driver(&self, line: LineId) -> Driver {
        self.drivers[line]
    }

    /// Gate driving `line`, if any.
    pub fn driving_gate(&self, line: LineId) -> Option<GateId> {
        match self.drivers[line] {
            Driver::Gate(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_source(&self, line: LineId) -> bool {
        !matches!(self.drivers[line], Driver::Gate(_))
    }

    pub fn gate(&self, g: GateId) -> &Gate {
        &self.gates[g]
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Gate pins fed by `line`, as `(gate, pin)` pairs.
    pub fn fanout(&self, line: LineId) -> &[(GateId, usize)] {
        &self.fanouts[line]
    }

    pub fn primary_inputs(&self) -> &[LineId] {
        &self.primary_inputs
    }

    pub fn primary_outputs(&self) -> &[LineId] {
        &self.primary_outputs
    }

    pub fn flip_flops(&self) -> &[FlipFlop] {
        &self.flip_flops
    }

    pub fn pseudo_inputs(&self) -> Vec<LineId> {
        self.flip_flops.iter().map(|ff| ff.q).collect()
    }

    pub fn pseudo_outputs(&self) -> Vec<LineId> {
        self.flip_flops.iter().map(|ff| ff.d).collect()
    }

    /// Pseudo-inputs from scan-in (head) to scan-out (tail).
    pub fn scan_chain(&self) -> &[LineId] {
        &self.scan_chain
    }

    pub fn muxes(&self) -> &[MuxCell] {
        &self.muxes
    }

    pub fn scan_enable(&self) -> Option<LineId> {
        self.scan_enable
    }

    /// Pseudo-inputs behind an isolation multiplexer.
    pub fn multiplexed(&self) -> Vec<LineId> {
        self.muxes.iter().map(|m| m.pseudo_input).collect()
    }

    pub fn is_mapped(&self) -> bool {
        self.mapped
    }

    /// Primary inputs followed by the constant legs of the inserted multiplexers.
    pub fn controlled_inputs(&self) -> Vec<LineId> {
        let mut v = self.primary_inputs.clone();
        v.extend(self.muxes.iter().map(|m| m.constant));
        v
    }

    /// Every line without a gate driver.
    pub fn source_lines(&self) -> Vec<LineId> {
        (0..self.num_lines()).filter(|&l| self.is_source(l)).collect()
    }

    /// Endpoints of timing paths: primary and pseudo-outputs.
    pub fn endpoints(&self) -> Vec<LineId> {
        let mut v = self.primary_outputs.clone();
        v.extend(self.flip_flops.iter().map(|ff| ff.d));
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Gates in topological order.
    pub fn topo_order(&self) -> &[GateId] {
        &self.topo
    }

    /// Largest number of gate pins fed by a single line.
    pub fn max_fanout(&self) -> usize {
        self.fanouts.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Replaces the scan chain order, given by pseudo-input names.
    pub fn with_scan_order<S: AsRef<str>>(&self, names: &[S]) -> Result<Circuit, NetlistError> {
        let mut raw = self.to_raw();
        raw.scan_chain = names
            .iter()
            .map(|n| {
                let n = n.as_ref();
                self.line_id(n).ok_or_else(|| NetlistError::ScanOrder(format!("unknown signal `{n}`")))
            })
            .collect::<Result<_, _>>()?;
        Circuit::from_raw(raw)
    }

    /// Inserts an isolation multiplexer behind `pseudo_input` and moves all of
    /// its gate fanout onto the multiplexer output.
    ///
    /// The select pin is the shared scan-enable line, created on first use.
    pub fn with_mux(&self, pseudo_input: LineId) -> Circuit {
        assert!(
            matches!(self.drivers[pseudo_input], Driver::PseudoInput),
            "only pseudo-inputs can be multiplexed"
        );
        assert!(
            !self.muxes.iter().any(|m| m.pseudo_input == pseudo_input),
            "pseudo-input already multiplexed"
        );
        let mut raw = self.to_raw();
        let mut names: HashSet<String> = raw.line_names.iter().cloned().collect();
        let mut fresh = |raw: &mut RawCircuit, base: String| {
            let mut name = base.clone();
            let mut k = 1;
            while names.contains(&name) {
                name = format!("{base}_{k}");
                k += 1;
            }
            names.insert(name.clone());
            raw.add_line(name)
        };
        let se = match raw.scan_enable {
            Some(se) => se,
            None => {
                let se = fresh(&mut raw, "scan_enable".to_string());
                raw.scan_enable = Some(se);
                se
            }
        };
        let base = self.line_names[pseudo_input].clone();
        let constant = fresh(&mut raw, format!("{base}_hold"));
        let out = fresh(&mut raw, format!("{base}_mux"));
        for &(g, pin) in &self.fanouts[pseudo_input] {
            raw.gates[g].inputs[pin] = out;
        }
        let gate = raw.add_gate(GateKind::Mux2, vec![se, pseudo_input, constant], out);
        raw.muxes.push(MuxCell {
            gate,
            pseudo_input,
            constant,
        });
        Circuit::from_raw(raw).expect("mux insertion preserves validity")
    }

    /// Returns a copy with the inputs of some gates permuted.
    ///
    /// Each replacement must be a permutation of the gate's current inputs.
    pub fn with_permuted_inputs(&self, changes: &[(GateId, Vec<LineId>)]) -> Circuit {
        let mut raw = self.to_raw();
        for (g, inputs) in changes {
            let mut a = raw.gates[*g].inputs.clone();
            let mut b = inputs.clone();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "not a permutation of the gate inputs");
            raw.gates[*g].inputs = inputs.clone();
        }
        Circuit::from_raw(raw).expect("input permutation preserves validity")
    }
}

/// Topological order of the gates: every gate follows the drivers of its inputs.
pub fn levelize(c: &Circuit) -> Result<Vec<GateId>, NetlistError> {
    let ng = c.gates.len();
    let mut pending: Vec<usize> = c
        .gates
        .iter()
        .map(|g| g.inputs.iter().filter(|&&l| !c.is_source(l)).count())
        .collect();
    let mut queue: VecDeque<GateId> = (0..ng).filter(|&g| pending[g] == 0).collect();
    let mut order = Vec::with_capacity(ng);
    while let Some(g) = queue.pop_front() {
        order.push(g);
        for &(h, _) in &c.fanouts[c.gates[g].output] {
            pending[h] -= 1;
            if pending[h] == 0 {
                queue.push_back(h);
            }
        }
    }
    if order.len() != ng {
        let stuck = (0..ng).find(|&g| pending[g] > 0).expect("some gate is unordered");
        return Err(NetlistError::Cycle {
            line: None,
            name: c.line_names[c.gates[stuck].output].clone(),
        });
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Circuit {
        parse_bench("INPUT(a)\nOUTPUT(c)\nb = NOT(a)\nc = NOT(b)\n", "chain").unwrap()
    }

    #[test]
    fn inverter_chain_levelizes_in_order() {
        let c = chain();
        let order = levelize(&c).unwrap();
        let outs: Vec<&str> = order.iter().map(|&g| c.line_name(c.gate(g).output)).collect();
        assert_eq!(outs, ["b", "c"]);
    }

    #[test]
    fn diamond_sink_is_last() {
        let c = parse_bench(
            "INPUT(a)\nOUTPUT(d)\nd = NAND(b, c)\nb = NOT(a)\nc = NOT(a)\n",
            "diamond",
        )
        .unwrap();
        let order = levelize(&c).unwrap();
        assert_eq!(c.line_name(c.gate(*order.last().unwrap()).output), "d");
    }

    #[test]
    fn controlling_values() {
        assert_eq!(GateKind::Nand.controlling_value(), Some(false));
        assert_eq!(GateKind::Nor.controlling_value(), Some(true));
        assert_eq!(GateKind::Inv.controlling_value(), None);
        assert_eq!(GateKind::Mux2.controlling_value(), None);
    }

    #[test]
    fn mux_insertion_rewires_fanout() {
        let c = parse_bench(
            "INPUT(a)\nOUTPUT(z)\nq = DFF(z)\nz = NAND(a, q)\n",
            "loop",
        )
        .unwrap();
        let q = c.line_id("q").unwrap();
        let m = c.with_mux(q);
        assert_eq!(m.multiplexed(), vec![q]);
        assert_eq!(m.muxes().len(), 1);
        let mux = m.muxes()[0];
        let z = m.driving_gate(m.line_id("z").unwrap()).unwrap();
        assert!(m.gate(z).inputs.contains(&m.gate(mux.gate).output));
        assert_eq!(m.fanout(q), &[(mux.gate, 1)]);
        assert_eq!(m.controlled_inputs().len(), 2);
        assert!(m.scan_enable().is_some());
    }

    #[test]
    fn scan_order_must_be_a_permutation() {
        let c = parse_bench("INPUT(a)\nOUTPUT(y)\nq1 = DFF(a)\nq2 = DFF(q1)\ny = NAND(q1, q2)\n", "x")
            .unwrap();
        assert_eq!(c.scan_chain().len(), 2);
        let r = c.with_scan_order(&["q2", "q1"]).unwrap();
        assert_eq!(r.line_name(r.scan_chain()[0]), "q2");
        assert!(c.with_scan_order(&["q2"]).is_err());
        assert!(c.with_scan_order(&["q2", "a"]).is_err());
    }
}
