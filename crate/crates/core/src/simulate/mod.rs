// SPDX-License-Identifier: Apache-2.0

//! Three-valued logic simulation.

mod activity;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Not;

use thiserror::Error;

use crate::netlist::{Circuit, GateKind, LineId};

pub use activity::{
    dynamic_power, dynamic_power_per_hz, scan_shift_activity, weighted_activity, Activity,
    CapacitanceModel, ScanMode, ShiftActivity,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Logic3 {
    Zero,
    One,
    #[default]
    X,
}

impl Logic3 {
    pub fn from_bool(b: bool) -> Logic3 {
        if b {
            Logic3::One
        } else {
            Logic3::Zero
        }
    }

    pub fn to_bool(self) -> Option<bool> {
        match self {
            Logic3::Zero => Some(false),
            Logic3::One => Some(true),
            Logic3::X => None,
        }
    }

    pub fn is_x(self) -> bool {
        self == Logic3::X
    }

    pub fn as_char(self) -> char {
        match self {
            Logic3::Zero => '0',
            Logic3::One => '1',
            Logic3::X => 'X',
        }
    }

    pub fn from_char(c: char) -> Option<Logic3> {
        match c {
            '0' => Some(Logic3::Zero),
            '1' => Some(Logic3::One),
            'x' | 'X' => Some(Logic3::X),
            _ => None,
        }
    }
}

impl From<bool> for Logic3 {
    fn from(b: bool) -> Self {
        Logic3::from_bool(b)
    }
}

impl Not for Logic3 {
    type Output = Logic3;

    fn not(self) -> Logic3 {
        match self {
            Logic3::Zero => Logic3::One,
            Logic3::One => Logic3::Zero,
            Logic3::X => Logic3::X,
        }
    }
}

impl fmt::Display for Logic3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{kind} gate evaluated with {arity} inputs")]
    Arity { kind: GateKind, arity: usize },
    #[error("line `{0}` is X; switching activity is undefined")]
    UnknownValue(String),
    #[error("pattern leaves overridden line `{0}` at X")]
    PatternX(String),
    #[error("test vector {index} has {got} bits, chain length is {expected}")]
    VectorLength {
        index: usize,
        got: usize,
        expected: usize,
    },
}

/// Controlling-value evaluation shared by AND-like gates.
fn and_like<I: Iterator<Item = Logic3>>(inputs: I, cv: Logic3) -> Option<Logic3> {
    let mut unknown = false;
    for v in inputs {
        if v == cv {
            return Some(cv);
        }
        unknown |= v.is_x();
    }
    if unknown {
        None
    } else {
        Some(!cv)
    }
}

pub(crate) fn eval_iter<I>(kind: GateKind, mut inputs: I) -> Logic3
where
    I: Iterator<Item = Logic3>,
{
    use Logic3::*;
    match kind {
        GateKind::Inv => !inputs.next().unwrap_or(X),
        GateKind::Buf => inputs.next().unwrap_or(X),
        GateKind::And => and_like(inputs, Zero).unwrap_or(X),
        GateKind::Nand => !and_like(inputs, Zero).unwrap_or(X),
        GateKind::Or => and_like(inputs, One).unwrap_or(X),
        GateKind::Nor => !and_like(inputs, One).unwrap_or(X),
        GateKind::Xor | GateKind::Xnor => {
            let mut acc = kind == GateKind::Xnor;
            for v in inputs {
                match v.to_bool() {
                    Some(b) => acc ^= b,
                    None => return X,
                }
            }
            Logic3::from_bool(acc)
        }
        GateKind::Mux2 => {
            let sel = inputs.next().unwrap_or(X);
            let data = inputs.next().unwrap_or(X);
            let constant = inputs.next().unwrap_or(X);
            match sel {
                One => constant,
                Zero => data,
                X if data == constant => data,
                X => X,
            }
        }
    }
}

/// Three-valued gate evaluation. A controlling input decides the output even
/// when other inputs are X. Mux pins are `(select, data, constant)`; select 1
/// picks the constant leg.
pub fn eval_gate(kind: GateKind, inputs: &[Logic3]) -> Result<Logic3, SimError> {
    if !kind.arity_ok(inputs.len()) {
        return Err(SimError::Arity {
            kind,
            arity: inputs.len(),
        });
    }
    Ok(eval_iter(kind, inputs.iter().copied()))
}

pub(crate) fn eval_bool(kind: GateKind, inputs: &[LineId], values: &[bool]) -> bool {
    match kind {
        GateKind::Inv => !values[inputs[0]],
        GateKind::Buf => values[inputs[0]],
        GateKind::And => inputs.iter().all(|&l| values[l]),
        GateKind::Nand => !inputs.iter().all(|&l| values[l]),
        GateKind::Or => inputs.iter().any(|&l| values[l]),
        GateKind::Nor => !inputs.iter().any(|&l| values[l]),
        GateKind::Xor => inputs.iter().fold(false, |a, &l| a ^ values[l]),
        GateKind::Xnor => !inputs.iter().fold(false, |a, &l| a ^ values[l]),
        GateKind::Mux2 => {
            if values[inputs[0]] {
                values[inputs[2]]
            } else {
                values[inputs[1]]
            }
        }
    }
}

/// Values for every line of one circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Logic3>,
    simulated: bool,
}

impl Assignment {
    /// All lines at X.
    pub fn unknown(c: &Circuit) -> Assignment {
        Assignment {
            values: vec![Logic3::X; c.num_lines()],
            simulated: false,
        }
    }

    pub fn from_values(values: Vec<Logic3>) -> Assignment {
        Assignment {
            values,
            simulated: false,
        }
    }

    pub fn get(&self, line: LineId) -> Logic3 {
        self.values[line]
    }

    pub fn set(&mut self, line: LineId, v: Logic3) {
        self.values[line] = v;
        self.simulated = false;
    }

    pub fn values(&self) -> &[Logic3] {
        &self.values
    }

    pub fn is_simulated(&self) -> bool {
        self.simulated
    }

    pub fn is_binary(&self) -> bool {
        self.values.iter().all(|v| !v.is_x())
    }

    pub fn to_bools(&self) -> Option<Vec<bool>> {
        self.values.iter().map(|v| v.to_bool()).collect()
    }

    /// Re-evaluates every gate output from the current source values.
    pub fn propagate(&mut self, c: &Circuit) {
        for &g in c.topo_order() {
            let gate = c.gate(g);
            let v = eval_iter(gate.kind, gate.inputs.iter().map(|&l| self.values[l]));
            self.values[gate.output] = v;
        }
        self.simulated = true;
    }
}

/// Forward simulation. Source lines keep their values from `inputs`
/// (unassigned ones stay X); every gate output is recomputed.
pub fn simulate(c: &Circuit, inputs: &Assignment) -> Assignment {
    let mut a = inputs.clone();
    a.propagate(c);
    a
}

/// Two-valued simulation with the listed source lines set and every other
/// source at 0.
pub fn simulate_bool(c: &Circuit, lines: &[LineId], bits: &[bool]) -> Vec<bool> {
    let mut values = vec![false; c.num_lines()];
    for (&l, &b) in lines.iter().zip(bits) {
        values[l] = b;
    }
    propagate_bool(c, &mut values);
    values
}

/// Two-valued counterpart of [`Assignment::propagate`].
pub fn propagate_bool(c: &Circuit, values: &mut [bool]) {
    for &g in c.topo_order() {
        let gate = c.gate(g);
        values[gate.output] = eval_bool(gate.kind, &gate.inputs, values);
    }
}

/// Values held on a set of input lines; unlisted lines are X.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InputPattern {
    values: BTreeMap<LineId, Logic3>,
}

impl InputPattern {
    pub fn new() -> InputPattern {
        InputPattern::default()
    }

    /// Every listed line at X.
    pub fn unknown(lines: &[LineId]) -> InputPattern {
        InputPattern {
            values: lines.iter().map(|&l| (l, Logic3::X)).collect(),
        }
    }

    pub fn get(&self, line: LineId) -> Logic3 {
        self.values.get(&line).copied().unwrap_or(Logic3::X)
    }

    pub fn set(&mut self, line: LineId, v: Logic3) {
        self.values.insert(line, v);
    }

    pub fn lines(&self) -> impl Iterator<Item = LineId> + '_ {
        self.values.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (LineId, Logic3)> + '_ {
        self.values.iter().map(|(&l, &v)| (l, v))
    }

    pub fn unassigned(&self) -> Vec<LineId> {
        self.iter().filter(|(_, v)| v.is_x()).map(|(l, _)| l).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.values.values().all(|v| !v.is_x())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `name=0|1|X` lines, one per listed input.
    pub fn to_text(&self, c: &Circuit) -> String {
        let mut s = String::new();
        for (l, v) in self.iter() {
            s.push_str(&pattern_name(c, l));
            s.push('=');
            s.push(v.as_char());
            s.push('\n');
        }
        s
    }
}

/// Name used for a controlled input in pattern files: multiplexer constants
/// are reported under the pseudo-input they stand in for.
pub fn pattern_name(c: &Circuit, line: LineId) -> String {
    c.muxes()
        .iter()
        .find(|m| m.constant == line)
        .map(|m| c.line_name(m.pseudo_input).to_string())
        .unwrap_or_else(|| c.line_name(line).to_string())
}
