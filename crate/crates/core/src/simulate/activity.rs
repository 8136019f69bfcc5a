// SPDX-License-Identifier: Apache-2.0

//! Switching activity and dynamic power.
//!
//! Activity is zero-delay: a line toggles at most once per clock cycle and
//! only gate outputs (including isolation multiplexers) are counted.
//! Scan-cell outputs belong to the chain and are left out.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use super::{eval_bool, InputPattern, SimError};
use crate::netlist::{Circuit, Driver, GateId, GateKind, LineId};

#[derive(Debug, Clone, PartialEq)]
pub struct CapacitanceModel {
    /// Capacitance per fanout pin, in farads.
    pub unit_cap: f64,
    /// Optional per-kind internal-node capacitance (farads) for the
    /// internal-node term of the dynamic power.
    pub internal_cap: Option<BTreeMap<GateKind, f64>>,
    /// Threshold drop of internal nodes; their swing is `vdd - vth`.
    pub vth: f64,
}

impl Default for CapacitanceModel {
    fn default() -> Self {
        CapacitanceModel {
            unit_cap: 1e-15,
            internal_cap: None,
            vth: 0.3,
        }
    }
}

impl CapacitanceModel {
    pub fn with_unit_cap(unit_cap: f64) -> Self {
        CapacitanceModel {
            unit_cap,
            ..CapacitanceModel::default()
        }
    }

    /// Load of a gate output: one unit per fanout pin plus its own drain.
    pub fn load(&self, c: &Circuit, g: GateId) -> f64 {
        self.unit_cap * (c.fanout(c.gate(g).output).len() + 1) as f64
    }

    fn internal(&self, kind: GateKind) -> f64 {
        self.internal_cap
            .as_ref()
            .and_then(|m| m.get(&kind).copied())
            .unwrap_or(0.0)
    }
}

/// Capacitance-weighted toggle counts.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Activity {
    /// Sum of output load over toggling gates, in farads.
    pub load: f64,
    /// Sum of internal-node capacitance over toggling gates, in farads.
    pub internal: f64,
}

impl Add for Activity {
    type Output = Activity;

    fn add(self, o: Activity) -> Activity {
        Activity {
            load: self.load + o.load,
            internal: self.internal + o.internal,
        }
    }
}

impl AddAssign for Activity {
    fn add_assign(&mut self, o: Activity) {
        *self = *self + o;
    }
}

impl Activity {
    pub fn scaled(self, k: f64) -> Activity {
        Activity {
            load: self.load * k,
            internal: self.internal * k,
        }
    }
}

fn toggles(c: &Circuit, before: &[bool], after: &[bool], cap: &CapacitanceModel) -> Activity {
    let mut a = Activity::default();
    for (g, gate) in c.gates().iter().enumerate() {
        if before[gate.output] != after[gate.output] {
            a.load += cap.load(c, g);
            a.internal += cap.internal(gate.kind);
        }
    }
    a
}

/// Load-weighted transitions between two simulated binary assignments.
pub fn weighted_activity(
    c: &Circuit,
    before: &super::Assignment,
    after: &super::Assignment,
    cap: &CapacitanceModel,
) -> Result<Activity, SimError> {
    let unknown = |a: &super::Assignment| {
        a.values()
            .iter()
            .position(|v| v.is_x())
            .map(|l| SimError::UnknownValue(c.line_name(l).to_string()))
    };
    if let Some(e) = unknown(before).or_else(|| unknown(after)) {
        return Err(e);
    }
    let b = before.to_bools().expect("checked binary");
    let a = after.to_bools().expect("checked binary");
    Ok(toggles(c, &b, &a, cap))
}

/// Dynamic power in watts: `f/2 * (vdd^2 * load + vdd * (vdd - vth) * internal)`.
pub fn dynamic_power(activity: Activity, vdd: f64, vth: f64, freq: f64) -> f64 {
    0.5 * freq * (vdd * vdd * activity.load + vdd * (vdd - vth) * activity.internal)
}

/// Dynamic power per hertz of clock frequency, in W/Hz.
pub fn dynamic_power_per_hz(activity: Activity, vdd: f64, vth: f64) -> f64 {
    dynamic_power(activity, vdd, vth, 1.0)
}

/// What drives the combinational inputs while the chain shifts.
#[derive(Debug, Clone, Copy)]
pub enum ScanMode<'a> {
    /// Chain bits reach the logic directly; primary inputs sit at 0.
    Traditional,
    /// Primary inputs are held at the pattern; no isolation.
    InputControl(&'a InputPattern),
    /// Multiplexers select their constants and primary inputs are held,
    /// all from the pattern.
    Proposed(&'a InputPattern),
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ShiftActivity {
    /// Transitions between consecutive shift cycles.
    pub shift: Activity,
    /// Transitions into and out of capture cycles.
    pub capture: Activity,
    pub shift_cycles: usize,
    pub capture_cycles: usize,
}

impl ShiftActivity {
    pub fn total(&self) -> Activity {
        self.shift + self.capture
    }

    pub fn cycles(&self) -> usize {
        self.shift_cycles + self.capture_cycles
    }

    /// Average activity per clock cycle.
    pub fn per_cycle(&self) -> Activity {
        match self.cycles() {
            0 => Activity::default(),
            n => self.total().scaled(1.0 / n as f64),
        }
    }
}

/// Source-line values (except the chain) for one configuration.
fn held_sources(c: &Circuit, mode: ScanMode<'_>, shifting: bool) -> Result<Vec<bool>, SimError> {
    let mut values = vec![false; c.num_lines()];
    if !shifting {
        return Ok(values);
    }
    let from_pattern = |p: &InputPattern, l: LineId| {
        p.get(l)
            .to_bool()
            .ok_or_else(|| SimError::PatternX(super::pattern_name(c, l)))
    };
    match mode {
        ScanMode::Traditional => {}
        ScanMode::InputControl(p) => {
            for &l in c.primary_inputs() {
                values[l] = from_pattern(p, l)?;
            }
        }
        ScanMode::Proposed(p) => {
            for &l in c.primary_inputs() {
                values[l] = from_pattern(p, l)?;
            }
            if let Some(se) = c.scan_enable() {
                values[se] = true;
            }
            for m in c.muxes() {
                values[m.constant] = from_pattern(p, m.constant)?;
            }
        }
    }
    Ok(values)
}

fn evaluate(c: &Circuit, held: &[bool], chain: &[LineId], state: &[bool]) -> Vec<bool> {
    let mut values = held.to_vec();
    for (&l, &b) in chain.iter().zip(state) {
        values[l] = b;
    }
    for &g in c.topo_order() {
        let gate = c.gate(g);
        values[gate.output] = eval_bool(gate.kind, &gate.inputs, &values);
    }
    values
}

/// Replays scan shifting of `vectors` and accumulates combinational activity.
///
/// The chain starts all-zero with the circuit in its capture configuration.
/// Each vector takes `L` shift cycles (bit 0 enters first and ends at the
/// chain tail) followed by one capture cycle that applies the shifted vector
/// in normal mode with primary inputs at 0. The chain keeps the vector after
/// capture. Transitions into a capture cycle and into the first shift cycle
/// after it are booked as capture activity; the rest is shift activity.
pub fn scan_shift_activity(
    c: &Circuit,
    vectors: &[Vec<bool>],
    mode: ScanMode<'_>,
    cap: &CapacitanceModel,
) -> Result<ShiftActivity, SimError> {
    let chain = c.scan_chain();
    let len = chain.len();
    if let Some((index, v)) = vectors.iter().enumerate().find(|(_, v)| v.len() != len) {
        return Err(SimError::VectorLength {
            index,
            got: v.len(),
            expected: len,
        });
    }
    debug_assert!(chain.iter().all(|&l| c.driver(l) == Driver::PseudoInput));
    let shift_held = held_sources(c, mode, true)?;
    let capture_held = held_sources(c, mode, false)?;

    let mut out = ShiftActivity::default();
    let mut state = vec![false; len];
    let mut prev = evaluate(c, &capture_held, chain, &state);
    let mut after_capture = true;
    for v in vectors {
        for &bit in v {
            state.rotate_right(1);
            state[0] = bit;
            let cur = evaluate(c, &shift_held, chain, &state);
            let a = toggles(c, &prev, &cur, cap);
            if after_capture {
                out.capture += a;
                after_capture = false;
            } else {
                out.shift += a;
            }
            out.shift_cycles += 1;
            prev = cur;
        }
        let cur = evaluate(c, &capture_held, chain, &state);
        out.capture += toggles(c, &prev, &cur, cap);
        out.capture_cycles += 1;
        after_capture = true;
        prev = cur;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;
    use crate::simulate::{simulate, Assignment, Logic3};

    #[test]
    fn no_change_no_activity() {
        let c = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n", "inv").unwrap();
        let mut inp = Assignment::unknown(&c);
        inp.set(0, Logic3::One);
        let s = simulate(&c, &inp);
        let a = weighted_activity(&c, &s, &s, &CapacitanceModel::with_unit_cap(1.0)).unwrap();
        assert_eq!(a.load, 0.0);
    }

    #[test]
    fn single_inverter_toggle_costs_one_unit() {
        let c = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n", "inv").unwrap();
        let mut i0 = Assignment::unknown(&c);
        i0.set(0, Logic3::Zero);
        let mut i1 = Assignment::unknown(&c);
        i1.set(0, Logic3::One);
        let a = weighted_activity(
            &c,
            &simulate(&c, &i0),
            &simulate(&c, &i1),
            &CapacitanceModel::with_unit_cap(1.0),
        )
        .unwrap();
        assert_eq!(a.load, 1.0);
    }

    #[test]
    fn x_is_rejected() {
        let c = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n", "inv").unwrap();
        let s = simulate(&c, &Assignment::unknown(&c));
        assert!(weighted_activity(&c, &s, &s, &CapacitanceModel::default()).is_err());
    }

    #[test]
    fn dynamic_power_formula() {
        let one = Activity {
            load: 1.0,
            internal: 0.0,
        };
        assert_eq!(dynamic_power(Activity::default(), 0.9, 0.3, 1e9), 0.0);
        assert_eq!(dynamic_power(one, 1.0, 0.3, 1.0), 0.5);
        assert_eq!(dynamic_power(one, 2.0, 0.3, 1.0), 4.0 * dynamic_power(one, 1.0, 0.3, 1.0));
        let f = 3.7e8;
        let p = dynamic_power(one, 0.9, 0.3, f);
        assert!((dynamic_power_per_hz(one, 0.9, 0.3) * f - p).abs() <= 1e-12 * p);
        let internal = Activity {
            load: 0.0,
            internal: 2.0,
        };
        assert!((dynamic_power(internal, 1.0, 0.25, 1.0) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn single_cell_chain_is_one_shift_plus_capture() {
        let c = parse_bench("INPUT(a)\nOUTPUT(y)\nq = DFF(y)\ny = NAND(a, q)\n", "s").unwrap();
        let r = scan_shift_activity(&c, &[vec![true]], ScanMode::Traditional, &CapacitanceModel::default())
            .unwrap();
        assert_eq!(r.shift_cycles, 1);
        assert_eq!(r.capture_cycles, 1);
    }

    #[test]
    fn vector_length_is_checked() {
        let c = parse_bench("INPUT(a)\nOUTPUT(y)\nq = DFF(y)\ny = NAND(a, q)\n", "s").unwrap();
        let e = scan_shift_activity(&c, &[vec![true, false]], ScanMode::Traditional, &CapacitanceModel::default());
        assert!(matches!(e, Err(SimError::VectorLength { .. })));
    }
}
