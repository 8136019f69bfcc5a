// SPDX-License-Identifier: Apache-2.0

//! Static timing under a per-kind gate delay model, and scan-multiplexer
//! insertion restricted to pseudo-inputs with enough slack.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::netlist::{Circuit, GateKind, NetlistError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TimingError {
    #[error("delay table line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Gate delays in arbitrary time units.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayModel {
    delays: BTreeMap<GateKind, f64>,
    /// Delay of an inserted isolation multiplexer.
    pub mux_delay: f64,
}

impl Default for DelayModel {
    /// Unit delay for every cell.
    fn default() -> Self {
        DelayModel {
            delays: GateKind::ALL
                .iter()
                .filter(|&&k| k != GateKind::Mux2)
                .map(|&k| (k, 1.0))
                .collect(),
            mux_delay: 1.0,
        }
    }
}

impl DelayModel {
    pub fn unit() -> DelayModel {
        DelayModel::default()
    }

    pub fn with_mux_delay(mut self, mux_delay: f64) -> DelayModel {
        assert!(mux_delay >= 0.0, "delays are nonnegative");
        self.mux_delay = mux_delay;
        self
    }

    pub fn set(&mut self, kind: GateKind, delay: f64) {
        assert!(delay >= 0.0, "delays are nonnegative");
        if kind == GateKind::Mux2 {
            self.mux_delay = delay;
        } else {
            self.delays.insert(kind, delay);
        }
    }

    pub fn delay(&self, kind: GateKind) -> f64 {
        match kind {
            GateKind::Mux2 => self.mux_delay,
            k => self.delays.get(&k).copied().unwrap_or(0.0),
        }
    }

    /// Reads `kind,delay` rows over the unit model. A header row and `#`
    /// comments are allowed; kinds use `.bench` keywords.
    pub fn from_csv(text: &str) -> Result<DelayModel, TimingError> {
        let mut model = DelayModel::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |m: String| TimingError::Parse { line, message: m };
            let (k, d) = body
                .split_once(',')
                .ok_or_else(|| err("expected `kind,delay`".into()))?;
            let (k, d) = (k.trim(), d.trim());
            if k.eq_ignore_ascii_case("kind") {
                continue;
            }
            let kind = GateKind::from_keyword(k).ok_or_else(|| err(format!("unknown kind `{k}`")))?;
            let delay: f64 = d.parse().map_err(|_| err(format!("bad delay `{d}`")))?;
            if !(delay >= 0.0 && delay.is_finite()) {
                return Err(err(format!("delay must be finite and nonnegative, got {d}")));
            }
            model.set(kind, delay);
        }
        Ok(model)
    }
}

/// Latest arrival time of every line; sources arrive at 0.
pub fn arrival_times(c: &Circuit, d: &DelayModel) -> Vec<f64> {
    let mut at = vec![0.0f64; c.num_lines()];
    for &g in c.topo_order() {
        let gate = c.gate(g);
        let latest = gate.inputs.iter().map(|&l| at[l]).fold(0.0, f64::max);
        at[gate.output] = latest + d.delay(gate.kind);
    }
    at
}

/// Longest source-to-endpoint delay; 0 when no endpoint is driven by logic.
pub fn critical_path_delay(c: &Circuit, d: &DelayModel) -> f64 {
    let at = arrival_times(c, d);
    c.endpoints().iter().map(|&l| at[l]).fold(0.0, f64::max)
}

/// Multiplexes every pseudo-input whose multiplexer leaves the critical path
/// delay unchanged.
///
/// Pseudo-inputs are tried in scan-chain order. Each accepted multiplexer
/// stays in place while later candidates are tested, so slack is consumed in
/// that order.
pub fn add_muxes(c: &Circuit, d: &DelayModel) -> Result<Circuit, NetlistError> {
    if !c.is_mapped() {
        return Err(NetlistError::NotMapped);
    }
    let base = critical_path_delay(c, d);
    let already = c.multiplexed();
    let mut cur = c.clone();
    for &pi in c.scan_chain() {
        if already.contains(&pi) {
            continue;
        }
        let trial = cur.with_mux(pi);
        if critical_path_delay(&trial, d) == base {
            cur = trial;
        }
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;

    #[test]
    fn inverter_chain_delay() {
        let c = parse_bench("INPUT(a)\nOUTPUT(d)\nb = NOT(a)\nc = NOT(b)\nd = NOT(c)\n", "c").unwrap();
        assert_eq!(critical_path_delay(&c, &DelayModel::unit()), 3.0);
    }

    #[test]
    fn gateless_circuit_has_zero_delay() {
        let c = parse_bench("INPUT(a)\nOUTPUT(a)\n", "id").unwrap();
        assert_eq!(critical_path_delay(&c, &DelayModel::unit()), 0.0);
    }

    #[test]
    fn zero_slack_inputs_are_not_multiplexed() {
        let c = parse_bench("INPUT(a)\nOUTPUT(y)\nq = DFF(y)\ny = NAND(a, q)\n", "s").unwrap();
        let m = add_muxes(&c, &DelayModel::unit()).unwrap();
        assert!(m.multiplexed().is_empty());
        let m0 = add_muxes(&c, &DelayModel::unit().with_mux_delay(0.0)).unwrap();
        assert_eq!(m0.multiplexed(), c.pseudo_inputs());
    }

    #[test]
    fn slack_allows_a_mux() {
        // q enters at the last gate of a three-deep path.
        let text = "INPUT(a)\nOUTPUT(y)\nq = DFF(y)\nb = NOT(a)\nc = NOT(b)\ny = NAND(c, q)\n";
        let c = parse_bench(text, "s").unwrap();
        let m = add_muxes(&c, &DelayModel::unit()).unwrap();
        assert_eq!(m.multiplexed(), c.pseudo_inputs());
        assert_eq!(critical_path_delay(&m, &DelayModel::unit()), 3.0);
    }

    #[test]
    fn unmapped_is_rejected() {
        let c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n", "a").unwrap();
        assert_eq!(add_muxes(&c, &DelayModel::unit()).unwrap_err(), NetlistError::NotMapped);
    }

    #[test]
    fn delay_table_parses() {
        let d = DelayModel::from_csv("kind,delay\nNAND,1.5\nnor,2\nMUX2,0.25\n").unwrap();
        assert_eq!(d.delay(GateKind::Nand), 1.5);
        assert_eq!(d.delay(GateKind::Nor), 2.0);
        assert_eq!(d.delay(GateKind::Inv), 1.0);
        assert_eq!(d.mux_delay, 0.25);
        assert!(DelayModel::from_csv("NAND,-1\n").is_err());
        assert!(DelayModel::from_csv("FOO,1\n").is_err());
    }
}
