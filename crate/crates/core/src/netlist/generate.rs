// SPDX-License-Identifier: Apache-2.0

//! Seeded random circuits, used by property tests and for synthetic
//! stand-ins of benchmark-sized designs.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Circuit, FlipFlop, GateKind, LineId, RawCircuit};

#[derive(Debug, Clone)]
pub struct RandomSpec {
    pub primary_inputs: usize,
    pub primary_outputs: usize,
    pub flip_flops: usize,
    pub gates: usize,
    pub max_fanin: usize,
    /// Fraction of single-input gates.
    pub inverter_ratio: f64,
    /// Only emit library cells; otherwise AND/OR/BUFF/XOR are mixed in too.
    pub mapped: bool,
    /// How far back (in creation order) a gate may pick its non-fresh fanins.
    pub locality: usize,
    /// Allow XOR among the unmapped kinds.
    pub xor: bool,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            primary_inputs: 4,
            primary_outputs: 2,
            flip_flops: 3,
            gates: 20,
            max_fanin: 3,
            inverter_ratio: 0.25,
            mapped: true,
            locality: 12,
            xor: true,
        }
    }
}

/// Builds a random acyclic circuit.
///
/// Gates are created in order and only read earlier lines, so the result is
/// acyclic by construction. Fanins prefer lines that are not used yet, which
/// keeps dangling logic rare. Outputs and flip-flop data inputs are drawn from
/// gate outputs (or sources in gateless circuits).
pub fn random_circuit<R: Rng + ?Sized>(spec: &RandomSpec, rng: &mut R, name: &str) -> Circuit {
    let mut raw = RawCircuit {
        name: name.to_string(),
        ..RawCircuit::default()
    };
    for i in 0..spec.primary_inputs {
        let l = raw.add_line(format!("I{i}"));
        raw.primary_inputs.push(l);
    }
    let mut qs = Vec::new();
    for i in 0..spec.flip_flops {
        qs.push(raw.add_line(format!("Q{i}")));
    }
    let mut available: Vec<LineId> = (0..raw.line_names.len()).collect();
    let mut used = vec![false; available.len()];
    let mut gate_outputs = Vec::new();

    let generic: &[GateKind] = if spec.xor {
        &[GateKind::And, GateKind::Or, GateKind::Xor, GateKind::Nand, GateKind::Nor]
    } else {
        &[GateKind::And, GateKind::Or, GateKind::Nand, GateKind::Nor]
    };
    for gi in 0..spec.gates {
        let single = rng.gen_bool(spec.inverter_ratio.clamp(0.0, 1.0)) || available.len() < 2;
        let kind = if single {
            if !spec.mapped && spec.xor && rng.gen_bool(0.2) {
                GateKind::Buf
            } else {
                GateKind::Inv
            }
        } else if spec.mapped {
            if rng.gen_bool(0.5) {
                GateKind::Nand
            } else {
                GateKind::Nor
            }
        } else {
            *generic.choose(rng).expect("non-empty")
        };
        let arity = if single {
            1
        } else {
            let hi = spec.max_fanin.max(2).min(available.len());
            rng.gen_range(2..=hi)
        };
        let mut inputs: Vec<LineId> = Vec::with_capacity(arity);
        while inputs.len() < arity {
            let unused: Vec<LineId> = available
                .iter()
                .copied()
                .filter(|l| !used[*l] && !inputs.contains(l))
                .collect();
            let pick = if !unused.is_empty() && rng.gen_bool(0.6) {
                *unused.choose(rng).expect("non-empty")
            } else {
                let lo = available.len().saturating_sub(spec.locality.max(2));
                available[rng.gen_range(lo..available.len())]
            };
            if !inputs.contains(&pick) {
                inputs.push(pick);
            } else if available.len() <= inputs.len() {
                break;
            }
        }
        if inputs.len() < 2 && kind != GateKind::Inv && kind != GateKind::Buf {
            continue;
        }
        for &l in &inputs {
            used[l] = true;
        }
        let out = raw.add_line(format!("N{gi}"));
        used.push(false);
        raw.add_gate(kind, inputs, out);
        available.push(out);
        gate_outputs.push(out);
    }

    let pool: Vec<LineId> = if gate_outputs.is_empty() {
        available.clone()
    } else {
        gate_outputs.clone()
    };
    let mut dangling: Vec<LineId> = pool.iter().copied().filter(|&l| !used[l]).collect();
    dangling.shuffle(rng);
    let mut pick_endpoint = |rng: &mut R| -> LineId {
        dangling
            .pop()
            .unwrap_or_else(|| *pool.choose(rng).expect("non-empty pool"))
    };
    for &q in &qs {
        let d = pick_endpoint(rng);
        raw.flip_flops.push(FlipFlop { q, d });
        raw.scan_chain.push(q);
    }
    for _ in 0..spec.primary_outputs {
        let o = pick_endpoint(rng);
        if !raw.primary_outputs.contains(&o) {
            raw.primary_outputs.push(o);
        }
    }
    Circuit::from_raw(raw).expect("generated circuits are valid")
}

/// Interface and size of a benchmark circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub name: &'static str,
    pub inputs: usize,
    pub outputs: usize,
    pub flip_flops: usize,
    pub gates: usize,
}

/// Interface sizes of the small ISCAS89 sequential benchmarks.
pub const ISCAS89_SHAPES: [Shape; 7] = [
    Shape { name: "s27", inputs: 4, outputs: 1, flip_flops: 3, gates: 10 },
    Shape { name: "s208", inputs: 11, outputs: 2, flip_flops: 8, gates: 96 },
    Shape { name: "s298", inputs: 3, outputs: 6, flip_flops: 14, gates: 119 },
    Shape { name: "s344", inputs: 9, outputs: 11, flip_flops: 15, gates: 160 },
    Shape { name: "s349", inputs: 9, outputs: 11, flip_flops: 15, gates: 161 },
    Shape { name: "s382", inputs: 3, outputs: 6, flip_flops: 21, gates: 158 },
    Shape { name: "s444", inputs: 3, outputs: 6, flip_flops: 21, gates: 181 },
];

/// A seeded random circuit with the interface and gate count of `shape`,
/// built from AND/OR/NAND/NOR/NOT like the ISCAS89 originals.
pub fn surrogate(shape: &Shape, seed: u64) -> Circuit {
    use rand::SeedableRng;
    let spec = RandomSpec {
        primary_inputs: shape.inputs,
        primary_outputs: shape.outputs,
        flip_flops: shape.flip_flops,
        gates: shape.gates,
        max_fanin: 4,
        inverter_ratio: 0.3,
        mapped: false,
        locality: 24,
        xor: false,
    };
    let seed = crate::rng::derive_seed(seed, shape.name);
    random_circuit(&spec, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), &format!("{}_surrogate", shape.name))
}
