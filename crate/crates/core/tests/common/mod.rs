// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use scanpower::netlist::generate::{random_circuit, RandomSpec};
use scanpower::netlist::{parse_bench, Circuit, GateKind, LineId};
use scanpower::leakage::{static_power, LeakageTable};
use scanpower::pattern::scan_mode_assignment;
use scanpower::simulate::{simulate, Assignment};
use scanpower::Logic3;

pub const BENCHMARKS: [&str; 7] = ["s27", "s208", "s298", "s344", "s349", "s382", "s444"];

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

/// Netlist path for a benchmark: the original from `SCANPOWER_ISCAS89_DIR`
/// when present, else the bundled file (a surrogate for all but s27).
pub fn bench_path(name: &str) -> PathBuf {
    if let Some(dir) = std::env::var_os("SCANPOWER_ISCAS89_DIR") {
        let p = Path::new(&dir).join(format!("{name}.bench"));
        if p.exists() {
            return p;
        }
    }
    let plain = data_dir().join(format!("bench/{name}.bench"));
    if plain.exists() {
        plain
    } else {
        data_dir().join(format!("bench/{name}_surrogate.bench"))
    }
}

pub fn bench_text(name: &str) -> String {
    std::fs::read_to_string(bench_path(name)).unwrap()
}

pub fn load(name: &str) -> Circuit {
    parse_bench(&bench_text(name), name).unwrap()
}

pub fn random(seed: u64, spec: &RandomSpec) -> Circuit {
    random_circuit(spec, &mut ChaCha8Rng::seed_from_u64(seed), &format!("r{seed}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn bits(v: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| v >> i & 1 == 1).collect()
}

/// Truth-table evaluation of one gate, written out case by case.
pub fn gate_value(kind: GateKind, ins: &[bool]) -> bool {
    match kind {
        GateKind::Inv => !ins[0],
        GateKind::Buf => ins[0],
        GateKind::And => !ins.contains(&false),
        GateKind::Nand => ins.contains(&false),
        GateKind::Or => ins.contains(&true),
        GateKind::Nor => !ins.contains(&true),
        GateKind::Xor => ins.iter().filter(|&&b| b).count() % 2 == 1,
        GateKind::Xnor => ins.iter().filter(|&&b| b).count() % 2 == 0,
        GateKind::Mux2 => {
            if ins[0] {
                ins[2]
            } else {
                ins[1]
            }
        }
    }
}

/// Recursive two-valued evaluation of `line` from source values, memoized
/// per call.
pub fn eval_line(c: &Circuit, sources: &dyn Fn(LineId) -> bool, line: LineId) -> bool {
    fn go(c: &Circuit, sources: &dyn Fn(LineId) -> bool, line: LineId, memo: &mut [Option<bool>]) -> bool {
        if let Some(v) = memo[line] {
            return v;
        }
        let v = match c.driving_gate(line) {
            None => sources(line),
            Some(g) => {
                let gate = c.gate(g);
                let ins: Vec<bool> = gate.inputs.iter().map(|&l| go(c, sources, l, memo)).collect();
                gate_value(gate.kind, &ins)
            }
        };
        memo[line] = Some(v);
        v
    }
    go(c, sources, line, &mut vec![None; c.num_lines()])
}

/// Three-valued value of `line` by enumerating every completion of the X
/// sources: binary iff all completions agree.
pub fn eval_line_3(c: &Circuit, sources: &dyn Fn(LineId) -> Logic3, line: LineId) -> Logic3 {
    let x: Vec<LineId> = c.source_lines().into_iter().filter(|&l| sources(l).is_x()).collect();
    assert!(x.len() <= 16);
    let mut seen = [false; 2];
    for v in 0..1u64 << x.len() {
        let b = bits(v, x.len());
        let f = |l: LineId| match x.iter().position(|&y| y == l) {
            Some(i) => b[i],
            None => sources(l).to_bool().unwrap(),
        };
        seen[eval_line(c, &f, line) as usize] = true;
    }
    match seen {
        [true, false] => Logic3::Zero,
        [false, true] => Logic3::One,
        _ => Logic3::X,
    }
}

/// Longest path delay by enumerating every source-to-endpoint path.
pub fn path_enum_delay(c: &Circuit, delay: &dyn Fn(GateKind) -> f64) -> f64 {
    fn longest_to(c: &Circuit, line: LineId, delay: &dyn Fn(GateKind) -> f64) -> f64 {
        match c.driving_gate(line) {
            None => 0.0,
            Some(g) => {
                let gate = c.gate(g);
                gate.inputs
                    .iter()
                    .map(|&l| longest_to(c, l, delay))
                    .fold(0.0, f64::max)
                    + delay(gate.kind)
            }
        }
    }
    c.endpoints().iter().map(|&l| longest_to(c, l, delay)).fold(0.0, f64::max)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Replays shifting with the recursive evaluator and an independent load
/// count.
pub fn replay(c: &Circuit, vectors: &[Vec<bool>], shift_src: &dyn Fn(LineId) -> bool) -> (f64, usize) {
    let chain = c.scan_chain().to_vec();
    let mut fanout = vec![0usize; c.num_lines()];
    for g in c.gates() {
        for &l in &g.inputs {
            fanout[l] += 1;
        }
    }
    let outputs: Vec<LineId> = c.gates().iter().map(|g| g.output).collect();
    let snapshot = |state: &[bool], shifting: bool| -> Vec<bool> {
        let f = |l: LineId| match chain.iter().position(|&q| q == l) {
            Some(i) => state[i],
            None => shifting && shift_src(l),
        };
        outputs.iter().map(|&o| eval_line(c, &f, o)).collect()
    };
    let mut state = vec![false; chain.len()];
    let mut prev = snapshot(&state, false);
    let mut load = 0.0;
    let mut cycles = 0;
    for v in vectors {
        for (phase, &bit) in v.iter().map(|b| (true, b)).chain(std::iter::once((false, &false))) {
            if phase {
                state.insert(0, bit);
                state.pop();
            }
            let cur = snapshot(&state, phase);
            for (i, &o) in outputs.iter().enumerate() {
                if cur[i] != prev[i] {
                    load += (fanout[o] + 1) as f64;
                }
            }
            prev = cur;
            cycles += 1;
        }
    }
    (load, cycles)
}


/// Independent L_obs: enumerate every population vector, simulate with the
/// three-valued simulator and price with `static_power`. Sources outside the
/// population are X for the logic values and priced as the mean of their
/// all-0 and all-1 states.
pub fn brute_lobs(c: &Circuit, t: &LeakageTable, population: &[LineId]) -> Vec<Option<f64>> {
    let vdd = 1.0;
    let mut sum = vec![[0.0f64; 2]; c.num_lines()];
    let mut cnt = vec![[0usize; 2]; c.num_lines()];
    for v in 0..1u64 << population.len() {
        let b = bits(v, population.len());
        let mut a = Assignment::unknown(c);
        for (&l, &x) in population.iter().zip(&b) {
            a.set(l, x.into());
        }
        if let Some(se) = c.scan_enable() {
            a.set(se, Logic3::One);
        }
        let free: Vec<LineId> = c.source_lines().into_iter().filter(|l| a.get(*l).is_x()).collect();
        let mut leak_na = 0.0;
        for fill in [false, true] {
            let mut full = a.clone();
            for &l in &free {
                full.set(l, fill.into());
            }
            let full = simulate(c, &full);
            leak_na += static_power(c, &full, t, vdd).unwrap() * 1e3;
            if free.is_empty() {
                leak_na *= 2.0;
                break;
            }
        }
        leak_na /= 2.0;
        let a = simulate(c, &a);
        for l in 0..c.num_lines() {
            if let Some(x) = a.get(l).to_bool() {
                sum[l][x as usize] += leak_na;
                cnt[l][x as usize] += 1;
            }
        }
    }
    (0..c.num_lines())
        .map(|l| {
            if cnt[l][0] == 0 || cnt[l][1] == 0 {
                None
            } else {
                Some(sum[l][1] / cnt[l][1] as f64 - sum[l][0] / cnt[l][0] as f64)
            }
        })
        .collect()
}

/// Whether some assignment of the controlled inputs gives `line` the value
/// `v` under three-valued simulation with every other source at X.
pub fn justifiable(c: &Circuit, line: LineId, v: bool) -> bool {
    let ctl = c.controlled_inputs();
    (0..1u64 << ctl.len()).any(|x| {
        let mut a = scan_mode_assignment(c);
        for (&l, b) in ctl.iter().zip(bits(x, ctl.len())) {
            a.set(l, b.into());
        }
        simulate(c, &a).get(line) == Logic3::from_bool(v)
    })
}

pub fn truth_table(c: &Circuit) -> Vec<Vec<bool>> {
    let src = c.source_lines();
    let ends = c.endpoints();
    (0..1u64 << src.len())
        .map(|x| {
            let b = bits(x, src.len());
            let f = |l: LineId| b[src.iter().position(|&s| s == l).unwrap()];
            ends.iter().map(|&e| eval_line(c, &f, e)).collect()
        })
        .collect()
}

