// SPDX-License-Identifier: Apache-2.0

use crate::leakage::{LeakageError, LeakageTable};
use crate::netlist::{Circuit, GateKind, LineId};
use crate::simulate::Assignment;

/// All permutations of `0..n` in lexicographic order, identity first.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Rewires NAND/NOR inputs to minimize table leakage summed over `states`
/// (binary values of every line). Ties keep the current order.
pub fn reorder_inputs_multi(c: &Circuit, states: &[Vec<bool>], t: &LeakageTable) -> Result<Circuit, LeakageError> {
    let mut changes: Vec<(usize, Vec<LineId>)> = Vec::new();
    let mut perms: Vec<Vec<Vec<usize>>> = Vec::new();
    for (g, gate) in c.gates().iter().enumerate() {
        if !matches!(gate.kind, GateKind::Nand | GateKind::Nor) {
            continue;
        }
        let n = gate.inputs.len();
        if perms.len() <= n {
            perms.resize_with(n + 1, Vec::new);
        }
        if perms[n].is_empty() {
            perms[n] = permutations(n);
        }
        let cost = |p: &[usize]| -> Result<f64, LeakageError> {
            let mut sum = 0.0;
            for s in states {
                let bits: Vec<bool> = p.iter().map(|&i| s[gate.inputs[i]]).collect();
                sum += t.get(gate.kind, &bits).ok_or_else(|| LeakageError::MissingEntry {
                    kind: gate.kind,
                    arity: n,
                    pattern: bits.iter().map(|&b| if b { '1' } else { '0' }).collect(),
                })?;
            }
            Ok(sum)
        };
        let mut best = 0;
        let mut best_cost = cost(&perms[n][0])?;
        for (k, p) in perms[n].iter().enumerate().skip(1) {
            let v = cost(p)?;
            if v < best_cost {
                best = k;
                best_cost = v;
            }
        }
        if best != 0 {
            changes.push((g, perms[n][best].iter().map(|&i| gate.inputs[i]).collect()));
        }
    }
    Ok(c.with_permuted_inputs(&changes))
}

/// Rewires NAND/NOR inputs to the order with the lowest table leakage under
/// `a`, which must be binary on every NAND/NOR input.
pub fn reorder_inputs(c: &Circuit, a: &Assignment, t: &LeakageTable) -> Result<Circuit, LeakageError> {
    for g in c.gates() {
        if matches!(g.kind, GateKind::Nand | GateKind::Nor) {
            if let Some(&l) = g.inputs.iter().find(|&&l| a.get(l).is_x()) {
                return Err(LeakageError::UnknownValue(c.line_name(l).to_string()));
            }
        }
    }
    let state: Vec<bool> = a.values().iter().map(|v| v.to_bool().unwrap_or(false)).collect();
    reorder_inputs_multi(c, &[state], t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;
    use crate::simulate::{simulate, Logic3};

    fn nand2_at(a_val: Logic3, b_val: Logic3) -> (Circuit, Circuit) {
        let c = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n", "n").unwrap();
        let mut a = Assignment::unknown(&c);
        a.set(0, a_val);
        a.set(1, b_val);
        let r = reorder_inputs(&c, &simulate(&c, &a), &LeakageTable::bundled()).unwrap();
        (c, r)
    }

    #[test]
    fn nand2_one_zero_is_swapped() {
        let (c, r) = nand2_at(Logic3::One, Logic3::Zero);
        assert_eq!(r.gate(0).inputs, vec![c.line_id("b").unwrap(), c.line_id("a").unwrap()]);
    }

    #[test]
    fn symmetric_patterns_are_left_alone() {
        for v in [Logic3::Zero, Logic3::One] {
            let (c, r) = nand2_at(v, v);
            assert_eq!(r.gate(0).inputs, c.gate(0).inputs);
        }
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4)[0], vec![0, 1, 2, 3]);
    }
}
