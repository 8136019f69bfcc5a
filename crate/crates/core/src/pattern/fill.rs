// SPDX-License-Identifier: Apache-2.0

use rand::Rng;
use rayon::prelude::*;

use crate::leakage::{mean_leakage, BoundTable, LeakageError, LeakageTable};
use crate::netlist::{Circuit, LineId};
use crate::rng::stream;
use crate::simulate::{InputPattern, Logic3};

use super::SearchConfig;

/// Scan-mode leakage in nA with `held` sources fixed and scan enable at 1.
///
/// Every other source belongs to the shifting chain and is evaluated at all
/// 0 and at all 1; the result is the mean of the two.
pub fn scan_leakage(c: &Circuit, t: &BoundTable<'_>, held: &[(LineId, bool)]) -> f64 {
    let mut values = vec![false; c.num_lines()];
    let se = c.scan_enable();
    if let Some(se) = se {
        values[se] = true;
    }
    for &(l, b) in held {
        values[l] = b;
    }
    let free: Vec<LineId> = c
        .source_lines()
        .into_iter()
        .filter(|&l| Some(l) != se && !held.iter().any(|&(h, _)| h == l))
        .collect();
    mean_leakage(c, t, &mut values, &free)
}

/// Completes the X positions of `partial` with the lowest scan-mode leakage
/// found.
///
/// When `2^k <= fill_trials` for `k` free positions every completion is
/// tried; otherwise `fill_trials` seeded random ones. Ties go to the
/// earliest trial. Assigned positions are kept.
pub fn fill_dont_cares(
    c: &Circuit,
    partial: &InputPattern,
    t: &LeakageTable,
    cfg: &SearchConfig,
) -> Result<InputPattern, LeakageError> {
    let xs = partial.unassigned();
    if xs.is_empty() {
        return Ok(partial.clone());
    }
    let bound = t.bind(c)?;
    let fixed: Vec<(LineId, bool)> = partial
        .iter()
        .filter_map(|(l, v)| v.to_bool().map(|b| (l, b)))
        .collect();
    let k = xs.len();
    let trials = cfg.fill_trials.max(1);
    let exhaustive = k < usize::BITS as usize && (1usize << k) <= trials;
    let count = if exhaustive { 1usize << k } else { trials };
    let completion = |i: usize| -> Vec<bool> {
        if exhaustive {
            (0..k).map(|j| i >> j & 1 == 1).collect()
        } else {
            let mut rng = stream(cfg.seed, &format!("fill/{i}"));
            (0..k).map(|_| rng.gen::<bool>()).collect()
        }
    };
    let leaks: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut held = fixed.clone();
            held.extend(xs.iter().copied().zip(completion(i)));
            scan_leakage(c, &bound, &held)
        })
        .collect();
    let mut best = 0;
    for (i, &l) in leaks.iter().enumerate() {
        if l < leaks[best] {
            best = i;
        }
    }
    let mut out = partial.clone();
    for (&l, b) in xs.iter().zip(completion(best)) {
        out.set(l, Logic3::from_bool(b));
    }
    Ok(out)
}
