// SPDX-License-Identifier: Apache-2.0

//! Leakage observability: how much the average circuit leakage moves when a
//! line is 1 rather than 0.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::table::{BoundTable, LeakageTable};
use super::LeakageError;
use crate::netlist::{Circuit, LineId};
use crate::simulate::{propagate_bool, Assignment, Logic3};

/// Exhaustive enumeration is refused above `2^EXHAUSTIVE_LIMIT_BITS` vectors.
pub const EXHAUSTIVE_LIMIT_BITS: usize = 20;

const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObsMode {
    Exhaustive,
    /// Up to `n` random vectors per line and value, from one seeded stream.
    Sampled { n: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observability {
    /// L_obs per line, in nA.
    pub values: Vec<f64>,
    /// Lines that never took one of the two values; their L_obs is 0.
    pub stuck: Vec<bool>,
    /// The inputs whose vectors were averaged over.
    pub population: Vec<LineId>,
    /// Number of vectors evaluated.
    pub vectors: usize,
}

impl Observability {
    pub fn get(&self, line: LineId) -> f64 {
        self.values[line]
    }

    /// All-zero observability, which leaves every directive neutral.
    pub fn neutral(c: &Circuit) -> Observability {
        Observability {
            values: vec![0.0; c.num_lines()],
            stuck: vec![false; c.num_lines()],
            population: Vec::new(),
            vectors: 0,
        }
    }
}

/// Leakage in nA averaged over the all-0 and all-1 states of `free`.
///
/// `values` holds the other sources; gate outputs are recomputed.
pub fn mean_leakage(c: &Circuit, t: &BoundTable<'_>, values: &mut [bool], free: &[LineId]) -> f64 {
    if free.is_empty() {
        propagate_bool(c, values);
        return t.current(c, values);
    }
    let mut sum = 0.0;
    for state in [false, true] {
        for &l in free {
            values[l] = state;
        }
        propagate_bool(c, values);
        sum += t.current(c, values);
    }
    sum / 2.0
}

struct Setup<'a> {
    c: &'a Circuit,
    table: BoundTable<'a>,
    population: Vec<LineId>,
    free: Vec<LineId>,
    base: Vec<bool>,
}

#[derive(Clone)]
struct Sums {
    sum: [Vec<f64>; 2],
    count: [Vec<usize>; 2],
}

impl Sums {
    fn new(n: usize) -> Sums {
        Sums {
            sum: [vec![0.0; n], vec![0.0; n]],
            count: [vec![0; n], vec![0; n]],
        }
    }

    fn add(&mut self, leak: f64, values: &[Logic3]) {
        for (l, v) in values.iter().enumerate() {
            if let Some(b) = v.to_bool() {
                self.sum[b as usize][l] += leak;
                self.count[b as usize][l] += 1;
            }
        }
    }

    fn merge(&mut self, o: &Sums) {
        for v in 0..2 {
            for (a, b) in self.sum[v].iter_mut().zip(&o.sum[v]) {
                *a += b;
            }
            for (a, b) in self.count[v].iter_mut().zip(&o.count[v]) {
                *a += b;
            }
        }
    }
}

impl<'a> Setup<'a> {
    fn new(c: &'a Circuit, t: &'a LeakageTable, population: &[LineId]) -> Result<Setup<'a>, LeakageError> {
        let table = t.bind(c)?;
        let mut base = vec![false; c.num_lines()];
        if let Some(se) = c.scan_enable() {
            if !population.contains(&se) {
                base[se] = true;
            }
        }
        let free = c
            .source_lines()
            .into_iter()
            .filter(|l| !population.contains(l) && Some(*l) != c.scan_enable())
            .collect();
        Ok(Setup {
            c,
            table,
            population: population.to_vec(),
            free,
            base,
        })
    }

    /// Mean leakage and three-valued line values for one population vector.
    fn eval(&self, bits: &[bool]) -> (f64, Vec<Logic3>) {
        let mut values = self.base.clone();
        for (&l, &b) in self.population.iter().zip(bits) {
            values[l] = b;
        }
        let leak = mean_leakage(self.c, &self.table, &mut values.clone(), &self.free);
        let logic = if self.free.is_empty() {
            propagate_bool(self.c, &mut values);
            values.into_iter().map(Logic3::from_bool).collect()
        } else {
            let mut a = Assignment::from_values(values.into_iter().map(Logic3::from_bool).collect());
            for &l in &self.free {
                a.set(l, Logic3::X);
            }
            a.propagate(self.c);
            a.values().to_vec()
        };
        (leak, logic)
    }

    fn finish(&self, sums: &Sums, vectors: usize) -> Observability {
        let n = self.c.num_lines();
        let mut values = vec![0.0; n];
        let mut stuck = vec![false; n];
        for l in 0..n {
            let (c0, c1) = (sums.count[0][l], sums.count[1][l]);
            if c0 == 0 || c1 == 0 {
                stuck[l] = true;
            } else {
                values[l] = sums.sum[1][l] / c1 as f64 - sums.sum[0][l] / c0 as f64;
            }
        }
        Observability {
            values,
            stuck,
            population: self.population.clone(),
            vectors,
        }
    }
}

/// Leakage observability of every line over the default population: the
/// controlled inputs once multiplexers exist, else the primary and
/// pseudo-inputs.
pub fn leakage_observability(c: &Circuit, t: &LeakageTable, mode: ObsMode) -> Result<Observability, LeakageError> {
    let population = if c.muxes().is_empty() {
        let mut p = c.primary_inputs().to_vec();
        p.extend(c.pseudo_inputs());
        p
    } else {
        c.controlled_inputs()
    };
    leakage_observability_over(c, t, &population, mode)
}

/// Leakage observability with vectors drawn over `population`.
///
/// `L_obs(i) = L_avg(i,1) - L_avg(i,0)`, where `L_avg(i,v)` averages the
/// circuit leakage over the vectors under which three-valued simulation
/// puts line `i` at `v`. The scan-enable line is held at 1 and every other
/// source outside the population is X for that test; its leakage is the
/// mean of the all-0 and all-1 states of those sources.
pub fn leakage_observability_over(
    c: &Circuit,
    t: &LeakageTable,
    population: &[LineId],
    mode: ObsMode,
) -> Result<Observability, LeakageError> {
    let setup = Setup::new(c, t, population)?;
    let k = population.len();
    let lines = c.num_lines();
    match mode {
        ObsMode::Exhaustive => {
            if k > EXHAUSTIVE_LIMIT_BITS {
                return Err(LeakageError::TooManyInputs(k));
            }
            let total = 1usize << k;
            let chunks: Vec<Sums> = (0..total.div_ceil(CHUNK))
                .into_par_iter()
                .map(|ci| {
                    let mut s = Sums::new(lines);
                    let mut bits = vec![false; k];
                    for v in ci * CHUNK..((ci + 1) * CHUNK).min(total) {
                        for (j, b) in bits.iter_mut().enumerate() {
                            *b = v >> j & 1 == 1;
                        }
                        let (leak, values) = setup.eval(&bits);
                        s.add(leak, &values);
                    }
                    s
                })
                .collect();
            let mut sums = Sums::new(lines);
            for s in &chunks {
                sums.merge(s);
            }
            Ok(setup.finish(&sums, total))
        }
        ObsMode::Sampled { n, seed } => {
            let n = n.max(1);
            let cap = 8 * n;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut sums = Sums::new(lines);
            let mut seen_binary = vec![false; lines];
            let mut drawn = 0;
            while drawn < cap {
                let batch: Vec<Vec<bool>> = (0..CHUNK.min(cap - drawn))
                    .map(|_| (0..k).map(|_| rng.gen::<bool>()).collect())
                    .collect();
                let results: Vec<(f64, Vec<Logic3>)> = batch.par_iter().map(|b| setup.eval(b)).collect();
                for (leak, values) in &results {
                    drawn += 1;
                    for (l, v) in values.iter().enumerate() {
                        if let Some(b) = v.to_bool() {
                            seen_binary[l] = true;
                            let b = b as usize;
                            if sums.count[b][l] < n {
                                sums.sum[b][l] += leak;
                                sums.count[b][l] += 1;
                            }
                        }
                    }
                }
                // Lines never seen binary after n draws only depend on the
                // free sources and are left out of the stopping rule.
                let done = (0..lines).all(|l| {
                    (sums.count[0][l] >= n && sums.count[1][l] >= n) || (!seen_binary[l] && drawn >= n)
                });
                if done {
                    break;
                }
            }
            Ok(setup.finish(&sums, drawn))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;

    fn nand2() -> Circuit {
        parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n", "n").unwrap()
    }

    #[test]
    fn nand2_input_observability() {
        let c = nand2();
        let o = leakage_observability(&c, &LeakageTable::bundled(), ObsMode::Exhaustive).unwrap();
        assert!((o.get(0) - 260.5).abs() < 1e-12);
        assert_eq!(o.vectors, 4);
        assert!(!o.stuck.iter().any(|&s| s));
    }

    #[test]
    fn dangling_line_without_influence() {
        let c = parse_bench(
            "INPUT(a)\nINPUT(b)\nINPUT(d)\nOUTPUT(y)\ny = NAND(a, b)\nz = NOT(d)\n",
            "d",
        )
        .unwrap();
        let mut t = LeakageTable::bundled();
        t.insert(crate::GateKind::Inv, &[false], 5.0);
        t.insert(crate::GateKind::Inv, &[true], 5.0);
        let o = leakage_observability(&c, &t, ObsMode::Exhaustive).unwrap();
        let z = c.line_id("z").unwrap();
        assert!(o.get(z).abs() < 1e-9);
    }

    #[test]
    fn too_many_inputs_refused() {
        let mut text = String::new();
        for i in 0..21 {
            text.push_str(&format!("INPUT(i{i})\n"));
        }
        text.push_str("OUTPUT(i0)\n");
        let c = parse_bench(&text, "wide").unwrap();
        let e = leakage_observability(&c, &LeakageTable::bundled(), ObsMode::Exhaustive);
        assert_eq!(e.unwrap_err(), LeakageError::TooManyInputs(21));
    }

    #[test]
    fn stuck_lines_are_flagged() {
        let c = parse_bench("INPUT(a)\nOUTPUT(y)\nb = NOT(a)\ny = NAND(a, b)\n", "s").unwrap();
        let o = leakage_observability(&c, &LeakageTable::bundled(), ObsMode::Exhaustive).unwrap();
        let y = c.line_id("y").unwrap();
        assert!(o.stuck[y]);
        assert_eq!(o.get(y), 0.0);
    }

    #[test]
    fn sampled_matches_exhaustive_on_nand2() {
        let c = nand2();
        let t = LeakageTable::bundled();
        let s = leakage_observability(&c, &t, ObsMode::Sampled { n: 4096, seed: 3 }).unwrap();
        assert!((s.get(0) - 260.5).abs() < 0.05 * 260.5);
    }
}
