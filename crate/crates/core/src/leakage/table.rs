// SPDX-License-Identifier: Apache-2.0

//! Per-cell leakage tables and total static power.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::model::{gate_current, subthreshold_current, DeviceParams, Technology};
use super::LeakageError;
use crate::netlist::{Circuit, GateKind};
use crate::simulate::Assignment;

/// Characterized NAND2 leakage in nA for patterns 00, 01, 10, 11.
pub const NAND2_REFERENCE: [f64; 4] = [78.0, 73.0, 264.0, 408.0];

/// Cells a default table covers.
pub const STANDARD_CELLS: [(GateKind, usize); 8] = [
    (GateKind::Inv, 1),
    (GateKind::Nand, 2),
    (GateKind::Nand, 3),
    (GateKind::Nand, 4),
    (GateKind::Nor, 2),
    (GateKind::Nor, 3),
    (GateKind::Nor, 4),
    (GateKind::Mux2, 3),
];

const BUNDLED: &str = include_str!("../../data/leakage_45nm.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSource {
    File,
    Analytic,
}

/// Leakage current in nA per cell kind, arity and input pattern.
///
/// Pattern index `p` reads the inputs as a binary number with the first
/// input as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakageTable {
    entries: BTreeMap<(GateKind, usize), Vec<Option<f64>>>,
    pub source: TableSource,
}

fn pattern_index(bits: impl Iterator<Item = bool>) -> usize {
    bits.fold(0, |acc, b| acc << 1 | b as usize)
}

fn pattern_string(arity: usize, index: usize) -> String {
    (0..arity)
        .map(|i| if index >> (arity - 1 - i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl LeakageTable {
    pub fn new(source: TableSource) -> LeakageTable {
        LeakageTable {
            entries: BTreeMap::new(),
            source,
        }
    }

    /// The table shipped with the crate.
    pub fn bundled() -> LeakageTable {
        let mut t = LeakageTable::from_csv(BUNDLED).expect("bundled leakage table is valid");
        t.source = TableSource::File;
        t
    }

    pub fn insert(&mut self, kind: GateKind, inputs: &[bool], leak_na: f64) {
        assert!(leak_na >= 0.0 && leak_na.is_finite(), "leakage must be finite and >= 0");
        let row = self
            .entries
            .entry((kind, inputs.len()))
            .or_insert_with(|| vec![None; 1 << inputs.len()]);
        row[pattern_index(inputs.iter().copied())] = Some(leak_na);
    }

    pub fn get(&self, kind: GateKind, inputs: &[bool]) -> Option<f64> {
        self.entries
            .get(&(kind, inputs.len()))
            .and_then(|row| row[pattern_index(inputs.iter().copied())])
    }

    /// `(kind, arity)` pairs with at least one entry.
    pub fn cells(&self) -> impl Iterator<Item = (GateKind, usize)> + '_ {
        self.entries.keys().copied()
    }

    /// Multiplies every entry by `k`.
    pub fn scaled(&self, k: f64) -> LeakageTable {
        let mut t = self.clone();
        for row in t.entries.values_mut() {
            for e in row.iter_mut().flatten() {
                *e *= k;
            }
        }
        t
    }

    fn complete_row(&self, kind: GateKind, arity: usize) -> Result<&[Option<f64>], LeakageError> {
        let missing = |p: usize| LeakageError::MissingEntry {
            kind,
            arity,
            pattern: pattern_string(arity, p),
        };
        let row = self.entries.get(&(kind, arity)).ok_or_else(|| missing(0))?;
        match row.iter().position(Option::is_none) {
            Some(p) => Err(missing(p)),
            None => Ok(row),
        }
    }

    /// Checks that every cell in `c` has all of its patterns and returns a
    /// per-gate view for fast lookups.
    pub fn bind<'a>(&'a self, c: &Circuit) -> Result<BoundTable<'a>, LeakageError> {
        let rows = c
            .gates()
            .iter()
            .map(|g| self.complete_row(g.kind, g.inputs.len()))
            .collect::<Result<_, _>>()?;
        Ok(BoundTable { rows })
    }

    /// Reads `kind,arity,pattern,leak_nA` rows; a header row is allowed.
    pub fn from_csv(text: &str) -> Result<LeakageTable, LeakageError> {
        let mut t = LeakageTable::new(TableSource::File);
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        for (i, rec) in reader.records().enumerate() {
            let err = |m: String| LeakageError::Parse { line: i + 1, message: m };
            let rec = rec.map_err(|e| err(e.to_string()))?;
            if rec.len() != 4 {
                return Err(err(format!("expected 4 fields, got {}", rec.len())));
            }
            if rec[0].eq_ignore_ascii_case("kind") {
                continue;
            }
            let kind = GateKind::from_keyword(&rec[0])
                .ok_or_else(|| err(format!("unknown kind `{}`", &rec[0])))?;
            let arity: usize = rec[1].parse().map_err(|_| err(format!("bad arity `{}`", &rec[1])))?;
            let pattern = &rec[2];
            if pattern.len() != arity || !pattern.chars().all(|c| c == '0' || c == '1') {
                return Err(err(format!("pattern `{pattern}` does not match arity {arity}")));
            }
            if !kind.arity_ok(arity) {
                return Err(err(format!("{kind} cannot have {arity} inputs")));
            }
            let leak: f64 = rec[3].parse().map_err(|_| err(format!("bad current `{}`", &rec[3])))?;
            if !(leak >= 0.0 && leak.is_finite()) {
                return Err(err(format!("current must be finite and >= 0, got {leak}")));
            }
            let bits: Vec<bool> = pattern.chars().map(|c| c == '1').collect();
            t.insert(kind, &bits, leak);
        }
        Ok(t)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,arity,pattern,leak_nA\n");
        for (&(kind, arity), row) in &self.entries {
            for (p, e) in row.iter().enumerate() {
                if let Some(v) = e {
                    let _ = writeln!(s, "{},{},{},{}", kind.keyword(), arity, pattern_string(arity, p), v);
                }
            }
        }
        s
    }
}

/// A table checked against one circuit.
#[derive(Debug, Clone)]
pub struct BoundTable<'a> {
    rows: Vec<&'a [Option<f64>]>,
}

impl BoundTable<'_> {
    /// Total leakage in nA for binary line values.
    pub fn current(&self, c: &Circuit, values: &[bool]) -> f64 {
        c.gates()
            .iter()
            .zip(&self.rows)
            .map(|(g, row)| row[pattern_index(g.inputs.iter().map(|&l| values[l]))].expect("bound rows are complete"))
            .sum()
    }
}

/// Total static power in μW: `Σ I_gate · vdd` with `I_gate` looked up by
/// the gate's input values under `a`.
pub fn static_power(c: &Circuit, a: &Assignment, t: &LeakageTable, vdd: f64) -> Result<f64, LeakageError> {
    let mut total_na = 0.0;
    for g in c.gates() {
        let mut bits = Vec::with_capacity(g.inputs.len());
        for &l in &g.inputs {
            bits.push(
                a.get(l)
                    .to_bool()
                    .ok_or_else(|| LeakageError::UnknownValue(c.line_name(l).to_string()))?,
            );
        }
        total_na += t.get(g.kind, &bits).ok_or_else(|| LeakageError::MissingEntry {
            kind: g.kind,
            arity: bits.len(),
            pattern: bits.iter().map(|&b| if b { '1' } else { '0' }).collect(),
        })?;
    }
    // nA · V = nW
    Ok(total_na * vdd * 1e-3)
}

fn off_stack(p: &DeviceParams, off: usize) -> f64 {
    let k = off as f64;
    subthreshold_current(p, 0.0, p.vdd / k, (k - 1.0) * p.vdd / (2.0 * k))
}

fn tunnel(p: &DeviceParams, vox: f64) -> Result<f64, LeakageError> {
    gate_current(p, vox)
}

/// Series-parallel cell: `series` devices form the stack between the rail
/// (position 0) and the output, `parallel` devices sit between the other
/// rail and the output. A series device conducts when its input equals
/// `on`.
fn stack_cell(series: &DeviceParams, parallel: &DeviceParams, on: bool, inputs: &[bool]) -> Result<f64, LeakageError> {
    let vdd = series.vdd;
    let off = inputs.iter().filter(|&&b| b != on).count();
    let mut i = 0.0;
    if off == 0 {
        // Stack conducts; every parallel device is off with full drain bias.
        for _ in inputs {
            i += subthreshold_current(parallel, 0.0, vdd, 0.0);
            i += tunnel(series, vdd)?;
        }
        return Ok(i);
    }
    i += off_stack(series, off);
    let mut grounded = true;
    for &b in inputs {
        if b == on {
            // A conducting device tied to the rail sees the full oxide drop;
            // one above an off device floats up to a threshold below it.
            i += tunnel(series, if grounded { vdd } else { series.vt0 })?;
            // The complementary parallel device is off with no drain bias.
        } else {
            grounded = false;
            i += tunnel(parallel, vdd)?;
        }
    }
    Ok(i)
}

/// Analytic leakage of one cell in nA.
///
/// NAND stacks its NMOS devices with input 0 at ground and the last input
/// next to the output; NOR stacks its PMOS devices the same way from the
/// supply. A stack with `k` off devices is evaluated as one device with
/// `vds = vdd/k` and source at `(k-1) vdd / (2k)`. Gate tunneling counts
/// conducting devices. `Mux2(select, data, constant)` is a transmission-gate
/// pair: the selected gate tunnels according to the passed value, the other
/// leaks when its input differs from the output.
pub fn cell_leakage(t: &Technology, kind: GateKind, inputs: &[bool]) -> Result<f64, LeakageError> {
    let (n, p) = (&t.nmos, &t.pmos);
    let vdd = t.vdd();
    if !kind.arity_ok(inputs.len()) || inputs.len() > 4 {
        return Err(LeakageError::Unsupported(format!("{kind}/{}", inputs.len())));
    }
    let amps = match kind {
        GateKind::Inv => {
            if inputs[0] {
                subthreshold_current(p, 0.0, vdd, 0.0) + tunnel(n, vdd)?
            } else {
                subthreshold_current(n, 0.0, vdd, 0.0) + tunnel(p, vdd)?
            }
        }
        GateKind::Nand => stack_cell(n, p, true, inputs)?,
        GateKind::Nor => stack_cell(p, n, false, inputs)?,
        GateKind::Mux2 => {
            let (sel, data, constant) = (inputs[0], inputs[1], inputs[2]);
            let (out, other) = if sel { (constant, data) } else { (data, constant) };
            let mut i = if out {
                tunnel(n, n.vt0)? + tunnel(p, vdd)?
            } else {
                tunnel(n, vdd)? + tunnel(p, p.vt0)?
            };
            if other != out {
                i += subthreshold_current(n, 0.0, vdd, 0.0) + subthreshold_current(p, 0.0, vdd, 0.0);
            }
            i
        }
        k => return Err(LeakageError::Unsupported(k.to_string())),
    };
    Ok(amps * 1e9)
}

/// Analytic table for the listed cells, uncalibrated, in nA.
pub fn build_leakage_table(t: &Technology, kinds: &[(GateKind, usize)]) -> Result<LeakageTable, LeakageError> {
    let mut table = LeakageTable::new(TableSource::Analytic);
    for &(kind, arity) in kinds {
        for p in 0..1usize << arity {
            let bits: Vec<bool> = (0..arity).map(|i| p >> (arity - 1 - i) & 1 == 1).collect();
            table.insert(kind, &bits, cell_leakage(t, kind, &bits)?);
        }
    }
    Ok(table)
}

/// Scale that best maps analytic NAND2 values onto [`NAND2_REFERENCE`]
/// (geometric mean of the four ratios).
pub fn calibration_scale(analytic: &LeakageTable) -> Result<f64, LeakageError> {
    let mut log_sum = 0.0;
    for (p, &r) in NAND2_REFERENCE.iter().enumerate() {
        let bits = [p & 2 != 0, p & 1 != 0];
        let a = analytic.get(GateKind::Nand, &bits).ok_or(LeakageError::MissingEntry {
            kind: GateKind::Nand,
            arity: 2,
            pattern: pattern_string(2, p),
        })?;
        log_sum += (r / a).ln();
    }
    Ok((log_sum / 4.0).exp())
}

/// Standard-cell table from the analytic model, calibrated against the
/// NAND2 reference, whose rows it then carries verbatim.
pub fn reference_table(t: &Technology) -> Result<LeakageTable, LeakageError> {
    let analytic = build_leakage_table(t, &STANDARD_CELLS)?;
    let mut table = analytic.scaled(calibration_scale(&analytic)?);
    for (p, &r) in NAND2_REFERENCE.iter().enumerate() {
        table.insert(GateKind::Nand, &[p & 2 != 0, p & 1 != 0], r);
    }
    table.source = TableSource::File;
    Ok(table)
}
