// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use thiserror::Error;

use super::vectors::{lfsr_vectors, parse_vectors};
use super::{ModePower, PowerReport, VectorSource};
use crate::leakage::{
    leakage_observability_over, LeakageTable, ObsMode, Observability,
};
use crate::netlist::{parse_bench, tech_map, Circuit, LineId};
use crate::pattern::{
    fill_dont_cares, find_controlled_input_pattern, reorder_inputs_multi, scan_leakage, LoMode,
    SearchConfig, SearchOutcome,
};
use crate::rng::derive_seed;
use crate::simulate::{
    dynamic_power_per_hz, propagate_bool, scan_shift_activity, CapacitanceModel, InputPattern,
    Logic3, ScanMode, ShiftActivity,
};
use crate::timing::{add_muxes, DelayModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Parse,
    ScanOrder,
    TechMap,
    AddMux,
    Vectors,
    Observability,
    Fill,
    Reorder,
    Simulate,
    Leakage,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Parse => "parse",
            Stage::ScanOrder => "scan order",
            Stage::TechMap => "technology mapping",
            Stage::AddMux => "multiplexer insertion",
            Stage::Vectors => "test vectors",
            Stage::Observability => "leakage observability",
            Stage::Fill => "don't-care fill",
            Stage::Reorder => "input reordering",
            Stage::Simulate => "scan simulation",
            Stage::Leakage => "static power",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{circuit}: {stage}: {message}")]
pub struct PipelineError {
    pub circuit: String,
    pub stage: Stage,
    pub message: String,
}

#[derive(Debug, Clone)]
pub enum VectorInput {
    /// Contents of a vector file.
    Text(String),
    /// `n` vectors from the seeded LFSR.
    Lfsr(usize),
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub delays: DelayModel,
    pub cap: CapacitanceModel,
    pub vdd: f64,
    pub search: SearchConfig,
    /// Scan chain order as pseudo-input names, head first.
    pub scan_order: Option<Vec<String>>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            delays: DelayModel::default(),
            cap: CapacitanceModel::default(),
            vdd: 0.9,
            search: SearchConfig::default(),
            scan_order: None,
        }
    }
}

/// Everything one configuration was measured with.
#[derive(Debug, Clone)]
pub struct ModeRun {
    pub circuit: Circuit,
    /// Held values during shifting; empty for traditional scan.
    pub pattern: InputPattern,
    pub activity: ShiftActivity,
    pub power: ModePower,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub report: PowerReport,
    pub vectors: Vec<Vec<bool>>,
    pub observability: Observability,
    /// Search result on the multiplexed circuit.
    pub search: SearchOutcome,
    /// Search result of the input-control baseline.
    pub baseline_search: SearchOutcome,
    pub traditional: ModeRun,
    pub input_control: ModeRun,
    pub proposed: ModeRun,
}

fn held(p: &InputPattern) -> Vec<(LineId, bool)> {
    p.iter().filter_map(|(l, v)| v.to_bool().map(|b| (l, b))).collect()
}

fn measure(
    c: &Circuit,
    vectors: &[Vec<bool>],
    mode: ScanMode<'_>,
    pattern: &InputPattern,
    t: &LeakageTable,
    cfg: &PipelineConfig,
) -> Result<(ShiftActivity, ModePower), (Stage, String)> {
    let activity = scan_shift_activity(c, vectors, mode, &cfg.cap).map_err(|e| (Stage::Simulate, e.to_string()))?;
    let bound = t.bind(c).map_err(|e| (Stage::Leakage, e.to_string()))?;
    let mut hold = held(pattern);
    if matches!(mode, ScanMode::Traditional) {
        hold = c.primary_inputs().iter().map(|&l| (l, false)).collect();
    }
    let leak_na = scan_leakage(c, &bound, &hold);
    let power = ModePower {
        dynamic_per_hz: dynamic_power_per_hz(activity.per_cycle(), cfg.vdd, cfg.cap.vth) * 1e6,
        static_uw: leak_na * cfg.vdd * 1e-3,
    };
    Ok((activity, power))
}

/// Runs the full comparison on one `.bench` netlist.
///
/// The netlist is mapped to the NAND/NOR/INV library. Traditional scan uses
/// the mapped circuit with primary inputs at 0 during shifting. Input
/// control uses the mapped circuit with primary inputs held at a pattern
/// found by the same search without leakage direction; inputs it leaves
/// free are held at 0. The proposed configuration multiplexes pseudo-inputs
/// with slack, searches a pattern directed by leakage observability, fills
/// its don't-cares for minimum leakage and reorders gate inputs.
pub fn run_pipeline(
    bench: &str,
    name: &str,
    vectors: &VectorInput,
    table: &LeakageTable,
    cfg: &PipelineConfig,
) -> Result<PipelineOutput, PipelineError> {
    let fail = |stage: Stage, message: String| PipelineError {
        circuit: name.to_string(),
        stage,
        message,
    };
    let mut parsed = parse_bench(bench, name).map_err(|e| fail(Stage::Parse, e.to_string()))?;
    if let Some(order) = &cfg.scan_order {
        parsed = parsed
            .with_scan_order(order)
            .map_err(|e| fail(Stage::ScanOrder, e.to_string()))?;
    }
    let mapped = tech_map(&parsed);
    if !mapped.is_mapped() {
        return Err(fail(Stage::TechMap, "unmapped cells remain".into()));
    }
    let muxed = add_muxes(&mapped, &cfg.delays).map_err(|e| fail(Stage::AddMux, e.to_string()))?;

    let chain_len = mapped.scan_chain().len();
    let (vecs, source) = match vectors {
        VectorInput::Text(text) => (
            parse_vectors(text, chain_len).map_err(|e| fail(Stage::Vectors, e.to_string()))?,
            VectorSource::File,
        ),
        VectorInput::Lfsr(n) => (lfsr_vectors(chain_len, *n, cfg.search.seed), VectorSource::Lfsr),
    };

    let population = muxed.controlled_inputs();
    let obs_mode = match cfg.search.lo_mode {
        LoMode::Exhaustive => ObsMode::Exhaustive,
        LoMode::Auto if population.len() <= 16 => ObsMode::Exhaustive,
        LoMode::Auto => ObsMode::Sampled {
            n: 4096,
            seed: derive_seed(cfg.search.seed, "observability"),
        },
        LoMode::Sampled(n) => ObsMode::Sampled {
            n,
            seed: derive_seed(cfg.search.seed, "observability"),
        },
    };
    let lo = leakage_observability_over(&muxed, table, &population, obs_mode)
        .map_err(|e| fail(Stage::Observability, e.to_string()))?;

    let search = find_controlled_input_pattern(&muxed, &lo, &cfg.search, &cfg.cap);
    let filled = fill_dont_cares(&muxed, &search.pattern, table, &cfg.search)
        .map_err(|e| fail(Stage::Fill, e.to_string()))?;

    // Reorder against the two chain extremes used for scan-mode leakage.
    let mut states = Vec::with_capacity(2);
    for chain in [false, true] {
        let mut values = vec![chain; muxed.num_lines()];
        if let Some(se) = muxed.scan_enable() {
            values[se] = true;
        }
        for (l, b) in held(&filled) {
            values[l] = b;
        }
        propagate_bool(&muxed, &mut values);
        states.push(values);
    }
    let proposed_circuit =
        reorder_inputs_multi(&muxed, &states, table).map_err(|e| fail(Stage::Reorder, e.to_string()))?;

    let baseline_cfg = SearchConfig {
        directed: false,
        ..cfg.search.clone()
    };
    let baseline_search =
        find_controlled_input_pattern(&mapped, &Observability::neutral(&mapped), &baseline_cfg, &cfg.cap);
    let mut baseline = baseline_search.pattern.clone();
    for l in baseline.unassigned() {
        baseline.set(l, Logic3::Zero);
    }

    let run = |c: &Circuit, mode: ScanMode<'_>, pattern: &InputPattern| -> Result<ModeRun, PipelineError> {
        let (activity, power) = measure(c, &vecs, mode, pattern, table, cfg).map_err(|(s, m)| fail(s, m))?;
        Ok(ModeRun {
            circuit: c.clone(),
            pattern: pattern.clone(),
            activity,
            power,
        })
    };
    let traditional = run(&mapped, ScanMode::Traditional, &InputPattern::new())?;
    let input_control = run(&mapped, ScanMode::InputControl(&baseline), &baseline)?;
    let proposed = run(&proposed_circuit, ScanMode::Proposed(&filled), &filled)?;

    let report = PowerReport {
        circuit: name.to_string(),
        vectors: source,
        num_vectors: vecs.len(),
        gates: mapped.num_gates(),
        pseudo_inputs: chain_len,
        multiplexed: muxed.muxes().len(),
        traditional: traditional.power,
        input_control: input_control.power,
        proposed: proposed.power,
    };
    Ok(PipelineOutput {
        report,
        vectors: vecs,
        observability: lo,
        search,
        baseline_search,
        traditional,
        input_control,
        proposed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{emit_report, Format};

    const SMALL: &str = "INPUT(a)\nINPUT(b)\nOUTPUT(y)\nq = DFF(y)\nr = DFF(z)\n\
                         s = NOR(a, b)\ny = NAND(q, s)\nz = NOR(r, a)\n";

    #[test]
    fn combinational_circuit_modes_agree() {
        let text = "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n";
        let out = run_pipeline(text, "comb", &VectorInput::Lfsr(5), &LeakageTable::bundled(), &PipelineConfig::default())
            .unwrap();
        let r = &out.report;
        assert_eq!(r.traditional.dynamic_per_hz, r.proposed.dynamic_per_hz);
        assert_eq!(r.traditional.dynamic_per_hz, r.input_control.dynamic_per_hz);
    }

    #[test]
    fn same_seed_same_csv() {
        let cfg = PipelineConfig::default();
        let t = LeakageTable::bundled();
        let a = run_pipeline(SMALL, "small", &VectorInput::Lfsr(20), &t, &cfg).unwrap();
        let b = run_pipeline(SMALL, "small", &VectorInput::Lfsr(20), &t, &cfg).unwrap();
        assert_eq!(emit_report(&[a.report], Format::Csv), emit_report(&[b.report], Format::Csv));
    }

    #[test]
    fn errors_name_their_stage() {
        let t = LeakageTable::bundled();
        let cfg = PipelineConfig::default();
        let e = run_pipeline("INPUT(a)\ny = FOO(a)\n", "bad", &VectorInput::Lfsr(1), &t, &cfg).unwrap_err();
        assert_eq!(e.stage, Stage::Parse);
        assert!(e.to_string().contains("line 2"));
        let e = run_pipeline(SMALL, "small", &VectorInput::Text("0\n".into()), &t, &cfg).unwrap_err();
        assert_eq!(e.stage, Stage::Vectors);
        let e = run_pipeline(SMALL, "small", &VectorInput::Lfsr(1), &LeakageTable::new(crate::leakage::TableSource::File), &cfg)
            .unwrap_err();
        assert_eq!(e.stage, Stage::Observability);
    }
}
