// SPDX-License-Identifier: Apache-2.0

//! Three-way power comparison (traditional scan, input control, and
//! multiplexed scan with a controlled-input pattern) and its output formats.

mod pipeline;
mod vectors;

use std::fmt::Write;

use serde::{Deserialize, Serialize};

pub use pipeline::{
    run_pipeline, ModeRun, PipelineConfig, PipelineError, PipelineOutput, Stage, VectorInput,
};
pub use vectors::{lfsr_vectors, parse_vectors, vectors_to_text, VectorError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorSource {
    File,
    Lfsr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Traditional,
    InputControl,
    Proposed,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Traditional, Mode::InputControl, Mode::Proposed];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Traditional => "traditional",
            Mode::InputControl => "input_control",
            Mode::Proposed => "proposed",
        }
    }
}

/// Scan-mode power of one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModePower {
    /// Average dynamic power per hertz of shift clock, μW/Hz.
    pub dynamic_per_hz: f64,
    /// Static power, μW.
    pub static_uw: f64,
}

/// `100 (baseline - value) / baseline`; 0 for a zero baseline.
pub fn improvement(baseline: f64, value: f64) -> f64 {
    if baseline == 0.0 {
        0.0
    } else {
        100.0 * (baseline - value) / baseline
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub circuit: String,
    pub vectors: VectorSource,
    pub num_vectors: usize,
    pub gates: usize,
    pub pseudo_inputs: usize,
    pub multiplexed: usize,
    pub traditional: ModePower,
    pub input_control: ModePower,
    pub proposed: ModePower,
}

impl PowerReport {
    pub fn mode(&self, m: Mode) -> ModePower {
        match m {
            Mode::Traditional => self.traditional,
            Mode::InputControl => self.input_control,
            Mode::Proposed => self.proposed,
        }
    }

    pub fn dynamic_vs_traditional(&self) -> f64 {
        improvement(self.traditional.dynamic_per_hz, self.proposed.dynamic_per_hz)
    }

    pub fn static_vs_traditional(&self) -> f64 {
        improvement(self.traditional.static_uw, self.proposed.static_uw)
    }

    pub fn dynamic_vs_input_control(&self) -> f64 {
        improvement(self.input_control.dynamic_per_hz, self.proposed.dynamic_per_hz)
    }

    pub fn static_vs_input_control(&self) -> f64 {
        improvement(self.input_control.static_uw, self.proposed.static_uw)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    circuit: String,
    vectors: VectorSource,
    num_vectors: usize,
    gates: usize,
    pseudo_inputs: usize,
    multiplexed: usize,
    traditional_dynamic_uw_per_hz: f64,
    traditional_static_uw: f64,
    input_control_dynamic_uw_per_hz: f64,
    input_control_static_uw: f64,
    proposed_dynamic_uw_per_hz: f64,
    proposed_static_uw: f64,
    dynamic_improvement_vs_traditional_pct: f64,
    static_improvement_vs_traditional_pct: f64,
    dynamic_improvement_vs_input_control_pct: f64,
    static_improvement_vs_input_control_pct: f64,
}

fn to_row(r: &PowerReport) -> CsvRow {
    CsvRow {
        circuit: r.circuit.clone(),
        vectors: r.vectors,
        num_vectors: r.num_vectors,
        gates: r.gates,
        pseudo_inputs: r.pseudo_inputs,
        multiplexed: r.multiplexed,
        traditional_dynamic_uw_per_hz: r.traditional.dynamic_per_hz,
        traditional_static_uw: r.traditional.static_uw,
        input_control_dynamic_uw_per_hz: r.input_control.dynamic_per_hz,
        input_control_static_uw: r.input_control.static_uw,
        proposed_dynamic_uw_per_hz: r.proposed.dynamic_per_hz,
        proposed_static_uw: r.proposed.static_uw,
        dynamic_improvement_vs_traditional_pct: r.dynamic_vs_traditional(),
        static_improvement_vs_traditional_pct: r.static_vs_traditional(),
        dynamic_improvement_vs_input_control_pct: r.dynamic_vs_input_control(),
        static_improvement_vs_input_control_pct: r.static_vs_input_control(),
    }
}

fn csv(reports: &[PowerReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(to_row(r)).expect("in-memory CSV write");
    }
    if reports.is_empty() {
        // Header only.
        let mut h = csv::Writer::from_writer(Vec::new());
        h.write_record(CSV_HEADER).expect("in-memory CSV write");
        return String::from_utf8(h.into_inner().expect("flush")).expect("utf-8");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

const CSV_HEADER: [&str; 16] = [
    "circuit",
    "vectors",
    "num_vectors",
    "gates",
    "pseudo_inputs",
    "multiplexed",
    "traditional_dynamic_uw_per_hz",
    "traditional_static_uw",
    "input_control_dynamic_uw_per_hz",
    "input_control_static_uw",
    "proposed_dynamic_uw_per_hz",
    "proposed_static_uw",
    "dynamic_improvement_vs_traditional_pct",
    "static_improvement_vs_traditional_pct",
    "dynamic_improvement_vs_input_control_pct",
    "static_improvement_vs_input_control_pct",
];

fn table(reports: &[PowerReport]) -> String {
    let mut s = String::new();
    let w = reports.iter().map(|r| r.circuit.len()).max().unwrap_or(0).max(10);
    let _ = writeln!(
        s,
        "{:<w$} | {:^21} | {:^21} | {:^21} | {:^17} | {:^17}",
        "", "Traditional Scan", "Input Control", "Proposed", "Impr. vs Trad. (%)", "Impr. vs IC (%)"
    );
    let _ = writeln!(
        s,
        "{:<w$} | {:>10} {:>10} | {:>10} {:>10} | {:>10} {:>10} | {:>8} {:>8} | {:>8} {:>8}",
        "Circuit", "Dyn(uW/Hz)", "Static(uW)", "Dyn(uW/Hz)", "Static(uW)", "Dyn(uW/Hz)", "Static(uW)", "Dynamic", "Static", "Dynamic", "Static"
    );
    for r in reports {
        let _ = writeln!(
            s,
            "{:<w$} | {:>10.2E} {:>10.2} | {:>10.2E} {:>10.2} | {:>10.2E} {:>10.2} | {:>8.2} {:>8.2} | {:>8.2} {:>8.2}",
            r.circuit,
            r.traditional.dynamic_per_hz,
            r.traditional.static_uw,
            r.input_control.dynamic_per_hz,
            r.input_control.static_uw,
            r.proposed.dynamic_per_hz,
            r.proposed.static_uw,
            r.dynamic_vs_traditional(),
            r.static_vs_traditional(),
            r.dynamic_vs_input_control(),
            r.static_vs_input_control(),
        );
    }
    let lfsr: Vec<&str> = reports
        .iter()
        .filter(|r| r.vectors == VectorSource::Lfsr)
        .map(|r| r.circuit.as_str())
        .collect();
    if !lfsr.is_empty() {
        let _ = writeln!(s, "LFSR-generated test vectors: {}", lfsr.join(", "));
    }
    s
}

/// Renders reports as an aligned table or as CSV with one row per circuit.
pub fn emit_report(reports: &[PowerReport], format: Format) -> String {
    match format {
        Format::Table => table(reports),
        Format::Csv => csv(reports),
    }
}

#[derive(Debug, thiserror::Error)]
#[error("report CSV: {0}")]
pub struct ReportParseError(String);

/// Reads reports back from [`Format::Csv`] output.
pub fn parse_csv(text: &str) -> Result<Vec<PowerReport>, ReportParseError> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in rd.deserialize::<CsvRow>() {
        let r = row.map_err(|e| ReportParseError(e.to_string()))?;
        out.push(PowerReport {
            circuit: r.circuit,
            vectors: r.vectors,
            num_vectors: r.num_vectors,
            gates: r.gates,
            pseudo_inputs: r.pseudo_inputs,
            multiplexed: r.multiplexed,
            traditional: ModePower {
                dynamic_per_hz: r.traditional_dynamic_uw_per_hz,
                static_uw: r.traditional_static_uw,
            },
            input_control: ModePower {
                dynamic_per_hz: r.input_control_dynamic_uw_per_hz,
                static_uw: r.input_control_static_uw,
            },
            proposed: ModePower {
                dynamic_per_hz: r.proposed_dynamic_uw_per_hz,
                static_uw: r.proposed_static_uw,
            },
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PowerReport {
        PowerReport {
            circuit: "s510".into(),
            vectors: VectorSource::File,
            num_vectors: 10,
            gates: 200,
            pseudo_inputs: 6,
            multiplexed: 3,
            traditional: ModePower {
                dynamic_per_hz: 8.46e-8,
                static_uw: 47.93,
            },
            input_control: ModePower {
                dynamic_per_hz: 8.18e-8,
                static_uw: 47.5,
            },
            proposed: ModePower {
                dynamic_per_hz: 8.2135e-8,
                static_uw: 45.96,
            },
        }
    }

    #[test]
    fn negative_improvement_keeps_its_sign() {
        let r = sample();
        assert!(r.dynamic_vs_input_control() < 0.0);
        let t = emit_report(&[r], Format::Table);
        assert!(t.contains("-0.41"), "{t}");
    }

    #[test]
    fn zero_improvement() {
        let mut r = sample();
        r.proposed = r.traditional;
        r.input_control = r.traditional;
        let t = emit_report(&[r], Format::Table);
        assert_eq!(t.matches("0.00").count(), 4, "{t}");
    }

    #[test]
    fn csv_round_trip() {
        let mut b = sample();
        b.circuit = "with,comma".into();
        b.vectors = VectorSource::Lfsr;
        b.traditional.static_uw = 1.0 / 3.0;
        let rs = vec![sample(), b];
        assert_eq!(parse_csv(&emit_report(&rs, Format::Csv)).unwrap(), rs);
        let empty = emit_report(&[], Format::Csv);
        assert!(empty.starts_with("circuit,vectors"));
        assert!(parse_csv(&empty).unwrap().is_empty());
    }

    #[test]
    fn improvement_formula() {
        assert_eq!(improvement(0.0, 1.0), 0.0);
        assert_eq!(improvement(4.0, 1.0), 75.0);
        assert_eq!(improvement(1.0, 2.0), -100.0);
    }
}
