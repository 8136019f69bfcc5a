// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use scanpower::leakage::{build_leakage_table, reference_table, LeakageTable, Technology, STANDARD_CELLS};
use scanpower::report::{
    emit_report, run_pipeline, Format, Mode, PipelineConfig, PipelineOutput, VectorInput,
};
use scanpower::simulate::{dynamic_power, CapacitanceModel};
use scanpower::timing::DelayModel;

#[derive(Parser)]
#[command(name = "scanpower", version, about = "Scan-mode dynamic and static power analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Power of one circuit in one scan configuration.
    Analyze {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "proposed")]
        mode: ModeArg,
    },
    /// Traditional scan, input control and multiplexed scan side by side.
    Compare {
        #[command(flatten)]
        common: Common,
    },
    /// Comparison table over every `.bench` file given (files or directories).
    Table {
        #[command(flatten)]
        common: Common,
    },
    /// Writes a leakage table from the analytic device model.
    Characterize {
        /// Device parameter file (`key = value`); 45 nm defaults otherwise.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Emit raw model values instead of the NAND2-calibrated table.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Traditional,
    InputControl,
    Proposed,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Netlist in `.bench` format (for `table`: files or directories, repeatable).
    #[arg(long, required = true)]
    bench: Vec<PathBuf>,
    /// Test vectors, one 0/1 string per line in scan-in order. For `table`, a
    /// directory searched for `<circuit>.vec`.
    #[arg(long)]
    vectors: Option<PathBuf>,
    /// Number of LFSR vectors when no vector file is given.
    #[arg(long, default_value_t = 100)]
    num_vectors: usize,
    /// Leakage table CSV (`kind,arity,pattern,leak_nA`); bundled table otherwise.
    #[arg(long, conflicts_with = "leakage_analytic")]
    leakage: Option<PathBuf>,
    /// Build the leakage table from the analytic device model.
    #[arg(long)]
    leakage_analytic: bool,
    /// Device parameters for `--leakage-analytic`.
    #[arg(long, requires = "leakage_analytic")]
    params: Option<PathBuf>,
    /// Gate delay table CSV (`kind,delay`); unit delays otherwise.
    #[arg(long)]
    delays: Option<PathBuf>,
    #[arg(long)]
    mux_delay: Option<f64>,
    #[arg(long, default_value_t = 0.9)]
    vdd: f64,
    /// Capacitance per fanout pin, farads.
    #[arg(long, default_value_t = 1e-15)]
    unit_cap: f64,
    /// Shift clock frequency in Hz, for absolute dynamic power.
    #[arg(long, default_value_t = 1e8)]
    freq: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    fill_trials: usize,
    #[arg(long, default_value_t = 1000)]
    backtrack_limit: usize,
    /// Keep the outputs of blocked gates as transition nodes.
    #[arg(long)]
    literal_step_f: bool,
    /// Scan chain order file: one pseudo-input name per line, scan-in first.
    #[arg(long)]
    scan_order: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Writes the controlled-input pattern of the multiplexed circuit.
    #[arg(long)]
    pattern_out: Option<PathBuf>,
    /// Writes the per-gate blocking report.
    #[arg(long)]
    blocking_out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "circuit".into())
}

impl Common {
    fn table(&self) -> Result<LeakageTable> {
        if let Some(p) = &self.leakage {
            return LeakageTable::from_csv(&read(p)?).with_context(|| format!("leakage table {}", p.display()));
        }
        if self.leakage_analytic {
            let tech = match &self.params {
                Some(p) => Technology::parse_params(&read(p)?).with_context(|| format!("device parameters {}", p.display()))?,
                None => Technology::default_45nm(),
            };
            return Ok(build_leakage_table(&tech, &STANDARD_CELLS)?);
        }
        Ok(LeakageTable::bundled())
    }

    fn config(&self) -> Result<PipelineConfig> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.unit_cap) || !positive(self.vdd) || !positive(self.freq) {
            bail!("--unit-cap, --vdd and --freq must be positive");
        }
        let mut delays = match &self.delays {
            Some(p) => DelayModel::from_csv(&read(p)?)?,
            None => DelayModel::default(),
        };
        if let Some(m) = self.mux_delay {
            if m.is_nan() || m < 0.0 {
                bail!("--mux-delay must be nonnegative");
            }
            delays.mux_delay = m;
        }
        let mut cfg = PipelineConfig {
            delays,
            cap: CapacitanceModel::with_unit_cap(self.unit_cap),
            vdd: self.vdd,
            ..PipelineConfig::default()
        };
        cfg.search.seed = self.seed;
        cfg.search.fill_trials = self.fill_trials.max(1);
        cfg.search.backtrack_limit = self.backtrack_limit.max(1);
        cfg.search.literal_step_f = self.literal_step_f;
        if let Some(p) = &self.scan_order {
            let names = read(p)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect();
            cfg.scan_order = Some(names);
        }
        Ok(cfg)
    }

    fn format(&self) -> Format {
        match self.format {
            FormatArg::Table => Format::Table,
            FormatArg::Csv => Format::Csv,
        }
    }

    fn single_bench(&self) -> Result<&Path> {
        match self.bench.as_slice() {
            [p] => Ok(p),
            _ => bail!("exactly one --bench file expected"),
        }
    }

    fn run_one(&self, bench: &Path, vectors: Option<&Path>) -> Result<PipelineOutput> {
        let text = read(bench)?;
        let input = match vectors {
            Some(v) => VectorInput::Text(read(v)?),
            None => VectorInput::Lfsr(self.num_vectors),
        };
        Ok(run_pipeline(&text, &stem(bench), &input, &self.table()?, &self.config()?)?)
    }

    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn side_files(&self, out: &PipelineOutput) -> Result<()> {
        if let Some(p) = &self.pattern_out {
            let c = &out.proposed.circuit;
            fs::write(p, out.proposed.pattern.to_text(c)).with_context(|| format!("writing {}", p.display()))?;
        }
        if let Some(p) = &self.blocking_out {
            fs::write(p, out.search.report_csv(&out.proposed.circuit))
                .with_context(|| format!("writing {}", p.display()))?;
        }
        Ok(())
    }
}

fn collect_benches(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            for e in fs::read_dir(p).with_context(|| format!("reading {}", p.display()))? {
                let e = e?.path();
                if e.extension().is_some_and(|x| x == "bench") {
                    out.push(e);
                }
            }
        } else {
            out.push(p.clone());
        }
    }
    out.sort();
    if out.is_empty() {
        bail!("no .bench files found");
    }
    Ok(out)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Analyze { common, mode } => {
            let out = common.run_one(common.single_bench()?, common.vectors.as_deref())?;
            common.side_files(&out)?;
            let mode = match mode {
                ModeArg::Traditional => Mode::Traditional,
                ModeArg::InputControl => Mode::InputControl,
                ModeArg::Proposed => Mode::Proposed,
            };
            let run = match mode {
                Mode::Traditional => &out.traditional,
                Mode::InputControl => &out.input_control,
                Mode::Proposed => &out.proposed,
            };
            let cfg = common.config()?;
            let per_cycle = run.activity.per_cycle();
            let dyn_w = dynamic_power(per_cycle, cfg.vdd, cfg.cap.vth, common.freq);
            let r = &out.report;
            let text = match common.format() {
                Format::Csv => format!(
                    "circuit,mode,vectors,dynamic_uw_per_hz,dynamic_uw,static_uw\n{},{},{},{},{},{}\n",
                    r.circuit,
                    mode.name(),
                    r.num_vectors,
                    run.power.dynamic_per_hz,
                    dyn_w * 1e6,
                    run.power.static_uw
                ),
                Format::Table => format!(
                    "circuit      {}\nmode         {}\nvectors      {} ({:?})\nmultiplexed  {} of {} pseudo-inputs\n\
                     shift cycles {}\ndynamic (/f) {:.4E} uW/Hz\ndynamic      {:.4} uW at {:.3E} Hz\nstatic       {:.4} uW\n",
                    r.circuit,
                    mode.name(),
                    r.num_vectors,
                    r.vectors,
                    if mode == Mode::Proposed { r.multiplexed } else { 0 },
                    r.pseudo_inputs,
                    run.activity.shift_cycles,
                    run.power.dynamic_per_hz,
                    dyn_w * 1e6,
                    common.freq,
                    run.power.static_uw
                ),
            };
            common.write(&text)
        }
        Command::Compare { common } => {
            let out = common.run_one(common.single_bench()?, common.vectors.as_deref())?;
            common.side_files(&out)?;
            common.write(&emit_report(&[out.report], common.format()))
        }
        Command::Table { common } => {
            let benches = collect_benches(&common.bench)?;
            let vec_dir = common.vectors.clone();
            let reports = benches
                .par_iter()
                .map(|b| {
                    let vec_file = vec_dir.as_ref().map(|d| d.join(format!("{}.vec", stem(b)))).filter(|p| p.is_file());
                    common.run_one(b, vec_file.as_deref()).map(|o| o.report)
                })
                .collect::<Result<Vec<_>>>()?;
            common.write(&emit_report(&reports, common.format()))
        }
        Command::Characterize { params, raw, out } => {
            let tech = match &params {
                Some(p) => Technology::parse_params(&read(p)?)?,
                None => Technology::default_45nm(),
            };
            let table = if raw {
                build_leakage_table(&tech, &STANDARD_CELLS)?
            } else {
                reference_table(&tech)?
            };
            let text = format!(
                "# 45 nm standard cells. Leakage in nA; the leftmost pattern bit is the first input.\n{}",
                table.to_csv()
            );
            match out {
                Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}
