// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use scanpower::netlist::{parse_bench, surrogate, to_bench, ISCAS89_SHAPES};

const SEED: u64 = 2009;

fn render(name: &str) -> String {
    let shape = ISCAS89_SHAPES.iter().find(|s| s.name == name).unwrap();
    let c = surrogate(shape, SEED);
    format!(
        "# Synthetic stand-in with the interface and gate count of ISCAS89 {name}.\n\
         # Random logic (seed {SEED}); not the original netlist.\n{}",
        to_bench(&c)
    )
}

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("data/bench/{name}_surrogate.bench"))
}

#[test]
fn bundled_surrogates_match_generator() {
    for shape in ISCAS89_SHAPES.iter().filter(|s| s.name != "s27") {
        let text = render(shape.name);
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(path(shape.name), &text).unwrap();
        }
        let bundled = std::fs::read_to_string(path(shape.name)).unwrap();
        assert_eq!(bundled, text, "{}", shape.name);
        let c = parse_bench(&bundled, shape.name).unwrap();
        assert_eq!(c.primary_inputs().len(), shape.inputs);
        assert_eq!(c.flip_flops().len(), shape.flip_flops);
        assert_eq!(c.num_gates(), shape.gates);
        assert!(c.gates().iter().all(|g| g.inputs.len() <= 4));
    }
}
