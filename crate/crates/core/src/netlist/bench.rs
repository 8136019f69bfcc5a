// SPDX-License-Identifier: Apache-2.0

//! ISCAS `.bench` reader and writer.

use std::collections::HashMap;
use std::fmt::Write;

use super::{Circuit, FlipFlop, GateKind, LineId, NetlistError, RawCircuit};

enum Stmt<'a> {
    Input(&'a str),
    Output(&'a str),
    Dff { q: &'a str, d: &'a str },
    Gate { out: &'a str, kind: GateKind, args: Vec<&'a str> },
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || "(),=#".contains(c))
}

/// Splits `KEYWORD(a, b, ...)` into the keyword and its arguments.
fn call(text: &str, line: usize) -> Result<(&str, Vec<&str>), NetlistError> {
    let syntax = |m: &str| NetlistError::Syntax {
        line,
        message: m.to_string(),
    };
    let open = text.find('(').ok_or_else(|| syntax("expected `(`"))?;
    if !text.ends_with(')') {
        return Err(syntax("expected `)` at end of statement"));
    }
    let word = text[..open].trim();
    let inner = &text[open + 1..text.len() - 1];
    let args: Vec<&str> = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(str::trim).collect()
    };
    if let Some(bad) = args.iter().find(|a| !valid_name(a)) {
        return Err(syntax(&format!("bad signal name `{bad}`")));
    }
    Ok((word, args))
}

fn statement(text: &str, line: usize) -> Result<Stmt<'_>, NetlistError> {
    let syntax = |m: String| NetlistError::Syntax { line, message: m };
    if let Some(eq) = text.find('=') {
        let out = text[..eq].trim();
        if !valid_name(out) {
            return Err(syntax(format!("bad signal name `{out}`")));
        }
        let (word, args) = call(text[eq + 1..].trim(), line)?;
        if word.eq_ignore_ascii_case("DFF") {
            return match args.as_slice() {
                [d] => Ok(Stmt::Dff { q: out, d }),
                _ => Err(syntax(format!("DFF takes one input, got {}", args.len()))),
            };
        }
        let kind = GateKind::from_keyword(word).ok_or_else(|| NetlistError::UnknownGate {
            line,
            keyword: word.to_string(),
        })?;
        if !kind.arity_ok(args.len()) {
            return Err(NetlistError::Arity {
                line: Some(line),
                kind,
                arity: args.len(),
            });
        }
        Ok(Stmt::Gate { out, kind, args })
    } else {
        let (word, args) = call(text, line)?;
        let name = match args.as_slice() {
            [n] => *n,
            _ => return Err(syntax(format!("{word} takes one signal"))),
        };
        if word.eq_ignore_ascii_case("INPUT") {
            Ok(Stmt::Input(name))
        } else if word.eq_ignore_ascii_case("OUTPUT") {
            Ok(Stmt::Output(name))
        } else {
            Err(syntax(format!("unknown declaration `{word}`")))
        }
    }
}

/// Parses a `.bench` netlist.
///
/// Each `q = DFF(d)` is cut: `q` becomes a pseudo-input and `d` a
/// pseudo-output. The scan chain follows DFF declaration order. The result is
/// unmapped unless the file only uses library cells.
pub fn parse_bench(text: &str, name: &str) -> Result<Circuit, NetlistError> {
    let mut stmts = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = raw_line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        stmts.push((line_no, statement(body, line_no)?));
    }

    let mut raw = RawCircuit {
        name: name.to_string(),
        ..RawCircuit::default()
    };
    let mut ids: HashMap<&str, LineId> = HashMap::new();
    // Intern every driven name first so that forward references resolve.
    for (_, s) in &stmts {
        let n = match s {
            Stmt::Input(n) => *n,
            Stmt::Dff { q, .. } => *q,
            Stmt::Gate { out, .. } => *out,
            Stmt::Output(_) => continue,
        };
        if !ids.contains_key(n) {
            let id = raw.add_line(n);
            ids.insert(n, id);
        }
    }
    let mut defined_at: HashMap<LineId, usize> = HashMap::new();
    let mut define = |raw: &RawCircuit, id: LineId, line_no: usize| -> Result<LineId, NetlistError> {
        if defined_at.insert(id, line_no).is_some() {
            return Err(NetlistError::DuplicateDriver {
                line: Some(line_no),
                name: raw.line_names[id].clone(),
            });
        }
        Ok(id)
    };
    let resolve = |n: &str, line_no: usize| {
        ids.get(n).copied().ok_or_else(|| NetlistError::Undefined {
            line: Some(line_no),
            name: n.to_string(),
        })
    };
    let mut resolved = Vec::with_capacity(stmts.len());
    for (line_no, s) in &stmts {
        let line_no = *line_no;
        let r = match s {
            Stmt::Input(n) => (line_no, 0, vec![resolve(n, line_no)?], None),
            Stmt::Output(n) => (line_no, 1, vec![resolve(n, line_no)?], None),
            Stmt::Dff { q, d } => (
                line_no,
                2,
                vec![resolve(q, line_no)?, resolve(d, line_no)?],
                None,
            ),
            Stmt::Gate { out, kind, args } => {
                let mut v = vec![resolve(out, line_no)?];
                for a in args {
                    v.push(resolve(a, line_no)?);
                }
                (line_no, 3, v, Some(*kind))
            }
        };
        resolved.push(r);
    }

    for (line_no, tag, lines, kind) in resolved {
        match tag {
            0 => {
                let id = define(&raw, lines[0], line_no)?;
                raw.primary_inputs.push(id);
            }
            1 => {
                if !raw.primary_outputs.contains(&lines[0]) {
                    raw.primary_outputs.push(lines[0]);
                }
            }
            2 => {
                let q = define(&raw, lines[0], line_no)?;
                raw.flip_flops.push(FlipFlop { q, d: lines[1] });
                raw.scan_chain.push(q);
            }
            _ => {
                let out = define(&raw, lines[0], line_no)?;
                let kind = kind.expect("gate statement");
                let g = raw.add_gate(kind, lines[1..].to_vec(), out);
                raw.gate_origin[g] = Some(line_no);
            }
        }
    }
    Circuit::from_raw(raw)
}

/// Writes a circuit in the `.bench` dialect accepted by [`parse_bench`].
///
/// Scan-enable and multiplexer constant lines are written as plain inputs and
/// multiplexers as `MUX2(select, data, constant)`, so a re-parsed circuit keeps
/// its logic but not the multiplexed-input bookkeeping.
pub fn to_bench(c: &Circuit) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {}", c.name());
    let _ = writeln!(
        s,
        "# {} inputs, {} outputs, {} flip-flops, {} gates",
        c.primary_inputs().len(),
        c.primary_outputs().len(),
        c.flip_flops().len(),
        c.num_gates()
    );
    let mut extra: Vec<LineId> = c.scan_enable().into_iter().collect();
    extra.extend(c.muxes().iter().map(|m| m.constant));
    for &l in c.primary_inputs().iter().chain(&extra) {
        let _ = writeln!(s, "INPUT({})", c.line_name(l));
    }
    for &l in c.primary_outputs() {
        let _ = writeln!(s, "OUTPUT({})", c.line_name(l));
    }
    // Flip-flops in scan-chain order so that re-parsing keeps the chain.
    for &q in c.scan_chain() {
        let ff = c.flip_flops().iter().find(|ff| ff.q == q).expect("chain lists flip-flops");
        let _ = writeln!(s, "{} = DFF({})", c.line_name(ff.q), c.line_name(ff.d));
    }
    for &g in c.topo_order() {
        let gate = c.gate(g);
        let args: Vec<&str> = gate.inputs.iter().map(|&l| c.line_name(l)).collect();
        let _ = writeln!(
            s,
            "{} = {}({})",
            c.line_name(gate.output),
            gate.kind.keyword(),
            args.join(", ")
        );
    }
    s
}
