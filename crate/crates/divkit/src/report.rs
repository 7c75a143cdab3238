//! Deterministic report serialization.
//!
//! Floats are emitted with 17 significant digits (`{:.16e}`), the shortest
//! count that round-trips every f64, so parsing a report and re-serializing
//! it is byte-identical. The writer is a small hand-rolled JSON/CSV emitter:
//! field order is fixed by construction, independent of any map iteration
//! order.

use crate::bounds::{BoundEstimate, CertifyReport};
use crate::inequality::{ChainRun, IdentityReport};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// JSON value tree with deterministic ordering.
#[derive(Debug, Clone)]
pub enum Val {
    Null,
    Bool(bool),
    Int(i64),
    UInt(u64),
    /// Emitted with 17 significant digits.
    Float(f64),
    Str(String),
    Arr(Vec<Val>),
    Obj(Vec<(String, Val)>),
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        return "\"nan\"".to_string();
    }
    if v.is_infinite() {
        return format!("\"{}inf\"", if v < 0.0 { "-" } else { "" });
    }
    format!("{v:.16e}")
}

fn escape(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

impl Val {
    pub fn obj(fields: Vec<(&str, Val)>) -> Val {
        Val::Obj(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    fn write(&self, out: &mut String, indent: usize) {
        let pad = "  ".repeat(indent);
        match self {
            Val::Null => out.push_str("null"),
            Val::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Val::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Val::UInt(u) => {
                let _ = write!(out, "{u}");
            }
            Val::Float(v) => out.push_str(&fmt_f64(*v)),
            Val::Str(s) => escape(s, out),
            Val::Arr(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                    return;
                }
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    out.push_str(&pad);
                    out.push_str("  ");
                    item.write(out, indent + 1);
                    if i + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&pad);
                out.push(']');
            }
            Val::Obj(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push_str("{\n");
                for (i, (k, v)) in fields.iter().enumerate() {
                    out.push_str(&pad);
                    out.push_str("  ");
                    escape(k, out);
                    out.push_str(": ");
                    v.write(out, indent + 1);
                    if i + 1 < fields.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str(&pad);
                out.push('}');
            }
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }
}

/// FNV-1a over the 17-digit rendering of both distributions; a stable content
/// hash for report records.
pub fn inputs_hash(p: &[f64], q: &[f64]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    for part in [p, q] {
        for &v in part {
            eat(format!("{v:.16e}").as_bytes());
            eat(b";");
        }
        eat(b"|");
    }
    format!("{h:016x}")
}

pub fn chain_run_to_val(run: &ChainRun) -> Val {
    Val::obj(vec![
        ("chain", Val::Str(run.chain.clone())),
        ("trials", Val::UInt(run.trials)),
        ("seed", Val::UInt(run.seed)),
        ("tol", Val::Float(run.tol)),
        (
            "dims",
            Val::Arr(run.dims.iter().map(|&d| Val::UInt(d as u64)).collect()),
        ),
        ("violations", Val::UInt(run.violations.len() as u64)),
        (
            "edges",
            Val::Arr(
                run.edges
                    .iter()
                    .map(|e| {
                        Val::obj(vec![
                            ("from", Val::Str(e.from.clone())),
                            ("to", Val::Str(e.to.clone())),
                            ("trials", Val::UInt(e.trials)),
                            ("violations", Val::UInt(e.violations)),
                            ("worst_slack", Val::Float(e.worst_slack)),
                            ("worst_slack_trial", Val::UInt(e.worst_slack_trial)),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "violation_samples",
            Val::Arr(
                run.violations
                    .iter()
                    .take(16)
                    .map(|v| {
                        Val::obj(vec![
                            ("edge", Val::Str(format!("{} <= {}", v.edge.0, v.edge.1))),
                            ("trial", Val::UInt(v.trial)),
                            ("lhs", Val::Float(v.lhs)),
                            ("rhs", Val::Float(v.rhs)),
                            ("deficit", Val::Float(v.deficit)),
                            (
                                "p",
                                Val::Arr(v.p.probs().iter().map(|&x| Val::Float(x)).collect()),
                            ),
                            (
                                "q",
                                Val::Arr(v.q.probs().iter().map(|&x| Val::Float(x)).collect()),
                            ),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
}

pub fn identity_report_to_val(rep: &IdentityReport) -> Val {
    Val::obj(vec![
        ("trials", Val::UInt(rep.trials)),
        ("seed", Val::UInt(rep.seed)),
        ("tol", Val::Float(rep.tol)),
        ("pass", Val::Bool(rep.all_asserted_pass())),
        (
            "checks",
            Val::Arr(
                rep.checks
                    .iter()
                    .map(|c| {
                        Val::obj(vec![
                            ("name", Val::Str(c.name.clone())),
                            ("max_rel_dev", Val::Float(c.max_rel_dev)),
                            ("tol", Val::Float(c.tol)),
                            ("advisory", Val::Bool(c.advisory)),
                            ("pass", Val::Bool(c.pass)),
                            ("note", Val::Str(c.note.clone())),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
}

pub fn bound_estimate_to_val(b: &BoundEstimate) -> Val {
    Val::obj(vec![
        ("pair", Val::Str(b.pair.clone())),
        ("beta_hat", Val::Float(b.beta_hat)),
        ("alpha_hat", Val::Float(b.alpha_hat)),
        ("argmax", Val::Float(b.argmax)),
        ("limit_at_one", Val::Float(b.limit_at_one)),
        ("monotone_ok", Val::Bool(b.monotone_ok)),
        (
            "grid",
            Val::obj(vec![
                ("points", Val::UInt(b.grid.points as u64)),
                ("min", Val::Float(b.grid.min)),
                ("argmin", Val::Float(b.grid.argmin)),
                ("max", Val::Float(b.grid.max)),
                ("argmax", Val::Float(b.grid.argmax)),
            ]),
        ),
    ])
}

pub fn certify_report_to_val(c: &CertifyReport) -> Val {
    Val::obj(vec![
        ("pair", Val::Str(c.pair.clone())),
        ("beta", Val::Float(c.beta)),
        ("trials", Val::UInt(c.trials)),
        ("violations", Val::UInt(c.violations.len() as u64)),
        ("worst_ratio", Val::Float(c.worst_ratio)),
    ])
}

/// CSV rendering of a measure-profile table: `measure,value,dims,inputs_hash`.
pub fn profile_csv(rows: &[(String, Result<f64, String>)], dims: usize, hash: &str) -> String {
    let mut out = String::from("measure,value,dims,inputs_hash\n");
    for (name, value) in rows {
        match value {
            Ok(v) => {
                let _ = writeln!(out, "{name},{v:.16e},{dims},{hash}");
            }
            Err(e) => {
                let _ = writeln!(out, "{name},error:{},{dims},{hash}", e.replace(',', ";"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_17_digits() {
        for v in [0.5, 1.0 / 3.0, 2.0_f64.powi(-40) * 1.2345, 4.380550360422747] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "{s}");
            assert_eq!(fmt_f64(back), s);
        }
    }

    #[test]
    fn hash_is_order_sensitive_and_stable() {
        let a = inputs_hash(&[0.75, 0.25], &[0.25, 0.75]);
        let b = inputs_hash(&[0.25, 0.75], &[0.75, 0.25]);
        assert_ne!(a, b);
        assert_eq!(a, inputs_hash(&[0.75, 0.25], &[0.25, 0.75]));
    }

    #[test]
    fn json_is_deterministic() {
        let v = Val::obj(vec![
            ("name", Val::Str("x".into())),
            ("vals", Val::Arr(vec![Val::Float(0.5), Val::UInt(3)])),
        ]);
        assert_eq!(v.to_json(), v.to_json());
        assert!(v.to_json().contains("5.0000000000000000e-1"));
    }
}
