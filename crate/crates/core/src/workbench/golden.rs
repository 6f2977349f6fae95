use std::fmt;

use serde::Serialize;
use serde_json::Value;

/// Top-level report keys left out of golden comparison.
const IGNORED: &[&str] = &["meta"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffKind {
    Changed,
    /// Present in the golden file only.
    MissingInReport,
    /// Present in the report only.
    ExtraInReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffEntry {
    pub path: String,
    pub kind: DiffKind,
    pub golden: Option<Value>,
    pub report: Option<Value>,
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &Option<Value>| v.as_ref().map_or("<absent>".to_string(), |v| v.to_string());
        match self.kind {
            DiffKind::Changed => write!(
                f,
                "{}: {} -> {}",
                self.path,
                show(&self.golden),
                show(&self.report)
            ),
            DiffKind::MissingInReport => write!(
                f,
                "{}: missing in report (golden {})",
                self.path,
                show(&self.golden)
            ),
            DiffKind::ExtraInReport => write!(
                f,
                "{}: not in golden (report {})",
                self.path,
                show(&self.report)
            ),
        }
    }
}

/// Structural diff of a report against a golden report; empty means they match.
pub fn compare_golden(report: &Value, golden: &Value) -> Vec<DiffEntry> {
    let mut out = Vec::new();
    walk("", report, golden, &mut out, true);
    out
}

fn label(i: usize, v: &Value) -> String {
    match v.get("task").and_then(Value::as_str) {
        Some(t) => format!("[{i}:{t}]"),
        None => format!("[{i}]"),
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn walk(path: &str, r: &Value, g: &Value, out: &mut Vec<DiffEntry>, top: bool) {
    match (r, g) {
        (Value::Object(rm), Value::Object(gm)) => {
            for (k, gv) in gm {
                if top && IGNORED.contains(&k.as_str()) {
                    continue;
                }
                match rm.get(k) {
                    Some(rv) => walk(&join(path, k), rv, gv, out, false),
                    None => out.push(DiffEntry {
                        path: join(path, k),
                        kind: DiffKind::MissingInReport,
                        golden: Some(gv.clone()),
                        report: None,
                    }),
                }
            }
            for (k, rv) in rm {
                if !gm.contains_key(k) && !(top && IGNORED.contains(&k.as_str())) {
                    out.push(DiffEntry {
                        path: join(path, k),
                        kind: DiffKind::ExtraInReport,
                        golden: None,
                        report: Some(rv.clone()),
                    });
                }
            }
        }
        (Value::Array(ra), Value::Array(ga)) => {
            for i in 0..ra.len().max(ga.len()) {
                match (ra.get(i), ga.get(i)) {
                    (Some(rv), Some(gv)) => {
                        walk(&format!("{path}{}", label(i, gv)), rv, gv, out, false)
                    }
                    (None, Some(gv)) => out.push(DiffEntry {
                        path: format!("{path}{}", label(i, gv)),
                        kind: DiffKind::MissingInReport,
                        golden: Some(gv.clone()),
                        report: None,
                    }),
                    (Some(rv), None) => out.push(DiffEntry {
                        path: format!("{path}{}", label(i, rv)),
                        kind: DiffKind::ExtraInReport,
                        golden: None,
                        report: Some(rv.clone()),
                    }),
                    (None, None) => unreachable!(),
                }
            }
        }
        _ if r == g => {}
        _ => out.push(DiffEntry {
            path: path.to_string(),
            kind: DiffKind::Changed,
            golden: Some(g.clone()),
            report: Some(r.clone()),
        }),
    }
}
