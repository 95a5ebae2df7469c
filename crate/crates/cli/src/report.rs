use serde_json::{json, Map, Value};

use mirrorcalc::matrix::{IntMatrix, QMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

/// One invariant check carried out while answering a command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    /// A well-posed question with a negative mathematical answer.
    Negative(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportItem {
    pub key: String,
    pub value: Value,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub command: Vec<String>,
    /// `(path, sha256 hex digest)` of every file read.
    pub inputs: Vec<(String, String)>,
    pub results: Vec<ReportItem>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        RunReport {
            command,
            inputs: Vec::new(),
            results: Vec::new(),
            checks: Vec::new(),
            verdict: Verdict::Ok,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Ok => 0,
            Verdict::Negative(_) => 1,
        }
    }

    pub fn result(&mut self, key: &str, value: Value, text: impl Into<String>) {
        self.results.push(ReportItem {
            key: key.to_string(),
            value,
            text: text.into(),
        });
    }

    /// A result whose text form is its compact JSON.
    pub fn value(&mut self, key: &str, value: Value) {
        let text = match &value {
            Value::String(s) => s.clone(),
            v => v.to_string(),
        };
        self.result(key, value, text);
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: Option<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn negative(&mut self, diagnostic: impl Into<String>) {
        self.verdict = Verdict::Negative(diagnostic.into());
    }
}

pub fn qmatrix_text(m: &QMatrix) -> String {
    rows_text((0..m.rows()).map(|r| m.row(r).iter().map(|x| x.to_string()).collect()).collect())
}

pub fn imatrix_text(m: &IntMatrix) -> String {
    rows_text((0..m.rows()).map(|r| m.row(r).iter().map(|x| x.to_string()).collect()).collect())
}

fn rows_text(rows: Vec<Vec<String>>) -> String {
    if rows.is_empty() {
        return "[]".into();
    }
    rows.iter().map(|r| format!("\n  [{}]", r.join(", "))).collect()
}

/// Deterministic rendering: fixed item order in text, sorted keys in JSON.
pub fn emit_report(r: &RunReport, format: Format) -> String {
    match format {
        Format::Machine => {
            let results: Map<String, Value> = r.results.iter().map(|i| (i.key.clone(), i.value.clone())).collect();
            let checks: Vec<Value> = r
                .checks
                .iter()
                .map(|c| {
                    let mut o = json!({ "name": c.name, "passed": c.passed });
                    if let Some(d) = &c.detail {
                        o["detail"] = json!(d);
                    }
                    o
                })
                .collect();
            let mut o = json!({
                "command": r.command,
                "inputs": r.inputs.iter().map(|(p, h)| json!({ "path": p, "sha256": h })).collect::<Vec<_>>(),
                "results": results,
                "checks": checks,
                "status": if r.exit_code() == 0 { "ok" } else { "negative" },
            });
            if let Verdict::Negative(d) = &r.verdict {
                o["diagnostic"] = json!(d);
            }
            let mut s = serde_json::to_string_pretty(&o).expect("report serialises");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = format!("command: {}\n", r.command.join(" "));
            for (p, h) in &r.inputs {
                out += &format!("input: {p} sha256:{h}\n");
            }
            for i in &r.results {
                out += &format!("{}: {}\n", i.key, i.text);
            }
            for c in &r.checks {
                out += &format!("check {}: {}", c.name, if c.passed { "pass" } else { "FAIL" });
                if let Some(d) = &c.detail {
                    out += &format!(" ({d})");
                }
                out.push('\n');
            }
            if let Verdict::Negative(d) = &r.verdict {
                out += &format!("diagnostic: {d}\n");
            }
            out
        }
    }
}
