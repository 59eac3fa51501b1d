use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Falsified,
    BudgetExhausted,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Falsified => 1,
            Status::BudgetExhausted => 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// A finished command: the report body, the named checks it ran, and
/// optional table rows for CSV output.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Value,
    pub checks: Vec<Check>,
    pub rows: Option<Vec<Value>>,
    pub budget_exhausted: bool,
}

impl Outcome {
    pub fn new(report: impl Serialize) -> Self {
        Self {
            report: serde_json::to_value(report).expect("reports serialize"),
            checks: Vec::new(),
            rows: None,
            budget_exhausted: false,
        }
    }

    pub fn check(mut self, name: impl Into<String>, passed: bool) -> Self {
        self.checks.push(Check { name: name.into(), passed });
        self
    }

    pub fn status(&self) -> Status {
        if self.checks.iter().any(|c| !c.passed) {
            Status::Falsified
        } else if self.budget_exhausted {
            Status::BudgetExhausted
        } else {
            Status::Pass
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_table(rows: &[Value]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = match rows.first() {
        Some(Value::Object(map)) => map.keys().cloned().collect(),
        _ => Vec::new(),
    };
    w.write_record(&header).map_err(|e| e.to_string())?;
    for row in rows {
        let record: Vec<String> = header.iter().map(|k| scalar(&row[k])).collect();
        w.write_record(&record).map_err(|e| e.to_string())?;
    }
    String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

pub fn render(outcome: &Outcome, format: Format) -> Result<String, String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.report).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => match &outcome.rows {
            Some(rows) => csv_table(rows),
            None => csv_table(std::slice::from_ref(&outcome.report)),
        },
        Format::Text => {
            let mut s = String::new();
            if let Value::Object(map) = &outcome.report {
                for (k, v) in map {
                    s.push_str(&format!("{k}: {}\n", scalar(v)));
                }
            }
            for c in &outcome.checks {
                s.push_str(&format!("{} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name));
            }
            if outcome.budget_exhausted {
                s.push_str("BUDGET EXHAUSTED\n");
            }
            Ok(s)
        }
    }
}

pub fn emit(text: &str, path: Option<&Path>) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("writing {}: {e}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| format!("writing stdout: {e}")),
    }
}
