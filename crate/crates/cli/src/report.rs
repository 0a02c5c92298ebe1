//! Report assembly and deterministic JSON/CSV emission.

use std::time::Instant;

use hkrlab::report::{Check, Verdict};
use log::info;
use serde::Serialize;
use serde_json::Value;

use crate::config::{Format, RunConfig};

pub const TOOL: &str = "hkrlab";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageVerdict {
    pub stage: String,
    pub name: String,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub stage: String,
    pub seconds: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
    /// The first table is the primary one and the only one exported as CSV.
    pub tables: Vec<Table>,
    /// Structured results that do not fit a table.
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub data: serde_json::Map<String, Value>,
    pub verdicts: Vec<StageVerdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub timings: Vec<Timing>,
}

impl Report {
    pub fn new(cfg: &RunConfig) -> Self {
        Report {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command: cfg.command.name(),
            config: serde_json::to_value(cfg).expect("config serializes"),
            tables: Vec::new(),
            data: serde_json::Map::new(),
            verdicts: Vec::new(),
            timings: Vec::new(),
        }
    }

    /// Runs `f` as a named stage. The wall-clock time always goes to the log
    /// and is kept in the report for `--timings`.
    pub fn stage<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        info!("{} {stage}: {secs:.3}s", self.command);
        self.timings.push(Timing {
            stage: stage.into(),
            seconds: format!("{secs:.3}"),
        });
        out
    }

    pub fn checks(&mut self, stage: &str, checks: impl IntoIterator<Item = Check>) {
        self.verdicts.extend(checks.into_iter().map(|c| StageVerdict {
            stage: stage.into(),
            name: c.name,
            verdict: c.verdict,
            diagnostics: c.diagnostics,
        }));
    }

    pub fn data(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(key.into(), serde_json::to_value(value).expect("result serializes"));
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.verdict == Verdict::Pass)
    }
}

/// Numbers become decimal strings; everything else is kept. Object keys come
/// out sorted, so field order does not depend on construction order.
fn stringify_numbers(v: Value) -> Value {
    match v {
        Value::Number(n) => Value::String(n.to_string()),
        Value::Array(a) => Value::Array(a.into_iter().map(stringify_numbers).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, stringify_numbers(v))).collect()),
        other => other,
    }
}

pub fn emit(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let v = stringify_numbers(serde_json::to_value(report).expect("report serializes"));
            let mut out = serde_json::to_vec_pretty(&v).expect("json value serializes");
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            if let Some(t) = report.tables.first() {
                w.write_record(&t.columns).expect("in-memory write");
                for r in &t.rows {
                    w.write_record(r).expect("in-memory write");
                }
            }
            w.into_inner().expect("in-memory flush")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Command;

    fn sample() -> Report {
        let mut r = Report::new(&RunConfig::new(Command::Cartier { p: 2, m: 1 }));
        let mut t = Table::new("hh", &["n", "internal_degree", "free_rank", "torsion"]);
        t.push(vec!["0".into(), "3".into(), "1".into(), "".into()]);
        r.tables.push(t);
        r.data("sizes", [1u64, 2]);
        r.checks("s", [Check::pass("a"), Check::fail("b", "broken")]);
        r
    }

    #[test]
    fn json_is_stable_and_stringified() {
        let r = sample();
        let a = emit(&r, Format::Json);
        assert_eq!(a, emit(&r, Format::Json));
        let s = String::from_utf8(a).unwrap();
        assert!(s.ends_with("}\n"));
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["config"]["p"], "2");
        assert_eq!(v["data"]["sizes"][1], "2");
        assert_eq!(v["verdicts"][1]["verdict"], "fail");
        assert_eq!(v["verdicts"][1]["diagnostics"][0], "broken");
        assert!(v.get("timings").is_none());
        assert!(!r.all_pass());
    }

    #[test]
    fn csv_has_the_fixed_header() {
        let s = String::from_utf8(emit(&sample(), Format::Csv)).unwrap();
        assert_eq!(s, "n,internal_degree,free_rank,torsion\n0,3,1,\n");
    }
}
