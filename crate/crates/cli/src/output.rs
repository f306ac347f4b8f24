use clap::ValueEnum;
use serde_json::Value;

use niemeier_theta::congruence::{CongruenceReport, CrossCheck, TableReport};
use niemeier_theta::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Writes to stdout; a closed pipe ends the process quietly.
fn put(s: &str) -> Result<(), Error> {
    use std::io::Write as _;
    match std::io::stdout().lock().write_all(s.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        r => Ok(r?),
    }
}

macro_rules! outln {
    ($($a:tt)*) => { put(&format!("{}\n", format_args!($($a)*)))? };
}

pub struct Emit {
    format: Format,
}

fn csv_out(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    let csv_err = |e: csv::Error| Error::Parse(format!("csv output: {e}"));
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(&r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Emit {
    pub fn new(format: Format) -> Self {
        Self { format }
    }

    /// A flat JSON object: pretty JSON, `key: value` lines, or key/value CSV.
    pub fn object(&self, v: &Value) -> Result<(), Error> {
        let map = v.as_object().expect("object output");
        match self.format {
            Format::Json => outln!("{}", serde_json::to_string_pretty(v)?),
            Format::Text => {
                for (k, x) in map {
                    outln!("{k}: {}", scalar(x));
                }
            }
            Format::Csv => csv_out(&["field", "value"], map.iter().map(|(k, x)| vec![k.clone(), scalar(x)]))?,
        }
        Ok(())
    }

    pub fn table(&self, rep: &TableReport) -> Result<(), Error> {
        match self.format {
            Format::Json => outln!("{}", serde_json::to_string_pretty(&tagged("table", rep)?)?),
            Format::Text => put(&rep.to_text())?,
            Format::Csv => csv_out(
                &["table", "index", "column", "computed", "expected", "status"],
                rep.rows.iter().map(|r| {
                    vec![rep.id.clone(), r.index.clone(), r.column.clone(), r.computed.clone(), r.expected.clone(), r.status.clone()]
                }),
            )?,
        }
        Ok(())
    }

    pub fn report(&self, rep: &CongruenceReport) -> Result<(), Error> {
        match self.format {
            Format::Json => outln!("{}", serde_json::to_string_pretty(&tagged("report", rep)?)?),
            Format::Text => put(&rep.to_text())?,
            Format::Csv => csv_out(
                &["claim", "check", "key", "values", "ok"],
                rep.verdicts
                    .iter()
                    .map(|v| vec![rep.claim.clone(), v.check.clone(), v.key.clone(), v.values.join(" "), v.ok.to_string()]),
            )?,
        }
        Ok(())
    }

    pub fn crosscheck(&self, checks: &[CrossCheck]) -> Result<(), Error> {
        match self.format {
            Format::Json => outln!("{}", serde_json::to_string_pretty(&tagged("crosscheck", &checks)?)?),
            Format::Text => {
                for c in checks {
                    outln!("{}: {}", c.index, if c.agree { "agree" } else { "DISAGREE" });
                    for (m, v, s) in &c.results {
                        outln!("  {m:<14} {v:>22}  {s:.1}s");
                    }
                }
            }
            Format::Csv => csv_out(
                &["index", "method", "value", "seconds"],
                checks.iter().flat_map(|c| {
                    c.results.iter().map(|(m, v, s)| vec![c.index.clone(), m.clone(), v.clone(), format!("{s:.3}")])
                }),
            )?,
        }
        Ok(())
    }

    pub fn gram(&self, label: &str, rows: &[Vec<i64>]) -> Result<(), Error> {
        match self.format {
            Format::Json => {
                outln!("{}", serde_json::to_string_pretty(&serde_json::json!({"kind": "gram", "label": label, "gram": rows}))?)
            }
            Format::Text => {
                for r in rows {
                    outln!("{}", r.iter().map(|x| format!("{x:>3}")).collect::<String>());
                }
            }
            Format::Csv => {
                let n = rows.len();
                let header: Vec<String> = (1..=n).map(|j| format!("c{j}")).collect();
                let header: Vec<&str> = header.iter().map(String::as_str).collect();
                csv_out(&header, rows.iter().map(|r| r.iter().map(i64::to_string).collect()))?;
            }
        }
        Ok(())
    }
}

fn tagged<T: serde::Serialize>(kind: &str, x: &T) -> Result<Value, Error> {
    let mut v = serde_json::to_value(x)?;
    match &mut v {
        Value::Object(m) => {
            m.insert("kind".into(), Value::String(kind.into()));
        }
        other => {
            v = serde_json::json!({"kind": kind, "checks": other.take()});
        }
    }
    Ok(v)
}
