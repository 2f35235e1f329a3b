//! Schema-tagged tables written as CSV or JSON, plus the run sidecar.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value as Json};
use sha2::{Digest, Sha256};

use crate::args::{Format, OutputArgs};
use crate::CliError;

pub const SIGNIFICANT_DIGITS: usize = 9;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Num(x)
    }
}

impl From<Option<f64>> for Value {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Value::Empty, Value::Num)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

/// `%.9g`: nine significant digits, trailing zeros dropped.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Num(x) => sig(*x),
            Value::Text(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
            Value::Empty => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            // the same rounding as the CSV so both files carry one value
            Value::Num(x) => sig(*x).parse::<f64>().ok().filter(|v| v.is_finite()).map_or(Json::Null, Json::from),
            Value::Text(s) => Json::from(s.as_str()),
            Value::Bool(b) => Json::from(*b),
            Value::Empty => Json::Null,
        }
    }
}

/// Rows under a versioned schema; the `schema` column comes first.
#[derive(Clone, Debug)]
pub struct Table {
    pub schema: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(schema: &'static str, columns: &[&'static str]) -> Self {
        Self { schema, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(std::iter::once("schema").chain(self.columns.iter().copied())).map_err(io)?;
        for row in &self.rows {
            let cells = std::iter::once(self.schema.to_string()).chain(row.iter().map(Value::csv));
            w.write_record(cells).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json(&self, meta: &Meta) -> Result<Vec<u8>, CliError> {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                obj.insert("schema".into(), Json::from(self.schema));
                for (c, v) in self.columns.iter().zip(row) {
                    obj.insert((*c).into(), v.json());
                }
                Json::Object(obj)
            })
            .collect();
        let doc = json!({ "meta": meta.to_json(self.schema), "rows": rows });
        let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
        out.push(b'\n');
        Ok(out)
    }
}

/// The normalised request behind an output; its hash identifies the run.
#[derive(Clone, Debug)]
pub struct Meta {
    pub command: &'static str,
    pub request: Vec<(&'static str, String)>,
}

impl Meta {
    pub fn new(command: &'static str) -> Self {
        Self { command, request: Vec::new() }
    }

    pub fn with(mut self, key: &'static str, value: impl ToString) -> Self {
        self.request.push((key, value.to_string()));
        self
    }

    /// SHA-256 over the command and its normalised parameters.
    pub fn spec_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.command.as_bytes());
        h.update(b"\n");
        for (k, v) in &self.request {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn to_json(&self, schema: &str) -> Json {
        let request: Map<String, Json> =
            self.request.iter().map(|(k, v)| ((*k).to_string(), Json::from(v.as_str()))).collect();
        json!({
            "tool": "steer",
            "version": env!("CARGO_PKG_VERSION"),
            "schema": schema,
            "command": self.command,
            "spec_hash": self.spec_hash(),
            "request": request,
        })
    }
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes the table to `--out` (with sidecar) or stdout.
pub fn emit(table: &Table, meta: &Meta, output: &OutputArgs, argv: &[String], elapsed_s: f64) -> Result<(), CliError> {
    let bytes = match output.format() {
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json(meta)?,
    };
    let Some(path) = &output.out else {
        return std::io::stdout().write_all(&bytes).map_err(|e| CliError::Io(e.to_string()));
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    fs::write(path, &bytes).map_err(io)?;
    let finished = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let mut side = meta.to_json(table.schema);
    side["rows"] = Json::from(table.rows.len());
    side["argv"] = Json::from(argv.to_vec());
    side["threads"] = Json::from(rayon::current_num_threads());
    side["elapsed_seconds"] = Json::from(elapsed_s);
    side["finished_unix"] = Json::from(finished);
    let mut text = serde_json::to_vec_pretty(&side).map_err(|e| CliError::Io(e.to_string()))?;
    text.push(b'\n');
    fs::write(sidecar_path(path), text).map_err(io)
}
