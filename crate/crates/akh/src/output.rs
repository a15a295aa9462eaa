//! Result records: a JSON object tagged `akh/1`, or TSV.
//!
//! TSV output starts with `# key<TAB>value` summary lines, followed by one
//! header line and the table rows. Absent values are written as `-`.

use serde::Serialize;

use crate::cache::Entry;

pub const SCHEMA: &str = "akh/1";

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub summary: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), ..Default::default() }
    }

    pub fn note(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.summary.push((key.to_string(), value.to_string()));
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.summary {
            out.push_str(&format!("# {k}\t{v}\n"));
        }
        if !self.header.is_empty() {
            out.push_str(&self.header.join("\t"));
            out.push('\n');
        }
        for r in &self.rows {
            out.push_str(&r.join("\t"));
            out.push('\n');
        }
        out
    }
}

/// A key-value table.
pub fn pairs(items: &[(&'static str, String)]) -> Table {
    let mut t = Table::new(&["key", "value"]);
    for (k, v) in items {
        t.row(vec![k.to_string(), v.clone()]);
    }
    t
}

/// `-` for absent values.
pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

/// A finished computation, as returned by a command.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: String,
    /// SHA-256 of the canonical diagram text.
    pub diagram: Option<String>,
    pub field: Option<&'static str>,
    pub weights: Option<String>,
    pub ok: bool,
    pub result: serde_json::Value,
    pub wall_clock_ms: f64,
}

impl Record {
    pub fn new(command: &str, diagram: Option<String>, field: Option<&'static str>, weights: Option<String>, entry: Entry, ms: f64) -> Self {
        Record {
            schema: SCHEMA,
            version: crate::VERSION,
            command: command.to_string(),
            diagram,
            field,
            weights,
            ok: entry.ok,
            result: entry.result,
            wall_clock_ms: ms,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }
}
