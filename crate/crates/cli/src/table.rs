//! Tabular output: CSV with a reproducibility header, or one JSON
//! document. Floating-point cells are written with 17 significant
//! digits so independent reruns are byte-comparable.

use crate::config::RunConfig;

pub const TOOL: &str = "tailasym";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match *self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format!("{v:.16e}"),
        }
    }

    /// JSON has no non-finite numbers; those become null.
    fn json(&self) -> serde_json::Value {
        match *self {
            Cell::Int(v) => serde_json::Value::from(v),
            Cell::Num(v) => serde_json::Number::from_f64(v)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `# ...` comment lines between the config header and the
    /// column row (sample provenance, achieved tolerances).
    pub notes: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Table {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width matches header");
        self.rows.push(row);
    }

    pub fn render_csv(&self, config: &RunConfig) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {TOOL} {VERSION}\n"));
        out.push_str(&format!("# config: {}\n", config.normalized()));
        for note in &self.notes {
            out.push_str(&format!("# {note}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn render_json(&self, config: &RunConfig) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| serde_json::Value::Array(row.iter().map(Cell::json).collect()))
            .collect();
        let doc = serde_json::json!({
            "tool": TOOL,
            "version": VERSION,
            "config": config,
            "notes": self.notes,
            "columns": self.columns,
            "rows": rows,
        });
        let mut text = serde_json::to_string(&doc).expect("table serializes");
        text.push('\n');
        text
    }

    pub fn render(&self, config: &RunConfig) -> String {
        match config.format {
            crate::config::Format::Csv => self.render_csv(config),
            crate::config::Format::Json => self.render_json(config),
        }
    }
}
