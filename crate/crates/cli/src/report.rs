//! Deterministic reports: checks, tables and notes rendered either as an
//! aligned table or as a JSON record. Wall time is never part of a report so
//! that reruns with the same configuration are byte-identical.

use cayley_core::topology::CheckStatus;
use serde_json::{json, Map, Value};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub value: String,
    pub tol: String,
    pub anchor: String,
}

#[derive(Clone, Debug)]
pub struct Table {
    pub title: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: &str, header: &[&str]) -> Self {
        Table { title: title.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub seed: Option<u64>,
    checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
    pub data: Map<String, Value>,
}

impl Report {
    pub fn new(command: String, seed: Option<u64>) -> Self {
        Report { command, seed, ..Default::default() }
    }

    pub fn check(&mut self, name: &str, pass: bool, value: String, tol: &str, anchor: &str) {
        let status = if pass { CheckStatus::Pass } else { CheckStatus::Fail };
        self.push(name, status, value, tol, anchor);
    }

    pub fn push(&mut self, name: &str, status: CheckStatus, value: String, tol: &str, anchor: &str) {
        self.checks.push(Check { name: name.into(), status, value, tol: tol.into(), anchor: anchor.into() });
    }

    /// Checks ordered by name, the order used in every rendering.
    pub fn checks(&self) -> Vec<&Check> {
        let mut out: Vec<&Check> = self.checks.iter().collect();
        out.sort_by(|a, b| a.name.cmp(&b.name));
        out
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail).count()
    }

    pub fn render_table(&self) -> String {
        let mut out = format!("cayley {}\n", self.command);
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed: {seed}\n"));
        }
        for t in &self.tables {
            out.push('\n');
            out.push_str(&format!("{}\n", t.title));
            out.push_str(&aligned(&t.header, &t.rows));
        }
        let checks = self.checks();
        if !checks.is_empty() {
            let header: Vec<String> = ["CHECK", "STATUS", "VALUE", "TOL", "ANCHOR"].iter().map(|s| s.to_string()).collect();
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| vec![c.name.clone(), c.status.to_string(), c.value.clone(), c.tol.clone(), c.anchor.clone()])
                .collect();
            out.push('\n');
            out.push_str(&aligned(&header, &rows));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out.push_str(&format!("summary: {} checks, {} failed\n", checks.len(), self.failures()));
        out
    }

    pub fn render_record(&self) -> String {
        let checks: Vec<Value> = self
            .checks()
            .iter()
            .map(|c| json!({"name": c.name, "status": c.status.to_string(), "value": c.value, "tol": c.tol, "anchor": c.anchor}))
            .collect();
        let tables: Vec<Value> =
            self.tables.iter().map(|t| json!({"title": t.title, "header": t.header, "rows": t.rows})).collect();
        let record = json!({
            "command": self.command,
            "seed": self.seed,
            "checks": checks,
            "failed": self.failures(),
            "tables": tables,
            "notes": self.notes,
            "data": Value::Object(self.data.clone()),
        });
        let mut s = serde_json::to_string_pretty(&record).expect("report serializes");
        s.push('\n');
        s
    }
}

fn aligned(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let width = |c: usize| {
        rows.iter().filter_map(|r| r.get(c)).chain(std::iter::once(&header[c])).map(|s| s.chars().count()).max().unwrap_or(0)
    };
    let widths: Vec<usize> = (0..cols).map(width).collect();
    let line = |cells: &[String]| {
        let mut s = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                s.push_str(cell);
                s.push_str(&" ".repeat(widths[i] - cell.chars().count() + 2));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

/// Fixed-precision rendering so that reports do not depend on float
/// formatting heuristics.
pub fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_render_sorted_by_name() {
        let mut r = Report::new("demo".into(), Some(3));
        r.check("b", true, "0".into(), "0", "x");
        r.check("a", false, "1".into(), "0", "y");
        let text = r.render_table();
        assert!(text.find("a  ").unwrap() < text.find("b  ").unwrap());
        assert!(text.contains("seed: 3"));
        assert!(text.ends_with("summary: 2 checks, 1 failed\n"));
        assert_eq!(r.failures(), 1);
    }

    #[test]
    fn record_is_valid_json() {
        let mut r = Report::new("demo".into(), None);
        let mut t = Table::new("t", &["x", "y"]);
        t.row(vec!["1".into(), "2".into()]);
        r.tables.push(t);
        r.check("c", true, "0".into(), "0", "anchor");
        let v: Value = serde_json::from_str(&r.render_record()).unwrap();
        assert_eq!(v["checks"][0]["status"], "PASS");
        assert_eq!(v["tables"][0]["rows"][0][1], "2");
        assert_eq!(v["seed"], Value::Null);
    }

    #[test]
    fn columns_align_with_unicode_cells() {
        let s = aligned(&["ab".into(), "c".into()], &[vec!["⋆ω".into(), "x".into()]]);
        assert_eq!(s, "ab  c\n⋆ω  x\n");
    }
}
