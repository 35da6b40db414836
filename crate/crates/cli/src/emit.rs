//! Output files: CSV tables, a JSON summary and a gnuplot script.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use crate::criteria::CriterionResult;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem, e.g. `identity_n3`.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_header(name: impl Into<String>, header: Vec<String>) -> Self {
        Self { name: name.into(), header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

/// Fixed-format float so repeated runs produce identical files.
pub fn num(v: f64) -> String {
    format!("{v:.12e}")
}

/// A `log magnitude` against `1/h` curve for the plot script.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    /// `(h, magnitude)`.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub criteria: Vec<CriterionResult>,
    pub tables: Vec<Table>,
    pub curves: Vec<Curve>,
    /// Free-form lines printed to stdout.
    pub notes: Vec<String>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn merge(&mut self, other: Report) {
        self.criteria.extend(other.criteria);
        self.tables.extend(other.tables);
        self.curves.extend(other.curves);
        self.notes.extend(other.notes);
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    all_passed: bool,
    criteria: &'a [CriterionResult],
}

pub fn summary_json(report: &Report) -> Result<String> {
    Ok(serde_json::to_string_pretty(&Summary { all_passed: report.all_passed(), criteria: &report.criteria })?)
}

/// Gnuplot script drawing every curve as `log10 magnitude` against `1/h`,
/// reading the `curves.csv` written next to it.
pub fn plot_script(report: &Report) -> String {
    let mut s = String::from(
        "# gnuplot -p plot_decay.gp\nset datafile separator ','\nset xlabel '1/h'\nset ylabel 'log10 weighted magnitude'\nset key outside\n",
    );
    if report.curves.is_empty() {
        s.push_str("# no decay curves in this run\n");
        return s;
    }
    s.push_str("plot \\\n");
    let parts: Vec<String> = report
        .curves
        .iter()
        .enumerate()
        .map(|(i, c)| {
            format!(
                "  'curves.csv' using (column(1) == {i} ? 1/column(3) : NaN):(log10(column(4))) with linespoints title '{}'",
                c.label.replace('\'', "")
            )
        })
        .collect();
    s.push_str(&parts.join(", \\\n"));
    s.push('\n');
    s
}

fn curves_table(report: &Report) -> Table {
    let mut t = Table::new("curves", &["curve", "label", "h", "magnitude"]);
    for (i, c) in report.curves.iter().enumerate() {
        for &(h, m) in &c.points {
            t.push(vec![i.to_string(), format!("\"{}\"", c.label), num(h), num(m)]);
        }
    }
    t
}

/// Write every table, `summary.json` and (when there are curves)
/// `curves.csv` plus `plot_decay.gp` into `dir`. Returns the paths written.
pub fn emit_outputs(report: &Report, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = Vec::new();
    let mut write = |name: String, body: String| -> Result<()> {
        let path = dir.join(name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        written.push(path);
        Ok(())
    };
    for t in &report.tables {
        write(format!("{}.csv", t.name), t.to_csv())?;
    }
    if !report.curves.is_empty() {
        write("curves.csv".into(), curves_table(report).to_csv())?;
        write("plot_decay.gp".into(), plot_script(report))?;
    }
    write("summary.json".into(), summary_json(report)?)?;
    Ok(written)
}

/// Human-readable PASS/FAIL block.
pub fn summary_text(report: &Report) -> String {
    let mut s = String::new();
    for line in &report.notes {
        let _ = writeln!(s, "{line}");
    }
    for c in &report.criteria {
        let _ = writeln!(s, "{}", c.line());
    }
    s
}
