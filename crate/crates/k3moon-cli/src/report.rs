//! Tabular reports and their json, csv and text renderings.

use serde::Serialize;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Serialize)]
pub struct Block {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub blocks: Vec<Block>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.to_string(), blocks: Vec::new(), verdicts: Vec::new() }
    }

    pub fn block<S: ToString>(&mut self, name: &str, columns: &[S], rows: Vec<Vec<String>>) {
        self.blocks.push(Block {
            name: name.to_string(),
            columns: columns.iter().map(ToString::to_string).collect(),
            rows,
        });
    }

    pub fn verdict(&mut self, check: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict { check: check.into(), passed, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            Format::Csv => self.csv(),
            Format::Text => self.text(),
        }
    }

    fn csv(&self) -> String {
        let mut out = format!("# {}\n", self.command);
        let mut put = |name: &str, header: &[String], rows: &[Vec<String>]| {
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
            w.write_record(header).expect("in-memory write");
            for r in rows {
                w.write_record(r).expect("in-memory write");
            }
            let bytes = w.into_inner().expect("in-memory flush");
            let _ = writeln!(out, "# block: {name}");
            out.push_str(&String::from_utf8(bytes).expect("utf-8"));
        };
        for b in &self.blocks {
            put(&b.name, &b.columns, &b.rows);
        }
        if !self.verdicts.is_empty() {
            let rows: Vec<Vec<String>> = self
                .verdicts
                .iter()
                .map(|v| vec![v.check.clone(), v.passed.to_string(), v.detail.clone()])
                .collect();
            put("verdicts", &["check".into(), "passed".into(), "detail".into()], &rows);
        }
        out
    }

    fn text(&self) -> String {
        let mut out = format!("k3moon {}\n", self.command);
        for b in &self.blocks {
            let _ = writeln!(out, "\n== {} ==", b.name);
            let ncol = b.rows.iter().map(Vec::len).chain([b.columns.len()]).max().unwrap_or(0);
            let mut width = vec![0usize; ncol];
            for r in std::iter::once(&b.columns).chain(&b.rows) {
                for (i, c) in r.iter().enumerate() {
                    width[i] = width[i].max(c.chars().count());
                }
            }
            for r in std::iter::once(&b.columns).chain(&b.rows) {
                let line: Vec<String> = r.iter().enumerate().map(|(i, c)| format!("{c:>w$}", w = width[i])).collect();
                let _ = writeln!(out, "{}", line.join("  ").trim_end());
            }
        }
        if !self.verdicts.is_empty() {
            out.push('\n');
            for v in &self.verdicts {
                let _ = writeln!(out, "{} {}: {}", if v.passed { "PASS" } else { "FAIL" }, v.check, v.detail);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_has_header() {
        let r = Report::new("ellgenus");
        assert_eq!(r.render(Format::Text), "k3moon ellgenus\n");
        assert_eq!(r.render(Format::Csv), "# ellgenus\n");
        assert!(r.render(Format::Json).contains("\"blocks\": []"));
        assert!(r.passed());
    }

    #[test]
    fn csv_quotes_commas() {
        let mut r = Report::new("x");
        r.block("b", &["a"], vec![vec!["1,2".into()]]);
        assert!(r.render(Format::Csv).contains("\"1,2\""));
    }
}
