use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::Format;

/// Version tag carried by every JSON report.
pub const SCHEMA: &str = "polyprog-cli.report/1";

/// A flat table destined for CSV.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, headers: &[&str]) -> Self {
        Self { name: name.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    /// `None` for purely descriptive commands.
    pub passed: Option<bool>,
    pub result: serde_json::Value,
    #[serde(skip)]
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str, result: impl Serialize) -> Result<Self> {
        Ok(Self {
            schema: SCHEMA,
            command: command.into(),
            passed: None,
            result: serde_json::to_value(result)?,
            tables: Vec::new(),
        })
    }

    pub fn with_table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn with_verdict(mut self, passed: bool) -> Self {
        self.passed = Some(passed);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Every table, each preceded by a `# name` line when there are several.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        for (i, t) in self.tables.iter().enumerate() {
            if self.tables.len() > 1 {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&format!("# {}\n", t.name));
            }
            out.push_str(&t.to_csv()?);
        }
        Ok(out)
    }

    /// Writes `<command>.json` and one `<command>_<table>.csv` per table into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::new();
        let json = dir.join(format!("{}.json", self.command));
        fs::write(&json, self.to_json()?).with_context(|| format!("writing {}", json.display()))?;
        written.push(json);
        for t in &self.tables {
            let path = dir.join(format!("{}_{}.csv", self.command, t.name));
            fs::write(&path, t.to_csv()?).with_context(|| format!("writing {}", path.display()))?;
            written.push(path);
        }
        Ok(written)
    }

    pub fn emit(&self, format: Format, out: Option<&Path>, stdout: &mut impl Write) -> Result<()> {
        match out {
            Some(dir) => {
                for p in self.write_dir(dir)? {
                    writeln!(stdout, "wrote {}", p.display())?;
                }
            }
            None => match format {
                Format::Json => stdout.write_all(self.to_json()?.as_bytes())?,
                Format::Csv => stdout.write_all(self.to_csv()?.as_bytes())?,
            },
        }
        Ok(())
    }
}

/// Fixed-width float text so CSV output is byte-stable.
pub fn num(v: f64) -> String {
    format!("{:.12e}", v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_and_sections() {
        let mut t = Table::new("rel", &["index", "relation"]);
        t.push(vec!["0".into(), "y, -2y, y".into()]);
        assert_eq!(t.to_csv().unwrap(), "index,relation\n0,\"y, -2y, y\"\n");
        let r = Report::new("relations", 1).unwrap().with_table(t.clone()).with_table(Table::new("empty", &["a"]));
        assert!(r.to_csv().unwrap().starts_with("# rel\nindex,relation\n"));
        let json: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(json["schema"], SCHEMA);
        assert!(json.get("tables").is_none());
    }

    #[test]
    fn writes_directory() {
        let dir = tempfile::tempdir().unwrap();
        let r = Report::new("gowers", serde_json::json!({"n": 3})).unwrap().with_table(Table::new("norms", &["n"]));
        let files = r.write_dir(dir.path()).unwrap();
        assert_eq!(files.len(), 2);
        assert!(dir.path().join("gowers_norms.csv").exists());
    }
}
