//! Verification records and their text and json-lines renderings.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check could not be carried out (reduction stall, evaluation
    /// error); counts as a failure.
    Error,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

/// One `(entry, check)` outcome. Field order is the json-lines schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub check: String,
    pub config: String,
    pub status: Status,
    pub scale: Option<String>,
    pub reference: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fired: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Record {
    pub fn new(id: &str, check: &str, config: &str, status: Status) -> Self {
        Record {
            id: id.into(),
            check: check.into(),
            config: config.into(),
            status,
            scale: None,
            reference: String::new(),
            residual_witness: None,
            seed: None,
            fired: Vec::new(),
            detail: None,
        }
    }

    pub fn reference(mut self, r: &str) -> Self {
        self.reference = r.into();
        self
    }

    pub fn scale(mut self, s: impl Into<Option<String>>) -> Self {
        self.scale = s.into();
        self
    }

    pub fn witness(mut self, w: impl Into<Option<String>>) -> Self {
        self.residual_witness = w.into();
        self
    }

    pub fn seed(mut self, s: u64) -> Self {
        self.seed = Some(s);
        self
    }

    pub fn fired(mut self, f: impl IntoIterator<Item = String>) -> Self {
        self.fired = f.into_iter().collect();
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// An error record for a check that could not run.
    pub fn error(id: &str, check: &str, config: &str, err: impl ToString) -> Self {
        Record::new(id, check, config, Status::Error).detail(err.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    JsonLines,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "text" => Some(Format::Text),
            "json-lines" | "jsonl" => Some(Format::JsonLines),
            _ => None,
        }
    }
}

fn write_text(w: &mut dyn Write, r: &Record) -> io::Result<()> {
    write!(w, "{:<5} {:<18} {:<24} [{}]", r.status.label(), r.id, r.check, r.config)?;
    if let Some(s) = &r.scale {
        write!(w, " scale={s}")?;
    }
    if !r.reference.is_empty() {
        write!(w, " ({})", r.reference)?;
    }
    writeln!(w)?;
    if !r.fired.is_empty() {
        writeln!(w, "      relations: {}", r.fired.join(", "))?;
    }
    if let Some(d) = &r.detail {
        writeln!(w, "      {d}")?;
    }
    if let Some(x) = &r.residual_witness {
        writeln!(w, "      witness: {x}")?;
    }
    if let Some(s) = r.seed {
        if r.status != Status::Pass {
            writeln!(w, "      seed: {s}")?;
        }
    }
    Ok(())
}

pub fn write_record(w: &mut dyn Write, r: &Record, format: Format) -> io::Result<()> {
    match format {
        Format::Text => write_text(w, r),
        Format::JsonLines => {
            serde_json::to_writer(&mut *w, r).map_err(io::Error::other)?;
            writeln!(w)
        }
    }
}

pub fn write_records(w: &mut dyn Write, records: &[Record], format: Format) -> io::Result<()> {
    for r in records {
        write_record(w, r, format)?;
    }
    if format == Format::Text {
        let failed = records.iter().filter(|r| !r.passed()).count();
        writeln!(w, "{} checks, {} passed, {} failed", records.len(), records.len() - failed, failed)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_lines_round_trip() {
        let r = Record::new("T1", "noether", "gamma=symbolic, entropy=general", Status::Pass)
            .scale(Some("1".to_string()))
            .reference("momentum x")
            .seed(3);
        let mut out = Vec::new();
        write_records(&mut out, std::slice::from_ref(&r), Format::JsonLines).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 1);
        let back: Record = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(back, r);
        assert!(text.starts_with(r#"{"id":"T1","check":"noether""#));
        assert!(!text.contains("residual_witness"));
    }

    #[test]
    fn scale_is_always_present() {
        let r = Record::new("X1", "admitted", "c", Status::Fail).witness(Some("phi1".to_string()));
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert!(v.get("scale").unwrap().is_null());
        assert_eq!(v["status"], "fail");
        assert_eq!(v["residual_witness"], "phi1");
    }
}
