//! The machine-readable report: a stable JSON schema and a human table.
//!
//! JSON is the contract — field order is fixed by the struct definitions
//! and identical inputs produce byte-identical output.

use crate::FormatArg;
use serde::Serialize;
use std::fmt::Write;

#[derive(Serialize)]
pub struct Report {
    pub command: &'static str,
    pub order: usize,
    pub values: Vec<ValueEntry>,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oeis: Option<Vec<OeisEntry>>,
}

#[derive(Serialize)]
pub struct ValueEntry {
    pub n: usize,
    pub value: String,
}

#[derive(Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Serialize)]
pub struct OeisEntry {
    pub id: String,
    pub name: String,
    pub matched_prefix_length: usize,
}

impl Report {
    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: FormatArg) -> String {
        match format {
            FormatArg::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            FormatArg::Table => self.render_table(),
        }
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} (order {})", self.command, self.order);
        if !self.values.is_empty() {
            let nw = self
                .values
                .iter()
                .map(|v| v.n.to_string().len())
                .max()
                .unwrap()
                .max(1);
            let vw = self
                .values
                .iter()
                .map(|v| v.value.len())
                .max()
                .unwrap()
                .max("value".len());
            let _ = writeln!(out, "{:>nw$}  {:>vw$}", "n", "value");
            for v in &self.values {
                let _ = writeln!(out, "{:>nw$}  {:>vw$}", v.n, v.value);
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "checks:");
            for c in &self.checks {
                let status = if c.passed { "pass" } else { "FAIL" };
                match &c.detail {
                    Some(d) => {
                        let _ = writeln!(out, "  {status}  {} ({d})", c.name);
                    }
                    None => {
                        let _ = writeln!(out, "  {status}  {}", c.name);
                    }
                }
            }
        }
        if let Some(matches) = &self.oeis {
            if matches.is_empty() {
                let _ = writeln!(out, "oeis: no matches");
            } else {
                let _ = writeln!(out, "oeis:");
                for m in matches {
                    let _ = writeln!(out, "  {} (prefix {})  {}", m.id, m.matched_prefix_length, m.name);
                }
            }
        }
        out.trim_end().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report {
            command: "seriesmake",
            order: 3,
            values: vec![
                ValueEntry { n: 0, value: "1".into() },
                ValueEntry { n: 1, value: "2".into() },
                ValueEntry { n: 10, value: "-35/4".into() },
            ],
            checks: vec![
                CheckEntry {
                    name: "method_agreement".into(),
                    passed: true,
                    detail: Some("direct and recursive agree".into()),
                },
                CheckEntry {
                    name: "lemma".into(),
                    passed: false,
                    detail: None,
                },
            ],
            oeis: None,
        }
    }

    #[test]
    fn json_is_deterministic_and_schema_shaped() {
        let a = sample().render(FormatArg::Json);
        let b = sample().render(FormatArg::Json);
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["command"], "seriesmake");
        assert_eq!(v["order"], 3);
        assert_eq!(v["values"][2]["value"], "-35/4");
        assert_eq!(v["checks"][1]["passed"], false);
        assert!(v.get("oeis").is_none());
    }

    #[test]
    fn table_right_aligns_values() {
        let t = sample().render(FormatArg::Table);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "seriesmake (order 3)");
        assert_eq!(lines[1], " n  value");
        assert_eq!(lines[2], " 0      1");
        assert_eq!(lines[3], " 1      2");
        assert_eq!(lines[4], "10  -35/4");
        assert!(lines.contains(&"  pass  method_agreement (direct and recursive agree)"));
        assert!(lines.contains(&"  FAIL  lemma"));
    }

    #[test]
    fn oeis_section_renders() {
        let mut r = sample();
        r.oeis = Some(vec![OeisEntry {
            id: "A000041".into(),
            name: "partition numbers".into(),
            matched_prefix_length: 9,
        }]);
        let t = r.render(FormatArg::Table);
        assert!(t.contains("A000041 (prefix 9)  partition numbers"));
        r.oeis = Some(Vec::new());
        assert!(r.render(FormatArg::Table).contains("oeis: no matches"));
    }
}
