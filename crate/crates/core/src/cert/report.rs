//! Line-oriented certificate reports.
//!
//! ```text
//! CERTIFICATE adaptive
//! VERSION ptlab 0.1.0
//! DIGEST code <sha256>
//! PARAM gamma 4
//! MEASURE chunk1.tv 3/4
//! <name> <lhs> <rhs> <slack>
//! BOUND 1.75 ACTUAL 0 PASS
//! READER
//! <preorder tokens>
//! ```
//!
//! Step lines assert `lhs <= rhs`; names starting with `eq_` assert
//! equality. Floats are printed in shortest round-trip form, so parsing a
//! report recovers every numeric field exactly.

use std::fmt;

use crate::dist::TOLERANCE;
use crate::error::{Error, Result};

pub const VERSION: &str = concat!("ptlab ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, PartialEq, Debug)]
pub struct Step {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
}

impl Step {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Step { name: name.into(), lhs, rhs }
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn is_equality(&self) -> bool {
        self.name.starts_with("eq_")
    }

    pub fn holds(&self) -> bool {
        let s = self.slack();
        if self.is_equality() {
            s.abs() <= TOLERANCE
        } else {
            s >= -TOLERANCE
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Report {
    pub kind: String,
    pub version: String,
    pub digests: Vec<(String, String)>,
    pub params: Vec<(String, String)>,
    pub measures: Vec<(String, String)>,
    pub steps: Vec<Step>,
    pub bound: f64,
    pub actual: f64,
    pub reader: Option<String>,
}

impl Report {
    pub fn new(kind: &str) -> Self {
        Report {
            kind: kind.to_string(),
            version: VERSION.to_string(),
            digests: Vec::new(),
            params: Vec::new(),
            measures: Vec::new(),
            steps: Vec::new(),
            bound: 0.0,
            actual: 0.0,
            reader: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn measure(&mut self, key: &str, value: impl fmt::Display) {
        self.measures.push((key.to_string(), value.to_string()));
    }

    pub fn step(&mut self, name: impl Into<String>, lhs: f64, rhs: f64) {
        self.steps.push(Step::new(name, lhs, rhs));
    }

    pub fn get_param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_measure(&self, key: &str) -> Option<&str> {
        self.measures.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_step(&self, name: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.name == name)
    }

    /// Bound at least the actual value and every step holding.
    pub fn pass(&self) -> bool {
        self.bound >= self.actual - TOLERANCE && self.steps.iter().all(Step::holds)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Parses a rendered report. The PASS/FAIL token and each slack must
    /// agree with the recomputed values.
    pub fn parse(text: &str) -> Result<Report> {
        let body = text.strip_suffix('\n').unwrap_or(text);
        let ls: Vec<&str> = body.split('\n').collect();
        let mut it = ls.iter().enumerate().map(|(i, l)| (i + 1, *l)).peekable();
        let word = |l: &str| -> String { l.to_string() };
        let num = |tok: &str, line: usize| -> Result<f64> {
            tok.parse::<f64>().map_err(|_| Error::parse(line, format!("bad number {tok:?}")))
        };
        let (_, first) = it.next().ok_or_else(|| Error::parse(1, "empty report"))?;
        let kind = first
            .strip_prefix("CERTIFICATE ")
            .ok_or_else(|| Error::parse(1, "expected `CERTIFICATE <kind>`"))?;
        let mut r = Report::new(kind);
        let (line, v) = it.next().ok_or_else(|| Error::parse(2, "missing VERSION"))?;
        r.version = word(v.strip_prefix("VERSION ").ok_or_else(|| Error::parse(line, "expected VERSION"))?);
        let mut verdict_seen = false;
        while let Some((line, l)) = it.next() {
            let toks: Vec<&str> = l.split(' ').collect();
            match toks[0] {
                "DIGEST" | "PARAM" | "MEASURE" => {
                    if toks.len() != 3 {
                        return Err(Error::parse(line, format!("expected `{} key value`", toks[0])));
                    }
                    let pair = (toks[1].to_string(), toks[2].to_string());
                    match toks[0] {
                        "DIGEST" => r.digests.push(pair),
                        "PARAM" => r.params.push(pair),
                        _ => r.measures.push(pair),
                    }
                }
                "BOUND" => {
                    if toks.len() != 5 || toks[2] != "ACTUAL" {
                        return Err(Error::parse(line, "expected `BOUND b ACTUAL a PASS|FAIL`"));
                    }
                    r.bound = num(toks[1], line)?;
                    r.actual = num(toks[3], line)?;
                    let claimed = match toks[4] {
                        "PASS" => true,
                        "FAIL" => false,
                        _ => return Err(Error::parse(line, "verdict must be PASS or FAIL")),
                    };
                    if claimed != r.pass() {
                        return Err(Error::parse(line, "verdict disagrees with the recomputed checks"));
                    }
                    verdict_seen = true;
                }
                "READER" => {
                    let (_, tree) = it.next().ok_or_else(|| Error::parse(line + 1, "missing reader line"))?;
                    r.reader = Some(tree.to_string());
                    if let Some((extra, _)) = it.next() {
                        return Err(Error::parse(extra, "trailing lines after READER"));
                    }
                }
                _ => {
                    if toks.len() != 4 || verdict_seen {
                        return Err(Error::parse(line, "expected `name lhs rhs slack`"));
                    }
                    let step = Step::new(toks[0], num(toks[1], line)?, num(toks[2], line)?);
                    if format!("{}", step.slack()) != toks[3] {
                        return Err(Error::parse(line, "slack disagrees with rhs - lhs"));
                    }
                    r.steps.push(step);
                }
            }
        }
        if !verdict_seen {
            return Err(Error::parse(ls.len(), "missing BOUND line"));
        }
        Ok(r)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CERTIFICATE {}", self.kind)?;
        writeln!(f, "VERSION {}", self.version)?;
        for (k, v) in &self.digests {
            writeln!(f, "DIGEST {k} {v}")?;
        }
        for (k, v) in &self.params {
            writeln!(f, "PARAM {k} {v}")?;
        }
        for (k, v) in &self.measures {
            writeln!(f, "MEASURE {k} {v}")?;
        }
        for s in &self.steps {
            writeln!(f, "{} {} {} {}", s.name, s.lhs, s.rhs, s.slack())?;
        }
        writeln!(
            f,
            "BOUND {} ACTUAL {} {}",
            self.bound,
            self.actual,
            if self.pass() { "PASS" } else { "FAIL" }
        )?;
        if let Some(tree) = &self.reader {
            writeln!(f, "READER")?;
            writeln!(f, "{tree}")?;
        }
        Ok(())
    }
}
