//! Text serializations: DOT for transition graphs, CSV and JSON lines for rule
//! streams, JSON for reports. All output is UTF-8 with LF line endings.

use std::fmt::Write as _;
use std::io::{BufRead, Read, Write};

use serde::{Deserialize, Serialize};

use crate::dynamics::{decode, TransitionGraph};
use crate::error::{Error, Result};
use crate::reversibility::ValidationReport;
use crate::rule::{FdcaRule, StateCount};

pub const CSV_HEADER: &str = "d,c0,c1,c2,c3,c4,c5,c6,c7";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DotOptions {
    /// Mark nodes with no predecessor or with several.
    pub highlight_collisions: bool,
    /// Add the base-`d` digit string under each decimal label.
    pub digit_labels: bool,
}

pub fn graph_to_dot(graph: &TransitionGraph, highlight_collisions: bool) -> String {
    graph_to_dot_with(
        graph,
        DotOptions {
            highlight_collisions,
            digit_labels: false,
        },
    )
}

pub fn graph_to_dot_with(graph: &TransitionGraph, options: DotOptions) -> String {
    let in_deg = graph.in_degrees();
    let mut out = String::new();
    out.push_str("digraph transition {\n");
    let _ = writeln!(out, "  label=\"d={}, n={}\";", graph.d(), graph.n());
    out.push_str("  node [shape=circle];\n");
    for (code, &deg) in in_deg.iter().enumerate() {
        let mut label = code.to_string();
        if options.digit_labels {
            let digits: String = decode(graph.d(), graph.n(), code as u64)
                .expect("code < d^n")
                .cells()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(if graph.d().get() > 10 { "." } else { "" });
            label = format!("{label}\\n{digits}");
        }
        let _ = write!(out, "  \"{code}\" [label=\"{label}\"");
        if options.highlight_collisions {
            match deg {
                0 => out.push_str(", style=dashed, color=\"gray50\", tooltip=\"unreachable\""),
                1 => {}
                k => {
                    let _ = write!(
                        out,
                        ", style=filled, fillcolor=\"#f4a582\", tooltip=\"{k} predecessors\""
                    );
                }
            }
        }
        out.push_str("];\n");
    }
    for (code, &next) in graph.successors().iter().enumerate() {
        let _ = writeln!(out, "  \"{code}\" -> \"{next}\";");
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct RuleRecord {
    d: u32,
    c0: u32,
    c1: u32,
    c2: u32,
    c3: u32,
    c4: u32,
    c5: u32,
    c6: u32,
    c7: u32,
}

impl From<&FdcaRule> for RuleRecord {
    fn from(r: &FdcaRule) -> Self {
        let [c0, c1, c2, c3, c4, c5, c6, c7] = *r.coeffs();
        RuleRecord {
            d: r.d().get(),
            c0,
            c1,
            c2,
            c3,
            c4,
            c5,
            c6,
            c7,
        }
    }
}

impl TryFrom<RuleRecord> for FdcaRule {
    type Error = Error;

    fn try_from(r: RuleRecord) -> Result<Self> {
        let coeffs = [r.c0, r.c1, r.c2, r.c3, r.c4, r.c5, r.c6, r.c7].map(u64::from);
        Ok(FdcaRule::new(StateCount::new(r.d as u64)?, coeffs))
    }
}

/// Fails on the first rule whose `d` differs from the first rule's.
struct SameD(Option<StateCount>);

impl SameD {
    fn check(&mut self, rule: &FdcaRule) -> Result<()> {
        match self.0 {
            None => {
                self.0 = Some(rule.d());
                Ok(())
            }
            Some(d) if d == rule.d() => Ok(()),
            Some(d) => Err(Error::MixedStateCounts {
                expected: d.get(),
                found: rule.d().get(),
            }),
        }
    }
}

/// Streams rules as CSV under [`CSV_HEADER`]; returns the number of data rows.
pub fn write_rules_csv<W: Write>(rules: impl IntoIterator<Item = FdcaRule>, out: W) -> Result<u64> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    let mut same = SameD(None);
    let mut rows = 0;
    for rule in rules {
        same.check(&rule)?;
        w.serialize(RuleRecord::from(&rule))?;
        rows += 1;
    }
    w.flush()?;
    Ok(rows)
}

/// Streams rules as one JSON object per line; returns the number of lines.
pub fn write_rules_jsonl<W: Write>(rules: impl IntoIterator<Item = FdcaRule>, mut out: W) -> Result<u64> {
    let mut same = SameD(None);
    let mut rows = 0;
    for rule in rules {
        same.check(&rule)?;
        serde_json::to_writer(&mut out, &RuleRecord::from(&rule))?;
        out.write_all(b"\n")?;
        rows += 1;
    }
    out.flush()?;
    Ok(rows)
}

/// Streams rules in rule-text form, one per line.
pub fn write_rules_text<W: Write>(rules: impl IntoIterator<Item = FdcaRule>, mut out: W) -> Result<u64> {
    let mut same = SameD(None);
    let mut rows = 0;
    for rule in rules {
        same.check(&rule)?;
        writeln!(out, "{rule}")?;
        rows += 1;
    }
    out.flush()?;
    Ok(rows)
}

pub fn rules_to_csv(rules: impl IntoIterator<Item = FdcaRule>) -> Result<String> {
    let mut buf = Vec::new();
    write_rules_csv(rules, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ASCII"))
}

pub fn rules_to_jsonl(rules: impl IntoIterator<Item = FdcaRule>) -> Result<String> {
    let mut buf = Vec::new();
    write_rules_jsonl(rules, &mut buf)?;
    Ok(String::from_utf8(buf).expect("json output is UTF-8"))
}

pub fn rules_from_csv<R: Read>(input: R) -> Result<Vec<FdcaRule>> {
    csv::Reader::from_reader(input)
        .deserialize::<RuleRecord>()
        .map(|rec| FdcaRule::try_from(rec?))
        .collect()
}

pub fn rules_from_jsonl<R: BufRead>(input: R) -> Result<Vec<FdcaRule>> {
    let mut rules = Vec::new();
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: RuleRecord = serde_json::from_str(&line)?;
        rules.push(FdcaRule::try_from(rec)?);
    }
    Ok(rules)
}

/// Pretty JSON with a fixed field order, LF-terminated.
pub fn report_to_json(report: &ValidationReport) -> String {
    to_json(report)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
