//! Text formats for maps and partitions.
//!
//! Map files hold one statement per line:
//!
//! ```text
//! # comment
//! degree 1
//! anchor 0 6/5
//! anchor 1/5 -1
//! anchor 1 11/5
//! ```
//!
//! Partition files hold lines `interval <label> <a> <b>` in increasing order.

use crate::error::{Error, Result};
use crate::markov::Partition;
use crate::pl_map::{make_lift, PLLift};
use crate::rational::{parse_rational, Interval, Rational};

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

/// Non-empty lines with comments removed, numbered from 1.
fn statements(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn number(line: usize, word: &str) -> Result<Rational> {
    parse_rational(word).ok_or_else(|| parse_err(line, format!("not a rational number: {word}")))
}

pub fn parse_map(text: &str) -> Result<PLLift> {
    let mut degree: Option<i64> = None;
    let mut anchors = Vec::new();
    let mut last_line = 0;
    for (line, words) in statements(text) {
        last_line = line;
        match words.as_slice() {
            ["degree", d] => {
                if degree.is_some() {
                    return Err(parse_err(line, "degree given twice"));
                }
                degree = Some(d.parse().map_err(|_| parse_err(line, format!("not an integer: {d}")))?);
            }
            ["anchor", x, y] => anchors.push((number(line, x)?, number(line, y)?)),
            ["degree", ..] => return Err(parse_err(line, "expected `degree <int>`")),
            ["anchor", ..] => return Err(parse_err(line, "expected `anchor <x> <y>`")),
            [other, ..] => return Err(parse_err(line, format!("unknown statement `{other}`"))),
            [] => unreachable!("blank lines are skipped"),
        }
    }
    let degree = degree.ok_or_else(|| parse_err(last_line.max(1), "missing `degree` statement"))?;
    make_lift(anchors, degree).map_err(|e| parse_err(last_line.max(1), e.to_string()))
}

/// Inverse of [`parse_map`]; rationals are written as `a/b`.
pub fn serialize_map(f: &PLLift) -> String {
    let mut out = format!("degree {}\n", f.degree());
    for (x, y) in f.anchors() {
        out.push_str(&format!("anchor {x} {y}\n"));
    }
    out
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    let mut parts = Vec::new();
    let mut last_line = 0;
    for (line, words) in statements(text) {
        last_line = line;
        match words.as_slice() {
            ["interval", label, a, b] => {
                let (a, b) = (number(line, a)?, number(line, b)?);
                if a >= b {
                    return Err(parse_err(line, format!("interval {label} has a >= b")));
                }
                parts.push((label.to_string(), Interval::new(a, b)));
            }
            _ => return Err(parse_err(line, "expected `interval <label> <a> <b>`")),
        }
    }
    Partition::new(parts).map_err(|e| parse_err(last_line.max(1), e.to_string()))
}

pub fn serialize_partition(p: &Partition) -> String {
    p.labels()
        .iter()
        .zip(p.intervals())
        .map(|(l, iv)| format!("interval {l} {} {}\n", iv.lo, iv.hi))
        .collect()
}
