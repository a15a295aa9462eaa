//! ADT v1, the line-oriented annular diagram text format.
//!
//! ```text
//! # comments run to the end of the line
//! X: 1 4 2 5          crossing, slots counterclockwise from the incoming under-strand
//! O: 4 5              the over-strand enters on 4 and leaves on 5
//! circle: 1           free circle with seam count 1
//! seam: 1 1, 2 -1     signed seam counts per edge
//! ```
//!
//! Keywords may repeat and appear in any order. Serialization is canonical:
//! crossings sorted, then the pins the orientation needs, then free circles,
//! then one seam line with nonzero counts sorted by edge.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use akh_core::{AnnularDiagram, DiagramError, DiagramInput, EdgeId};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AdtError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    /// Well-formed text describing an invalid diagram. `at` is the first
    /// place the offending edge occurs, when there is one.
    #[error("{}{error}", at.map(|(l, c)| format!("line {l}, column {c}: ")).unwrap_or_default())]
    Invalid { error: DiagramError, at: Option<(usize, usize)> },
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> AdtError {
    AdtError::Syntax { line, col, msg: msg.into() }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(s: &str, base: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices().chain(std::iter::once((s.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push((base + s[..b].chars().count(), &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    out
}

fn edge(line: usize, (col, t): (usize, &str)) -> Result<EdgeId, AdtError> {
    match t.parse::<EdgeId>() {
        Ok(0) => Err(syntax(line, col, "edge label 0 is reserved")),
        Ok(e) => Ok(e),
        Err(_) => Err(syntax(line, col, format!("expected an edge label, found `{t}`"))),
    }
}

fn count(line: usize, (col, t): (usize, &str)) -> Result<i32, AdtError> {
    t.parse::<i32>().map_err(|_| syntax(line, col, format!("expected a signed integer, found `{t}`")))
}

fn arity<'a>(line: usize, col: usize, key: &str, toks: Vec<(usize, &'a str)>, n: usize) -> Result<Vec<(usize, &'a str)>, AdtError> {
    if toks.len() == n {
        Ok(toks)
    } else {
        let c = toks.get(n).map(|t| t.0).unwrap_or(col);
        Err(syntax(line, c, format!("`{key}` takes {n} values, found {}", toks.len())))
    }
}

pub fn parse_adt(text: &str) -> Result<AnnularDiagram, AdtError> {
    let mut input = DiagramInput::default();
    let mut first_seen: BTreeMap<EdgeId, (usize, usize)> = BTreeMap::new();
    let mut seam_at: BTreeMap<EdgeId, (usize, usize)> = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let Some(colon) = body.find(':') else {
            let col = body.len() - body.trim_start().len() + 1;
            return Err(syntax(line, col, "expected `keyword: values`"));
        };
        let key = body[..colon].trim();
        let key_col = body.len() - body.trim_start().len() + 1;
        let rest = &body[colon + 1..];
        let base = body[..colon + 1].chars().count() + 1;
        match key {
            "X" => {
                let t = arity(line, key_col, key, tokens(rest, base), 4)?;
                let mut slots = [0; 4];
                for (p, &tok) in t.iter().enumerate() {
                    slots[p] = edge(line, tok)?;
                    first_seen.entry(slots[p]).or_insert((line, tok.0));
                }
                input.crossings.push(slots);
            }
            "O" => {
                let t = arity(line, key_col, key, tokens(rest, base), 2)?;
                input.pins.push((edge(line, t[0])?, edge(line, t[1])?));
            }
            "circle" => {
                let t = arity(line, key_col, key, tokens(rest, base), 1)?;
                input.free_circles.push(count(line, t[0])?);
            }
            "seam" => {
                if rest.trim().is_empty() {
                    continue;
                }
                let mut off = base;
                for entry in rest.split(',') {
                    let here = off;
                    off += entry.chars().count() + 1;
                    let t = arity(line, here, "seam entry", tokens(entry, here), 2)?;
                    let e = edge(line, t[0])?;
                    if seam_at.insert(e, (line, t[0].0)).is_some() {
                        return Err(syntax(line, t[0].0, format!("seam count for edge {e} given twice")));
                    }
                    input.seam.push((e, count(line, t[1])?));
                }
            }
            _ => return Err(syntax(line, key_col, format!("unknown keyword `{key}`"))),
        }
    }
    AnnularDiagram::new(input).map_err(|error| {
        let at = match &error {
            DiagramError::Multiplicity { edge, .. } | DiagramError::Orientation { edge } => first_seen.get(edge).copied(),
            DiagramError::UnknownSeamEdge { edge } => seam_at.get(edge).copied(),
            _ => None,
        };
        AdtError::Invalid { error, at }
    })
}

pub fn serialize_adt(d: &AnnularDiagram) -> String {
    let input = d.to_input();
    let mut out = String::new();
    for x in &input.crossings {
        let _ = writeln!(out, "X: {} {} {} {}", x[0], x[1], x[2], x[3]);
    }
    for (a, b) in &input.pins {
        let _ = writeln!(out, "O: {a} {b}");
    }
    for s in &input.free_circles {
        let _ = writeln!(out, "circle: {s}");
    }
    if !input.seam.is_empty() {
        let entries: Vec<String> = input.seam.iter().map(|(e, s)| format!("{e} {s}")).collect();
        let _ = writeln!(out, "seam: {}", entries.join(", "));
    }
    out
}
