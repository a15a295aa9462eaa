//! Command computations. Each returns a cache entry: the JSON result and its
//! TSV rendering.

use std::collections::BTreeMap;

use akh_core::bracket::{state_sum, wrap_report};
use akh_core::complex::{ChainComplex, KFilter, SignAssignment, WeightVector};
use akh_core::constructions::{build_family, Family, FamilySpec};
use akh_core::cube::{all_ones_report, is_minus_adequately_wrapped, smooth, State};
use akh_core::homology::{akh, homology, top_nonzero_k, GradedDims};
use akh_core::spectral::{
    b_value, bs_pages, l_shift, linking_shift, rank_inequality_check, split_homology, to_lk, to_lkg, LkgDims,
};
use akh_core::tangle::BraidWord;
use akh_core::{AnnularDiagram, Field, Rational};
use serde_json::{json, Value};

use crate::adt::serialize_adt;
use crate::cache::{sha256_hex, Entry};
use crate::error::CliError;
use crate::output::{opt, pairs, Table};

fn entry(result: Value, table: &Table, ok: bool) -> Entry {
    Entry { result, tsv: table.render(), ok }
}

pub fn diagram_hash(d: &AnnularDiagram) -> String {
    sha256_hex(serialize_adt(d).as_bytes())
}

pub fn validate(d: &AnnularDiagram) -> Entry {
    let windings: Vec<i32> = (0..d.component_count()).map(|c| d.winding(c).expect("component exists")).collect();
    let wl = windings.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",");
    let t = pairs(&[
        ("crossings", d.crossing_count().to_string()),
        ("n_plus", d.n_plus().to_string()),
        ("n_minus", d.n_minus().to_string()),
        ("components", d.component_count().to_string()),
        ("free_circles", d.free_circles().len().to_string()),
        ("wrap_bound", d.wrap_upper_bound().to_string()),
        ("windings", if wl.is_empty() { "-".into() } else { wl }),
    ]);
    let result = json!({
        "crossings": d.crossing_count(),
        "n_plus": d.n_plus(),
        "n_minus": d.n_minus(),
        "components": d.component_count(),
        "free_circles": d.free_circles().len(),
        "wrap_bound": d.wrap_upper_bound(),
        "windings": windings,
        "canonical": serialize_adt(d),
    });
    entry(result, &t, true)
}

pub fn resolve(d: &AnnularDiagram, word: &str) -> Result<Entry, CliError> {
    let s = State::parse(word).ok_or_else(|| CliError::Parse(format!("state `{word}` is not a word in 0 and 1")))?;
    let census = smooth(d, s)?;
    let mut t = Table::new(&["circle", "essential", "edges"]);
    t.note("state", word).note("essential", census.essential_count()).note("trivial", census.trivial_count());
    let mut circles = Vec::new();
    for (n, c) in census.circles.iter().enumerate() {
        let mut ids: Vec<u32> = c.edges.iter().map(|&e| d.edges()[e].id).collect();
        ids.sort_unstable();
        let list = ids.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
        t.row(vec![n.to_string(), c.essential.to_string(), list]);
        circles.push(json!({ "essential": c.essential, "edges": ids }));
    }
    let result = json!({
        "state": word,
        "essential": census.essential_count(),
        "trivial": census.trivial_count(),
        "circles": circles,
        "bands": census.bands,
    });
    Ok(entry(result, &t, true))
}

pub fn adequacy(d: &AnnularDiagram) -> Entry {
    let r = all_ones_report(d);
    let mawd = is_minus_adequately_wrapped(d);
    let t = pairs(&[
        ("circles", r.circle_count.to_string()),
        ("essential", r.essential_count.to_string()),
        ("trivial", r.trivial_count.to_string()),
        ("adequate", r.adequate.to_string()),
        ("wrapped", r.wrapped.to_string()),
        ("minus_adequately_wrapped", mawd.to_string()),
    ]);
    let result = json!({
        "circles": r.circle_count,
        "essential": r.essential_count,
        "trivial": r.trivial_count,
        "adequate": r.adequate,
        "wrapped": r.wrapped,
        "minus_adequately_wrapped": mawd,
    });
    entry(result, &t, true)
}

fn filter(k: Option<i32>) -> KFilter {
    k.map(KFilter::Only).unwrap_or(KFilter::All)
}

pub fn complex(d: &AnnularDiagram, cap: usize, k: Option<i32>, stats_only: bool) -> Result<Entry, CliError> {
    let cx = ChainComplex::build(d, cap, filter(k))?;
    let s = cx.stats();
    let mut counts: BTreeMap<(i32, i32, i32), usize> = BTreeMap::new();
    for g in cx.generators() {
        *counts.entry((g.i, g.j, g.k)).or_insert(0) += 1;
    }
    let mut t = if stats_only { Table::default() } else { Table::new(&["i", "j", "k", "generators"]) };
    t.note("crossings", s.crossings).note("states", s.states).note("generators", s.generators);
    let mut rows = Vec::new();
    if !stats_only {
        for (&(i, j, kk), &n) in &counts {
            t.row(vec![i.to_string(), j.to_string(), kk.to_string(), n.to_string()]);
            rows.push(json!([i, j, kk, n]));
        }
    }
    let mut result = json!({ "crossings": s.crossings, "states": s.states, "generators": s.generators });
    if !stats_only {
        result["by_grading"] = Value::Array(rows);
    }
    Ok(entry(result, &t, true))
}

fn dims_json(h: &GradedDims) -> Value {
    Value::Array(h.0.iter().map(|(&(i, j, k), &n)| json!([i, j, k, n])).collect())
}

pub fn akh_table<F: Field>(d: &AnnularDiagram, cap: usize, k: Option<i32>, top_only: bool) -> Result<Entry, CliError> {
    if top_only {
        let top = top_nonzero_k::<F>(d, cap)?;
        let mut t = Table::default();
        t.note("max_k", opt(top));
        return Ok(entry(json!({ "max_k": top }), &t, true));
    }
    let h = akh::<F>(d, cap, filter(k), SignAssignment::Standard)?;
    let mut t = Table::new(&["i", "j", "k", "dim"]);
    t.note("max_k", opt(h.max_k())).note("total", h.total());
    for (&(i, j, kk), &n) in &h.0 {
        t.row(vec![i.to_string(), j.to_string(), kk.to_string(), n.to_string()]);
    }
    Ok(entry(json!({ "dims": dims_json(&h), "max_k": h.max_k(), "total": h.total() }), &t, true))
}

pub fn bracket(d: &AnnularDiagram, cap: usize) -> Result<Entry, CliError> {
    let b = state_sum(d, cap)?;
    let mut t = Table::new(&["a", "z", "coeff"]);
    let ext = b.extreme_term();
    t.note("max_z", opt(b.max_z()))
        .note("wrap_bound", d.wrap_upper_bound())
        .note("extreme_term", opt(ext.map(|(a, c)| format!("{c}*A^{a}"))))
        .note("bracket", &b);
    for (&(a, z), &c) in &b.0 {
        t.row(vec![a.to_string(), z.to_string(), c.to_string()]);
    }
    let result = json!({
        "terms": b.0.iter().map(|(&(a, z), &c)| json!([a, z, c])).collect::<Vec<_>>(),
        "max_z": b.max_z(),
        "wrap_bound": d.wrap_upper_bound(),
        "extreme_term": ext.map(|(a, c)| json!({ "a": a, "coeff": c })),
        "text": b.to_string(),
    });
    Ok(entry(result, &t, true))
}

pub const CHECK_WRAP_HEADER: [&str; 8] =
    ["status", "bound", "bracket_degree", "akh_degree", "minus_adequately_wrapped", "certificate", "bracket", "homology"];

pub fn check_wrap(d: &AnnularDiagram, cap: usize, use_homology: bool) -> Result<Entry, CliError> {
    let r = wrap_report(d, cap, use_homology)?;
    let mut t = Table::new(&CHECK_WRAP_HEADER);
    t.row(vec![
        r.status.to_string(),
        r.bound.to_string(),
        opt(r.bracket_degree),
        opt(r.akh_degree),
        r.minus_adequately_wrapped.to_string(),
        r.certificate.to_string(),
        r.bracket.to_string(),
        opt(r.homology),
    ]);
    let result = json!({
        "status": r.status.to_string(),
        "bound": r.bound,
        "bracket_degree": r.bracket_degree,
        "akh_degree": r.akh_degree,
        "minus_adequately_wrapped": r.minus_adequately_wrapped,
        "paths": {
            "certificate": r.certificate.to_string(),
            "bracket": r.bracket.to_string(),
            "homology": r.homology.map(|s| s.to_string()),
        },
    });
    Ok(entry(result, &t, true))
}

/// `equal`, `distinct`, or a comma-separated list of rationals `p` or `p/q`
/// indexed by component.
pub fn parse_weights(spec: &str, components: usize) -> Result<WeightVector, CliError> {
    match spec.trim() {
        "equal" => return Ok(WeightVector::equal(components)),
        "distinct" => return Ok(WeightVector::distinct(components)),
        _ => {}
    }
    let bad = |s: &str| CliError::Weights(format!("weight `{s}` is not a rational number"));
    let w = spec
        .split(',')
        .map(|s| {
            let s = s.trim();
            let (p, q) = s.split_once('/').unwrap_or((s, "1"));
            let p: i64 = p.trim().parse().map_err(|_| bad(s))?;
            let q: i64 = q.trim().parse().map_err(|_| bad(s))?;
            if q == 0 {
                return Err(bad(s));
            }
            Ok(Rational::new(p, q))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if w.len() != components {
        return Err(CliError::Weights(format!("expected {components} weights, found {}", w.len())));
    }
    Ok(WeightVector(w))
}

fn lkg_rows(t: &mut Table, rows: &mut Vec<Value>, page: &str, dims: &LkgDims) {
    for (&(l, k, g), &n) in dims {
        t.row(vec![page.to_string(), l.to_string(), k.to_string(), g.to_string(), n.to_string()]);
        rows.push(json!([page, l, k, g, n]));
    }
}

pub fn bs_ss<F: Field>(
    d: &AnnularDiagram,
    cap: usize,
    w: &WeightVector,
    split: Option<&AnnularDiagram>,
) -> Result<Entry, CliError> {
    let (cx, p) = bs_pages::<F>(d, cap, w)?;
    let (d0, _) = cx.khovanov_differential::<F>(SignAssignment::Standard);
    let e1_is_akh = *p.page(1) == to_lkg(&homology(&cx, &d0), d.component_count());
    let target = match split {
        Some(s) => akh::<F>(s, cap, KFilter::All, SignAssignment::Standard)?,
        None => split_homology::<F>(d, cap)?,
    };
    let shift = l_shift(&to_lk(&p.infinity), &target.by_lk());
    let t_shift = linking_shift(d);
    let decreasing = p.weakly_decreasing();
    let mut t = Table::new(&["page", "l", "k", "g", "dim"]);
    t.note("stabilized_at", p.stabilized_at)
        .note("b", b_value(&p))
        .note("e1_is_akh", e1_is_akh)
        .note("weakly_decreasing", decreasing)
        .note("t", t_shift)
        .note("split_shift", opt(shift));
    let mut rows = Vec::new();
    for r in 1..=p.stabilized_at {
        lkg_rows(&mut t, &mut rows, &r.to_string(), p.page(r));
    }
    lkg_rows(&mut t, &mut rows, "inf", &p.infinity);
    let result = json!({
        "stabilized_at": p.stabilized_at,
        "b": b_value(&p),
        "e1_is_akh": e1_is_akh,
        "weakly_decreasing": decreasing,
        "t": t_shift,
        "split_shift": shift,
        "pages": rows,
    });
    Ok(entry(result, &t, e1_is_akh && decreasing))
}

pub fn rank_check<F: Field>(d: &AnnularDiagram, cap: usize) -> Result<Entry, CliError> {
    let r = rank_inequality_check::<F>(d, cap)?;
    let mut t = Table::new(&["l", "k", "margin"]);
    t.note("t", r.t).note("holds", r.holds).note("convention", r.convention);
    for (&(l, k), &m) in &r.margins {
        t.row(vec![l.to_string(), k.to_string(), m.to_string()]);
    }
    let result = json!({
        "t": r.t,
        "holds": r.holds,
        "convention": r.convention,
        "margins": r.margins.iter().map(|(&(l, k), &m)| json!([l, k, m])).collect::<Vec<_>>(),
    });
    Ok(entry(result, &t, r.holds))
}

/// Braid words such as `"s1 -s2 s1"`; `-si` or `si^-1` is the inverse of `si`.
pub fn parse_braid(word: &str, strands: usize) -> Result<BraidWord, CliError> {
    let letters = word
        .split_whitespace()
        .map(|tok| {
            let (neg, rest) = match tok.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, tok),
            };
            let (inv, rest) = match rest.strip_suffix("^-1") {
                Some(r) => (true, r),
                None => (false, rest),
            };
            let idx = rest
                .strip_prefix('s')
                .or_else(|| rest.strip_prefix('σ'))
                .and_then(|n| n.parse::<i32>().ok())
                .filter(|&n| n > 0)
                .ok_or_else(|| CliError::Parse(format!("braid letter `{tok}` is not of the form s<i> or -s<i>")))?;
            Ok(if neg ^ inv { -idx } else { idx })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    BraidWord::new(strands, letters).map_err(|e| CliError::Parse(e.to_string()))
}

/// Family selection as given on the command line.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyRequest {
    pub family: String,
    pub base: Option<String>,
    pub n: usize,
    pub m: usize,
    pub braids: Vec<String>,
    pub clasp: Option<i8>,
}

impl FamilyRequest {
    /// `cable` takes a base of `necklace` (the default) or `whitehead`.
    pub fn spec(&self) -> Result<FamilySpec, CliError> {
        let unknown = |s: &str| {
            let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
            CliError::Parse(format!("unknown family `{s}`; expected one of {}", names.join(", ")))
        };
        let mut family = Family::from_name(&self.family).ok_or_else(|| unknown(&self.family))?;
        if let Some(base) = &self.base {
            family = match (family, base.as_str()) {
                (Family::Cable, "necklace") => Family::Cable,
                (Family::Cable, "whitehead") => Family::Whitehead,
                (Family::Cable, other) => return Err(CliError::Parse(format!("cable base must be necklace or whitehead, not `{other}`"))),
                (f, _) => return Err(CliError::Parse(format!("family `{f}` does not take a base"))),
            };
        }
        let braids = self.braids.iter().map(|b| parse_braid(b, self.m)).collect::<Result<Vec<_>, _>>()?;
        let mut spec = FamilySpec::new(family, self.n, self.m).with_braids(braids);
        if let Some(c) = self.clasp {
            spec = spec.with_clasp(c);
        }
        Ok(spec)
    }

    pub fn build(&self) -> Result<AnnularDiagram, CliError> {
        Ok(build_family(&self.spec()?)?)
    }
}

pub fn family_summary(req: &FamilyRequest, d: &AnnularDiagram) -> Value {
    json!({
        "family": req.family,
        "base": req.base,
        "n": req.n,
        "m": req.m,
        "braids": req.braids,
        "crossings": d.crossing_count(),
        "components": d.component_count(),
        "wrap_bound": d.wrap_upper_bound(),
        "adt": serialize_adt(d),
    })
}

pub const SWEEP_HEADER: [&str; 12] = [
    "family",
    "n",
    "m",
    "braids",
    "crossings",
    "wrap_bound",
    "bracket_max_z",
    "akh_max_k",
    "adequate",
    "minus_adequately_wrapped",
    "status",
    "expected",
];

/// One sweep row. The expected status of every family member is VERIFIED.
pub fn sweep_row(req: &FamilyRequest, cap: usize, use_homology: bool) -> Result<(Vec<String>, Value, bool), CliError> {
    let d = req.build()?;
    let r = wrap_report(&d, cap, use_homology)?;
    let adequate = all_ones_report(&d).adequate;
    let ok = r.status == akh_core::bracket::WrapStatus::Verified;
    let braids = if req.braids.is_empty() { "-".to_string() } else { req.braids.join(";") };
    let cells = vec![
        req.family.clone(),
        req.n.to_string(),
        req.m.to_string(),
        braids,
        d.crossing_count().to_string(),
        r.bound.to_string(),
        opt(r.bracket_degree),
        opt(r.akh_degree),
        adequate.to_string(),
        r.minus_adequately_wrapped.to_string(),
        r.status.to_string(),
        if ok { "ok" } else { "FAIL" }.to_string(),
    ];
    let value = json!({
        "family": req.family,
        "base": req.base,
        "n": req.n,
        "m": req.m,
        "braids": req.braids,
        "crossings": d.crossing_count(),
        "wrap_bound": r.bound,
        "bracket_max_z": r.bracket_degree,
        "akh_max_k": r.akh_degree,
        "adequate": adequate,
        "minus_adequately_wrapped": r.minus_adequately_wrapped,
        "status": r.status.to_string(),
        "ok": ok,
    });
    Ok((cells, value, ok))
}

/// Inclusive ranges `a..b` or `a..=b`, single values, or comma lists.
pub fn parse_range(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Parse(format!("`{s}` is not a range such as 1..3 or a list such as 1,2"));
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let b = b.strip_prefix('=').unwrap_or(b);
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}
