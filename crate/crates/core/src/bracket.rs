//! Decategorified invariants: the graded Euler characteristic of the annular
//! complex and the annular Kauffman bracket, plus the wrapping certificate.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::complex::{ComplexError, Generator};
use crate::cube::{check_cap, is_minus_adequately_wrapped, CubeError, Smoother};
use crate::diagram::AnnularDiagram;
use crate::field::Gf2;
use crate::homology::{top_nonzero_k, GradedDims};

/// Laurent polynomial in `q` and `lambda`, keyed by `(q, lambda)` exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnnularLaurent(pub BTreeMap<(i32, i32), i64>);

/// Laurent polynomial in `A` and `z`, keyed by `(A, z)` exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SkeinBracket(pub BTreeMap<(i32, i32), i64>);

fn bump(m: &mut BTreeMap<(i32, i32), i64>, key: (i32, i32), c: i64) {
    if c == 0 {
        return;
    }
    let e = m.entry(key).or_insert(0);
    *e += c;
    if *e == 0 {
        m.remove(&key);
    }
}

fn mul(a: &BTreeMap<(i32, i32), i64>, b: &BTreeMap<(i32, i32), i64>) -> BTreeMap<(i32, i32), i64> {
    let mut out = BTreeMap::new();
    for (&(x1, y1), &c1) in a {
        for (&(x2, y2), &c2) in b {
            bump(&mut out, (x1 + x2, y1 + y2), c1 * c2);
        }
    }
    out
}

impl AnnularLaurent {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest `lambda` exponent, `None` for the zero polynomial.
    pub fn max_lambda(&self) -> Option<i32> {
        self.0.keys().map(|k| k.1).max()
    }

    pub fn mul(&self, other: &Self) -> Self {
        AnnularLaurent(mul(&self.0, &other.0))
    }
}

impl SkeinBracket {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest `z` exponent, `None` for the zero polynomial.
    pub fn max_z(&self) -> Option<i32> {
        self.0.keys().map(|k| k.1).max()
    }

    /// Coefficient of `z^e`, as a polynomial in `A`.
    pub fn z_coefficient(&self, e: i32) -> BTreeMap<i32, i64> {
        self.0.iter().filter(|(k, _)| k.1 == e).map(|(k, &c)| (k.0, c)).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        SkeinBracket(mul(&self.0, &other.0))
    }

    /// Lowest-`A` term `(exponent, coefficient)` of the top `z` coefficient.
    pub fn extreme_term(&self) -> Option<(i32, i64)> {
        let top = self.max_z()?;
        self.z_coefficient(top).into_iter().next()
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, m: &BTreeMap<(i32, i32), i64>, x: &str, y: &str) -> fmt::Result {
    if m.is_empty() {
        return f.write_str("0");
    }
    for (n, (&(a, b), &c)) in m.iter().enumerate() {
        if n > 0 {
            f.write_str(if c < 0 { " - " } else { " + " })?;
        } else if c < 0 {
            f.write_str("-")?;
        }
        write!(f, "{}", c.abs())?;
        if a != 0 {
            write!(f, "*{x}^{a}")?;
        }
        if b != 0 {
            write!(f, "*{y}^{b}")?;
        }
    }
    Ok(())
}

impl fmt::Display for AnnularLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.0, "q", "l")
    }
}

impl fmt::Display for SkeinBracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.0, "A", "z")
    }
}

/// Largest annular degree of a nonzero polynomial.
pub trait MaxAnnularDegree {
    fn max_annular_degree(&self) -> Option<i32>;
}

impl MaxAnnularDegree for AnnularLaurent {
    fn max_annular_degree(&self) -> Option<i32> {
        self.max_lambda()
    }
}

impl MaxAnnularDegree for SkeinBracket {
    fn max_annular_degree(&self) -> Option<i32> {
        self.max_z()
    }
}

/// `sum (-1)^i q^j lambda^k` over generators.
pub fn euler_characteristic(gens: &[Generator]) -> AnnularLaurent {
    let mut m = BTreeMap::new();
    for g in gens {
        bump(&mut m, (g.j, g.k), if g.i % 2 == 0 { 1 } else { -1 });
    }
    AnnularLaurent(m)
}

/// The same alternating sum over homology dimensions.
pub fn euler_of_dims(dims: &GradedDims) -> AnnularLaurent {
    let mut m = BTreeMap::new();
    for (&(i, j, k), &n) in &dims.0 {
        bump(&mut m, (j, k), if i % 2 == 0 { n as i64 } else { -(n as i64) });
    }
    AnnularLaurent(m)
}

fn binomials(n: usize) -> Vec<Vec<i64>> {
    let mut rows = vec![vec![1i64]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![1i64; i + 1];
        for j in 1..i {
            row[j] = prev[j - 1] + prev[j];
        }
        rows.push(row);
    }
    rows
}

/// Per-state tallies `(weight, trivial circles, essential circles) -> count`,
/// streamed over the cube without building any chain groups.
fn tally(d: &AnnularDiagram, cap: usize) -> Result<BTreeMap<(u32, usize, usize), i64>, CubeError> {
    check_cap(d, cap)?;
    let n = d.crossing_count();
    let mut sm = Smoother::new(d);
    let mut out = BTreeMap::new();
    for v in 0..(1u64 << n) {
        let r = sm.resolve(v);
        let e = r.essential.iter().filter(|&&x| x).count();
        *out.entry((v.count_ones(), r.essential.len() - e, e)).or_insert(0) += 1;
    }
    Ok(out)
}

/// Euler characteristic computed straight from the cube.
pub fn euler_from_cube(d: &AnnularDiagram, cap: usize) -> Result<AnnularLaurent, CubeError> {
    let t = tally(d, cap)?;
    let (np, nm) = (d.n_plus() as i32, d.n_minus() as i32);
    let maxc = t.keys().map(|k| k.1.max(k.2)).max().unwrap_or(0);
    let binom = binomials(maxc);
    let mut m = BTreeMap::new();
    for (&(r, triv, ess), &count) in &t {
        let r = r as i32;
        let sign = if (r - nm) % 2 == 0 { count } else { -count };
        for a in 0..=triv {
            for b in 0..=ess {
                let q = r + np - 2 * nm + (triv as i32 - 2 * a as i32) + (ess as i32 - 2 * b as i32);
                bump(&mut m, (q, ess as i32 - 2 * b as i32), sign * binom[triv][a] * binom[ess][b]);
            }
        }
    }
    Ok(AnnularLaurent(m))
}

/// Unnormalized annular Kauffman bracket:
/// `sum over states A^(#0 - #1) delta^(trivial) z^(essential)`, with
/// `delta = -A^2 - A^-2`. The empty diagram has bracket 1.
pub fn state_sum(d: &AnnularDiagram, cap: usize) -> Result<SkeinBracket, CubeError> {
    let t = tally(d, cap)?;
    let n = d.crossing_count() as i32;
    let maxc = t.keys().map(|k| k.1).max().unwrap_or(0);
    let binom = binomials(maxc);
    let mut m = BTreeMap::new();
    for (&(r, triv, ess), &count) in &t {
        let a0 = n - 2 * r as i32;
        let sign = if triv % 2 == 0 { count } else { -count };
        for (i, &b) in binom[triv].iter().enumerate().take(triv + 1) {
            let a = a0 + 2 * (triv as i32 - i as i32) - 2 * i as i32;
            bump(&mut m, (a, ess as i32), sign * b);
        }
    }
    Ok(SkeinBracket(m))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WrapStatus {
    /// The diagram's seam bound is realized, so it equals the wrapping number.
    Verified,
    /// Not decided; the diagram may simply not be minimal.
    Undecided,
}

impl fmt::Display for WrapStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WrapStatus::Verified => "VERIFIED",
            WrapStatus::Undecided => "UNDECIDED",
        })
    }
}

fn status(ok: bool) -> WrapStatus {
    if ok {
        WrapStatus::Verified
    } else {
        WrapStatus::Undecided
    }
}

/// Wrapping certificate bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrapReport {
    pub bound: u32,
    pub bracket_degree: Option<i32>,
    /// Largest nonzero annular grading of homology, when requested.
    pub akh_degree: Option<i32>,
    pub minus_adequately_wrapped: bool,
    pub certificate: WrapStatus,
    pub bracket: WrapStatus,
    pub homology: Option<WrapStatus>,
    /// Verified when any path is.
    pub status: WrapStatus,
}

pub fn wrap_report(d: &AnnularDiagram, cap: usize, use_homology: bool) -> Result<WrapReport, ComplexError> {
    let bound = d.wrap_upper_bound();
    let bracket_degree = state_sum(d, cap)?.max_z();
    let akh_degree = if use_homology { top_nonzero_k::<Gf2>(d, cap)? } else { None };
    let mawd = is_minus_adequately_wrapped(d);
    let certificate = status(mawd);
    let bracket = status(bracket_degree == Some(bound as i32));
    let homology = use_homology.then(|| status(akh_degree == Some(bound as i32)));
    let any = [Some(certificate), Some(bracket), homology].contains(&Some(WrapStatus::Verified));
    Ok(WrapReport {
        bound,
        bracket_degree,
        akh_degree,
        minus_adequately_wrapped: mawd,
        certificate,
        bracket,
        homology,
        status: status(any),
    })
}
