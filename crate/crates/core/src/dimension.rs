//! Staircases of leading monomials, Hilbert functions of cyclic quotients,
//! GK dimension, and elimination for prefix generator subsets.
//!
//! The standard monomials (those not divisible by any leading monomial of a
//! Gröbner basis of `L`) form a basis of `A/L`. The GK dimension of `A/L` is
//! taken as the largest coordinate set `S` whose monomials `ℕ^S` avoid the
//! staircase entirely.

use serde::Serialize;

use crate::error::{MqError, Result};
use crate::groebner::GroebnerBasis;
use crate::pbw::{generator_name, Monomial, Polynomial};

/// Minimal generators of the leading-monomial ideal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Staircase {
    pub nvars: usize,
    pub mins: Vec<Vec<u32>>,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl Staircase {
    /// The staircase of the zero ideal.
    pub fn empty(nvars: usize) -> Self {
        Staircase { nvars, mins: Vec::new() }
    }

    /// Antichain of the given exponent vectors (duplicates and multiples
    /// removed; order of first appearance kept).
    pub fn from_exponents(nvars: usize, exps: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        let mut all: Vec<Vec<u32>> = Vec::new();
        for e in exps {
            if e.len() != nvars {
                return Err(MqError::DimensionMismatch { left: nvars, right: e.len() });
            }
            all.push(e);
        }
        let mut mins: Vec<Vec<u32>> = Vec::new();
        for (i, e) in all.iter().enumerate() {
            let dominated = all.iter().enumerate().any(|(j, f)| {
                j != i && divides(f, e) && (f != e || j < i)
            });
            if !dominated {
                mins.push(e.clone());
            }
        }
        Ok(Staircase { nvars, mins })
    }

    pub fn contains(&self, exps: &[u32]) -> bool {
        self.mins.iter().any(|m| divides(m, exps))
    }

    fn support_masks(&self) -> Vec<u64> {
        self.mins
            .iter()
            .map(|m| m.iter().enumerate().filter(|(_, &e)| e > 0).fold(0u64, |acc, (i, _)| acc | (1 << i)))
            .collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.mins
            .iter()
            .map(|m| Monomial::from_exps(m.clone()).map(|m| m.to_string()).unwrap_or_default())
            .collect()
    }
}

/// Staircase of the leading monomials of `g`.
pub fn leading_staircase(g: &GroebnerBasis) -> Result<Staircase> {
    if g.elements.is_empty() {
        return Err(MqError::EmptyBasis);
    }
    Staircase::from_exponents(g.nvars, g.leading_monomials().map(|m| m.exps().to_vec()))
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of degree-`d` exponent vectors outside the staircase, i.e. the
/// dimension of the degree-`d` slice of the quotient.
pub fn hilbert_count(st: &Staircase, d: u32) -> u128 {
    let mut point = vec![0u32; st.nvars];
    let active: Vec<usize> = (0..st.mins.len()).collect();
    count_rec(st, 0, d, &mut point, &active)
}

fn count_rec(st: &Staircase, idx: usize, remaining: u32, point: &mut [u32], active: &[usize]) -> u128 {
    let nvars = st.nvars;
    // a min whose unassigned coordinates are all zero already divides every completion
    if active.iter().any(|&k| st.mins[k][idx..].iter().all(|&e| e == 0)) {
        return 0;
    }
    if active.is_empty() {
        let free = (nvars - idx) as u64;
        if free == 0 {
            return u128::from(remaining == 0);
        }
        return binomial(remaining as u64 + free - 1, free - 1);
    }
    if idx == nvars {
        return u128::from(remaining == 0);
    }
    if idx + 1 == nvars {
        point[idx] = remaining;
        let hit = active.iter().any(|&k| st.mins[k][idx] <= remaining);
        point[idx] = 0;
        return u128::from(!hit);
    }
    let mut total = 0;
    for e in 0..=remaining {
        point[idx] = e;
        let next: Vec<usize> = active.iter().copied().filter(|&k| st.mins[k][idx] <= e).collect();
        total += count_rec(st, idx + 1, remaining - e, point, &next);
    }
    point[idx] = 0;
    total
}

/// `hilbert_count` for `d = 0..=max_degree`.
pub fn hilbert_series(st: &Staircase, max_degree: u32) -> Vec<u128> {
    (0..=max_degree).map(|d| hilbert_count(st, d)).collect()
}

/// Largest coordinate set whose monomials avoid the staircase. Zero when the
/// staircase contains 1 (the quotient vanishes).
pub fn gk_dimension(st: &Staircase) -> usize {
    let masks = st.support_masks();
    if masks.contains(&0) {
        return 0;
    }
    let mut best = 0;
    search(&masks, st.nvars, 0, 0, 0, &mut best);
    best
}

/// Branch and bound over coordinates; `chosen` must never contain the full
/// support of any staircase element.
fn search(masks: &[u64], nvars: usize, idx: usize, chosen: u64, size: usize, best: &mut usize) {
    if size + (nvars - idx) <= *best {
        return;
    }
    if idx == nvars {
        *best = size;
        return;
    }
    let with = chosen | (1 << idx);
    if masks.iter().all(|&m| m & !with != 0) {
        search(masks, nvars, idx + 1, with, size + 1, best);
    }
    search(masks, nvars, idx + 1, chosen, size, best);
}

/// The generators retained by elimination: linear indices `0..s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixSubset {
    pub s: usize,
}

impl PrefixSubset {
    pub fn new(s: usize, nvars: usize) -> Result<Self> {
        let max = nvars.saturating_sub(1);
        if s == 0 || s > max {
            return Err(MqError::InvalidPrefix { s, max });
        }
        Ok(PrefixSubset { s })
    }
}

/// Basis elements supported in the retained generators. With the
/// paper-lex ordering every prefix is eliminated, so the result is nonempty
/// exactly when the ideal meets the span of prefix monomials.
pub fn eliminate_prefix(g: &GroebnerBasis, u: PrefixSubset) -> Result<Vec<Polynomial>> {
    PrefixSubset::new(u.s, g.nvars)?;
    Ok(g.elements.iter().filter(|p| p.supported_below(u.s)).cloned().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixCheck {
    pub s: usize,
    pub retained: Vec<String>,
    pub nonempty: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EliminationReport {
    pub gk_dimension: usize,
    pub checks: Vec<PrefixCheck>,
    pub pass: bool,
}

/// With `d` the GK dimension of the quotient, every prefix of size
/// `s >= d + 1` (and `s <= nvars - 1`) must meet the ideal.
pub fn check_elimination_bound(g: &GroebnerBasis) -> Result<EliminationReport> {
    let st = leading_staircase(g)?;
    let d = gk_dimension(&st);
    let mut checks = Vec::new();
    for s in d + 1..g.nvars {
        let found = eliminate_prefix(g, PrefixSubset { s })?;
        checks.push(PrefixCheck {
            s,
            retained: (0..s).map(|i| generator_name(i, g.nvars)).collect(),
            nonempty: !found.is_empty(),
            witnesses: found.iter().map(ToString::to_string).collect(),
        });
    }
    let pass = checks.iter().all(|c| c.nonempty);
    Ok(EliminationReport { gk_dimension: d, checks, pass })
}
