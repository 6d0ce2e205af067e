//! PBW monomials, the monomial ordering, and canonical polynomials.
//!
//! Generators are indexed linearly: `z[i,j]` has index `(i-1)*n + (j-1)`, so a
//! larger index is a larger generator. A [`Monomial`] is an exponent vector
//! and denotes the PBW word that lists generators in descending order, e.g.
//! `z[2,2]*z[1,1]^2`.

use std::cmp::Ordering;
use std::fmt;

use crate::coeff::QRat;
use crate::error::{MqError, Result};

/// A generator `z[row,col]` of M_q(n) together with its linear index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId {
    pub row: usize,
    pub col: usize,
    pub linear: usize,
}

/// Linear index of `z[i,j]` (1-based row and column) in M_q(n).
pub fn gen_index(i: i64, j: i64, n: usize) -> Result<GeneratorId> {
    let range = 1..=n as i64;
    if !range.contains(&i) || !range.contains(&j) {
        return Err(MqError::IndexOutOfRange { row: i, col: j, n });
    }
    let (row, col) = (i as usize, j as usize);
    Ok(GeneratorId { row, col, linear: (row - 1) * n + (col - 1) })
}

impl GeneratorId {
    pub fn from_linear(linear: usize, n: usize) -> GeneratorId {
        GeneratorId { row: linear / n + 1, col: linear % n + 1, linear }
    }
}

/// Exact integer square root, if `m` is a perfect square.
pub(crate) fn matrix_dim(nvars: usize) -> Option<usize> {
    let r = (nvars as f64).sqrt().round() as usize;
    (r * r == nvars && r > 0).then_some(r)
}

/// Printed name of generator `idx` in an algebra with `nvars` generators:
/// `z[i,j]` when `nvars` is a square, otherwise `x[k]` (1-based).
pub fn generator_name(idx: usize, nvars: usize) -> String {
    match matrix_dim(nvars) {
        Some(n) => {
            let g = GeneratorId::from_linear(idx, n);
            format!("z[{},{}]", g.row, g.col)
        }
        None => format!("x[{}]", idx + 1),
    }
}

/// Exponent vector of a PBW basis element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars], degree: 0 }
    }

    pub fn generator(nvars: usize, idx: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[idx] = 1;
        m.degree = 1;
        m
    }

    pub fn from_exps(exps: Vec<u32>) -> Result<Self> {
        let degree = exps
            .iter()
            .try_fold(0u32, |acc, &e| acc.checked_add(e))
            .ok_or(MqError::DegreeGuardExceeded { degree: u64::MAX, limit: u32::MAX })?;
        Ok(Monomial { exps, degree })
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn exp(&self, idx: usize) -> u32 {
        self.exps[idx]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Largest generator index present.
    pub fn top(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    /// Smallest generator index present.
    pub fn bottom(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    fn check_dims(&self, other: &Monomial) -> Result<()> {
        if self.nvars() != other.nvars() {
            return Err(MqError::DimensionMismatch { left: self.nvars(), right: other.nvars() });
        }
        Ok(())
    }

    /// Exponent sum; this is the leading monomial of the product in the algebra.
    pub fn mul(&self, other: &Monomial) -> Result<Monomial> {
        self.check_dims(other)?;
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .ok_or(MqError::DegreeGuardExceeded { degree: u64::MAX, limit: u32::MAX })?;
        Monomial::from_exps(exps)
    }

    pub(crate) fn with_generator(&self, idx: usize) -> Monomial {
        let mut m = self.clone();
        m.exps[idx] += 1;
        m.degree += 1;
        m
    }

    pub(crate) fn without_generator(&self, idx: usize) -> Monomial {
        let mut m = self.clone();
        m.exps[idx] -= 1;
        m.degree -= 1;
        m
    }

    /// `other / self` when `self` divides `other` componentwise.
    pub fn complement_in(&self, other: &Monomial) -> Option<Monomial> {
        if self.nvars() != other.nvars() {
            return None;
        }
        let exps = other
            .exps
            .iter()
            .zip(&self.exps)
            .map(|(b, a)| b.checked_sub(*a))
            .collect::<Option<Vec<_>>>()?;
        Some(Monomial { degree: other.degree - self.degree, exps })
    }

    pub(crate) fn divides_unchecked(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Descending generator word, e.g. `[3, 0, 0]` for `z[2,2]*z[1,1]^2`.
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.degree as usize);
        for (idx, &e) in self.exps.iter().enumerate().rev() {
            w.extend(std::iter::repeat_n(idx, e as usize));
        }
        w
    }

    /// Monomial from an arbitrary generator multiset.
    pub fn from_generators(nvars: usize, gens: &[usize]) -> Monomial {
        let mut m = Monomial::one(nvars);
        for &g in gens {
            m = m.with_generator(g);
        }
        m
    }

    fn cmp_lex(&self, other: &Monomial) -> Ordering {
        for (a, b) in self.exps.iter().rev().zip(other.exps.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl Ord for Monomial {
    /// The monomial ordering; monomials of different arity compare by arity.
    fn cmp(&self, other: &Self) -> Ordering {
        self.nvars().cmp(&other.nvars()).then_with(|| self.cmp_lex(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (idx, &e) in self.exps.iter().enumerate().rev() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(&generator_name(idx, self.nvars()))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Compares two monomials under the paper-lex ordering: scan generator
/// indices from the largest down; the first differing exponent decides.
pub fn compare_monomials(a: &Monomial, b: &Monomial) -> Result<Ordering> {
    a.check_dims(b)?;
    Ok(a.cmp_lex(b))
}

/// The same ordering computed on descending words: a proper prefix is
/// smaller, otherwise the first differing letter decides. Kept as an
/// independent cross-check of [`compare_monomials`].
pub fn compare_word_lex(a: &Monomial, b: &Monomial) -> Result<Ordering> {
    a.check_dims(b)?;
    let (wa, wb) = (a.word(), b.word());
    for (x, y) in wa.iter().zip(&wb) {
        if x != y {
            return Ok(x.cmp(y));
        }
    }
    Ok(wa.len().cmp(&wb.len()))
}

pub fn mono_divides(a: &Monomial, b: &Monomial) -> Result<bool> {
    a.check_dims(b)?;
    Ok(a.divides_unchecked(b))
}

pub fn mono_lcm(a: &Monomial, b: &Monomial) -> Result<Monomial> {
    a.check_dims(b)?;
    let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| *x.max(y)).collect();
    Monomial::from_exps(exps)
}

/// A total order on monomials, used by the ordering validators.
pub trait MonomialComparator {
    fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering;
}

impl<F> MonomialComparator for F
where
    F: Fn(&Monomial, &Monomial) -> Ordering,
{
    fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self(a, b)
    }
}

/// Monomial orderings offered by the engine.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Descending-word lexicographic ordering with `z[k,l] < z[i,j]` iff
    /// `(k,l) < (i,j)` lexicographically.
    #[default]
    PaperLex,
}

impl MonomialOrder {
    pub fn tag(&self) -> &'static str {
        match self {
            MonomialOrder::PaperLex => "paper-lex",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        (tag == "paper-lex").then_some(MonomialOrder::PaperLex)
    }
}

impl MonomialComparator for MonomialOrder {
    fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::PaperLex => a.cmp_lex(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: QRat,
    pub mono: Monomial,
}

impl Term {
    pub fn new(coeff: QRat, mono: Monomial) -> Self {
        Term { coeff, mono }
    }
}

/// Finite sum of terms with distinct monomials and nonzero coefficients,
/// stored in strictly descending monomial order. Empty means zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, QRat::one())
    }

    pub fn constant(nvars: usize, c: QRat) -> Self {
        Self::term(c, Monomial::one(nvars))
    }

    pub fn term(coeff: QRat, mono: Monomial) -> Self {
        let nvars = mono.nvars();
        if coeff.is_zero() {
            return Self::zero(nvars);
        }
        Polynomial { nvars, terms: vec![Term { coeff, mono }] }
    }

    pub fn monomial(mono: Monomial) -> Self {
        Self::term(QRat::one(), mono)
    }

    pub fn generator(nvars: usize, idx: usize) -> Self {
        Self::monomial(Monomial::generator(nvars, idx))
    }

    /// Canonical form of an arbitrary term list: equal monomials merged,
    /// zero coefficients dropped, strictly descending order.
    pub fn canonicalize(nvars: usize, mut raw: Vec<Term>) -> Result<Self> {
        if let Some(t) = raw.iter().find(|t| t.mono.nvars() != nvars) {
            return Err(MqError::DimensionMismatch { left: nvars, right: t.mono.nvars() });
        }
        raw.sort_by(|a, b| b.mono.cmp_lex(&a.mono));
        let mut terms: Vec<Term> = Vec::with_capacity(raw.len());
        for t in raw {
            match terms.last_mut() {
                Some(last) if last.mono == t.mono => last.coeff = &last.coeff + &t.coeff,
                _ => {
                    if let Some(last) = terms.last() {
                        if last.coeff.is_zero() {
                            terms.pop();
                        }
                    }
                    terms.push(t);
                }
            }
        }
        if terms.last().is_some_and(|t| t.coeff.is_zero()) {
            terms.pop();
        }
        Ok(Polynomial { nvars, terms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.mono)
    }

    pub fn leading_coeff(&self) -> Option<&QRat> {
        self.terms.first().map(|t| &t.coeff)
    }

    /// Highest total degree of any term.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].mono.degree() == w[1].mono.degree())
    }

    /// Coefficient of `mono`, zero if absent.
    pub fn coeff_of(&self, mono: &Monomial) -> QRat {
        self.terms
            .binary_search_by(|t| mono.cmp_lex(&t.mono))
            .map(|i| self.terms[i].coeff.clone())
            .unwrap_or_else(|_| QRat::zero())
    }

    fn check_dims(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(MqError::DimensionMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    /// Merged sum of two canonical polynomials.
    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_dims(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.mono.cmp_lex(&b.mono) {
                Ordering::Greater => {
                    terms.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    terms.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a.coeff + &b.coeff;
                    if !c.is_zero() {
                        terms.push(Term { coeff: c, mono: a.mono.clone() });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        Ok(Polynomial { nvars: self.nvars, terms })
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|t| Term { coeff: -&t.coeff, mono: t.mono.clone() }).collect(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &QRat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        if c.is_one() {
            return self.clone();
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|t| Term { coeff: &t.coeff * c, mono: t.mono.clone() }).collect(),
        }
    }

    /// Scaled so the leading coefficient is 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    /// True when every monomial only involves generators with index `< s`.
    pub fn supported_below(&self, s: usize) -> bool {
        self.terms.iter().all(|t| t.mono.top().is_none_or(|top| top < s))
    }

    /// Applies `f` to every coefficient and re-canonicalizes.
    pub fn try_map_coeffs(&self, f: impl Fn(&QRat) -> Result<QRat>) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(Term { coeff: f(&t.coeff)?, mono: t.mono.clone() }))
            .collect::<Result<Vec<_>>>()?;
        Polynomial::canonicalize(self.nvars, terms)
    }

    pub(crate) fn from_sorted_unchecked(nvars: usize, terms: Vec<Term>) -> Polynomial {
        debug_assert!(terms.windows(2).all(|w| w[0].mono.cmp_lex(&w[1].mono) == Ordering::Greater));
        Polynomial { nvars, terms }
    }

    /// Drops the leading term.
    pub(crate) fn pop_leading(&mut self) -> Option<Term> {
        (!self.terms.is_empty()).then(|| self.terms.remove(0))
    }
}

pub fn poly_add(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    f.add(g)
}

pub fn poly_canonicalize(nvars: usize, raw: Vec<Term>) -> Result<Polynomial> {
    Polynomial::canonicalize(nvars, raw)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let negative = t.coeff.is_negative();
            let c = if negative { -&t.coeff } else { t.coeff.clone() };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if t.mono.is_one() {
                f.write_str(&c.to_factor_string())?;
            } else if c.is_one() {
                write!(f, "{}", t.mono)?;
            } else {
                write!(f, "{}*{}", c.to_factor_string(), t.mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u32]) -> Monomial {
        Monomial::from_exps(exps.to_vec()).unwrap()
    }

    #[test]
    fn generator_indices() {
        assert_eq!(gen_index(1, 1, 2).unwrap().linear, 0);
        assert_eq!(gen_index(2, 2, 2).unwrap().linear, 3);
        assert_eq!(gen_index(2, 1, 3).unwrap().linear, 3);
        assert!(matches!(gen_index(3, 1, 2), Err(MqError::IndexOutOfRange { .. })));
        assert!(gen_index(0, 1, 2).is_err());
    }

    #[test]
    fn ordering_examples() {
        // z21 z12 < z22 z11
        assert_eq!(compare_monomials(&m(&[0, 1, 1, 0]), &m(&[1, 0, 0, 1])).unwrap(), Ordering::Less);
        assert_eq!(compare_monomials(&m(&[0, 0, 0, 0]), &m(&[0, 1, 0, 0])).unwrap(), Ordering::Less);
        assert_eq!(compare_monomials(&m(&[1, 0, 0, 0]), &m(&[2, 0, 0, 0])).unwrap(), Ordering::Less);
        assert!(compare_monomials(&m(&[1, 0]), &m(&[1, 0, 0, 0])).is_err());
    }

    #[test]
    fn word_lex_examples() {
        // "z22 z11" vs "z22 z22"
        assert_eq!(compare_word_lex(&m(&[1, 0, 0, 1]), &m(&[0, 0, 0, 2])).unwrap(), Ordering::Less);
        assert_eq!(compare_word_lex(&m(&[0, 0, 0, 1]), &m(&[1, 0, 0, 1])).unwrap(), Ordering::Less);
        let a = m(&[2, 1, 0, 3]);
        assert_eq!(compare_word_lex(&a, &a).unwrap(), Ordering::Equal);
    }

    #[test]
    fn divisibility_and_lcm() {
        assert!(mono_divides(&m(&[1, 0, 0, 0]), &m(&[1, 0, 0, 1])).unwrap());
        assert!(!mono_divides(&m(&[0, 1, 0, 0]), &m(&[1, 0, 0, 1])).unwrap());
        assert!(mono_divides(&Monomial::one(4), &m(&[3, 1, 0, 1])).unwrap());
        assert_eq!(mono_lcm(&m(&[1, 0, 0, 0]), &m(&[0, 0, 0, 1])).unwrap(), m(&[1, 0, 0, 1]));
        assert_eq!(mono_lcm(&m(&[2, 0, 0, 0]), &m(&[1, 0, 0, 0])).unwrap(), m(&[2, 0, 0, 0]));
        assert_eq!(mono_lcm(&m(&[0, 1, 1, 0]), &m(&[0, 2, 0, 0])).unwrap(), m(&[0, 2, 1, 0]));
    }

    #[test]
    fn monomial_text() {
        assert_eq!(m(&[2, 0, 0, 1]).to_string(), "z[2,2]*z[1,1]^2");
        assert_eq!(Monomial::one(4).to_string(), "1");
        assert_eq!(m(&[1, 1]).to_string(), "x[2]*x[1]");
        assert_eq!(m(&[1, 0, 0, 1]).word(), vec![3, 0]);
    }

    #[test]
    fn canonicalize_examples() {
        let one = QRat::one();
        let p = Polynomial::canonicalize(
            4,
            vec![Term::new(one.clone(), m(&[1, 0, 0, 0])), Term::new(-&one, m(&[1, 0, 0, 0]))],
        )
        .unwrap();
        assert!(p.is_zero());
        let p = Polynomial::canonicalize(
            4,
            vec![Term::new(one.clone(), m(&[1, 0, 0, 0])), Term::new(one.clone(), m(&[1, 0, 0, 1]))],
        )
        .unwrap();
        assert_eq!(p.leading_monomial(), Some(&m(&[1, 0, 0, 1])));
        assert!(Polynomial::canonicalize(4, vec![]).unwrap().is_zero());
    }

    #[test]
    fn add_examples() {
        let z22 = Polynomial::generator(4, 3);
        let z11 = Polynomial::generator(4, 0);
        let f = z22.add(&z11).unwrap();
        let g = z22.sub(&z11).unwrap();
        assert_eq!(f.add(&g).unwrap(), z22.scale(&QRat::from_integer(2)));
        assert_eq!(f.add(&Polynomial::zero(4)).unwrap(), f);
        assert!(f.add(&f.neg()).unwrap().is_zero());
        assert!(f.add(&Polynomial::zero(9)).is_err());
    }

    #[test]
    fn polynomial_text() {
        let z22z11 = Polynomial::monomial(m(&[1, 0, 0, 1]));
        let cross = Polynomial::term(QRat::q_minus_q_inv(), m(&[0, 1, 1, 0]));
        let p = z22z11.add(&cross).unwrap();
        assert_eq!(p.to_string(), "z[2,2]*z[1,1] + (q^2-1)/q*z[2,1]*z[1,2]");
        assert_eq!(p.neg().to_string(), "-z[2,2]*z[1,1] - (q^2-1)/q*z[2,1]*z[1,2]");
        let c = Polynomial::constant(4, QRat::from_poly(crate::coeff::QPoly::from_i64s(&[1, 0, -1])));
        assert_eq!(c.to_string(), "-(q^2-1)");
        assert_eq!(Polynomial::zero(4).to_string(), "0");
    }
}
