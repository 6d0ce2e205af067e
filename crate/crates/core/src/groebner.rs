//! Left Gröbner bases of left ideals in a solvable polynomial algebra.
//!
//! Leading monomials are multiplicative (`LM(f*g) = LM(f) + LM(g)` as
//! exponent vectors), so a term `c z^a` is left-reducible by `g` exactly when
//! `LM(g)` divides `z^a` componentwise; the reducer is `z^(a - LM(g)) * g`.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::Serialize;

use crate::coeff::QRat;
use crate::error::{MqError, Result};
use crate::pbw::{mono_lcm, Monomial, MonomialOrder, Polynomial, Term};
use crate::straighten::CommutationSystem;

/// Result of left division `f = sum quotients[k] * g[k] + remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

fn check_nonzero(g: &[Polynomial]) -> Result<()> {
    if g.iter().any(Polynomial::is_zero) {
        return Err(MqError::InvalidSpec("divisor list contains the zero polynomial".into()));
    }
    Ok(())
}

/// Full left reduction of `f` by `g`. The first divisor (in list order)
/// whose leading monomial divides the current term is used.
pub fn left_divide(f: &Polynomial, g: &[Polynomial], sys: &CommutationSystem) -> Result<Division> {
    let nvars = sys.nvars();
    for p in std::iter::once(f).chain(g) {
        if p.nvars() != nvars {
            return Err(MqError::DimensionMismatch { left: nvars, right: p.nvars() });
        }
    }
    check_nonzero(g)?;
    let mut quotients: Vec<Vec<Term>> = vec![Vec::new(); g.len()];
    let mut rem_terms = Vec::new();
    let mut p = f.clone();
    while let Some(lt) = p.leading_term().cloned() {
        let hit = g.iter().enumerate().find_map(|(k, gk)| {
            let lm = gk.leading_monomial().expect("nonzero divisor");
            lm.complement_in(&lt.mono).map(|delta| (k, delta))
        });
        match hit {
            Some((k, delta)) => {
                let reducer = sys.left_mono_mul(&delta, &g[k])?;
                let c = &lt.coeff / reducer.leading_coeff().expect("domain: nonzero product");
                p = p.sub(&reducer.scale(&c))?;
                quotients[k].push(Term::new(c, delta));
            }
            None => {
                p.pop_leading();
                rem_terms.push(lt);
            }
        }
    }
    let quotients = quotients
        .into_iter()
        .map(|ts| Polynomial::canonicalize(nvars, ts))
        .collect::<Result<Vec<_>>>()?;
    Ok(Division { quotients, remainder: Polynomial::from_sorted_unchecked(nvars, rem_terms) })
}

/// Left S-polynomial: both inputs are lifted by left multiplication to the
/// lcm of their leading monomials, made monic, and subtracted.
pub fn left_spoly(g1: &Polynomial, g2: &Polynomial, sys: &CommutationSystem) -> Result<Polynomial> {
    Ok(spoly_parts(g1, g2, sys)?.0)
}

/// S-polynomial together with the left multipliers `(c1 z^d1, c2 z^d2)`
/// such that `S = c1 z^d1 * g1 - c2 z^d2 * g2`.
fn spoly_parts(g1: &Polynomial, g2: &Polynomial, sys: &CommutationSystem) -> Result<(Polynomial, Term, Term)> {
    check_nonzero(&[g1.clone(), g2.clone()])?;
    let (l1, l2) = (g1.leading_monomial().expect("nonzero"), g2.leading_monomial().expect("nonzero"));
    let lcm = mono_lcm(l1, l2)?;
    let d1 = l1.complement_in(&lcm).expect("lcm is a multiple");
    let d2 = l2.complement_in(&lcm).expect("lcm is a multiple");
    let h1 = sys.left_mono_mul(&d1, g1)?;
    let h2 = sys.left_mono_mul(&d2, g2)?;
    let c1 = h1.leading_coeff().expect("nonzero").inv()?;
    let c2 = h2.leading_coeff().expect("nonzero").inv()?;
    let s = h1.scale(&c1).sub(&h2.scale(&c2))?;
    Ok((s, Term::new(c1, d1), Term::new(c2, d2)))
}

/// Resource budgets for [`buchberger`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GbLimits {
    /// Largest total degree allowed for a basis element.
    pub max_degree: u32,
    /// Maximum number of S-pairs processed.
    pub max_pairs: usize,
    /// Record, for every basis element, its left cofactors with respect to
    /// the input generators.
    pub track_cofactors: bool,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits { max_degree: crate::straighten::DEFAULT_DEGREE_GUARD, max_pairs: 100_000, track_cofactors: false }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GbStats {
    pub pairs_processed: usize,
    pub reductions_to_zero: usize,
    pub elements_added: usize,
}

/// A reduced left Gröbner basis. Elements are monic and sorted by leading
/// monomial, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub nvars: usize,
    pub elements: Vec<Polynomial>,
    pub order: MonomialOrder,
    pub stats: GbStats,
    /// `elements[i] = sum_k cofactors[i][k] * generators[k]` when tracked.
    pub cofactors: Option<Vec<Vec<Polynomial>>>,
    /// The canonical, nonzero input generators.
    pub generators: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.elements.iter().filter_map(Polynomial::leading_monomial)
    }
}

/// Failure of [`buchberger`], carrying the basis built so far.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{error} (partial basis of {} elements)", partial.len())]
pub struct GbFailure {
    pub error: MqError,
    pub partial: Vec<Polynomial>,
}

impl GbFailure {
    fn new(error: MqError, basis: &[Entry]) -> Self {
        GbFailure { error, partial: basis.iter().map(|e| e.poly.clone()).collect() }
    }
}

#[derive(Clone, Debug)]
struct Entry {
    id: usize,
    poly: Polynomial,
    cof: Option<Vec<Polynomial>>,
}

/// Working basis, sorted by leading monomial, and the open pairs by element id.
struct State {
    basis: Vec<Entry>,
    pairs: Vec<(usize, usize, Monomial)>,
    next_id: usize,
}

impl State {
    fn get(&self, id: usize) -> &Entry {
        self.basis.iter().find(|e| e.id == id).expect("pair member in basis")
    }

    /// Adds a reduced monic element. Older elements whose leading monomial
    /// is a multiple of the new one leave the basis, with their pairs, and
    /// are queued for re-reduction.
    fn insert(&mut self, mut entry: Entry, pending: &mut VecDeque<Entry>) -> Result<()> {
        let lm = entry.poly.leading_monomial().expect("nonzero").clone();
        let (stale, keep): (Vec<Entry>, Vec<Entry>) = std::mem::take(&mut self.basis)
            .into_iter()
            .partition(|e| lm.complement_in(e.poly.leading_monomial().expect("nonzero")).is_some());
        self.basis = keep;
        for e in stale {
            self.pairs.retain(|(a, b, _)| *a != e.id && *b != e.id);
            pending.push_back(e);
        }
        entry.id = self.next_id;
        self.next_id += 1;
        for e in &self.basis {
            let lcm = mono_lcm(e.poly.leading_monomial().expect("nonzero"), &lm)?;
            self.pairs.push((e.id, entry.id, lcm));
        }
        self.basis.push(entry);
        sort_basis(&mut self.basis);
        Ok(())
    }
}

struct Tracker<'a> {
    sys: &'a CommutationSystem,
    ngens: usize,
    enabled: bool,
}

impl Tracker<'_> {
    fn zero(&self) -> Option<Vec<Polynomial>> {
        self.enabled.then(|| vec![Polynomial::zero(self.sys.nvars()); self.ngens])
    }

    /// `acc += left * cof`
    fn add_left_mul(&self, acc: &mut Option<Vec<Polynomial>>, left: &Polynomial, cof: &Option<Vec<Polynomial>>) -> Result<()> {
        if let (Some(acc), Some(cof)) = (acc.as_mut(), cof.as_ref()) {
            for (a, c) in acc.iter_mut().zip(cof) {
                *a = a.add(&self.sys.poly_mul(left, c)?)?;
            }
        }
        Ok(())
    }

    fn scale(&self, cof: &mut Option<Vec<Polynomial>>, c: &QRat) {
        if let Some(cof) = cof.as_mut() {
            cof.iter_mut().for_each(|p| *p = p.scale(c));
        }
    }
}

/// Reduces `entry` fully by `basis`, updating cofactors.
fn reduce_entry(entry: Entry, basis: &[Entry], sys: &CommutationSystem, tracker: &Tracker) -> Result<Entry> {
    let divisors: Vec<Polynomial> = basis.iter().map(|e| e.poly.clone()).collect();
    if divisors.is_empty() {
        return Ok(entry);
    }
    let div = left_divide(&entry.poly, &divisors, sys)?;
    let mut cof = entry.cof;
    if tracker.enabled {
        for (q, e) in div.quotients.iter().zip(basis) {
            if !q.is_zero() {
                tracker.add_left_mul(&mut cof, &q.neg(), &e.cof)?;
            }
        }
    }
    Ok(Entry { id: entry.id, poly: div.remainder, cof })
}

fn make_monic(mut entry: Entry, tracker: &Tracker) -> Entry {
    if let Some(lc) = entry.poly.leading_coeff().cloned() {
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            entry.poly = entry.poly.scale(&inv);
            tracker.scale(&mut entry.cof, &inv);
        }
    }
    entry
}

fn sort_basis(basis: &mut [Entry]) {
    // stable: equal leading monomials keep insertion order
    basis.sort_by(|a, b| a.poly.leading_monomial().cmp(&b.poly.leading_monomial()));
}

/// Noncommutative Buchberger completion of the left ideal generated by
/// `gens`, followed by interreduction.
///
/// Pairs are processed by the normal strategy (smallest lcm first); no pair
/// criteria are applied.
pub fn buchberger(gens: &[Polynomial], sys: &CommutationSystem, limits: &GbLimits) -> std::result::Result<GroebnerBasis, GbFailure> {
    let nvars = sys.nvars();
    let fail = |e: MqError| GbFailure { error: e, partial: Vec::new() };
    let mut inputs = Vec::new();
    for g in gens {
        if g.nvars() != nvars {
            return Err(fail(MqError::DimensionMismatch { left: nvars, right: g.nvars() }));
        }
        if !g.is_zero() {
            inputs.push(g.clone());
        }
    }
    if inputs.is_empty() {
        return Err(fail(MqError::InvalidSpec("ideal has no nonzero generators".into())));
    }
    let tracker = Tracker { sys, ngens: inputs.len(), enabled: limits.track_cofactors };
    let mut stats = GbStats::default();

    let mut state = State { basis: Vec::new(), pairs: Vec::new(), next_id: 0 };
    let mut pending: VecDeque<Entry> = VecDeque::new();
    for (k, g) in inputs.iter().enumerate() {
        let cof = tracker.enabled.then(|| {
            (0..inputs.len())
                .map(|j| if j == k { Polynomial::one(nvars) } else { Polynomial::zero(nvars) })
                .collect()
        });
        pending.push_back(Entry { id: 0, poly: g.clone(), cof });
    }

    loop {
        while let Some(entry) = pending.pop_front() {
            let partial = |e: MqError, st: &State| GbFailure::new(e, &st.basis);
            let reduced = reduce_entry(entry, &state.basis, sys, &tracker).map_err(|e| partial(e, &state))?;
            if reduced.poly.is_zero() {
                continue;
            }
            let entry = make_monic(reduced, &tracker);
            check_degree(&entry.poly, limits).map_err(|e| partial(e, &state))?;
            state.insert(entry, &mut pending).map_err(|e| partial(e, &state))?;
            stats.elements_added += 1;
        }
        if state.pairs.is_empty() {
            break;
        }
        if stats.pairs_processed >= limits.max_pairs {
            return Err(GbFailure::new(MqError::PairLimitExceeded(stats.pairs_processed), &state.basis));
        }
        let idx = state
            .pairs
            .iter()
            .enumerate()
            .min_by(|(i, a), (j, b)| a.2.cmp(&b.2).then(i.cmp(j)))
            .map(|(i, _)| i)
            .expect("nonempty");
        let (id1, id2, _) = state.pairs.remove(idx);
        stats.pairs_processed += 1;

        let step = || -> Result<Entry> {
            let e1 = state.get(id1);
            let e2 = state.get(id2);
            let (s, t1, t2) = spoly_parts(&e1.poly, &e2.poly, sys)?;
            let mut cof = tracker.zero();
            tracker.add_left_mul(&mut cof, &Polynomial::term(t1.coeff, t1.mono), &e1.cof)?;
            tracker.add_left_mul(&mut cof, &Polynomial::term(-&t2.coeff, t2.mono), &e2.cof)?;
            reduce_entry(Entry { id: 0, poly: s, cof }, &state.basis, sys, &tracker)
        };
        let reduced = step().map_err(|e| GbFailure::new(e, &state.basis))?;
        if reduced.poly.is_zero() {
            stats.reductions_to_zero += 1;
        } else {
            pending.push_back(reduced);
        }
    }

    let basis = interreduce_entries(state.basis, sys, &tracker).map_err(|e| GbFailure { error: e, partial: Vec::new() })?;
    let cofactors = tracker.enabled.then(|| basis.iter().map(|e| e.cof.clone().expect("tracked")).collect());
    Ok(GroebnerBasis {
        nvars,
        elements: basis.into_iter().map(|e| e.poly).collect(),
        order: MonomialOrder::PaperLex,
        stats,
        cofactors,
        generators: inputs,
    })
}

fn check_degree(p: &Polynomial, limits: &GbLimits) -> Result<()> {
    let d = p.degree().unwrap_or(0);
    if d > limits.max_degree {
        return Err(MqError::DegreeGuardExceeded { degree: d as u64, limit: limits.max_degree });
    }
    Ok(())
}

fn interreduce_entries(mut basis: Vec<Entry>, sys: &CommutationSystem, tracker: &Tracker) -> Result<Vec<Entry>> {
    basis.retain(|e| !e.poly.is_zero());
    sort_basis(&mut basis);
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < basis.len() {
            let others: Vec<Entry> = basis
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, e)| e.clone())
                .collect();
            let reduced = reduce_entry(basis[i].clone(), &others, sys, tracker)?;
            if reduced.poly.is_zero() {
                basis.remove(i);
                changed = true;
                continue;
            }
            let reduced = make_monic(reduced, tracker);
            if reduced.poly != basis[i].poly {
                basis[i] = reduced;
                changed = true;
            }
            i += 1;
        }
        sort_basis(&mut basis);
        if !changed {
            return Ok(basis);
        }
    }
}

/// Reduced form of `g`: monic elements, no term of any element divisible by
/// the leading monomial of another.
pub fn interreduce(g: &GroebnerBasis, sys: &CommutationSystem) -> Result<GroebnerBasis> {
    let tracker = Tracker { sys, ngens: g.generators.len(), enabled: g.cofactors.is_some() };
    let entries = g
        .elements
        .iter()
        .enumerate()
        .map(|(i, p)| Entry { id: i, poly: p.clone(), cof: g.cofactors.as_ref().map(|c| c[i].clone()) })
        .collect();
    let basis = interreduce_entries(entries, sys, &tracker)?;
    let cofactors = tracker.enabled.then(|| basis.iter().map(|e| e.cof.clone().expect("tracked")).collect());
    Ok(GroebnerBasis {
        nvars: g.nvars,
        elements: basis.into_iter().map(|e| e.poly).collect(),
        order: g.order,
        stats: g.stats.clone(),
        cofactors,
        generators: g.generators.clone(),
    })
}

/// Wraps a polynomial list as an unverified basis, e.g. for [`interreduce`].
pub fn basis_from_polys(nvars: usize, elements: Vec<Polynomial>) -> GroebnerBasis {
    GroebnerBasis {
        nvars,
        generators: elements.clone(),
        elements,
        order: MonomialOrder::PaperLex,
        stats: GbStats::default(),
        cofactors: None,
    }
}

/// Left ideal membership via reduction to zero.
pub fn ideal_member(f: &Polynomial, g: &GroebnerBasis, sys: &CommutationSystem) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    if g.elements.is_empty() {
        return Ok(false);
    }
    Ok(left_divide(f, &g.elements, sys)?.remainder.is_zero())
}

/// Left cofactors of `f` with respect to the basis's input generators, if
/// `f` is a member and cofactors were tracked.
pub fn membership_certificate(f: &Polynomial, g: &GroebnerBasis, sys: &CommutationSystem) -> Result<Option<Vec<Polynomial>>> {
    let Some(cofs) = &g.cofactors else { return Ok(None) };
    let div = left_divide(f, &g.elements, sys)?;
    if !div.remainder.is_zero() {
        return Ok(None);
    }
    let mut out = vec![Polynomial::zero(g.nvars); g.generators.len()];
    for (q, cof) in div.quotients.iter().zip(cofs) {
        for (o, c) in out.iter_mut().zip(cof) {
            *o = o.add(&sys.poly_mul(q, c)?)?;
        }
    }
    Ok(Some(out))
}

/// Checks that every S-polynomial of `elements` reduces to zero.
pub fn is_groebner_basis(elements: &[Polynomial], sys: &CommutationSystem) -> Result<bool> {
    for i in 0..elements.len() {
        for j in i + 1..elements.len() {
            let s = left_spoly(&elements[i], &elements[j], sys)?;
            if !s.is_zero() && !left_divide(&s, elements, sys)?.remainder.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Orders polynomials by leading monomial (zero first).
pub fn cmp_by_leading(a: &Polynomial, b: &Polynomial) -> Ordering {
    a.leading_monomial().cmp(&b.leading_monomial())
}
