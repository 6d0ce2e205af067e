//! Independent oracles and random generators for tests.
//!
//! Nothing here calls the straightening engine: [`WordOracle`] rewrites raw
//! generator words with the four relation patterns of M_q(n) directly, and
//! the linear-algebra helpers work on dense rational matrices.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::coeff::{QMode, QRat};
use crate::pbw::{Monomial, Polynomial, Term};

/// Normal forms in M_q(n) by exhaustive adjacent-pair rewriting.
pub struct WordOracle {
    n: usize,
    q: QRat,
    cross: QRat,
}

pub type ExpMap = BTreeMap<Vec<u32>, QRat>;

impl WordOracle {
    pub fn new(n: usize, qmode: &QMode) -> Self {
        WordOracle {
            n,
            q: QRat::q().specialize(qmode).expect("q is finite"),
            cross: QRat::q_minus_q_inv().specialize(qmode).expect("q is nonzero"),
        }
    }

    pub fn nvars(&self) -> usize {
        self.n * self.n
    }

    /// Replacement words for the ascending pair `a b` (`a < b`).
    fn rewrite(&self, a: usize, b: usize) -> Vec<(QRat, [usize; 2])> {
        let n = self.n;
        let (i, j) = (a / n, a % n);
        let (s, t) = (b / n, b % n);
        if i == s || j == t {
            vec![(self.q.clone(), [b, a])]
        } else if t < j {
            vec![(QRat::one(), [b, a])]
        } else {
            vec![(QRat::one(), [b, a]), (self.cross.clone(), [s * n + j, i * n + t])]
        }
    }

    fn exps_of(&self, word: &[usize]) -> Vec<u32> {
        let mut e = vec![0; self.nvars()];
        for &g in word {
            e[g] += 1;
        }
        e
    }

    /// Normal form of `coeff * word`, keyed by exponent vector.
    pub fn normal_form(&self, word: &[usize]) -> ExpMap {
        let mut pending: BTreeMap<Vec<usize>, QRat> = BTreeMap::new();
        pending.insert(word.to_vec(), QRat::one());
        let mut out = ExpMap::new();
        while let Some((w, c)) = pending.pop_last() {
            if c.is_zero() {
                continue;
            }
            match w.windows(2).position(|p| p[0] < p[1]) {
                None => add_into(&mut out, self.exps_of(&w), c),
                Some(k) => {
                    for (rc, rep) in self.rewrite(w[k], w[k + 1]) {
                        let mut nw = w[..k].to_vec();
                        nw.extend_from_slice(&rep);
                        nw.extend_from_slice(&w[k + 2..]);
                        let e = pending.entry(nw).or_insert_with(QRat::zero);
                        *e = &*e + &(&rc * &c);
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Product of two polynomials, each term expanded to its descending word.
    pub fn product(&self, f: &Polynomial, g: &Polynomial) -> ExpMap {
        let mut out = ExpMap::new();
        for s in f.terms() {
            for t in g.terms() {
                let mut w = s.mono.word();
                w.extend(t.mono.word());
                let c = &s.coeff * &t.coeff;
                for (e, v) in self.normal_form(&w) {
                    add_into(&mut out, e, &v * &c);
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

fn add_into(map: &mut ExpMap, key: Vec<u32>, c: QRat) {
    let e = map.entry(key).or_insert_with(QRat::zero);
    *e = &*e + &c;
}

pub fn to_map(p: &Polynomial) -> ExpMap {
    p.terms().iter().map(|t| (t.mono.exps().to_vec(), t.coeff.clone())).collect()
}

pub fn from_map(nvars: usize, map: &ExpMap) -> Polynomial {
    let terms = map
        .iter()
        .map(|(e, c)| Term::new(c.clone(), Monomial::from_exps(e.clone()).expect("small exponents")))
        .collect();
    Polynomial::canonicalize(nvars, terms).expect("consistent dimensions")
}

/// Rank of a dense rational matrix (rows are consumed).
pub fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        let pivot: Vec<BigRational> = rows[r].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        rows[r] = pivot;
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// All exponent vectors of total degree `d` in `nvars` variables.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(idx: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx + 1 == cur.len() {
            cur[idx] = rem;
            out.push(cur.clone());
            cur[idx] = 0;
            return;
        }
        for e in 0..=rem {
            cur[idx] = e;
            rec(idx + 1, rem - e, cur, out);
        }
        cur[idx] = 0;
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(0, d, &mut vec![0; nvars], &mut out);
    }
    out
}

/// Spanning set `{ z^delta * g : deg(z^delta) + deg(g) <= max_degree }` of the
/// bounded part of the left ideal generated by `gens`, specialized at a
/// numeric `q`. Every vector is returned as an exponent map over ℚ.
pub fn bounded_span(oracle: &WordOracle, gens: &[Polynomial], max_degree: u32) -> Vec<BTreeMap<Vec<u32>, BigRational>> {
    let nvars = oracle.nvars();
    let mut out = Vec::new();
    for g in gens {
        let dg = g.degree().unwrap_or(0);
        for d in 0..=max_degree.saturating_sub(dg) {
            if dg + d > max_degree {
                break;
            }
            for delta in monomials_of_degree(nvars, d) {
                let left = Polynomial::monomial(Monomial::from_exps(delta).expect("small"));
                let prod = oracle.product(&left, g);
                out.push(
                    prod.into_iter()
                        .map(|(e, c)| (e, c.as_constant().expect("numeric oracle")))
                        .collect(),
                );
            }
        }
    }
    out
}

fn dense(rows: &[BTreeMap<Vec<u32>, BigRational>], columns: &HashMap<Vec<u32>, usize>) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| {
            let mut v = vec![BigRational::zero(); columns.len()];
            for (e, c) in r {
                v[columns[e]] = c.clone();
            }
            v
        })
        .collect()
}

fn column_index<'a>(maps: impl Iterator<Item = &'a BTreeMap<Vec<u32>, BigRational>>) -> HashMap<Vec<u32>, usize> {
    let mut cols = HashMap::new();
    for m in maps {
        for e in m.keys() {
            let k = cols.len();
            cols.entry(e.clone()).or_insert(k);
        }
    }
    cols
}

/// Specializes a polynomial's coefficients at `q = v`.
pub fn specialize_map(p: &Polynomial, v: &BigRational) -> Option<BTreeMap<Vec<u32>, BigRational>> {
    p.terms()
        .iter()
        .map(|t| Some((t.mono.exps().to_vec(), t.coeff.eval(v).ok()?)))
        .collect::<Option<BTreeMap<_, _>>>()
        .map(|mut m| {
            m.retain(|_, c| !c.is_zero());
            m
        })
}

/// Whether `f` lies in the degree-bounded span of left multiples of `gens`
/// at `q = v`. Exact for homogeneous generators once `max_degree >= deg f`.
pub fn bounded_member(f: &Polynomial, gens: &[Polynomial], max_degree: u32, v: &BigRational) -> bool {
    let n = crate::pbw::matrix_dim(f.nvars()).expect("matrix algebra");
    let oracle = WordOracle::new(n, &QMode::Numeric(v.clone()));
    let mode = QMode::Numeric(v.clone());
    let gens: Vec<Polynomial> = gens
        .iter()
        .map(|g| g.try_map_coeffs(|c| c.specialize(&mode)).expect("no pole"))
        .collect();
    let span = bounded_span(&oracle, &gens, max_degree);
    let target = specialize_map(f, v).expect("no pole");
    let cols = column_index(span.iter().chain(std::iter::once(&target)));
    let base = dense(&span, &cols);
    let r0 = rank(base.clone());
    let mut with = base;
    with.extend(dense(std::slice::from_ref(&target), &cols));
    rank(with) == r0
}

/// Whether the degree-bounded part of the left ideal contains a nonzero
/// element supported on generators `0..s`, at `q = v`.
pub fn bounded_prefix_meets(gens: &[Polynomial], s: usize, max_degree: u32, v: &BigRational) -> bool {
    let nvars = gens[0].nvars();
    let n = crate::pbw::matrix_dim(nvars).expect("matrix algebra");
    let mode = QMode::Numeric(v.clone());
    let oracle = WordOracle::new(n, &mode);
    let gens: Vec<Polynomial> = gens
        .iter()
        .map(|g| g.try_map_coeffs(|c| c.specialize(&mode)).expect("no pole"))
        .collect();
    let span = bounded_span(&oracle, &gens, max_degree);
    let cols = column_index(span.iter());
    let full = dense(&span, &cols);
    let outside: Vec<usize> = {
        let mut v: Vec<(&Vec<u32>, &usize)> = cols.iter().collect();
        v.sort_by_key(|(_, &i)| i);
        v.into_iter()
            .filter(|(e, _)| e[s..].iter().any(|&x| x > 0))
            .map(|(_, &i)| i)
            .collect()
    };
    let projected: Vec<Vec<BigRational>> = full.iter().map(|r| outside.iter().map(|&i| r[i].clone()).collect()).collect();
    rank(full) > rank(projected)
}

/// Least `e` such that `h(d)` for `d >= tail_from` agrees with a polynomial
/// of degree `e - 1` (the `e`-th finite differences vanish there); `e = 0`
/// when the tail is zero. `None` if no difference vanishes on at least two
/// points of the window.
pub fn growth_degree(h: &[u128], tail_from: usize) -> Option<usize> {
    let mut seq: Vec<i128> = h.iter().map(|&x| x as i128).collect();
    for e in 0..h.len() {
        if tail_from + 2 <= seq.len() && seq[tail_from..].iter().all(|&x| x == 0) {
            return Some(e);
        }
        seq = seq.windows(2).map(|w| w[1] - w[0]).collect();
        if seq.is_empty() {
            break;
        }
    }
    None
}

/// Random monomial of degree at most `max_degree`.
pub fn random_monomial(rng: &mut impl Rng, nvars: usize, max_degree: u32) -> Monomial {
    let d = rng.gen_range(0..=max_degree);
    random_monomial_of_degree(rng, nvars, d)
}

pub fn random_monomial_of_degree(rng: &mut impl Rng, nvars: usize, d: u32) -> Monomial {
    let gens: Vec<usize> = (0..d).map(|_| rng.gen_range(0..nvars)).collect();
    Monomial::from_generators(nvars, &gens)
}

/// Small nonzero coefficient: an integer in -3..=3, sometimes times `q^±1`.
pub fn random_coeff(rng: &mut impl Rng) -> QRat {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-3i64..=3);
    }
    let k = *[0i64, 0, 1, -1].choose(rng).expect("nonempty");
    &QRat::from_integer(c) * &QRat::q_pow(k)
}

/// Random nonzero polynomial with up to `max_terms` terms of degree at most `max_degree`.
pub fn random_poly(rng: &mut impl Rng, nvars: usize, max_degree: u32, max_terms: usize) -> Polynomial {
    loop {
        let k = rng.gen_range(1..=max_terms);
        let terms = (0..k)
            .map(|_| Term::new(random_coeff(rng), random_monomial(rng, nvars, max_degree)))
            .collect();
        let p = Polynomial::canonicalize(nvars, terms).expect("same dimension");
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random homogeneous polynomial of degree `d` using only generators `< s`.
pub fn random_homogeneous(rng: &mut impl Rng, nvars: usize, s: usize, d: u32, max_terms: usize) -> Polynomial {
    loop {
        let k = rng.gen_range(1..=max_terms);
        let terms = (0..k)
            .map(|_| {
                let gens: Vec<usize> = (0..d).map(|_| rng.gen_range(0..s)).collect();
                Term::new(random_coeff(rng), Monomial::from_generators(nvars, &gens))
            })
            .collect();
        let p = Polynomial::canonicalize(nvars, terms).expect("same dimension");
        if !p.is_zero() {
            return p;
        }
    }
}

/// Random nonzero rational value for `q`, avoiding 0 and ±1.
pub fn random_q_value(rng: &mut impl Rng) -> BigRational {
    loop {
        let num: i64 = rng.gen_range(-9..=9);
        let den: i64 = rng.gen_range(1..=7);
        let v = BigRational::new(num.into(), den.into());
        if !v.is_zero() && v.clone() * v.clone() != BigRational::one() {
            return v;
        }
    }
}
