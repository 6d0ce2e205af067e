//! Multiplication of PBW normal forms in an algebra presented by a
//! commutation table, plus executable checks of the solvable-algebra
//! axioms.
//!
//! A [`CommutationSystem`] stores, for every generator pair `a < b` (linear
//! indices), the rewrite of the ascending product
//!
//! ```text
//! z_a * z_b  ->  lambda * (z_b z_a) + tail
//! ```
//!
//! where `z_b z_a` is the descending PBW word. In a solvable algebra
//! `lambda != 0` and every monomial of `tail` is smaller than `z_b z_a`.

use std::cmp::Ordering;
use std::num::NonZeroUsize;
use std::sync::Mutex;

use lru::LruCache;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coeff::{QMode, QRat};
use crate::error::{MqError, Result};
use crate::pbw::{generator_name, Monomial, MonomialComparator, Polynomial, Term};

pub const DEFAULT_DEGREE_GUARD: u32 = 64;
const DEFAULT_CACHE_CAPACITY: usize = 1 << 16;
const MAX_REWRITE_DEPTH: usize = 1024;

/// Right-hand side of the rewrite for an ascending generator pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub lambda: QRat,
    pub tail: Polynomial,
}

/// The multiplication table of an algebra with a PBW basis.
pub struct CommutationSystem {
    nvars: usize,
    table: Vec<Option<Rewrite>>,
    qmode: QMode,
    degree_guard: u32,
    cache: Mutex<LruCache<(usize, Monomial), Polynomial>>,
}

impl std::fmt::Debug for CommutationSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CommutationSystem")
            .field("nvars", &self.nvars)
            .field("qmode", &self.qmode)
            .field("degree_guard", &self.degree_guard)
            .finish_non_exhaustive()
    }
}

impl Clone for CommutationSystem {
    fn clone(&self) -> Self {
        CommutationSystem {
            nvars: self.nvars,
            table: self.table.clone(),
            qmode: self.qmode.clone(),
            degree_guard: self.degree_guard,
            cache: Mutex::new(LruCache::new(cache_capacity())),
        }
    }
}

fn cache_capacity() -> NonZeroUsize {
    NonZeroUsize::new(DEFAULT_CACHE_CAPACITY).expect("nonzero")
}

impl CommutationSystem {
    /// An empty table over `nvars` generators; rules are added with
    /// [`CommutationSystem::set_rule`]. Nothing is validated here.
    pub fn new(nvars: usize, qmode: QMode) -> Self {
        CommutationSystem {
            nvars,
            table: vec![None; nvars * nvars],
            qmode,
            degree_guard: DEFAULT_DEGREE_GUARD,
            cache: Mutex::new(LruCache::new(cache_capacity())),
        }
    }

    /// Sets the rewrite for `z_small * z_big`. Coefficients are specialized
    /// immediately when the system is numeric.
    pub fn set_rule(&mut self, small: usize, big: usize, lambda: QRat, tail: Polynomial) -> Result<()> {
        if small >= big || big >= self.nvars {
            return Err(MqError::InvalidSpec(format!(
                "rule ({small},{big}) must satisfy small < big < {}",
                self.nvars
            )));
        }
        if tail.nvars() != self.nvars {
            return Err(MqError::DimensionMismatch { left: self.nvars, right: tail.nvars() });
        }
        let lambda = lambda.specialize(&self.qmode)?;
        let tail = tail.try_map_coeffs(|c| c.specialize(&self.qmode))?;
        self.table[small * self.nvars + big] = Some(Rewrite { lambda, tail });
        self.clear_cache();
        Ok(())
    }

    pub fn with_degree_guard(mut self, guard: u32) -> Self {
        self.degree_guard = guard;
        self.clear_cache();
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn qmode(&self) -> &QMode {
        &self.qmode
    }

    pub fn degree_guard(&self) -> u32 {
        self.degree_guard
    }

    pub fn rule(&self, small: usize, big: usize) -> Option<&Rewrite> {
        self.table.get(small * self.nvars + big).and_then(Option::as_ref)
    }

    fn rule_or_err(&self, small: usize, big: usize) -> Result<&Rewrite> {
        self.rule(small, big).ok_or(MqError::MissingPair { small, big })
    }

    pub fn clear_cache(&self) {
        self.cache.lock().expect("cache lock").clear();
    }

    fn check_dims(&self, nvars: usize) -> Result<()> {
        if nvars != self.nvars {
            return Err(MqError::DimensionMismatch { left: self.nvars, right: nvars });
        }
        Ok(())
    }

    fn check_degree(&self, degree: u64) -> Result<()> {
        if degree > self.degree_guard as u64 {
            return Err(MqError::DegreeGuardExceeded { degree, limit: self.degree_guard });
        }
        Ok(())
    }

    /// Normal form of a coefficient under this system's `q` mode.
    pub fn coeff(&self, c: &QRat) -> Result<QRat> {
        c.specialize(&self.qmode)
    }

    /// Normal form of the product `u * v` of two PBW monomials.
    pub fn mono_mul(&self, u: &Monomial, v: &Monomial) -> Result<Polynomial> {
        self.check_dims(u.nvars())?;
        self.check_dims(v.nvars())?;
        self.check_degree(u.degree() as u64 + v.degree() as u64)?;
        self.mono_mul_at(u, v, 0)
    }

    fn mono_mul_at(&self, u: &Monomial, v: &Monomial, depth: usize) -> Result<Polynomial> {
        if u.is_one() {
            return Ok(Polynomial::monomial(v.clone()));
        }
        if v.is_one() {
            return Ok(Polynomial::monomial(u.clone()));
        }
        if u.bottom() >= v.top() {
            return Ok(Polynomial::monomial(u.mul(v)?));
        }
        // Fold u's generators into v from the lowest to the highest.
        let mut acc = Polynomial::monomial(v.clone());
        for g in u.word().into_iter().rev() {
            acc = self.gen_mul_poly(g, &acc, depth)?;
        }
        Ok(acc)
    }

    fn gen_mul_poly(&self, g: usize, p: &Polynomial, depth: usize) -> Result<Polynomial> {
        let mut raw = Vec::new();
        for t in p.terms() {
            let prod = self.gen_mul(g, &t.mono, depth)?;
            raw.extend(
                prod.into_terms()
                    .into_iter()
                    .map(|s| Term { coeff: &s.coeff * &t.coeff, mono: s.mono }),
            );
        }
        Polynomial::canonicalize(self.nvars, raw)
    }

    /// `z_g * m` in normal form.
    fn gen_mul(&self, g: usize, m: &Monomial, depth: usize) -> Result<Polynomial> {
        let top = match m.top() {
            Some(top) if top > g => top,
            _ => return Ok(Polynomial::monomial(m.with_generator(g))),
        };
        if depth > MAX_REWRITE_DEPTH {
            return Err(MqError::RewriteLimitExceeded);
        }
        let key = (g, m.clone());
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        // z_g z_top m' = lambda z_top (z_g m') + tail m'
        let rest = m.without_generator(top);
        let rule = self.rule_or_err(g, top)?;
        let inner = self.gen_mul(g, &rest, depth + 1)?;
        let mut raw = Vec::with_capacity(inner.len() + rule.tail.len());
        for t in inner.terms() {
            let lifted = self.gen_mul(top, &t.mono, depth + 1)?;
            let c = &t.coeff * &rule.lambda;
            raw.extend(
                lifted
                    .into_terms()
                    .into_iter()
                    .map(|s| Term { coeff: &s.coeff * &c, mono: s.mono }),
            );
        }
        for t in rule.tail.terms() {
            let prod = self.mono_mul_at(&t.mono, &rest, depth + 1)?;
            raw.extend(
                prod.into_terms()
                    .into_iter()
                    .map(|s| Term { coeff: &s.coeff * &t.coeff, mono: s.mono }),
            );
        }
        let out = Polynomial::canonicalize(self.nvars, raw)?;
        self.cache.lock().expect("cache lock").put(key, out.clone());
        Ok(out)
    }

    /// Bilinear extension of [`CommutationSystem::mono_mul`].
    pub fn poly_mul(&self, f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
        self.check_dims(f.nvars())?;
        self.check_dims(g.nvars())?;
        let mut raw = Vec::new();
        for s in f.terms() {
            for t in g.terms() {
                let c = &s.coeff * &t.coeff;
                let prod = self.mono_mul(&s.mono, &t.mono)?;
                raw.extend(
                    prod.into_terms()
                        .into_iter()
                        .map(|p| Term { coeff: &p.coeff * &c, mono: p.mono }),
                );
            }
        }
        Polynomial::canonicalize(self.nvars, raw)
    }

    /// `m * f` for a monomial left factor.
    pub fn left_mono_mul(&self, m: &Monomial, f: &Polynomial) -> Result<Polynomial> {
        self.poly_mul(&Polynomial::monomial(m.clone()), f)
    }

    /// Product of a sequence of generators written in the given order.
    pub fn word_product(&self, word: &[usize]) -> Result<Polynomial> {
        let mut acc = Polynomial::one(self.nvars);
        for &g in word.iter().rev() {
            acc = self.gen_mul_poly(g, &acc, 0)?;
        }
        Ok(acc)
    }

    pub fn name(&self, idx: usize) -> String {
        generator_name(idx, self.nvars)
    }
}

pub fn scalar_mul(c: &QRat, f: &Polynomial) -> Polynomial {
    f.scale(c)
}

/// Leading monomial of `f` under an arbitrary comparator.
pub fn leading_monomial_under<'a>(f: &'a Polynomial, order: &dyn MonomialComparator) -> Option<&'a Monomial> {
    f.terms().iter().map(|t| &t.mono).max_by(|a, b| order.compare(a, b))
}

/// Outcome of one table entry check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub small: String,
    pub big: String,
    pub lambda: String,
    pub lambda_nonzero: bool,
    pub tail_leading: Option<String>,
    pub tail_below: bool,
}

impl PairCheck {
    pub fn passed(&self) -> bool {
        self.lambda_nonzero && self.tail_below
    }
}

/// A concrete counterexample found by a validator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub condition: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub verdict: bool,
    pub pairs: Vec<PairCheck>,
    pub samples: usize,
    pub witnesses: Vec<Witness>,
}

impl ValidationReport {
    pub fn failed_pairs(&self) -> impl Iterator<Item = &PairCheck> {
        self.pairs.iter().filter(|p| !p.passed())
    }
}

/// Checks every table entry: `lambda != 0` and the tail's leading monomial
/// lies strictly below `z_big z_small` under `order`.
pub fn validate_solvability(sys: &CommutationSystem, order: &dyn MonomialComparator) -> Result<ValidationReport> {
    let n = sys.nvars();
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    let mut witnesses = Vec::new();
    for small in 0..n {
        for big in small + 1..n {
            let rule = sys.rule_or_err(small, big)?;
            let bound = Monomial::generator(n, small).with_generator(big);
            let lm = leading_monomial_under(&rule.tail, order);
            let tail_below = lm.is_none_or(|lm| order.compare(lm, &bound) == Ordering::Less);
            let check = PairCheck {
                small: sys.name(small),
                big: sys.name(big),
                lambda: rule.lambda.to_string(),
                lambda_nonzero: !rule.lambda.is_zero(),
                tail_leading: lm.map(ToString::to_string),
                tail_below,
            };
            if !check.lambda_nonzero {
                witnesses.push(Witness {
                    condition: "lambda-nonzero".into(),
                    detail: format!("{}*{}: lambda = 0", check.small, check.big),
                });
            }
            if !check.tail_below {
                witnesses.push(Witness {
                    condition: "tail-below".into(),
                    detail: format!(
                        "{}*{}: LM(tail) = {} is not below {}",
                        check.small,
                        check.big,
                        check.tail_leading.as_deref().unwrap_or("0"),
                        bound
                    ),
                });
            }
            pairs.push(check);
        }
    }
    Ok(ValidationReport { verdict: witnesses.is_empty(), pairs, samples: 0, witnesses })
}

/// Largest degree of a sampled monomial in [`validate_ordering`].
pub const SAMPLE_MAX_DEGREE: u32 = 3;

fn random_monomial(rng: &mut ChaCha8Rng, nvars: usize, max_degree: u32) -> Monomial {
    let d = rng.gen_range(0..=max_degree);
    let gens: Vec<usize> = (0..d).map(|_| rng.gen_range(0..nvars)).collect();
    Monomial::from_generators(nvars, &gens)
}

/// Checks the compatibility conditions of a monomial ordering with the
/// multiplication of `sys`:
///
/// * (2) if `c = LM(a*b*e) != 1` and `b != c` then `b < c`, in particular
///   `1 < c` for every `c != 1`;
/// * (3) if `a < b` then `LM(g*a*e) < LM(g*b*e)` whenever the right side is
///   not 1.
///
/// Runs the exhaustive generator-level check (`LM(z_i z_s) < LM(z_i z_p)`
/// and `LM(z_s z_i) < LM(z_p z_i)` for `z_s < z_p`) and then `samples`
/// random triples drawn with a deterministic `seed`.
pub fn validate_ordering(
    sys: &CommutationSystem,
    order: &dyn MonomialComparator,
    samples: usize,
    seed: u64,
) -> Result<ValidationReport> {
    let n = sys.nvars();
    let mut witnesses = Vec::new();
    let lm = |p: &Polynomial| leading_monomial_under(p, order).cloned();
    let gens: Vec<Monomial> = (0..n).map(|i| Monomial::generator(n, i)).collect();
    let one = Monomial::one(n);

    for g in &gens {
        if order.compare(&one, g) != Ordering::Less {
            witnesses.push(Witness { condition: "2".into(), detail: format!("1 is not below {g}") });
        }
    }
    for i in &gens {
        for s in &gens {
            for p in &gens {
                if order.compare(s, p) != Ordering::Less {
                    continue;
                }
                let (ls, lp) = (lm(&sys.mono_mul(i, s)?), lm(&sys.mono_mul(i, p)?));
                if let (Some(ls), Some(lp)) = (&ls, &lp) {
                    if order.compare(ls, lp) != Ordering::Less {
                        witnesses.push(Witness {
                            condition: "3".into(),
                            detail: format!("{s} < {p} but LM({i}*{s}) = {ls} is not below LM({i}*{p}) = {lp}"),
                        });
                    }
                }
                let (ls, lp) = (lm(&sys.mono_mul(s, i)?), lm(&sys.mono_mul(p, i)?));
                if let (Some(ls), Some(lp)) = (&ls, &lp) {
                    if order.compare(ls, lp) != Ordering::Less {
                        witnesses.push(Witness {
                            condition: "3".into(),
                            detail: format!("{s} < {p} but LM({s}*{i}) = {ls} is not below LM({p}*{i}) = {lp}"),
                        });
                    }
                }
            }
        }
    }

    let max_deg = SAMPLE_MAX_DEGREE.min(sys.degree_guard() / 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let a = random_monomial(&mut rng, n, max_deg);
        let b = random_monomial(&mut rng, n, max_deg);
        let e = random_monomial(&mut rng, n, max_deg);

        // condition (2)
        let ab = sys.mono_mul(&a, &b)?;
        let abe = sys.poly_mul(&ab, &Polynomial::monomial(e.clone()))?;
        if let Some(c) = lm(&abe) {
            if !c.is_one() && c != b && order.compare(&b, &c) != Ordering::Less {
                witnesses.push(Witness {
                    condition: "2".into(),
                    detail: format!("LM({a} * {b} * {e}) = {c} but {b} is not below it"),
                });
            }
            if !c.is_one() && order.compare(&one, &c) != Ordering::Less {
                witnesses.push(Witness { condition: "2".into(), detail: format!("1 is not below {c}") });
            }
        }

        // condition (3): reuse (a, b) as the compared pair, e as right factor
        // and a fresh left factor.
        let g = random_monomial(&mut rng, n, max_deg);
        let (lo, hi) = match order.compare(&a, &b) {
            Ordering::Less => (&a, &b),
            Ordering::Greater => (&b, &a),
            Ordering::Equal => continue,
        };
        let left = |x: &Monomial| -> Result<Polynomial> {
            let gx = sys.mono_mul(&g, x)?;
            sys.poly_mul(&gx, &Polynomial::monomial(e.clone()))
        };
        let (p_lo, p_hi) = (left(lo)?, left(hi)?);
        if let (Some(l_lo), Some(l_hi)) = (lm(&p_lo), lm(&p_hi)) {
            if !l_hi.is_one() && order.compare(&l_lo, &l_hi) != Ordering::Less {
                witnesses.push(Witness {
                    condition: "3".into(),
                    detail: format!(
                        "{lo} < {hi} but LM({g} * {lo} * {e}) = {l_lo} is not below LM({g} * {hi} * {e}) = {l_hi}"
                    ),
                });
            }
        }
    }
    witnesses.truncate(64);
    Ok(ValidationReport { verdict: witnesses.is_empty(), pairs: Vec::new(), samples, witnesses })
}

/// Small non-matrix algebras used as positive and negative controls.
#[cfg(any(test, feature = "fixtures"))]
pub mod instances {
    use super::*;

    /// Quantum plane `K_q[x, y]` with `x*y = q*y*x` (generators `x[1]`, `x[2]`).
    pub fn quantum_plane(qmode: QMode) -> CommutationSystem {
        let mut sys = CommutationSystem::new(2, qmode);
        sys.set_rule(0, 1, QRat::q(), Polynomial::zero(2)).expect("valid rule");
        sys
    }

    /// First Weyl algebra with `x[1] = x`, `x[2] = d` and `x*d = d*x - 1`.
    pub fn weyl_algebra() -> CommutationSystem {
        let mut sys = CommutationSystem::new(2, QMode::Symbolic);
        sys.set_rule(0, 1, QRat::one(), Polynomial::constant(2, QRat::from_integer(-1)))
            .expect("valid rule");
        sys
    }
}

#[cfg(test)]
mod tests {
    use super::instances::*;
    use super::*;
    use crate::pbw::MonomialOrder;

    fn m(exps: &[u32]) -> Monomial {
        Monomial::from_exps(exps.to_vec()).unwrap()
    }

    #[test]
    fn quantum_plane_products() {
        let sys = quantum_plane(QMode::Symbolic);
        // x * y^2 = q^2 y^2 x
        let p = sys.mono_mul(&m(&[1, 0]), &m(&[0, 2])).unwrap();
        assert_eq!(p, Polynomial::term(QRat::q_pow(2), m(&[1, 2])));
        assert!(validate_solvability(&sys, &MonomialOrder::PaperLex).unwrap().verdict);
    }

    #[test]
    fn weyl_products() {
        let sys = weyl_algebra();
        // x * d^2 = d^2 x - 2 d
        let p = sys.mono_mul(&m(&[1, 0]), &m(&[0, 2])).unwrap();
        let expected = Polynomial::canonicalize(
            2,
            vec![Term::new(QRat::one(), m(&[1, 2])), Term::new(QRat::from_integer(-2), m(&[0, 1]))],
        )
        .unwrap();
        assert_eq!(p, expected);
        let report = validate_ordering(&sys, &MonomialOrder::PaperLex, 200, 7).unwrap();
        assert!(report.verdict, "{:?}", report.witnesses);
    }

    #[test]
    fn missing_pair_is_reported() {
        let sys = CommutationSystem::new(3, QMode::Symbolic);
        assert_eq!(
            validate_solvability(&sys, &MonomialOrder::PaperLex),
            Err(MqError::MissingPair { small: 0, big: 1 })
        );
        assert!(matches!(sys.mono_mul(&m(&[1, 0, 0]), &m(&[0, 1, 0])), Err(MqError::MissingPair { .. })));
    }

    #[test]
    fn degree_guard() {
        let sys = quantum_plane(QMode::Symbolic).with_degree_guard(4);
        assert!(matches!(
            sys.mono_mul(&m(&[3, 0]), &m(&[0, 2])),
            Err(MqError::DegreeGuardExceeded { degree: 5, limit: 4 })
        ));
        assert!(sys.mono_mul(&m(&[2, 0]), &m(&[0, 2])).is_ok());
    }

    #[test]
    fn dimension_mismatch() {
        let sys = quantum_plane(QMode::Symbolic);
        assert!(matches!(sys.mono_mul(&m(&[1, 0, 0]), &m(&[0, 1])), Err(MqError::DimensionMismatch { .. })));
    }

    #[test]
    fn scalar_multiplication() {
        let f = Polynomial::generator(4, 0);
        assert_eq!(scalar_mul(&QRat::one(), &f), f);
        assert!(scalar_mul(&QRat::zero(), &f).is_zero());
        assert_eq!(scalar_mul(&QRat::q(), &f), Polynomial::term(QRat::q(), m(&[1, 0, 0, 0])));
    }
}
