//! Exact arithmetic in the rational function field ℚ(q).
//!
//! [`QPoly`] is a dense univariate polynomial in `q` with rational
//! coefficients. [`QRat`] is a reduced quotient of two such polynomials with
//! a monic denominator; every arithmetic operation returns a canonical value,
//! so equality is structural and zero tests are O(1).

use std::cmp::{max, min, Ordering};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{MqError, Result};

/// Polynomial in `q` over ℚ. `coeffs[k]` is the coefficient of `q^k`; the
/// highest stored coefficient is never zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * q^k`.
    pub fn term(c: BigRational, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        QPoly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Returns `(k, c)` when the polynomial is the single term `c * q^k`.
    pub fn single_term(&self) -> Option<(usize, &BigRational)> {
        let k = self.valuation()?;
        (k + 1 == self.coeffs.len()).then(|| (k, &self.coeffs[k]))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Divides by `q^k`; the caller guarantees `k <= valuation`.
    fn shift_down(&self, k: usize) -> QPoly {
        QPoly { coeffs: self.coeffs[k..].to_vec() }
    }

    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[k + i] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    /// Quotient of an exact division by a monic divisor.
    fn div_exact(&self, divisor: &QPoly) -> QPoly {
        if divisor.is_one() {
            return self.clone();
        }
        self.div_rem(divisor).0
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    ///
    /// Powers of `q` are split off first; the rest runs a primitive
    /// pseudo-remainder sequence over ℤ, which keeps intermediate
    /// coefficients far smaller than Euclid over ℚ.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let v = min(self.valuation().unwrap_or(0), other.valuation().unwrap_or(0));
        let (a, b) = (self.shift_down(v), other.shift_down(v));
        let power = QPoly::term(BigRational::one(), v);
        if a.is_constant() || b.is_constant() {
            return power;
        }
        let (mut a, mut b) = (primitive_ints(&a), primitive_ints(&b));
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while b.len() > 1 {
            let r = pseudo_rem(&a, &b);
            a = b;
            b = primitive(r);
        }
        if b.len() == 1 {
            return power;
        }
        let g = QPoly::from_coeffs(a.into_iter().map(BigRational::from_integer).collect()).monic();
        if v == 0 {
            g
        } else {
            &g * &power
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    fn to_integer_text(coeffs: &[BigInt]) -> String {
        let mut out = String::new();
        for (k, c) in coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push(if negative { '-' } else { '+' });
            }
            let mag = c.abs();
            let power = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            if power.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&power);
            } else {
                out.push_str(&format!("{mag}*{power}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &l).to_integer()).collect();
        let text = QPoly::to_integer_text(&ints);
        if l.is_one() {
            f.write_str(&text)
        } else if self.num_terms() > 1 {
            write!(f, "({text})/{l}")
        } else {
            write!(f, "{text}/{l}")
        }
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = max(self.coeffs.len(), rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        QPoly::from_coeffs(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QPoly::from_coeffs(out)
    }
}

/// Integer coefficients of a nonzero rational multiple of `p` with content 1.
fn primitive_ints(p: &QPoly) -> Vec<BigInt> {
    let l = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    primitive(p.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect())
}

/// Trims trailing zeros and divides out the content.
fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in &mut v {
            *c = &*c / &g;
        }
    }
    v
}

/// Remainder of `lc(b)^k * a` by `b` over ℤ, with content removed along the way.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &lr * c;
        }
        r.pop();
        r = primitive(r);
    }
    r
}

/// Element of ℚ(q) in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QRat {
    num: QPoly,
    den: QPoly,
}

impl Default for QRat {
    fn default() -> Self {
        QRat::zero()
    }
}

impl QRat {
    pub fn zero() -> Self {
        QRat { num: QPoly::zero(), den: QPoly::one() }
    }

    pub fn one() -> Self {
        QRat { num: QPoly::one(), den: QPoly::one() }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(c: BigRational) -> Self {
        QRat { num: QPoly::constant(c), den: QPoly::one() }
    }

    /// The quantum parameter itself.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> Self {
        let unit = BigRational::one();
        if k >= 0 {
            QRat { num: QPoly::term(unit, k as usize), den: QPoly::one() }
        } else {
            QRat { num: QPoly::one(), den: QPoly::term(unit, k.unsigned_abs() as usize) }
        }
    }

    /// `q - q^{-1} = (q^2 - 1)/q`.
    pub fn q_minus_q_inv() -> Self {
        QRat { num: QPoly::from_i64s(&[-1, 0, 1]), den: QPoly::term(BigRational::one(), 1) }
    }

    /// Builds `num / den` in canonical form.
    pub fn from_parts(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(MqError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    pub fn from_poly(num: QPoly) -> Self {
        QRat { num, den: QPoly::one() }
    }

    fn normalize(num: QPoly, den: QPoly) -> Self {
        if num.is_zero() {
            return QRat::zero();
        }
        let (mut num, mut den) = (num, den);
        if let Some((k, c)) = den.single_term() {
            // gcd with c*q^k is a power of q
            let s = min(k, num.valuation().unwrap_or(0));
            let inv = c.recip();
            num = num.shift_down(s).scale(&inv);
            den = QPoly::term(BigRational::one(), k - s);
            return QRat { num, den };
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num = num.div_rem(&g).0;
            den = den.div_rem(&g).0;
        }
        let lc = den.leading().expect("nonzero denominator").clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        QRat { num, den }
    }

    /// Coprime numerator and denominator; only the denominator's leading
    /// coefficient is normalized.
    fn from_reduced(num: QPoly, den: QPoly) -> Self {
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            return QRat { num, den };
        }
        let inv = lc.recip();
        QRat { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a rational number when it does not depend on `q`.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.coeffs[0].clone())
    }

    pub fn inv(&self) -> Result<QRat> {
        if self.is_zero() {
            return Err(MqError::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &QRat) -> Result<QRat> {
        Ok(self * &rhs.inv()?)
    }

    /// Evaluates at a numeric value of `q`; symbolic mode returns `self`.
    pub fn specialize(&self, mode: &QMode) -> Result<QRat> {
        match mode {
            QMode::Symbolic => Ok(self.clone()),
            QMode::Numeric(v) => Ok(QRat::from_rational(self.eval(v)?)),
        }
    }

    pub fn eval(&self, v: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(v);
        if d.is_zero() {
            return Err(MqError::EvaluationPole(v.to_string()));
        }
        Ok(self.num.eval(v) / d)
    }

    /// Sign of the numerator's leading coefficient, used when printing.
    pub fn is_negative(&self) -> bool {
        self.num.leading().is_some_and(Signed::is_negative)
    }

    /// Integer-coefficient numerator and denominator with the same ratio.
    fn integer_parts(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let l = self
            .num
            .coeffs
            .iter()
            .chain(self.den.coeffs.iter())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let conv = |p: &QPoly| -> Vec<BigInt> { p.coeffs.iter().map(|c| (c * &l).to_integer()).collect() };
        let (mut n, mut d) = (conv(&self.num), conv(&self.den));
        let g = n
            .iter()
            .chain(d.iter())
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() && !g.is_one() {
            n.iter_mut().for_each(|c| *c /= &g);
            d.iter_mut().for_each(|c| *c /= &g);
        }
        (n, d)
    }

    /// Text that can stand as the left operand of `*` without changing meaning.
    pub fn to_factor_string(&self) -> String {
        self.render(true)
    }

    fn render(&self, as_factor: bool) -> String {
        let (n, d) = self.integer_parts();
        let nterms = n.iter().filter(|c| !c.is_zero()).count();
        let dterms = d.iter().filter(|c| !c.is_zero()).count();
        let ntext = QPoly::to_integer_text(&n);
        let d_is_one = d.len() == 1 && d[0].is_one();
        if d_is_one {
            return if nterms > 1 && as_factor { format!("({ntext})") } else { ntext };
        }
        let ntext = if nterms > 1 { format!("({ntext})") } else { ntext };
        let dtext = QPoly::to_integer_text(&d);
        let bare = dterms == 1 && (d.len() == 1 || d.last().is_some_and(One::is_one));
        if bare {
            format!("{ntext}/{dtext}")
        } else {
            format!("{ntext}/({dtext})")
        }
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl Add for &QRat {
    type Output = QRat;
    fn add(self, rhs: &QRat) -> QRat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return QRat::normalize(&self.num + &rhs.num, self.den.clone());
        }
        if self.den.single_term().is_some() && rhs.den.single_term().is_some() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return QRat::normalize(num, &self.den * &rhs.den);
        }
        // with d = gcd of the denominators only d can share factors with the sum
        let d = self.den.gcd(&rhs.den);
        let (a, b) = (self.den.div_exact(&d), rhs.den.div_exact(&d));
        let t = &(&self.num * &b) + &(&rhs.num * &a);
        if t.is_zero() {
            return QRat::zero();
        }
        let e = t.gcd(&d);
        QRat::from_reduced(t.div_exact(&e), &a * &rhs.den.div_exact(&e))
    }
}

impl Sub for &QRat {
    type Output = QRat;
    fn sub(self, rhs: &QRat) -> QRat {
        self + &(-rhs)
    }
}

impl Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &QRat {
    type Output = QRat;
    fn mul(self, rhs: &QRat) -> QRat {
        if self.is_zero() || rhs.is_zero() {
            return QRat::zero();
        }
        if rhs.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return QRat { num: &self.num * &rhs.num, den: QPoly::one() };
        }
        // cancel crosswise; both inputs are already reduced
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = &self.num.div_exact(&g1) * &rhs.num.div_exact(&g2);
        let den = &self.den.div_exact(&g2) * &rhs.den.div_exact(&g1);
        QRat::from_reduced(num, den)
    }
}

/// Panics on a zero divisor, like `BigRational`; use [`QRat::checked_div`]
/// when the divisor may vanish.
impl Div for &QRat {
    type Output = QRat;
    fn div(self, rhs: &QRat) -> QRat {
        self.checked_div(rhs).expect("QRat division by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QRat {
            type Output = QRat;
            fn $m(self, rhs: QRat) -> QRat { (&self).$m(&rhs) }
        }
        impl $tr<&QRat> for QRat {
            type Output = QRat;
            fn $m(self, rhs: &QRat) -> QRat { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        -&self
    }
}

/// How the quantum parameter is interpreted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub enum QMode {
    #[default]
    Symbolic,
    Numeric(BigRational),
}

impl QMode {
    pub fn numeric(v: BigRational) -> Result<Self> {
        if v.is_zero() {
            return Err(MqError::InvalidSpec("q must be nonzero".into()));
        }
        Ok(QMode::Numeric(v))
    }

    /// `q = ±1`, where the algebra collapses to a commutative polynomial ring.
    pub fn is_degenerate(&self) -> bool {
        match self {
            QMode::Symbolic => false,
            QMode::Numeric(v) => v.abs().is_one(),
        }
    }
}

impl fmt::Display for QMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QMode::Symbolic => f.write_str("symbolic"),
            QMode::Numeric(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for QMode {
    type Err = MqError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("symbolic") {
            return Ok(QMode::Symbolic);
        }
        let v: BigRational = s
            .parse()
            .map_err(|_| MqError::InvalidSpec(format!("cannot parse q value `{s}`")))?;
        QMode::numeric(v)
    }
}

impl PartialOrd for QMode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (QMode::Symbolic, QMode::Symbolic) => Some(Ordering::Equal),
            (QMode::Numeric(a), QMode::Numeric(b)) => a.partial_cmp(b),
            _ => None,
        }
    }
}
