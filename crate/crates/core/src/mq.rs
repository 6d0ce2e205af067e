//! The commutation table of M_q(n).
//!
//! For generators `z[i,j] < z[s,t]` (linear order) the ascending product is
//! rewritten according to the index pattern:
//!
//! | pattern            | rewrite of `z[i,j] * z[s,t]`                          |
//! |--------------------|-------------------------------------------------------|
//! | `i = s, j < t`     | `q z[s,t] z[i,j]`                                     |
//! | `i < s, j = t`     | `q z[s,t] z[i,j]`                                     |
//! | `i < s, t < j`     | `z[s,t] z[i,j]`                                       |
//! | `i < s, j < t`     | `z[s,t] z[i,j] + (q - q^{-1}) z[s,j] z[i,t]`          |

use serde::Serialize;

use crate::coeff::{QMode, QRat};
use crate::error::{MqError, Result};
use crate::pbw::{GeneratorId, Monomial, MonomialOrder, Polynomial};
use crate::straighten::{validate_solvability, CommutationSystem};

/// Parameters of M_q(n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MqSpec {
    pub n: usize,
    pub qmode: QMode,
}

impl MqSpec {
    pub fn new(n: usize, qmode: QMode) -> Result<Self> {
        let spec = MqSpec { n, qmode };
        spec.check()?;
        Ok(spec)
    }

    pub fn symbolic(n: usize) -> Result<Self> {
        Self::new(n, QMode::Symbolic)
    }

    fn check(&self) -> Result<()> {
        if self.n < 2 {
            return Err(MqError::InvalidSpec(format!("n must be at least 2, got {}", self.n)));
        }
        if self.n > 8 {
            return Err(MqError::InvalidSpec(format!("n = {} exceeds the supported maximum 8", self.n)));
        }
        if let QMode::Numeric(v) = &self.qmode {
            if num_traits::Zero::is_zero(v) {
                return Err(MqError::InvalidSpec("q must be nonzero".into()));
            }
        }
        Ok(())
    }

    pub fn num_gens(&self) -> usize {
        self.n * self.n
    }

    /// Human-readable warnings about the chosen parameters.
    pub fn warnings(&self) -> Vec<String> {
        if self.qmode.is_degenerate() {
            vec![format!("q = {} makes M_q({}) commutative", self.qmode, self.n)]
        } else {
            Vec::new()
        }
    }
}

/// Which defining relation governs a generator pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RelationKind {
    /// Same row.
    R1,
    /// Same column.
    R2,
    /// Anti-diagonal pair: commute.
    R3,
    /// Diagonal pair: commute up to the cross term.
    R4,
}

/// Classifies the pair `small < big` (linear indices).
pub fn classify_pair(small: GeneratorId, big: GeneratorId) -> RelationKind {
    debug_assert!(small.linear < big.linear);
    if small.row == big.row {
        RelationKind::R1
    } else if small.col == big.col {
        RelationKind::R2
    } else if big.col < small.col {
        RelationKind::R3
    } else {
        RelationKind::R4
    }
}

/// Builds and validates the commutation table of M_q(n).
pub fn build_mq(spec: &MqSpec) -> Result<CommutationSystem> {
    spec.check()?;
    let n = spec.n;
    let nvars = spec.num_gens();
    let mut sys = CommutationSystem::new(nvars, spec.qmode.clone());
    for small in 0..nvars {
        for big in small + 1..nvars {
            let (a, b) = (GeneratorId::from_linear(small, n), GeneratorId::from_linear(big, n));
            let (lambda, tail) = match classify_pair(a, b) {
                RelationKind::R1 | RelationKind::R2 => (QRat::q(), Polynomial::zero(nvars)),
                RelationKind::R3 => (QRat::one(), Polynomial::zero(nvars)),
                RelationKind::R4 => {
                    // z[s,j] z[i,t] with (i,j) = a, (s,t) = b; already descending.
                    let sj = (b.row - 1) * n + (a.col - 1);
                    let it = (a.row - 1) * n + (b.col - 1);
                    let cross = Monomial::generator(nvars, sj).with_generator(it);
                    (QRat::one(), Polynomial::term(QRat::q_minus_q_inv(), cross))
                }
            };
            sys.set_rule(small, big, lambda, tail)?;
        }
    }
    let report = validate_solvability(&sys, &MonomialOrder::PaperLex)?;
    if !report.verdict {
        return Err(MqError::InvalidSpec(format!(
            "table failed solvability validation: {:?}",
            report.witnesses
        )));
    }
    Ok(sys)
}

/// One row of the table dump.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationEntry {
    pub lhs: String,
    pub kind: RelationKind,
    pub lambda: String,
    pub leading: String,
    pub tail: String,
}

/// The table of an M_q(n) system in printable form, one entry per
/// ascending generator pair.
pub fn relation_table(sys: &CommutationSystem) -> Vec<RelationEntry> {
    let nvars = sys.nvars();
    let n = crate::pbw::matrix_dim(nvars).expect("matrix algebra");
    let mut out = Vec::new();
    for small in 0..nvars {
        for big in small + 1..nvars {
            let Some(rule) = sys.rule(small, big) else { continue };
            let (a, b) = (GeneratorId::from_linear(small, n), GeneratorId::from_linear(big, n));
            out.push(RelationEntry {
                lhs: format!("{}*{}", sys.name(small), sys.name(big)),
                kind: classify_pair(a, b),
                lambda: rule.lambda.to_string(),
                leading: Monomial::generator(nvars, small).with_generator(big).to_string(),
                tail: rule.tail.to_string(),
            });
        }
    }
    out
}

/// The quantum determinant
/// `sum over permutations s of (-q)^inv(s) z[1,s(1)] z[2,s(2)] ... z[n,s(n)]`,
/// a central element used as a test fixture.
#[cfg(any(test, feature = "fixtures"))]
pub fn quantum_determinant(spec: &MqSpec, sys: &CommutationSystem) -> Result<Polynomial> {
    use itertools::Itertools;
    spec.check()?;
    let n = spec.n;
    let mut acc = Polynomial::zero(n * n);
    for perm in (0..n).permutations(n) {
        let inversions = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| perm[a] > perm[b])
            .count() as i64;
        let sign = if inversions % 2 == 0 { QRat::one() } else { QRat::from_integer(-1) };
        let coeff = sys.coeff(&(&sign * &QRat::q_pow(inversions)))?;
        let word: Vec<usize> = perm.iter().enumerate().map(|(row, &col)| row * n + col).collect();
        acc = acc.add(&sys.word_product(&word)?.scale(&coeff))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbw::Term;

    fn m(exps: &[u32]) -> Monomial {
        Monomial::from_exps(exps.to_vec()).unwrap()
    }

    #[test]
    fn mq2_table_entries() {
        let sys = build_mq(&MqSpec::symbolic(2).unwrap()).unwrap();
        let r = sys.rule(0, 1).unwrap();
        assert_eq!(r.lambda, QRat::q());
        assert!(r.tail.is_zero());
        let r = sys.rule(0, 3).unwrap();
        assert_eq!(r.lambda, QRat::one());
        assert_eq!(r.tail, Polynomial::term(QRat::q_minus_q_inv(), m(&[0, 1, 1, 0])));
        let r = sys.rule(1, 2).unwrap();
        assert_eq!(r.lambda, QRat::one());
        assert!(r.tail.is_zero());
    }

    #[test]
    fn relation_patterns_partition_pairs() {
        for n in 2..=4 {
            let nvars = n * n;
            let mut counts = std::collections::HashMap::new();
            for small in 0..nvars {
                for big in small + 1..nvars {
                    let k = classify_pair(GeneratorId::from_linear(small, n), GeneratorId::from_linear(big, n));
                    *counts.entry(k).or_insert(0usize) += 1;
                }
            }
            let total: usize = counts.values().sum();
            assert_eq!(total, nvars * (nvars - 1) / 2);
            // n rows with C(n,2) pairs each, same for columns, C(n,2)^2 for each diagonal kind
            let c2 = n * (n - 1) / 2;
            assert_eq!(counts[&RelationKind::R1], n * c2);
            assert_eq!(counts[&RelationKind::R2], n * c2);
            assert_eq!(counts[&RelationKind::R3], c2 * c2);
            assert_eq!(counts[&RelationKind::R4], c2 * c2);
            let sys = build_mq(&MqSpec::symbolic(n).unwrap()).unwrap();
            assert_eq!(relation_table(&sys).len(), nvars * (nvars - 1) / 2);
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(MqSpec::symbolic(1).is_err());
        assert!(MqSpec::new(2, QMode::Numeric(num_rational::BigRational::from_integer(0.into()))).is_err());
        let spec = MqSpec::new(2, "1".parse().unwrap()).unwrap();
        assert_eq!(spec.warnings().len(), 1);
        assert!(build_mq(&spec).is_ok());
    }

    #[test]
    fn determinant_n2() {
        let spec = MqSpec::symbolic(2).unwrap();
        let sys = build_mq(&spec).unwrap();
        let det = quantum_determinant(&spec, &sys).unwrap();
        let expected = Polynomial::canonicalize(
            4,
            vec![Term::new(QRat::one(), m(&[1, 0, 0, 1])), Term::new(-QRat::q_pow(-1), m(&[0, 1, 1, 0]))],
        )
        .unwrap();
        assert_eq!(det, expected);
    }
}
