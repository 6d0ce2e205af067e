//! Exact computer algebra for the standard quantized matrix algebra M_q(n).
//!
//! M_q(n) is generated by `z[i,j]` (1 <= i, j <= n) over the field ℚ(q) and
//! is a solvable polynomial algebra: its PBW basis of descending words,
//! together with the lexicographic ordering on those words, admits a left
//! Gröbner basis theory. The crate provides
//!
//! * [`coeff`]: exact arithmetic in ℚ(q), optionally specialized to `q = v`;
//! * [`pbw`]: monomials, the monomial ordering and canonical polynomials;
//! * [`straighten`]: multiplication of normal forms for any commutation table,
//!   plus validators for the solvable-algebra axioms;
//! * [`mq`]: the table of M_q(n) itself;
//! * [`groebner`]: left division, Buchberger completion and membership;
//! * [`dimension`]: Hilbert functions, GK dimension and elimination.
//!
//! ```
//! use mqalg::{build_mq, MqSpec, Polynomial};
//!
//! let sys = build_mq(&MqSpec::symbolic(2).unwrap()).unwrap();
//! let z11 = Polynomial::generator(4, 0);
//! let z22 = Polynomial::generator(4, 3);
//! let p = sys.poly_mul(&z11, &z22).unwrap();
//! assert_eq!(p.to_string(), "z[2,2]*z[1,1] + (q^2-1)/q*z[2,1]*z[1,2]");
//! ```

pub mod coeff;
pub mod dimension;
pub mod error;
pub mod groebner;
pub mod mq;
pub mod pbw;
pub mod straighten;
#[cfg(any(test, feature = "fixtures"))]
pub mod testing;

pub use coeff::{QMode, QPoly, QRat};
pub use dimension::{
    check_elimination_bound, eliminate_prefix, gk_dimension, hilbert_count, hilbert_series, leading_staircase,
    EliminationReport, PrefixSubset, Staircase,
};
pub use error::{MqError, Result};
pub use groebner::{
    buchberger, ideal_member, interreduce, left_divide, left_spoly, Division, GbFailure, GbLimits, GbStats,
    GroebnerBasis,
};
pub use mq::{build_mq, classify_pair, relation_table, MqSpec, RelationKind};
pub use pbw::{
    compare_monomials, compare_word_lex, gen_index, mono_divides, mono_lcm, poly_add, poly_canonicalize, GeneratorId,
    Monomial, MonomialComparator, MonomialOrder, Polynomial, Term,
};
pub use straighten::{scalar_mul, validate_ordering, validate_solvability, CommutationSystem, ValidationReport};
