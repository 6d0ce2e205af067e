use mqalg::mq::quantum_determinant;
use mqalg::testing::{from_map, WordOracle};
use mqalg::{build_mq, MqSpec, Polynomial, QMode};

#[test]
fn determinant_is_central() {
    for n in 2..=3 {
        let spec = MqSpec::symbolic(n).unwrap();
        let sys = build_mq(&spec).unwrap();
        let det = quantum_determinant(&spec, &sys).unwrap();
        assert_eq!(det.len(), (1..=n).product::<usize>());
        for k in 0..n * n {
            let z = Polynomial::generator(n * n, k);
            let left = sys.poly_mul(&z, &det).unwrap();
            let right = sys.poly_mul(&det, &z).unwrap();
            assert_eq!(left, right, "n = {n}, generator {}", sys.name(k));
        }
    }
}

#[test]
fn determinant_matches_word_rewriting() {
    let spec = MqSpec::symbolic(3).unwrap();
    let sys = build_mq(&spec).unwrap();
    let det = quantum_determinant(&spec, &sys).unwrap();
    let oracle = WordOracle::new(3, &QMode::Symbolic);
    for k in [0, 4, 8, 2, 6] {
        let z = Polynomial::generator(9, k);
        let commutator = from_map(9, &oracle.product(&z, &det)).sub(&from_map(9, &oracle.product(&det, &z))).unwrap();
        assert!(commutator.is_zero());
    }
}
