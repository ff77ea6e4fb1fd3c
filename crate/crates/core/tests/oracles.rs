use monodromy::classify::explore::two_vector_trace;
use monodromy::classify::nonexistence::{eta_derivation, search_eta_fixed, search_tau_fixed};
use monodromy::classify::{
    classify_rotation_invariant, oracle_rotation_invariant, reports_agree, trace_polynomial,
    CanonicalC,
};
use monodromy::hurwitz::{
    decide_sim_conjugacy, hurwitz_move, period3_tuple, rotate, solve_shift_conjugator,
    standard_tuple, ConjugacyWitness, Direction,
};
use monodromy::intpoly::{
    express_in_norm, jacobian, n3, n4, sixth_power_sum, BiPoly, UniPoly,
};
use monodromy::sl2z::{
    abelianize, conjugate, order_by_iteration, order_of, primitive_vectors, solve_vector_transporter,
    transvection, transvection_vector, InfiniteKind, Mat2, MatOrder, PrimVec,
};
use monodromy::Error;
use num_bigint::BigInt;

fn v(p: i64, q: i64) -> PrimVec {
    PrimVec::new(p, q).unwrap()
}

#[test]
fn transvection_table() {
    assert_eq!(transvection(&v(1, 0)), Mat2::new(1, -1, 0, 1));
    assert_eq!(transvection(&v(0, 1)), Mat2::new(1, 0, 1, 1));
    assert_eq!(transvection(&v(1, 1)), Mat2::new(2, -1, 1, 0));
    assert_eq!(transvection(&v(-1, 0)), transvection(&v(1, 0)));
}

#[test]
fn transvection_recognition() {
    assert_eq!(transvection_vector(&Mat2::new(1, -1, 0, 1)).unwrap(), v(1, 0));
    assert!(matches!(
        transvection_vector(&Mat2::identity()),
        Err(Error::NotATransvection)
    ));
    let m = Mat2::new(1, -4, 0, 1);
    assert!(matches!(transvection_vector(&m), Err(Error::NotATransvection)));
    assert!(primitive_vectors(5).iter().all(|w| transvection(w) != m));
}

#[test]
fn conjugation_table() {
    let t = transvection(&v(1, 0));
    assert_eq!(conjugate(&Mat2::c4(), &t).unwrap(), transvection(&v(0, 1)));
    assert_eq!(conjugate(&Mat2::c6(), &t).unwrap(), transvection(&v(1, 1)));
    assert_eq!(conjugate(&Mat2::identity(), &t).unwrap(), t);
}

#[test]
fn order_table() {
    assert_eq!(order_of(&Mat2::c4()).unwrap(), MatOrder::Finite(4));
    assert_eq!(order_of(&Mat2::c3()).unwrap(), MatOrder::Finite(3));
    let par = MatOrder::Infinite(InfiniteKind::Parabolic);
    assert_eq!(order_of(&Mat2::new(1, -1, 0, 1)).unwrap(), par);
    let m = &transvection(&v(1, 1)) * &transvection(&v(-1, 1));
    assert_eq!(m, Mat2::new(-1, -4, 0, -1));
    assert_eq!(order_of(&m).unwrap(), par);
    assert_eq!(order_by_iteration(&m, 24), None);
}

#[test]
fn abelianization_table() {
    assert_eq!(abelianize(&Mat2::identity()).unwrap(), 0);
    assert_eq!(abelianize(&Mat2::new(1, 1, 0, 1)).unwrap(), 1);
    for w in primitive_vectors(10) {
        assert_eq!(abelianize(&transvection(&w)).unwrap(), 11);
    }
}

#[test]
fn transporter_table() {
    let t = solve_vector_transporter(&v(1, 0), &v(1, 0));
    assert_eq!(t.particular, Mat2::identity());
    let t = solve_vector_transporter(&v(1, 0), &v(0, 1));
    assert!((-3..=3).any(|k| t.member(k) == Mat2::c4()));
    let t = solve_vector_transporter(&v(1, 0), &v(2, 1));
    let m = t.particular;
    assert_eq!((m.a().clone(), m.c().clone()), (BigInt::from(2), BigInt::from(1)));
    assert_eq!(m.det(), BigInt::from(1));
}

#[test]
fn polynomial_table() {
    assert_eq!(&n4() * &BiPoly::one(), n4());
    assert_eq!((&n3() * &n3()).eval_i64(2, 1), BigInt::from(9));
    assert!((&n4() - &n4()).is_zero());
    assert_eq!(n4().substitute_linear(&Mat2::c4()), n4());
    assert_eq!(n3().substitute_linear(&Mat2::c6()), n3());
    assert_eq!(BiPoly::x().substitute_linear(&Mat2::swap()), BiPoly::y());
    assert_eq!(n3().eval_i64(1, 0), BigInt::from(1));
    assert_eq!(n3().eval_i64(2, 1), BigInt::from(3));
    assert_eq!(n4().eval_i64(1, 1), BigInt::from(2));
}

#[test]
fn jacobian_table() {
    let x2y2 = BiPoly::monomial(1, 2, 2);
    assert_eq!(
        jacobian(&n4(), &x2y2),
        BiPoly::from_terms([(4, 3, 1), (-4, 1, 3)])
    );
    assert!(jacobian(&n3(), &n3()).is_zero());
    let j = jacobian(&n3(), &sixth_power_sum());
    let factor = BiPoly::from_terms([(2, 1, 0), (-1, 0, 1)]) * BiPoly::from_terms([(2, 0, 1), (-1, 1, 0)]);
    assert!(!j.is_zero());
    assert!(j.div_exact(&factor).is_some());
}

#[test]
fn sixth_power_sum_values() {
    let s = sixth_power_sum();
    assert_eq!(s.eval_i64(1, 0), BigInt::from(2));
    assert_eq!(s.eval_i64(0, 1), BigInt::from(2));
    // 1 + w = -w^2 is a sixth root of unity
    assert_eq!(s.eval_i64(1, 1), BigInt::from(2));
}

#[test]
fn head_and_norm_expressions() {
    let f4 = trace_polynomial(CanonicalC::C4);
    assert_eq!(f4.homogeneous_part(4), -(&n4() * &n4()));
    assert_eq!(BiPoly::from_terms([(1, 0, 0)]).homogeneous_part(0), BiPoly::one());
    assert_eq!(
        express_in_norm(&trace_polynomial(CanonicalC::C3), &n3()).unwrap(),
        UniPoly::new([2, 0, -3, -1])
    );
    assert_eq!(
        express_in_norm(&trace_polynomial(CanonicalC::C6), &n3()).unwrap(),
        UniPoly::new([2, 0, -3, 1])
    );
    assert!(matches!(
        express_in_norm(&BiPoly::x(), &n3()),
        Err(Error::NotExpressible)
    ));
    assert_eq!(trace_polynomial(CanonicalC::C4).eval_i64(1, 0), BigInt::from(1));
    assert_eq!(trace_polynomial(CanonicalC::C3).eval_i64(1, 0), BigInt::from(-2));
}

#[test]
fn tuple_table() {
    let y = standard_tuple(12).unwrap();
    assert_eq!(y.entries()[0], Mat2::new(1, -1, 0, 1));
    assert_eq!(y.entries()[1], Mat2::new(1, 0, 1, 1));
    assert!(standard_tuple(24).unwrap().product().is_identity());
    assert!(matches!(standard_tuple(13), Err(Error::NotRealizable { .. })));
    assert!(matches!(period3_tuple(6), Err(Error::NotRealizable { .. })));
    let z = period3_tuple(12).unwrap();
    assert_eq!(z.len(), 12);
    assert!(z.product().is_identity());

    let moved = hurwitz_move(&y, 1, Direction::Forward).unwrap();
    assert_eq!(moved.entries()[0], Mat2::new(0, -1, 1, 2));
    let back = hurwitz_move(&moved, 1, Direction::Backward).unwrap();
    assert_eq!(back, y);
}

#[test]
fn conjugacy_table() {
    let y = standard_tuple(12).unwrap();
    let z = period3_tuple(12).unwrap();
    assert_eq!(
        decide_sim_conjugacy(&y, &y).unwrap(),
        ConjugacyWitness::Found {
            conjugator: Mat2::identity()
        }
    );
    let c = decide_sim_conjugacy(&y, &rotate(&y).unwrap()).unwrap();
    let c = c.conjugator().unwrap();
    assert!(*c == Mat2::c4() || *c == -Mat2::c4());
    assert_eq!(decide_sim_conjugacy(&y, &z).unwrap(), ConjugacyWitness::NotConjugate);

    let c = solve_shift_conjugator(&y, 1).unwrap();
    assert_eq!(order_of(c.conjugator().unwrap()).unwrap(), MatOrder::Finite(4));
    let c = solve_shift_conjugator(&z, 1).unwrap();
    assert_eq!(order_of(c.conjugator().unwrap()).unwrap(), MatOrder::Finite(6));
}

#[test]
fn classification_counts() {
    for n in [12, 24] {
        let classes = classify_rotation_invariant(n).unwrap();
        assert_eq!(classes.len(), 2);
        assert!(reports_agree(&classes, &oracle_rotation_invariant(n, 5).unwrap()));
    }
    assert!(classify_rotation_invariant(14).unwrap().is_empty());
    assert!(oracle_rotation_invariant(13, 5).unwrap().is_empty());
}

#[test]
fn nonexistence_table() {
    assert!(search_tau_fixed(12, 5).unwrap().solutions.is_empty());
    assert!(search_tau_fixed(24, 4).unwrap().solutions.is_empty());
    assert!(search_tau_fixed(1, 3).unwrap().solutions.is_empty());
    assert!(search_eta_fixed(12, 5).unwrap().solutions.is_empty());
    assert!(search_eta_fixed(24, 4).unwrap().solutions.is_empty());
    let d = eta_derivation(4);
    assert_eq!(d.contradiction.as_deref(), Some("1 - n = 1 forces n = 0"));
}

#[test]
fn two_vector_traces() {
    assert_eq!(two_vector_trace(CanonicalC::C4, &v(1, 0), &v(1, 0)), BigInt::from(-2));
    // tr((Y1 Y2)^2) with Y1 Y2 of order 6
    assert_eq!(two_vector_trace(CanonicalC::C4, &v(1, 0), &v(0, 1)), BigInt::from(-2));
    let y1y2 = &transvection(&v(1, 0)) * &transvection(&v(0, 1));
    assert_eq!(order_of(&y1y2).unwrap(), MatOrder::Finite(6));
    assert_eq!((&y1y2 * &y1y2).trace(), BigInt::from(-1));
}
