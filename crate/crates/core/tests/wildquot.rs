use frobcrys_core::fparith::{parse_fraction, Elem, Field};
use frobcrys_core::wildquot::*;
use proptest::prelude::*;

const VARS: [&str; 3] = ["x0", "x1", "x2"];
const CAP: usize = 20_000;

fn moebius(p: u64) -> CyclicAction {
    CyclicAction::moebius(&Field::prime(p).unwrap(), &VARS).unwrap()
}

#[test]
fn sigma_has_order_p() {
    for p in [2, 3, 5] {
        let a = moebius(p);
        let r = a.ring();
        for i in 0..3 {
            let x = r.var(i);
            // sigma^k(x) = x/(1 + k x)
            for k in 1..p {
                let want = x.try_div(&x.scale(Elem(k as u32)).try_add(&r.one()).unwrap()).unwrap();
                assert_eq!(a.sigma_power(&x, k).unwrap(), want);
            }
            assert_eq!(a.sigma_power(&x, p).unwrap(), x);
        }
        assert_eq!(a.sigma_apply(&r.one()).unwrap(), r.one());
    }
}

#[test]
fn class_of_one_p2() {
    for ell in 0..=1 {
        for n in 2..=8 {
            let res = class_of_one_test(&moebius(2), n, ell, CAP).unwrap();
            assert!(res.nonzero, "N = {n}, l = {ell}");
            let cert = res.certificate.as_ref().unwrap();
            assert!(cert.verified);
            assert_eq!(res.residue_check, Some(true));
            assert!(res.trace_check);
        }
    }
    assert_eq!(class_of_one_test(&moebius(2), 8, 1, CAP).unwrap().dim, 6017);
}

#[test]
fn class_of_one_odd() {
    for p in [3, 5] {
        for n in 0..=5 {
            let res = class_of_one_test(&moebius(p), n, 0, CAP).unwrap();
            assert!(res.nonzero && res.certificate.unwrap().verified, "p = {p}, N = {n}");
            assert!(res.trace_check);
        }
    }
    let r = class_of_one_test(&moebius(3), 1, 1, CAP).unwrap();
    assert!(r.nonzero);
}

#[test]
fn constants_only() {
    let r = class_of_one_test(&moebius(3), 0, 0, CAP).unwrap();
    assert_eq!((r.dim, r.image_rank, r.nonzero), (1, 0, true));
}

#[test]
fn cap_is_enforced() {
    assert!(matches!(class_of_one_test(&moebius(2), 8, 1, 1000), Err(frobcrys_core::Error::ResourceCap { .. })));
}

#[test]
fn torus_inversion_cohomology() {
    let f = Field::prime(2).unwrap();
    let t = CyclicAction::torus_inversion(&f, &["x", "y"]).unwrap();
    let r = class_of_one_test(&t, 3, 0, CAP).unwrap();
    assert!(r.trace_check);
    assert_eq!(r.fixed_point, Some(vec![Elem::ONE, Elem::ONE]));
}

#[test]
fn torus_trace_two_terms() {
    let f = Field::prime(2).unwrap();
    let t = CyclicAction::torus_inversion(&f, &["x", "y", "z"]).unwrap();
    let r = t.ring();
    let s = parse_fraction(r, "x^2*y + z").unwrap();
    let want = s.try_add(&t.sigma_apply(&s).unwrap()).unwrap();
    assert_eq!(t.trace(&s).unwrap(), want);
}

#[test]
fn monotone_in_n() {
    let a = moebius(3);
    let ranks: Vec<usize> = (0..=4).map(|n| class_of_one_test(&a, n, 0, CAP).unwrap().image_rank).collect();
    assert!(ranks.windows(2).all(|w| w[0] <= w[1]));
}

fn element(p: u64) -> impl Strategy<Value = String> {
    let _ = p;
    prop::collection::vec((0i64..5, 0u32..3, 0u32..3, 0u32..3), 1..4).prop_map(|terms| {
        terms.iter().map(|(c, a, b, d)| format!("{c}*x0^{a}*x1^{b}*x2^{d}")).collect::<Vec<_>>().join(" + ")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn trace_kills_differences(p in prop::sample::select(vec![2u64, 3, 5]), text in element(5), k in 0u32..3) {
        let a = moebius(p);
        let r = a.ring();
        let s = parse_fraction(r, &text).unwrap().try_div(&r.var(0).try_add(&r.one()).unwrap().pow(k as i64).unwrap()).unwrap();
        prop_assert!(a.trace(&a.difference(&s).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn sigma_is_multiplicative(p in prop::sample::select(vec![2u64, 3, 5]), s in element(5), t in element(5)) {
        let a = moebius(p);
        let r = a.ring();
        let (s, t) = (parse_fraction(r, &s).unwrap(), parse_fraction(r, &t).unwrap());
        let lhs = a.sigma_apply(&s.try_mul(&t).unwrap()).unwrap();
        let rhs = a.sigma_apply(&s).unwrap().try_mul(&a.sigma_apply(&t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn difference_vanishes_at_origin(p in prop::sample::select(vec![2u64, 3, 5]), s in element(5)) {
        let a = moebius(p);
        let s = parse_fraction(a.ring(), &s).unwrap();
        prop_assert_eq!(a.difference(&s).unwrap().eval(&[Elem::ZERO; 3]), Some(Elem::ZERO));
    }

    #[test]
    fn frobenius_fixes_one(e in 0u32..6, p in prop::sample::select(vec![2u64, 3, 5])) {
        let f = Field::prime(p).unwrap();
        let r = frobcrys_core::fparith::PolyRing::new(&f, &VARS);
        prop_assert_eq!(r.one().frobenius_power(e), r.one());
    }
}

#[test]
fn translation_hits_one() {
    // 1 = sigma(x) - x for x -> x + 1
    let f = Field::prime(3).unwrap();
    let a = compactification_chart(&f, &["x", "y"], CompactificationChart::Finite).unwrap();
    let r = class_of_one_test(&a, 1, 0, CAP).unwrap();
    assert!(!r.nonzero && r.certificate.is_none());
    assert_eq!(r.residue_check, None);
    assert!(class_of_one_test(&a, 0, 0, CAP).unwrap().nonzero);
}

#[test]
fn columns_match_symbolic_differences() {
    for p in [2, 3] {
        let a = moebius(p);
        let fp = filtered_difference_columns(&a, 3, 0, CAP).unwrap();
        let basis: Vec<_> = (0..fp.dim()).map(|i| fp.basis_element(&a, i).unwrap()).collect();
        for (j, col) in fp.columns.iter().enumerate().step_by(7) {
            let want = a.difference(&basis[j]).unwrap();
            let mut got = a.ring().zero();
            for &(r, c) in col {
                got = got.try_add(&basis[r].scale(c)).unwrap();
            }
            assert_eq!(got, want, "p = {p}, column {}", fp.basis_text(j));
        }
    }
}
