use frobcrys_core::conegr::*;
use frobcrys_core::fparith::{parse_poly, Field, PolyRing};
use frobcrys_core::gradedcoh::SectionRing;

const SS: &str = "y^2*z + y*z^2 + x^3";
const ORD: &str = "y^2*z + x*y*z + x^3 + z^3";

fn cubic(text: &str) -> SectionRing {
    let r = PolyRing::new(&Field::prime(2).unwrap(), &["x", "y", "z"]);
    SectionRing::plane_curve(&parse_poly(&r, text).unwrap()).unwrap()
}

fn bases() -> Vec<SectionRing> {
    let f = Field::prime(2).unwrap();
    vec![
        SectionRing::projective_space(&f, 1, 1).unwrap(),
        SectionRing::projective_space(&f, 2, 1).unwrap(),
        cubic(SS),
    ]
}

#[test]
fn gr_nilpotent_with_e0_one() {
    for base in bases() {
        for i in 1..=base.base_dim() {
            let spec = ConeSpec::new(base.clone(), 4, 2, i).unwrap();
            let v = decide_gr_nilpotent(&spec, i).unwrap();
            assert_eq!((v.nilpotent, v.e0), (true, Some(1)), "{} i={i}", base.describe());
        }
    }
}

#[test]
fn psi_zero_pattern() {
    for base in bases() {
        let spec = ConeSpec::new(base.clone(), 8, 2, 1).unwrap();
        for m in 1..=2 {
            for e in 1..=2u32 {
                let t = gr_trace_module(&spec, m, e).unwrap();
                t.check_structure().unwrap();
                let q = 2i64.pow(e);
                for (&r, psi) in &t.psi {
                    assert_eq!(matches!(psi, Psi::Trace { .. }), r % q == 0, "r={r} e={e}");
                }
            }
        }
    }
}

#[test]
fn trace_composition_law() {
    for base in bases() {
        let spec = ConeSpec::new(base, 16, 4, 1).unwrap();
        for (e1, e2) in [(1, 1), (1, 2), (2, 1)] {
            for m in 1..=2i64 {
                let outer = gr_trace_module(&spec, m, e1).unwrap();
                let inner = gr_trace_module(&spec, m * 2i64.pow(e1), e2).unwrap();
                let whole = gr_trace_module(&spec, m, e1 + e2).unwrap();
                for (k, mat) in compose_stages(&spec, &outer, &inner).unwrap() {
                    assert_eq!(Some(&mat), whole.trace_matrix(k));
                }
            }
        }
    }
}

#[test]
fn rationality_verdicts() {
    let ss = is_fp_rational_cone(&ConeSpec::new(cubic(SS), 4, 1, 1).unwrap()).unwrap();
    assert!(ss.rational && !ss.vacuous);
    let ord = is_fp_rational_cone(&ConeSpec::new(cubic(ORD), 4, 1, 1).unwrap()).unwrap();
    assert!(!ord.rational);
    let p2 = is_fp_rational_cone(&ConeSpec::new(bases()[1].clone(), 4, 1, 1).unwrap()).unwrap();
    assert!(p2.rational && p2.vacuous);
}

#[test]
fn direct_image_degrees() {
    let spec = ConeSpec::new(cubic(SS), 6, 1, 1).unwrap();
    let hdi = cone_higher_direct_image(&spec).unwrap();
    for (&n, m) in &hdi.module.maps {
        assert_eq!(m.cols(), hdi.module.dim(n).unwrap());
        assert_eq!(m.rows(), hdi.module.dim(2 * n).unwrap());
    }
    let rows = direct_image_table(&spec).unwrap();
    assert_eq!(rows.iter().filter(|r| r.dim > 0).count(), 1);
    let canon = canonical_dimension_table(&spec).unwrap();
    assert!(canon.iter().filter(|r| r.i == 0).all(|r| r.dim == 3 * r.degree as usize));
}

#[test]
fn duality_over_windows() {
    let f = Field::prime(2).unwrap();
    for base in [cubic(SS), SectionRing::projective_space(&f, 1, 1).unwrap()] {
        let spec = ConeSpec::new(base.clone(), 4, 1, 1).unwrap();
        for i in 0..=spec.cone_dim() {
            let small = duality_crosscheck(&spec, i, 4).unwrap();
            let big = duality_crosscheck(&spec, i, 8).unwrap();
            assert!(big.hypothesis_met && big.consistent, "{} i={i}", base.describe());
            assert_eq!(big.pairs.len(), 17);
            // an emitted verdict never flips when the window grows
            for pr in &small.pairs {
                let other = big.pairs.iter().find(|q| q.n == pr.n).unwrap();
                if pr.frobenius.nilpotent.is_some() {
                    assert_eq!(pr.frobenius.nilpotent, other.frobenius.nilpotent);
                }
            }
        }
    }
}
