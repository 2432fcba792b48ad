//! Actions of Z/p = <sigma> on localized polynomial and Laurent rings: the
//! difference elements I(s) = sigma(s) - s, fixed-scheme ideals on blow-up
//! charts, the trace, truncated group cohomology and the monomial torus
//! action with its invariant log form.

mod action;
mod chart;
mod cohomology;
mod torus;

pub use action::{
    compactification_chart, difference, sigma_apply, trace, ActionKind, CompactificationChart, CyclicAction,
};
pub use chart::{
    blowup_chart, fixed_scheme_ideal, fixed_scheme_ideal_of, normalize_generator, principality_locus, ChartAction,
    FixedSchemeIdeal, PrincipalityReport,
};
pub use cohomology::{class_of_one_test, filtered_difference_columns, Certificate, ClassOfOneResult, FilteredPiece};
pub use torus::{cartier_laurent, char2_form_pullback, FormPullback, LogForm};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fparith::{parse_fraction, parse_poly, Elem, Field};
    use alloc::vec;
    use alloc::vec::Vec;

    const VARS: [&str; 3] = ["x0", "x1", "x2"];

    fn chart(p: u64) -> ChartAction {
        let f = Field::prime(p).unwrap();
        blowup_chart(&CyclicAction::moebius(&f, &VARS).unwrap(), 0).unwrap()
    }

    #[test]
    fn differences_on_the_chart() {
        let c = chart(2);
        let r = c.ring();
        assert_eq!(r.poly().vars(), ["x0", "w1", "w2"]);
        let ix = c.action.difference(&r.var(0)).unwrap();
        assert_eq!(ix, parse_fraction(r, "-x0^2/(1+x0)").unwrap());
        let iw = c.action.difference(&r.var(1)).unwrap();
        assert_eq!(iw, parse_fraction(r, "-x0*w1*(w1-1)/(1+x0*w1)").unwrap());
        assert_eq!(c.action.images()[1], parse_fraction(r, "w1*(1+x0)/(1+x0*w1)").unwrap());
        assert!(c.action.difference(&r.one()).unwrap().is_zero());
        assert!(c.verify_overlap().unwrap());
    }

    #[test]
    fn fixed_ideal_for_small_primes() {
        for p in [2, 3, 5, 7] {
            let c = chart(p);
            let want: Vec<_> = ["x0^2", "x0*w1^2 - x0*w1", "x0*w2^2 - x0*w2"]
                .iter()
                .map(|t| parse_poly(c.ring().poly(), t).unwrap())
                .collect();
            assert_eq!(fixed_scheme_ideal(&c).unwrap().generators, want, "p = {p}");
        }
        let f = Field::prime(3).unwrap();
        let r = crate::fparith::FractionRing::laurent(&f, &VARS).unwrap();
        let t = CyclicAction::trivial(ActionKind::LaurentTorus, &r).unwrap();
        assert!(fixed_scheme_ideal_of(&t).unwrap().is_zero());
    }

    #[test]
    fn nonprincipal_points() {
        let c = chart(2);
        let ideal = fixed_scheme_ideal(&c).unwrap();
        let rep = principality_locus(c.ring(), &ideal).unwrap();
        let (z, o) = (Elem::ZERO, Elem::ONE);
        assert_eq!(rep.nonprincipal_points, vec![vec![z, z, z], vec![z, z, o], vec![z, o, z], vec![z, o, o]]);
    }

    #[test]
    fn chart_symmetry() {
        let f = Field::prime(3).unwrap();
        let a = CyclicAction::moebius(&f, &VARS).unwrap();
        let c0 = blowup_chart(&a, 0).unwrap();
        let c1 = blowup_chart(&a, 1).unwrap();
        // both charts carry the same formulas in their own coordinates
        assert_eq!(c0.action.image_texts(), c1.action.image_texts().iter().map(|t| {
            t.replace("x1", "x0").replace("w0", "w1")
        }).collect::<Vec<_>>());
    }

    #[test]
    fn traces() {
        let f = Field::prime(5).unwrap();
        let a = CyclicAction::moebius(&f, &VARS).unwrap();
        let r = a.ring();
        assert!(a.trace(&r.one()).unwrap().is_zero());
        let s = parse_fraction(r, "x0^2*x1 + 3*x2").unwrap();
        assert!(a.trace(&a.difference(&s).unwrap()).unwrap().is_zero());
        let f2 = Field::prime(2).unwrap();
        let t = CyclicAction::torus_inversion(&f2, &["x", "y", "z"]).unwrap();
        let x = t.ring().var(0);
        assert_eq!(t.trace(&x).unwrap(), x.try_add(&x.inverse().unwrap()).unwrap());
        assert!(CyclicAction::torus_inversion(&Field::prime(3).unwrap(), &["x"]).is_err());
    }

    #[test]
    fn compactification_overlap() {
        let f = Field::prime(3).unwrap();
        let fin = compactification_chart(&f, &["x"], CompactificationChart::Finite).unwrap();
        let inf = compactification_chart(&f, &["t"], CompactificationChart::Infinity).unwrap();
        // t = 1/x: sigma(t) = 1/(x + 1) = t/(1 + t)
        let x = fin.ring().var(0);
        let lhs = fin.sigma_apply(&x).unwrap();
        assert_eq!(lhs, parse_fraction(fin.ring(), "x + 1").unwrap());
        assert_eq!(inf.images()[0], parse_fraction(inf.ring(), "t/(1+t)").unwrap());
    }
}
