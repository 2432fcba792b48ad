//! Exact arithmetic: finite fields, multivariate polynomials, localized
//! fractions and their canonical text forms.

mod field;
mod fraction;
mod parse;
mod poly;

pub use field::{is_prime, Elem, Embedding, Field, MAX_ORDER};
pub use fraction::{eval_poly_at, fraction_combine, CombineOp, FractionRing, LocalizedFraction};
pub use parse::{parse_fraction, parse_into, parse_poly, ParseTarget};
pub use poly::{gcd, Exps, MonomialOrder, MultiPoly, PolyRing};

/// f^{p^e}.
pub fn frobenius_power(f: &MultiPoly, e: u32) -> MultiPoly {
    f.frobenius_power(e)
}

/// The coefficient of `monomial` in `f` (zero when absent).
pub fn coefficient_of(f: &MultiPoly, monomial: &[u32]) -> Elem {
    f.coefficient_of(monomial)
}

/// Remainder of `f` modulo a single homogeneous relation.
pub fn normal_form(f: &MultiPoly, relation: &MultiPoly, order: MonomialOrder) -> crate::Result<MultiPoly> {
    f.normal_form(relation, order)
}
