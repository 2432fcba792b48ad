//! Monomial actions on a torus and the log form dx_1/x_1 ^ ... ^ dx_n/x_n.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fparith::{Elem, Field, FractionRing, LocalizedFraction};

/// Pullback of omega = dlog x_1 ^ ... ^ dlog x_n under a monomial map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormPullback {
    /// Row i is the exponent vector of sigma(x_i).
    pub exponents: Vec<Vec<i64>>,
    /// Scalars c_i in sigma(x_i) = c_i x^{row i}; they do not affect dlog.
    pub scalars: Vec<Elem>,
    pub determinant: i64,
    /// sigma^* omega = det * omega, read in the base field.
    pub factor: Elem,
    pub invariant: bool,
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

/// sigma^*(dlog x_i) = sum_j a_ij dlog x_j, so sigma^* omega = det(a) omega.
/// The ring must be a Laurent ring (atom i is the generator x_i).
pub fn char2_form_pullback(ring: &FractionRing, images: &[LocalizedFraction]) -> Result<FormPullback> {
    let n = ring.nvars();
    let laurent = ring.atoms().len() == n && (0..n).all(|i| ring.atoms()[i] == ring.poly().var(i));
    if !laurent || images.len() != n {
        return Err(Error::Unsupported("monomial pullback needs a Laurent ring and one image per generator".into()));
    }
    let mut exponents = Vec::with_capacity(n);
    let mut scalars = Vec::with_capacity(n);
    for img in images {
        let (c, row) = img
            .unit_factorization()
            .ok_or_else(|| Error::Unsupported(alloc::format!("{img} is not a Laurent monomial")))?;
        exponents.push(row);
        scalars.push(c);
    }
    let determinant = det(&exponents);
    let field = ring.field();
    let factor = field.from_int(determinant);
    Ok(FormPullback { exponents, scalars, determinant, factor, invariant: factor == Elem::ONE })
}

/// x^exps * omega with a scalar coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogForm {
    pub coeff: Elem,
    pub exps: Vec<i64>,
}

impl LogForm {
    pub fn omega(n: usize) -> LogForm {
        LogForm { coeff: Elem::ONE, exps: alloc::vec![0; n] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }
}

/// The Cartier operator on log monomials: x^a omega -> x^{a/p} omega when p
/// divides every exponent, else 0.
pub fn cartier_laurent(field: &Field, form: &LogForm) -> LogForm {
    let p = field.characteristic() as i64;
    if form.is_zero() || form.exps.iter().any(|&a| a.rem_euclid(p) != 0) {
        return LogForm { coeff: Elem::ZERO, exps: alloc::vec![0; form.exps.len()] };
    }
    LogForm { coeff: field.p_root(form.coeff), exps: form.exps.iter().map(|&a| a / p).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fparith::parse_fraction;

    #[test]
    fn inversion_and_cartier() {
        let f2 = Field::prime(2).unwrap();
        let r = FractionRing::laurent(&f2, &["x", "y", "z"]).unwrap();
        let inv: Vec<_> = (0..3).map(|i| r.var(i).inverse().unwrap()).collect();
        let v = char2_form_pullback(&r, &inv).unwrap();
        assert_eq!(v.determinant, -1);
        assert!(v.invariant);
        let f3 = Field::prime(3).unwrap();
        let r3 = FractionRing::laurent(&f3, &["x", "y", "z"]).unwrap();
        let imgs = [r3.var(0).inverse().unwrap(), r3.var(1), r3.var(2)];
        assert!(!char2_form_pullback(&r3, &imgs).unwrap().invariant);
        let bad = [parse_fraction(&r, "x + 1").unwrap(), r.var(1), r.var(2)];
        assert!(char2_form_pullback(&r, &bad).is_err());
        assert_eq!(cartier_laurent(&f2, &LogForm::omega(3)), LogForm::omega(3));
        assert!(cartier_laurent(&f2, &LogForm { coeff: Elem::ONE, exps: alloc::vec![1, 0, 0] }).is_zero());
        let c = cartier_laurent(&f2, &LogForm { coeff: Elem::ONE, exps: alloc::vec![2, 2, 2] });
        assert_eq!(c.exps, alloc::vec![1, 1, 1]);
    }
}
