//! Localizations F_q[x][S^{-1}] where S is generated by a finite, declared
//! set of irreducible "atoms".

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::field::{Elem, Field};
use super::poly::{MonomialOrder, MultiPoly, PolyRing};
use crate::error::{Error, Result};

struct FractionRingData {
    poly: PolyRing,
    atoms: Vec<MultiPoly>,
}

/// A polynomial ring with a finite set of inverted atoms. Atoms are stored
/// monic in lex order and are assumed irreducible and pairwise coprime.
#[derive(Clone)]
pub struct FractionRing(Arc<FractionRingData>);

impl PartialEq for FractionRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.poly == other.0.poly && self.0.atoms == other.0.atoms)
    }
}

impl Eq for FractionRing {}

impl fmt::Debug for FractionRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[", self.0.poly)?;
        for (i, a) in self.0.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "1/({a})")?;
        }
        f.write_str("]")
    }
}

impl FractionRing {
    pub fn new(poly: &PolyRing, atoms: Vec<MultiPoly>) -> Result<FractionRing> {
        let mut normalized: Vec<MultiPoly> = Vec::with_capacity(atoms.len());
        for a in atoms {
            if a.ring() != poly {
                return Err(Error::Mismatch("atom lives in another ring"));
            }
            if a.is_constant() {
                return Err(Error::OutOfRange("constant denominator atom".into()));
            }
            let m = a.monic(MonomialOrder::Lex);
            if normalized.contains(&m) {
                return Err(Error::OutOfRange(alloc::format!("duplicate atom {m}")));
            }
            normalized.push(m);
        }
        Ok(FractionRing(Arc::new(FractionRingData { poly: poly.clone(), atoms: normalized })))
    }

    /// F_q[x_0..x_{n-1}] localized at x_i - j for j = 1..p-1: the ring of
    /// (A^1 minus {1, ..., p-1})^n.
    pub fn punctured_affine<S: AsRef<str>>(field: &Field, vars: &[S]) -> Result<FractionRing> {
        let poly = PolyRing::new(field, vars);
        let p = field.characteristic() as i64;
        let mut atoms = Vec::new();
        for i in 0..poly.nvars() {
            for j in 1..p {
                atoms.push(&poly.var(i) - &poly.int(j));
            }
        }
        FractionRing::new(&poly, atoms)
    }

    /// Laurent polynomials: every variable is an atom.
    pub fn laurent<S: AsRef<str>>(field: &Field, vars: &[S]) -> Result<FractionRing> {
        let poly = PolyRing::new(field, vars);
        let atoms = (0..poly.nvars()).map(|i| poly.var(i)).collect();
        FractionRing::new(&poly, atoms)
    }

    pub fn poly(&self) -> &PolyRing {
        &self.0.poly
    }

    pub fn field(&self) -> &Field {
        self.0.poly.field()
    }

    pub fn atoms(&self) -> &[MultiPoly] {
        &self.0.atoms
    }

    pub fn nvars(&self) -> usize {
        self.0.poly.nvars()
    }

    pub fn from_poly(&self, num: MultiPoly) -> LocalizedFraction {
        LocalizedFraction { ring: self.clone(), num, den: vec![0; self.0.atoms.len()] }
    }

    pub fn zero(&self) -> LocalizedFraction {
        self.from_poly(self.0.poly.zero())
    }

    pub fn one(&self) -> LocalizedFraction {
        self.from_poly(self.0.poly.one())
    }

    pub fn int(&self, n: i64) -> LocalizedFraction {
        self.from_poly(self.0.poly.int(n))
    }

    pub fn constant(&self, c: Elem) -> LocalizedFraction {
        self.from_poly(self.0.poly.constant(c))
    }

    pub fn var(&self, i: usize) -> LocalizedFraction {
        self.from_poly(self.0.poly.var(i))
    }

    /// 1 / atom_i^k.
    pub fn atom_inverse(&self, i: usize, k: u32) -> LocalizedFraction {
        let mut den = vec![0; self.0.atoms.len()];
        den[i] = k;
        LocalizedFraction { ring: self.clone(), num: self.0.poly.one(), den }
    }

    /// Builds num / prod atoms^den and normalizes.
    pub fn fraction(&self, num: MultiPoly, den: Vec<u32>) -> Result<LocalizedFraction> {
        if num.ring() != self.poly() {
            return Err(Error::Mismatch("numerator lives in another ring"));
        }
        if den.len() != self.0.atoms.len() {
            return Err(Error::Mismatch("denominator arity"));
        }
        let mut f = LocalizedFraction { ring: self.clone(), num, den };
        f.normalize();
        Ok(f)
    }

    /// Splits `poly` as rest * prod atoms^k, pulling out every atom factor.
    pub fn strip_atoms(&self, poly: &MultiPoly) -> (MultiPoly, Vec<u32>) {
        let mut rest = poly.clone();
        let mut exps = vec![0u32; self.0.atoms.len()];
        if rest.is_zero() {
            return (rest, exps);
        }
        for (i, a) in self.0.atoms.iter().enumerate() {
            while let Some(q) = rest.exact_div(a) {
                rest = q;
                exps[i] += 1;
            }
        }
        (rest, exps)
    }
}

/// num / prod atoms^den, normalized so no atom with a positive denominator
/// exponent divides the numerator.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalizedFraction {
    ring: FractionRing,
    num: MultiPoly,
    den: Vec<u32>,
}

impl fmt::Debug for LocalizedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineOp {
    Add,
    Sub,
    Mul,
}

/// Adds, subtracts or multiplies two fractions of the same localized ring.
pub fn fraction_combine(a: &LocalizedFraction, b: &LocalizedFraction, op: CombineOp) -> Result<LocalizedFraction> {
    match op {
        CombineOp::Add => a.try_add(b),
        CombineOp::Sub => a.try_add(&b.neg()),
        CombineOp::Mul => a.try_mul(b),
    }
}

impl LocalizedFraction {
    pub fn ring(&self) -> &FractionRing {
        &self.ring
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator_exponents(&self) -> &[u32] {
        &self.den
    }

    pub fn denominator(&self) -> MultiPoly {
        let mut d = self.ring.poly().one();
        for (a, &k) in self.ring.atoms().iter().zip(&self.den) {
            if k > 0 {
                d = &d * &a.pow(k as u64);
            }
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.iter().all(|&k| k == 0) && self.num == self.ring.poly().one()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den.iter_mut().for_each(|k| *k = 0);
            return;
        }
        for (i, a) in self.ring.0.atoms.iter().enumerate() {
            while self.den[i] > 0 {
                match self.num.exact_div(a) {
                    Some(q) => {
                        self.num = q;
                        self.den[i] -= 1;
                    }
                    None => break,
                }
            }
        }
    }

    fn check_ring(&self, other: &LocalizedFraction) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::Mismatch("fractions live in different localized rings"));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &LocalizedFraction) -> Result<LocalizedFraction> {
        self.check_ring(other)?;
        let atoms = self.ring.atoms();
        let den: Vec<u32> = self.den.iter().zip(&other.den).map(|(&a, &b)| a.max(b)).collect();
        let mut lhs = self.num.clone();
        let mut rhs = other.num.clone();
        for (i, a) in atoms.iter().enumerate() {
            if den[i] > self.den[i] {
                lhs = &lhs * &a.pow((den[i] - self.den[i]) as u64);
            }
            if den[i] > other.den[i] {
                rhs = &rhs * &a.pow((den[i] - other.den[i]) as u64);
            }
        }
        let mut out = LocalizedFraction { ring: self.ring.clone(), num: &lhs + &rhs, den };
        out.normalize();
        Ok(out)
    }

    pub fn try_mul(&self, other: &LocalizedFraction) -> Result<LocalizedFraction> {
        self.check_ring(other)?;
        let den = self.den.iter().zip(&other.den).map(|(&a, &b)| a + b).collect();
        let mut out = LocalizedFraction { ring: self.ring.clone(), num: &self.num * &other.num, den };
        out.normalize();
        Ok(out)
    }

    pub fn try_sub(&self, other: &LocalizedFraction) -> Result<LocalizedFraction> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> LocalizedFraction {
        LocalizedFraction { ring: self.ring.clone(), num: -&self.num, den: self.den.clone() }
    }

    pub fn scale(&self, c: Elem) -> LocalizedFraction {
        let mut out = LocalizedFraction { ring: self.ring.clone(), num: self.num.scale(c), den: self.den.clone() };
        out.normalize();
        out
    }

    /// If this fraction is a unit, returns (scalar, exponent per atom) with
    /// self = scalar * prod atoms^exponent.
    pub fn unit_factorization(&self) -> Option<(Elem, Vec<i64>)> {
        if self.num.is_zero() {
            return None;
        }
        let (rest, up) = self.ring.strip_atoms(&self.num);
        if !rest.is_constant() {
            return None;
        }
        let exps = up.iter().zip(&self.den).map(|(&u, &d)| u as i64 - d as i64).collect();
        Some((rest.constant_term(), exps))
    }

    pub fn is_unit(&self) -> bool {
        self.unit_factorization().is_some()
    }

    pub fn inverse(&self) -> Result<LocalizedFraction> {
        let (c, exps) = self
            .unit_factorization()
            .ok_or_else(|| Error::NotUnit(alloc::format!("{self}")))?;
        let field = self.ring.field();
        let mut num = self.ring.poly().constant(field.inv(c)?);
        let mut den = vec![0u32; exps.len()];
        for (i, &k) in exps.iter().enumerate() {
            if k > 0 {
                den[i] = k as u32;
            } else if k < 0 {
                num = &num * &self.ring.atoms()[i].pow((-k) as u64);
            }
        }
        Ok(LocalizedFraction { ring: self.ring.clone(), num, den })
    }

    /// Division by a unit.
    pub fn try_div(&self, other: &LocalizedFraction) -> Result<LocalizedFraction> {
        self.try_mul(&other.inverse()?)
    }

    pub fn pow(&self, n: i64) -> Result<LocalizedFraction> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = self.ring.one();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.try_mul(&b)?;
            }
            k >>= 1;
            if k > 0 {
                b = b.try_mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// Value at a point, or `None` if the denominator vanishes there.
    pub fn eval(&self, point: &[Elem]) -> Option<Elem> {
        let field = self.ring.field();
        let d = self.denominator().eval(point);
        if d.is_zero() {
            return None;
        }
        Some(field.mul(self.num.eval(point), field.inv(d).ok()?))
    }

    /// Applies the ring homomorphism x_i -> images[i] into `target`. Every
    /// atom must map to a unit.
    pub fn map_hom(&self, images: &[LocalizedFraction], target: &FractionRing) -> Result<LocalizedFraction> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Mismatch("image arity"));
        }
        if images.iter().any(|g| g.ring() != target) {
            return Err(Error::Mismatch("images live in another ring"));
        }
        let num = eval_poly_at(&self.num, images, target)?;
        let mut out = num;
        for (i, &k) in self.den.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let img = eval_poly_at(&self.ring.atoms()[i], images, target)?;
            let inv = img
                .inverse()
                .map_err(|_| Error::NotUnit(alloc::format!("image of atom {}", self.ring.atoms()[i])))?;
            out = out.try_mul(&inv.pow(k as i64)?)?;
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let num = self.num.to_text(MonomialOrder::Grevlex);
        let mut den_parts = Vec::new();
        for (a, &k) in self.ring.atoms().iter().zip(&self.den) {
            if k == 0 {
                continue;
            }
            let at = a.to_text(MonomialOrder::Grevlex);
            den_parts.push(if k == 1 { alloc::format!("({at})") } else { alloc::format!("({at})^{k}") });
        }
        if den_parts.is_empty() {
            return num;
        }
        let num = if self.num.num_terms() > 1 { alloc::format!("({num})") } else { num };
        alloc::format!("{}/{}", num, den_parts.join("*"))
    }
}

/// Evaluates a polynomial at fraction arguments.
pub fn eval_poly_at(poly: &MultiPoly, images: &[LocalizedFraction], target: &FractionRing) -> Result<LocalizedFraction> {
    let mut cache: Vec<Vec<LocalizedFraction>> = images.iter().map(|g| vec![target.one(), g.clone()]).collect();
    let mut out = target.zero();
    for (e, c) in poly.terms() {
        let mut term = target.constant(c);
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            while cache[i].len() <= k as usize {
                let next = cache[i][cache[i].len() - 1].try_mul(&images[i])?;
                cache[i].push(next);
            }
            term = term.try_mul(&cache[i][k as usize])?;
        }
        out = out.try_add(&term)?;
    }
    Ok(out)
}

impl fmt::Display for LocalizedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
