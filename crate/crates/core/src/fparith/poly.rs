//! Sparse multivariate polynomials over a [`Field`].

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::field::{Elem, Field};
use crate::error::{Error, Result};

/// Exponent vector, one entry per ring variable.
pub type Exps = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic, first variable largest.
    Grevlex,
    /// Lexicographic, first variable largest.
    Lex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Grevlex => {
                let da: u64 = a.iter().map(|&x| x as u64).sum();
                let db: u64 = b.iter().map(|&x| x as u64).sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

struct RingData {
    field: Field,
    vars: Vec<String>,
}

/// F_q[x_0, ..., x_{n-1}] with named variables in a declared order.
#[derive(Clone)]
pub struct PolyRing(Arc<RingData>);

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.field == other.0.field && self.0.vars == other.0.vars)
    }
}

impl Eq for PolyRing {}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.0.field, self.0.vars.join(","))
    }
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(field: &Field, vars: &[S]) -> PolyRing {
        PolyRing(Arc::new(RingData {
            field: field.clone(),
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
        }))
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> MultiPoly {
        MultiPoly { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> MultiPoly {
        self.constant(Elem::ONE)
    }

    pub fn constant(&self, c: Elem) -> MultiPoly {
        self.monomial(vec![0; self.nvars()], c)
    }

    pub fn int(&self, n: i64) -> MultiPoly {
        self.constant(self.field().from_int(n))
    }

    pub fn var(&self, i: usize) -> MultiPoly {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        self.monomial(e, Elem::ONE)
    }

    pub fn monomial(&self, exps: Exps, c: Elem) -> MultiPoly {
        assert_eq!(exps.len(), self.nvars(), "exponent arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MultiPoly { ring: self.clone(), terms }
    }

    /// All exponent vectors of total degree `d`, descending in grevlex.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Exps> {
        let mut out = Vec::new();
        let n = self.nvars();
        if n == 0 {
            if d == 0 {
                out.push(Vec::new());
            }
            return out;
        }
        let mut cur = vec![0u32; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exps>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(cur.clone());
                return;
            }
            for k in (0..=left).rev() {
                cur[i] = k;
                rec(i + 1, left - k, cur, out);
            }
        }
        rec(0, d, &mut cur, &mut out);
        out.sort_by(|a, b| MonomialOrder::Grevlex.cmp(b, a));
        out
    }
}

/// A polynomial; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    ring: PolyRing,
    terms: BTreeMap<Exps, Elem>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl MultiPoly {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Elem {
        self.coefficient_of(&vec![0; self.ring.nvars()])
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, Elem)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    /// Terms in descending order for `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(Exps, Elem)> {
        let mut v: Vec<(Exps, Elem)> = self.terms.iter().map(|(e, &c)| (e.clone(), c)).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn coefficient_of(&self, monomial: &[u32]) -> Elem {
        assert_eq!(monomial.len(), self.ring.nvars(), "monomial arity");
        self.terms.get(monomial).copied().unwrap_or(Elem::ZERO)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(Exps, Elem)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(e, &c)| (e.clone(), c))
    }

    fn add_term(&mut self, exps: Exps, c: Elem) {
        if c.is_zero() {
            return;
        }
        let f = self.ring.field().clone();
        match self.terms.entry(exps) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: Elem) -> MultiPoly {
        if c.is_zero() {
            return self.ring.zero();
        }
        let f = self.field();
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, &a)| (e.clone(), f.mul(a, c))).collect(),
        }
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, exps: &[u32], c: Elem) -> MultiPoly {
        if c.is_zero() {
            return self.ring.zero();
        }
        let f = self.field();
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, &a)| (e.iter().zip(exps).map(|(x, y)| x + y).collect(), f.mul(a, c)))
                .collect(),
        }
    }

    pub fn pow(&self, mut n: u64) -> MultiPoly {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// f^{p^e}: coefficients raised to the p^e-th power and exponents
    /// scaled by p^e (additivity of Frobenius).
    pub fn frobenius_power(&self, e: u32) -> MultiPoly {
        let f = self.field();
        let scale = f
            .characteristic()
            .checked_pow(e)
            .and_then(|s| u32::try_from(s).ok())
            .expect("exponent overflow in frobenius_power");
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(ex, &c)| {
                    let ex = ex
                        .iter()
                        .map(|&x| x.checked_mul(scale).expect("exponent overflow in frobenius_power"))
                        .collect();
                    (ex, f.frobenius(c, e as i64))
                })
                .collect(),
        }
    }

    /// Applies `c -> c^{p^k}` to the coefficients only.
    pub fn twist_coefficients(&self, k: i64) -> MultiPoly {
        let f = self.field();
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.frobenius(c, k))).collect(),
        }
    }

    pub fn eval(&self, point: &[Elem]) -> Elem {
        let f = self.field();
        f.sum(self.terms.iter().map(|(e, &c)| {
            e.iter().zip(point).fold(c, |acc, (&k, &x)| f.mul(acc, f.pow(x, k as u64)))
        }))
    }

    /// Evaluates in a larger field through a coefficient map.
    pub fn eval_mapped<F: Fn(Elem) -> Elem>(&self, big: &Field, map: F, point: &[Elem]) -> Elem {
        big.sum(self.terms.iter().map(|(e, &c)| {
            e.iter().zip(point).fold(map(c), |acc, (&k, &x)| big.mul(acc, big.pow(x, k as u64)))
        }))
    }

    /// Ring homomorphism to `images[0].ring()` sending x_i to `images[i]`.
    pub fn substitute(&self, images: &[MultiPoly], target: &PolyRing) -> MultiPoly {
        assert_eq!(images.len(), self.ring.nvars(), "substitution arity");
        let mut out = target.zero();
        // cache powers per variable
        let mut cache: Vec<Vec<MultiPoly>> = images.iter().map(|g| vec![target.one(), g.clone()]).collect();
        for (e, &c) in &self.terms {
            let mut term = target.constant(c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k as usize {
                    let next = &cache[i][cache[i].len() - 1] * &images[i];
                    cache[i].push(next);
                }
                term = &term * &cache[i][k as usize];
            }
            out = &out + &term;
        }
        out
    }

    /// The same polynomial read in another ring with the same field, where
    /// variable i goes to variable `map[i]`.
    pub fn rename(&self, target: &PolyRing, map: &[usize]) -> MultiPoly {
        let mut out = target.zero();
        for (e, &c) in &self.terms {
            let mut ne = vec![0u32; target.nvars()];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.add_term(ne, c);
        }
        out
    }

    /// Division with remainder by a single divisor under `order`.
    pub fn div_rem(&self, divisor: &MultiPoly, order: MonomialOrder) -> Result<(MultiPoly, MultiPoly)> {
        if self.ring != divisor.ring {
            return Err(Error::Mismatch("polynomial rings differ"));
        }
        let (lt, lc) = divisor.leading_term(order).ok_or(Error::DivisionByZero)?;
        let f = self.field();
        let lc_inv = f.inv(lc)?;
        let mut quo = self.ring.zero();
        let mut rem = self.ring.zero();
        let mut cur = self.clone();
        while let Some((e, c)) = cur.leading_term(order) {
            if e.iter().zip(&lt).all(|(a, b)| a >= b) {
                let m: Exps = e.iter().zip(&lt).map(|(a, b)| a - b).collect();
                let k = f.mul(c, lc_inv);
                quo.add_term(m.clone(), k);
                cur = &cur - &divisor.shift(&m, k);
            } else {
                cur.terms.remove(&e);
                rem.add_term(e, c);
            }
        }
        Ok((quo, rem))
    }

    /// Exact quotient, if `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (q, r) = self.div_rem(divisor, MonomialOrder::Lex).ok()?;
        r.is_zero().then_some(q)
    }

    /// Unique remainder modulo one homogeneous relation.
    pub fn normal_form(&self, relation: &MultiPoly, order: MonomialOrder) -> Result<MultiPoly> {
        if !relation.is_homogeneous() || relation.is_zero() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.div_rem(relation, order)?.1)
    }

    /// Scales so that the leading coefficient under `order` is one.
    pub fn monic(&self, order: MonomialOrder) -> MultiPoly {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field().inv(c).expect("nonzero leading coefficient")),
        }
    }

    pub fn to_text(&self, order: MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = self.field();
        let vars = self.ring.vars();
        let mut parts = Vec::new();
        for (e, c) in self.sorted_terms(order) {
            let mut factors = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(vars[i].clone()),
                    _ => factors.push(alloc::format!("{}^{}", vars[i], k)),
                }
            }
            let cs = f.format(c);
            let term = if factors.is_empty() {
                cs
            } else if c == Elem::ONE {
                factors.join("*")
            } else {
                alloc::format!("{}*{}", cs, factors.join("*"))
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(MonomialOrder::Grevlex))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.ring == rhs.ring, "polynomial rings differ");
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let f = self.field();
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.neg(c))).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.ring == rhs.ring, "polynomial rings differ");
        let f = self.field();
        let mut out = self.ring.zero();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let e: Exps = ea
                    .iter()
                    .zip(eb)
                    .map(|(x, y)| x.checked_add(*y).expect("exponent overflow"))
                    .collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        out
    }
}

/// Greatest common divisor, normalized to leading coefficient one in lex
/// order. Uses a recursive primitive remainder sequence.
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    assert!(a.ring == b.ring, "polynomial rings differ");
    let g = gcd_rec(a, b, a.ring.nvars());
    g.monic(MonomialOrder::Lex)
}

// gcd of polynomials involving only variables < nv.
fn gcd_rec(a: &MultiPoly, b: &MultiPoly, nv: usize) -> MultiPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    // main variable: highest index actually present in either
    let main = (0..nv).rev().find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0);
    let Some(v) = main else {
        return a.ring.one();
    };
    let ca = coeffs_in(a, v);
    let cb = coeffs_in(b, v);
    let cont_a = content(&ca, v);
    let cont_b = content(&cb, v);
    let cont = gcd_rec(&cont_a, &cont_b, v);
    let mut pa = primitive(&ca, &cont_a);
    let mut pb = primitive(&cb, &cont_b);
    if pa.len() < pb.len() {
        core::mem::swap(&mut pa, &mut pb);
    }
    while pb.len() > 1 {
        let r = prem(&pa, &pb);
        if r.is_empty() {
            break;
        }
        let c = content(&r, v);
        let pr = primitive(&r, &c);
        pa = pb;
        pb = pr;
    }
    let g = if pb.len() == 1 {
        // constant in v; primitive means it is a unit up to content
        a.ring.one()
    } else {
        from_coeffs(&pb, v, &a.ring)
    };
    &g * &cont
}

fn coeffs_in(a: &MultiPoly, v: usize) -> Vec<MultiPoly> {
    let d = a.degree_in(v) as usize;
    let mut out = vec![a.ring.zero(); d + 1];
    for (e, &c) in &a.terms {
        let mut e2 = e.clone();
        let k = e2[v] as usize;
        e2[v] = 0;
        out[k].add_term(e2, c);
    }
    out
}

fn from_coeffs(cs: &[MultiPoly], v: usize, ring: &PolyRing) -> MultiPoly {
    let mut out = ring.zero();
    for (k, c) in cs.iter().enumerate() {
        let mut m = vec![0u32; ring.nvars()];
        m[v] = k as u32;
        out = &out + &c.shift(&m, Elem::ONE);
    }
    out
}

fn content(cs: &[MultiPoly], v: usize) -> MultiPoly {
    let mut g = cs[0].ring.zero();
    for c in cs {
        g = gcd_rec(&g, c, v);
        if g.is_constant() && !g.is_zero() {
            return g.ring.one();
        }
    }
    g
}

fn primitive(cs: &[MultiPoly], cont: &MultiPoly) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = cs
        .iter()
        .map(|c| c.exact_div(cont).expect("content divides coefficients"))
        .collect();
    while out.len() > 1 && out.last().map(|c| c.is_zero()).unwrap_or(false) {
        out.pop();
    }
    out
}

// Pseudo-remainder of univariate polynomials with polynomial coefficients.
fn prem(a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut r: Vec<MultiPoly> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            let t = bc * &lr;
            r[dr - db + i] = &r[dr - db + i] - &t;
        }
        while r.last().map(|c| c.is_zero()).unwrap_or(false) {
            r.pop();
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, vars: &[&str]) -> PolyRing {
        PolyRing::new(&Field::prime(p).unwrap(), vars)
    }

    #[test]
    fn freshmans_dream() {
        let r = ring(2, &["x", "y"]);
        let f = &r.var(0) + &r.var(1);
        assert_eq!(f.frobenius_power(1).to_text(MonomialOrder::Grevlex), "x^2 + y^2");
        assert_eq!(f.frobenius_power(0), f);
    }

    #[test]
    fn grevlex_order() {
        let o = MonomialOrder::Grevlex;
        assert_eq!(o.cmp(&[3, 0, 0], &[0, 2, 1]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 1, 1], &[0, 2, 1]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 2, 1], &[0, 1, 2]), Ordering::Greater);
    }

    #[test]
    fn one_step_normal_form() {
        let r = ring(2, &["x", "y", "z"]);
        let (x, y, z) = (r.var(0), r.var(1), r.var(2));
        let rel = &(&x.pow(3) + &(&y.pow(2) * &z)) + &(&y * &z.pow(2));
        let nf = x.pow(3).normal_form(&rel, MonomialOrder::Grevlex).unwrap();
        assert_eq!(nf.to_text(MonomialOrder::Grevlex), "y^2*z + y*z^2");
        assert_eq!(y.normal_form(&rel, MonomialOrder::Grevlex).unwrap(), y);
        let bad = &x + &r.one();
        assert_eq!(x.normal_form(&bad, MonomialOrder::Grevlex), Err(Error::NotHomogeneous));
    }

    #[test]
    fn gcd_finds_common_factor() {
        let r = ring(3, &["a", "b", "c"]);
        let (a, b, c) = (r.var(0), r.var(1), r.var(2));
        let common = &(&a * &b) - &c;
        let f = &common * &(&a + &r.one());
        let g = &common * &(&b.pow(2) - &c);
        let d = gcd(&f, &g);
        assert_eq!(d, common.monic(MonomialOrder::Lex));
        assert_eq!(gcd(&a, &b), r.one());
    }
}
