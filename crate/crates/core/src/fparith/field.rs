//! Finite fields F_q, q = p^e, with table-driven multiplication.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest field order for which exp/log tables are built.
pub const MAX_ORDER: u64 = 1 << 22;

/// An element of some [`Field`], stored as its coordinate vector in the
/// power basis 1, t, ..., t^{e-1} packed base p (least significant digit is
/// the constant coordinate).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldData {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, coefficients from the constant term up.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// F_{p^e} with a fixed modulus. Cloning is cheap; clones share tables.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {}", self.0.p, self.0.e, self.modulus_text())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// Small dense polynomial helpers over F_p, used only while building a field.
fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(a: u32, mut n: u32, p: u32) -> u32 {
    let mut base = a as u64 % p as u64;
    let mut acc = 1u64;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        n >>= 1;
    }
    acc as u32
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = r.len() - 1 - dm;
        for (i, &mc) in m.iter().enumerate() {
            let sub = (c as u64 * mc as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
        }
    }
    poly_rem(&out, m, p)
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility of a monic polynomial of degree e over F_p: no common
/// factor with x^{p^k} - x for 1 <= k < e.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let e = m.len() - 1;
    if e <= 1 {
        return e == 1;
    }
    let mut xpow = poly_rem(&[0, 1], m, p);
    for _ in 1..e {
        // xpow <- xpow^p mod m
        let mut acc = vec![1u32];
        let mut base = xpow.clone();
        let mut n = p;
        while n > 0 {
            if n & 1 == 1 {
                acc = poly_mulmod(&acc, &base, m, p);
            }
            base = poly_mulmod(&base, &base, m, p);
            n >>= 1;
        }
        xpow = acc;
        let mut diff = xpow.clone();
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        if poly_gcd(m, &diff, p).len() > 1 {
            return false;
        }
    }
    true
}

fn pack(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

fn unpack(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push(v % p);
        v /= p;
    }
    out
}

/// Builds exp/log tables from a primitive element, if `m` admits one of
/// order q - 1 among the residues. Returns `None` when `t` itself is not
/// primitive and `require_t_primitive` is set.
fn build_tables(m: &[u32], p: u32, e: u32, require_t_primitive: bool) -> Option<(Vec<u32>, Vec<u32>)> {
    let q = p.pow(e);
    let order = q - 1;
    let candidates: Vec<u32> = if require_t_primitive {
        vec![if e == 1 { 0 } else { p }]
    } else {
        (1..q).collect()
    };
    for g in candidates {
        let gd = if e == 1 && require_t_primitive {
            // over F_p the "t" of a degree-one modulus x + c is -c
            vec![(p - m[0]) % p]
        } else {
            unpack(g, p, e)
        };
        let mut g_digits = gd.clone();
        trim(&mut g_digits);
        if g_digits.is_empty() {
            continue;
        }
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![1u32];
        let mut ok = true;
        for k in 0..order {
            let mut full = cur.clone();
            full.resize(e as usize, 0);
            let v = pack(&full, p);
            if log[v as usize] != u32::MAX {
                ok = false;
                break;
            }
            log[v as usize] = k;
            exp[k as usize] = v;
            cur = poly_mulmod(&cur, &g_digits, m, p);
        }
        if ok && cur == [1] {
            return Some((exp, log));
        }
    }
    None
}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1)
    }

    /// F_{p^e} with the lexicographically first primitive monic modulus
    /// (constant coefficient least significant).
    pub fn new(p: u64, e: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::BadModulus("extension degree must be at least 1".into()));
        }
        let q = (p as u128).pow(e);
        if q > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge { p, e });
        }
        let p32 = p as u32;
        let q32 = q as u32;
        for v in 0..q32 {
            let mut m = unpack(v, p32, e);
            m.push(1);
            if !is_irreducible(&m, p32) {
                continue;
            }
            if let Some((exp, log)) = build_tables(&m, p32, e, true) {
                return Ok(Field(Arc::new(FieldData { p: p32, e, q: q32, modulus: m, exp, log })));
            }
        }
        Err(Error::BadModulus("no primitive modulus found".into()))
    }

    /// F_{p^e} with an explicit monic modulus, coefficients constant term
    /// first.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 {
            return Err(Error::BadModulus("degree must be at least 1".into()));
        }
        let e = (modulus.len() - 1) as u32;
        let q = (p as u128).pow(e);
        if q > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge { p, e });
        }
        let p32 = p as u32;
        let m: Vec<u32> = modulus.iter().map(|&c| (c % p) as u32).collect();
        if m[m.len() - 1] != 1 {
            return Err(Error::BadModulus("modulus is not monic".into()));
        }
        if !is_irreducible(&m, p32) {
            return Err(Error::BadModulus("modulus is reducible".into()));
        }
        let (exp, log) = build_tables(&m, p32, e, false)
            .ok_or_else(|| Error::BadModulus("no primitive element".into()))?;
        Ok(Field(Arc::new(FieldData { p: p32, e, q: q as u32, modulus: m, exp, log })))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u64 {
        self.0.q as u64
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn modulus_text(&self) -> alloc::string::String {
        use alloc::string::ToString;
        let m = &self.0.modulus;
        let mut parts = Vec::new();
        for k in (0..m.len()).rev() {
            let c = m[k];
            if c == 0 {
                continue;
            }
            let mono = match k {
                0 => c.to_string(),
                1 if c == 1 => "t".to_string(),
                1 => alloc::format!("{c}*t"),
                _ if c == 1 => alloc::format!("t^{k}"),
                _ => alloc::format!("{c}*t^{k}"),
            };
            parts.push(mono);
        }
        parts.join(" + ")
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element from its coordinates in the power basis.
    pub fn from_digits(&self, digits: &[i64]) -> Result<Elem> {
        if digits.len() > self.0.e as usize {
            return Err(Error::OutOfRange("too many basis coordinates".into()));
        }
        let p = self.0.p as i64;
        let d: Vec<u32> = digits.iter().map(|&c| c.rem_euclid(p) as u32).collect();
        Ok(Elem(pack(&d, self.0.p)))
    }

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        unpack(a.0, self.0.p, self.0.e)
    }

    /// The element with packed index `i mod q`; enumerates the field.
    pub fn element(&self, i: u64) -> Elem {
        Elem((i % self.0.q as u64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    pub fn in_prime_field(&self, a: Elem) -> bool {
        a.0 < self.0.p
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if self.0.e == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.0.e {
            let d = (x % p + y % p) % p;
            out += d * scale;
            scale = scale.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if self.0.e == 1 {
            return Elem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.0.e {
            let d = (p - x % p) % p;
            out += d * scale;
            scale = scale.wrapping_mul(p);
            x /= p;
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if self.0.e == 1 {
            return Elem(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32);
        }
        let order = self.0.q - 1;
        let s = self.0.log[a.0 as usize] + self.0.log[b.0 as usize];
        Elem(self.0.exp[(if s >= order { s - order } else { s }) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        Ok(Elem(self.0.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, n: u64) -> Elem {
        if n == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let order = (self.0.q - 1) as u64;
        let l = self.0.log[a.0 as usize] as u64;
        let k = ((l as u128 * (n % order) as u128) % order as u128) as usize;
        Elem(self.0.exp[k])
    }

    /// a^{p^k} for any integer k (negative k gives p-power roots).
    pub fn frobenius(&self, a: Elem, k: i64) -> Elem {
        let e = self.0.e as i64;
        let r = k.rem_euclid(e) as u32;
        if r == 0 {
            return a;
        }
        self.pow(a, (self.0.p as u64).pow(r))
    }

    /// Inverse Frobenius, a^{q/p}.
    pub fn p_root(&self, a: Elem) -> Elem {
        self.frobenius(a, -1)
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    /// Text form: an integer in [0, p) for prime fields, a coordinate tuple
    /// `(c0,c1,..)` otherwise.
    pub fn format(&self, a: Elem) -> alloc::string::String {
        use alloc::string::ToString;
        if self.0.e == 1 {
            return a.0.to_string();
        }
        let parts: Vec<alloc::string::String> = self.digits(a).iter().map(|d| d.to_string()).collect();
        alloc::format!("({})", parts.join(","))
    }

    /// Embedding of this field into `big` (same characteristic, degree a
    /// multiple), realized by a root of this field's modulus in `big`.
    pub fn embedding_into(&self, big: &Field) -> Result<Embedding> {
        if self.0.p != big.0.p || big.0.e % self.0.e != 0 {
            return Err(Error::Mismatch("field is not a subfield"));
        }
        let m = &self.0.modulus;
        let root = big.elements().find(|&a| {
            let mut acc = Elem::ZERO;
            for &c in m.iter().rev() {
                acc = big.add(big.mul(acc, a), big.from_int(c as i64));
            }
            acc.is_zero()
        });
        let root = root.ok_or(Error::Mismatch("modulus has no root in target"))?;
        let mut powers = Vec::with_capacity(self.0.e as usize);
        let mut cur = Elem::ONE;
        for _ in 0..self.0.e {
            powers.push(cur);
            cur = big.mul(cur, root);
        }
        Ok(Embedding { source: self.clone(), target: big.clone(), powers })
    }
}

/// A field embedding F_q -> F_{q^k}.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    powers: Vec<Elem>,
}

impl Embedding {
    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn map(&self, a: Elem) -> Elem {
        let t = &self.target;
        let digits = self.source.digits(a);
        t.sum(digits.iter().zip(&self.powers).map(|(&d, &pw)| t.mul(t.from_int(d as i64), pw)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(Field::prime(6).unwrap_err(), Error::NotPrime(6));
        assert_eq!(Field::prime(1).unwrap_err(), Error::NotPrime(1));
    }

    #[test]
    fn rejects_reducible_modulus() {
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(matches!(Field::with_modulus(2, &[1, 0, 1]), Err(Error::BadModulus(_))));
        // x^2 + 1 is irreducible over F_3
        assert!(Field::with_modulus(3, &[1, 0, 1]).is_ok());
    }

    #[test]
    fn default_moduli() {
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.modulus().len(), 3);
        assert_eq!(f9.order(), 9);
    }

    #[test]
    fn f4_arithmetic() {
        let f = Field::new(2, 2).unwrap();
        let t = f.from_digits(&[0, 1]).unwrap();
        // t^2 = t + 1
        assert_eq!(f.mul(t, t), f.add(t, Elem::ONE));
        assert_eq!(f.pow(t, 3), Elem::ONE);
        assert_eq!(f.frobenius(t, 1), f.mul(t, t));
        assert_eq!(f.frobenius(f.p_root(t), 1), t);
        assert_eq!(f.format(t), "(0,1)");
    }

    #[test]
    fn every_nonzero_element_inverts() {
        for (p, e) in [(2, 1), (2, 3), (3, 2), (5, 2), (7, 1)] {
            let f = Field::new(p, e).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            }
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let small = Field::new(2, 2).unwrap();
        let big = Field::new(2, 6).unwrap();
        let emb = small.embedding_into(&big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb.map(small.mul(a, b)), big.mul(emb.map(a), emb.map(b)));
                assert_eq!(emb.map(small.add(a, b)), big.add(emb.map(a), emb.map(b)));
            }
        }
    }
}
