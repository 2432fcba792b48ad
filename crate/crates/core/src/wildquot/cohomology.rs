//! Truncated group cohomology H^1(G, R^{1/p^l}) = ker Tr / im(sigma - 1) on
//! finite filtered pieces.
//!
//! For a diagonal action by Moebius transformations on a ring
//! F_q[x_i][1/(x_i - c)], each factor has the partial-fraction basis x^a and
//! (x - c)^{-b}. Giving both level a (resp. b) filters the ring by total
//! level, and a Moebius map sends level <= l to level <= l, so sigma - 1 is
//! an endomorphism of every filtered piece.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::action::CyclicAction;
use crate::error::{Error, Result};
use crate::fparith::{Elem, Field, LocalizedFraction};

type SparseVec = Vec<(u32, Elem)>;

/// One factor: poles c_1..c_k and the action x -> (a x + b)/(c x + d).
#[derive(Clone, Debug)]
struct Factor {
    poles: Vec<Elem>,
    mobius: [Elem; 4],
    /// images[local] = expansion of sigma(basis[local]) in local indices.
    images: Vec<Vec<(usize, Elem)>>,
}

impl Factor {
    fn width(&self) -> usize {
        1 + self.poles.len()
    }

    fn local_index(&self, level: u32, kind: usize) -> usize {
        if level == 0 {
            0
        } else {
            1 + (level as usize - 1) * self.width() + kind
        }
    }

    fn level_of(&self, local: usize) -> u32 {
        if local == 0 {
            0
        } else {
            ((local - 1) / self.width()) as u32 + 1
        }
    }

    fn kind_of(&self, local: usize) -> usize {
        (local - 1) % self.width()
    }

    fn size(&self, max_level: u32) -> usize {
        1 + max_level as usize * self.width()
    }

    /// (u x + v)^b / (mu x + nu)^b in the partial-fraction basis.
    fn expand(&self, field: &Field, u: Elem, v: Elem, mu: Elem, nu: Elem, b: u32) -> Result<Vec<(usize, Elem)>> {
        let binom = binomial_row(field, b);
        let mut out = Vec::new();
        if mu.is_zero() {
            let s = field.inv(field.pow(nu, b as u64))?;
            for k in 0..=b {
                let c = field.mul(field.mul(binom[k as usize], field.pow(u, k as u64)), field.pow(v, (b - k) as u64));
                if !c.is_zero() {
                    out.push((self.local_index(k, 0), field.mul(c, s)));
                }
            }
        } else {
            let c = field.neg(field.div(nu, mu)?);
            let pole = self
                .poles
                .iter()
                .position(|&x| x == c)
                .ok_or_else(|| Error::Unsupported("the action moves a pole outside the atom set".into()))?;
            let s = field.inv(field.pow(mu, b as u64))?;
            let shift = field.add(field.mul(u, c), v);
            for k in 0..=b {
                let coef = field.mul(
                    field.mul(binom[k as usize], field.pow(u, k as u64)),
                    field.pow(shift, (b - k) as u64),
                );
                if coef.is_zero() {
                    continue;
                }
                let idx = if k == b { 0 } else { self.local_index(b - k, 1 + pole) };
                out.push((idx, field.mul(coef, s)));
            }
        }
        out.sort_by_key(|t| t.0);
        Ok(out)
    }

    fn build_images(&mut self, field: &Field, max_level: u32) -> Result<()> {
        let [a, b, c, d] = self.mobius;
        let mut images = Vec::with_capacity(self.size(max_level));
        images.push(vec![(0usize, Elem::ONE)]);
        for l in 1..=max_level {
            images.push(self.expand(field, a, b, c, d, l)?);
            for &pc in &self.poles {
                // sigma(x) - pc = ((a - pc c) x + (b - pc d)) / (c x + d)
                let mu = field.sub(a, field.mul(pc, c));
                let nu = field.sub(b, field.mul(pc, d));
                images.push(self.expand(field, c, d, mu, nu, l)?);
            }
        }
        self.images = images;
        Ok(())
    }

    fn value_at(&self, field: &Field, local: usize, point: Elem) -> Result<Elem> {
        let l = self.level_of(local);
        if l == 0 {
            return Ok(Elem::ONE);
        }
        let kind = self.kind_of(local);
        if kind == 0 {
            Ok(field.pow(point, l as u64))
        } else {
            let base = field.sub(point, self.poles[kind - 1]);
            Ok(field.pow(field.inv(base)?, l as u64))
        }
    }

    fn fixed_point(&self, field: &Field) -> Option<Elem> {
        let [a, b, c, d] = self.mobius;
        field.elements().find(|&x| {
            if self.poles.contains(&x) {
                return false;
            }
            let den = field.add(field.mul(c, x), d);
            !den.is_zero() && field.add(field.mul(a, x), b) == field.mul(x, den)
        })
    }
}

fn binomial_row(field: &Field, n: u32) -> Vec<Elem> {
    let mut row = vec![Elem::ONE];
    for _ in 0..n {
        let mut next = vec![Elem::ONE; row.len() + 1];
        for k in 1..row.len() {
            next[k] = field.add(row[k - 1], row[k]);
        }
        row = next;
    }
    row
}

/// Reads each generator image as a Moebius map in that generator alone.
fn factors_of(action: &CyclicAction, ell: u32) -> Result<Vec<Factor>> {
    let ring = action.ring();
    let field = ring.field();
    let n = ring.nvars();
    let unsupported = || Error::Unsupported("only diagonal Moebius actions with linear univariate atoms".into());
    let mut poles: Vec<Vec<Elem>> = vec![Vec::new(); n];
    // atom k = lin[k].1 * x_{lin[k].0} + lin[k].2
    let mut lin = Vec::new();
    for a in ring.atoms() {
        let vars: Vec<usize> = (0..n).filter(|&i| a.degree_in(i) > 0).collect();
        if vars.len() != 1 || a.total_degree() != Some(1) {
            return Err(unsupported());
        }
        let i = vars[0];
        let mut unit = vec![0u32; n];
        unit[i] = 1;
        let (u, k) = (a.coefficient_of(&unit), a.constant_term());
        poles[i].push(field.neg(field.div(k, u)?));
        lin.push((i, u, k));
    }
    let mut out = Vec::with_capacity(n);
    for (i, img) in action.images().iter().enumerate() {
        let num = img.numerator();
        if num.total_degree().unwrap_or(0) > 1 || (0..n).any(|j| j != i && num.degree_in(j) > 0) {
            return Err(unsupported());
        }
        let mut unit = vec![0u32; n];
        unit[i] = 1;
        let a = num.coefficient_of(&unit);
        let b = num.constant_term();
        let den = img.denominator_exponents();
        let (c, d) = match den.iter().enumerate().filter(|(_, &k)| k > 0).collect::<Vec<_>>().as_slice() {
            [] => (Elem::ZERO, Elem::ONE),
            [(idx, 1)] if lin[*idx].0 == i => (lin[*idx].1, lin[*idx].2),
            _ => return Err(unsupported()),
        };
        let tw = |x: Elem| field.frobenius(x, -(ell as i64));
        let mut ps: Vec<Elem> = poles[i].iter().map(|&x| tw(x)).collect();
        ps.sort();
        out.push(Factor { poles: ps, mobius: [tw(a), tw(b), tw(c), tw(d)], images: Vec::new() });
    }
    Ok(out)
}

/// A linear functional vanishing on the image of sigma - 1 with value one
/// on the class of 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Nonzero entries (basis index, value).
    pub functional: Vec<(usize, Elem)>,
    /// Checked against every column of sigma - 1, recomputed from scratch.
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct ClassOfOneResult {
    /// Whether 1 is a nonzero class, i.e. not in the image of sigma - 1.
    pub nonzero: bool,
    pub n: u32,
    pub ell: u32,
    /// Total level bound N p^ell.
    pub level_bound: u32,
    pub dim: usize,
    pub image_rank: usize,
    pub certificate: Option<Certificate>,
    /// Fixed rational point used for the residue-field check.
    pub fixed_point: Option<Vec<Elem>>,
    /// Every I(s) vanishes at the fixed point, and 1 does not.
    pub residue_check: Option<bool>,
    /// Tr o (sigma - 1) = 0 on the piece.
    pub trace_check: bool,
    pub trace_check_method: String,
    /// Text of the basis elements in the certificate support, by index.
    pub support_text: BTreeMap<usize, String>,
}

struct Piece {
    factors: Vec<Factor>,
    basis: Vec<Vec<u16>>,
    index: BTreeMap<Vec<u16>, u32>,
}

impl Piece {
    fn level(&self, t: &[u16]) -> u32 {
        t.iter().zip(&self.factors).map(|(&k, f)| f.level_of(k as usize)).sum()
    }

    /// sigma applied to a sparse vector.
    fn apply_sigma(&self, field: &Field, v: &[(u32, Elem)]) -> SparseVec {
        let mut acc: BTreeMap<u32, Elem> = BTreeMap::new();
        for &(idx, c) in v {
            let t = &self.basis[idx as usize];
            let mut partial: Vec<(Vec<u16>, Elem)> = vec![(Vec::with_capacity(t.len()), c)];
            for (f, &k) in self.factors.iter().zip(t) {
                let mut next = Vec::with_capacity(partial.len() * f.images[k as usize].len());
                for (pre, pc) in &partial {
                    for &(li, lc) in &f.images[k as usize] {
                        let mut tup = pre.clone();
                        tup.push(li as u16);
                        next.push((tup, field.mul(*pc, lc)));
                    }
                }
                partial = next;
            }
            for (tup, c) in partial {
                let row = self.index[&tup];
                let e = acc.entry(row).or_insert(Elem::ZERO);
                *e = field.add(*e, c);
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    fn column(&self, field: &Field, j: u32) -> SparseVec {
        let mut col = self.apply_sigma(field, &[(j, Elem::ONE)]);
        match col.binary_search_by_key(&j, |t| t.0) {
            Ok(pos) => {
                col[pos].1 = field.sub(col[pos].1, Elem::ONE);
                if col[pos].1.is_zero() {
                    col.remove(pos);
                }
            }
            Err(pos) => col.insert(pos, (j, field.neg(Elem::ONE))),
        }
        col
    }

    fn text(&self, idx: usize, names: &[String]) -> String {
        let mut parts = Vec::new();
        for ((f, &k), name) in self.factors.iter().zip(&self.basis[idx]).zip(names) {
            let l = f.level_of(k as usize);
            if l == 0 {
                continue;
            }
            let kind = f.kind_of(k as usize);
            parts.push(if kind == 0 {
                if l == 1 {
                    name.clone()
                } else {
                    alloc::format!("{name}^{l}")
                }
            } else {
                alloc::format!("({name} - {})^(-{l})", f.poles[kind - 1].0)
            });
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn build_piece(action: &CyclicAction, level_bound: u32, ell: u32, cap: usize) -> Result<Piece> {
    let field = action.field();
    let mut factors = factors_of(action, ell)?;
    // count first so the cap is enforced before any expansion work
    let counts: Vec<Vec<u64>> = factors
        .iter()
        .map(|f| (0..=level_bound).map(|l| if l == 0 { 1 } else { f.width() as u64 }).collect())
        .collect();
    let mut ways = vec![0u64; level_bound as usize + 1];
    ways[0] = 1;
    for c in &counts {
        let mut next = vec![0u64; ways.len()];
        for (s, &w) in ways.iter().enumerate() {
            for (l, &k) in c.iter().enumerate() {
                if s + l < next.len() {
                    next[s + l] = next[s + l].saturating_add(w.saturating_mul(k));
                }
            }
        }
        ways = next;
    }
    let dim = ways.iter().fold(0u64, |a, &b| a.saturating_add(b));
    if dim > cap as u64 {
        return Err(Error::ResourceCap { dim: usize::try_from(dim).unwrap_or(usize::MAX), cap });
    }
    for f in factors.iter_mut() {
        f.build_images(field, level_bound)?;
    }
    let mut basis: Vec<Vec<u16>> = vec![Vec::new()];
    for f in &factors {
        let mut next = Vec::new();
        for t in &basis {
            let used: u32 = t.iter().zip(&factors).map(|(&k, g)| g.level_of(k as usize)).sum();
            for k in 0..f.size(level_bound - used) {
                let mut u = t.clone();
                u.push(k as u16);
                next.push(u);
            }
        }
        basis = next;
    }
    let mut piece = Piece { factors, basis, index: BTreeMap::new() };
    let mut keyed: Vec<(u32, Vec<u16>)> = piece.basis.iter().map(|t| (piece.level(t), t.clone())).collect();
    keyed.sort();
    piece.basis = keyed.into_iter().map(|(_, t)| t).collect();
    piece.index = piece.basis.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
    debug_assert_eq!(piece.basis.len() as u64, dim);
    Ok(piece)
}

/// The filtered piece A_N with the columns of sigma - 1 in its basis. Basis
/// index 0 is the constant 1.
pub struct FilteredPiece {
    piece: Piece,
    names: Vec<String>,
    pub level_bound: u32,
    pub columns: Vec<Vec<(usize, Elem)>>,
}

impl FilteredPiece {
    pub fn dim(&self) -> usize {
        self.piece.basis.len()
    }

    pub fn basis_text(&self, i: usize) -> String {
        self.piece.text(i, &self.names)
    }

    /// Basis element i as an element of the action's ring (level l = 0 only).
    pub fn basis_element(&self, action: &CyclicAction, i: usize) -> Result<LocalizedFraction> {
        let ring = action.ring();
        let field = ring.field();
        let n = ring.nvars();
        let mut out = ring.one();
        for (v, (f, &k)) in self.piece.factors.iter().zip(&self.piece.basis[i]).enumerate() {
            let l = f.level_of(k as usize);
            if l == 0 {
                continue;
            }
            let kind = f.kind_of(k as usize);
            let term = if kind == 0 {
                ring.var(v).pow(l as i64)?
            } else {
                let c = f.poles[kind - 1];
                let mut unit = vec![0u32; n];
                unit[v] = 1;
                let j = ring
                    .atoms()
                    .iter()
                    .position(|a| {
                        let u = a.coefficient_of(&unit);
                        a.degree_in(v) == 1 && !u.is_zero() && field.add(field.mul(u, c), a.constant_term()).is_zero()
                    })
                    .ok_or(Error::Mismatch("pole without an atom"))?;
                let u = ring.atoms()[j].coefficient_of(&unit);
                ring.atom_inverse(j, l).scale(field.pow(u, l as u64))
            };
            out = out.try_mul(&term)?;
        }
        Ok(out)
    }
}

/// Builds A_N at perfection level ell and the columns (sigma - 1)(b_j).
pub fn filtered_difference_columns(action: &CyclicAction, n: u32, ell: u32, cap: usize) -> Result<FilteredPiece> {
    let field = action.field().clone();
    let level_bound = level_bound(action.p(), n, ell)?;
    let piece = build_piece(action, level_bound, ell, cap)?;
    let columns = (0..piece.basis.len() as u32)
        .map(|j| piece.column(&field, j).into_iter().map(|(r, c)| (r as usize, c)).collect())
        .collect();
    Ok(FilteredPiece { piece, names: action.var_names().to_vec(), level_bound, columns })
}

fn level_bound(p: u64, n: u32, ell: u32) -> Result<u32> {
    p.checked_pow(ell)
        .and_then(|q| q.checked_mul(n as u64))
        .and_then(|l| u32::try_from(l).ok())
        .filter(|&l| l < u16::MAX as u32)
        .ok_or_else(|| Error::OutOfRange("level bound overflows".into()))
}

/// Column echelon form with pivot at the largest row index of each column.
fn eliminate(field: &Field, columns: &[SparseVec], dim: usize) -> Vec<Option<SparseVec>> {
    let mut pivots: Vec<Option<SparseVec>> = vec![None; dim];
    for col in columns {
        let mut cur = col.clone();
        while let Some(&(lead, c)) = cur.last() {
            match &pivots[lead as usize] {
                Some(piv) => {
                    cur = axpy(field, &cur, field.neg(c), piv);
                }
                None => {
                    let inv = field.inv(c).expect("nonzero lead");
                    for e in cur.iter_mut() {
                        e.1 = field.mul(e.1, inv);
                    }
                    pivots[lead as usize] = Some(cur);
                    break;
                }
            }
        }
    }
    pivots
}

/// a + s * b for sorted sparse vectors.
fn axpy(field: &Field, a: &[(u32, Elem)], s: Elem, b: &[(u32, Elem)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, field.mul(s, b[j].1)));
            j += 1;
        } else {
            let v = field.add(a[i].1, field.mul(s, b[j].1));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn dot(field: &Field, phi: &[Elem], v: &[(u32, Elem)]) -> Elem {
    field.sum(v.iter().map(|&(r, c)| field.mul(phi[r as usize], c)))
}

/// Full tensor check of Tr o (sigma - 1) = 0 is done up to this dimension;
/// above it the check runs factorwise (sigma^p = 1 on each factor piece).
const FULL_TRACE_CHECK_LIMIT: usize = 1200;

/// Decides whether 1 lies in (sigma - 1)(A_N) where A_N is the piece of
/// total level at most N p^ell of R^{1/p^ell}.
pub fn class_of_one_test(action: &CyclicAction, n: u32, ell: u32, cap: usize) -> Result<ClassOfOneResult> {
    let field = action.field().clone();
    let p = action.p();
    let level_bound = level_bound(p, n, ell)?;
    let piece = build_piece(action, level_bound, ell, cap)?;
    let dim = piece.basis.len();
    let columns: Vec<SparseVec> = (0..dim as u32).map(|j| piece.column(&field, j)).collect();
    let pivots = eliminate(&field, &columns, dim);
    let image_rank = pivots.iter().filter(|p| p.is_some()).count();
    let one_hit = pivots[0].is_some();

    let mut certificate = None;
    let mut support_text = BTreeMap::new();
    if !one_hit {
        let mut phi = vec![Elem::ZERO; dim];
        phi[0] = Elem::ONE;
        for r in 1..dim {
            if let Some(v) = &pivots[r] {
                let s = field.sum(v[..v.len() - 1].iter().map(|&(k, c)| field.mul(phi[k as usize], c)));
                phi[r] = field.neg(s);
            }
        }
        let verified = phi[0] == Elem::ONE && columns.iter().all(|c| dot(&field, &phi, c).is_zero());
        let functional: Vec<(usize, Elem)> =
            phi.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, &c)| (i, c)).collect();
        for &(i, _) in functional.iter().take(16) {
            support_text.insert(i, piece.text(i, action.var_names()));
        }
        certificate = Some(Certificate { functional, verified });
    }

    let fixed: Option<Vec<Elem>> = piece.factors.iter().map(|f| f.fixed_point(&field)).collect();
    let residue_check = match &fixed {
        Some(pt) => {
            let mut ev = vec![Elem::ZERO; dim];
            for (i, t) in piece.basis.iter().enumerate() {
                let mut v = Elem::ONE;
                for ((f, &k), &x) in piece.factors.iter().zip(t).zip(pt) {
                    v = field.mul(v, f.value_at(&field, k as usize, x)?);
                }
                ev[i] = v;
            }
            Some(ev[0] == Elem::ONE && columns.iter().all(|c| dot(&field, &ev, c).is_zero()))
        }
        None => None,
    };

    let (trace_check, method) = if dim <= FULL_TRACE_CHECK_LIMIT {
        let ok = columns.iter().all(|c| {
            let mut acc: BTreeMap<u32, Elem> = BTreeMap::new();
            let mut cur = c.clone();
            for _ in 0..p {
                for &(r, v) in &cur {
                    let e = acc.entry(r).or_insert(Elem::ZERO);
                    *e = field.add(*e, v);
                }
                cur = piece.apply_sigma(&field, &cur);
            }
            acc.values().all(|v| v.is_zero())
        });
        (ok, "full: Tr applied to every column of sigma - 1")
    } else {
        let ok = piece.factors.iter().all(|f| {
            (0..f.images.len()).all(|k| {
                let mut cur: Vec<(usize, Elem)> = vec![(k, Elem::ONE)];
                for _ in 0..p {
                    let mut acc: BTreeMap<usize, Elem> = BTreeMap::new();
                    for &(i, c) in &cur {
                        for &(j, d) in &f.images[i] {
                            let e = acc.entry(j).or_insert(Elem::ZERO);
                            *e = field.add(*e, field.mul(c, d));
                        }
                    }
                    cur = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                }
                cur == vec![(k, Elem::ONE)]
            })
        });
        (ok, "factorwise: sigma^p = 1 on each factor, so Tr o (sigma - 1) = sigma^p - 1 = 0")
    };

    Ok(ClassOfOneResult {
        nonzero: !one_hit,
        n,
        ell,
        level_bound,
        dim,
        image_rank,
        certificate,
        fixed_point: fixed,
        residue_check,
        trace_check,
        trace_check_method: method.into(),
        support_text,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_match_counting() {
        let f = Field::prime(2).unwrap();
        let a = CyclicAction::moebius(&f, &["x0", "x1", "x2"]).unwrap();
        assert_eq!(class_of_one_test(&a, 2, 0, 10_000).unwrap().dim, 25);
        assert_eq!(class_of_one_test(&a, 0, 0, 10_000).unwrap().image_rank, 0);
        assert!(matches!(class_of_one_test(&a, 8, 1, 100), Err(Error::ResourceCap { dim: 6017, cap: 100 })));
    }
}
