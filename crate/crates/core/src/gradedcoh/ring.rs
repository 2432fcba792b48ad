use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fparith::{Elem, Exps, Field, MonomialOrder, MultiPoly, PolyRing};

/// Which pair (Z, L) the ring is built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    /// Z = P^n, L = O(step).
    ProjectiveSpace { n: usize, step: u32 },
    /// Z = V(f) in P^2, L = O(1).
    PlaneCurve { degree: u32 },
}

/// A class num/den in frame coordinates. Sections have `den` all zero;
/// local cohomology classes have positive exponents exactly on the system
/// of parameters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CechClass {
    pub num: Exps,
    pub den: Exps,
}

/// An ordered basis of one graded piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub degree: i64,
    pub basis: Vec<CechClass>,
}

impl Piece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, c: &CechClass) -> Option<usize> {
        self.basis.binary_search(c).ok()
    }
}

/// The section ring of (Z, L): a polynomial ring, its Veronese subring, or
/// a plane curve ring S/(f).
#[derive(Clone, Debug)]
pub struct SectionRing {
    kind: RingKind,
    field: Field,
    ring: PolyRing,
    relation: Option<MultiPoly>,
    /// The relation after the linear frame change, with leading grevlex
    /// monomial a pure power of the first variable.
    framed: Option<MultiPoly>,
    /// Columns are the images of the frame coordinates.
    frame: Vec<Vec<Elem>>,
    smoothness_checked: bool,
}

impl SectionRing {
    /// P^n with L = O(step); variables x0..xn.
    pub fn projective_space(field: &Field, n: usize, step: u32) -> Result<SectionRing> {
        if n == 0 || step == 0 {
            return Err(Error::OutOfRange("projective space needs n >= 1 and step >= 1".into()));
        }
        let vars: Vec<String> = (0..=n).map(|i| alloc::format!("x{i}")).collect();
        let ring = PolyRing::new(field, &vars);
        let frame = (0..=n).map(|i| unit_vector(n + 1, i)).collect();
        Ok(SectionRing {
            kind: RingKind::ProjectiveSpace { n, step },
            field: field.clone(),
            ring,
            relation: None,
            framed: None,
            frame,
            smoothness_checked: true,
        })
    }

    /// The plane curve V(f). Smoothness is verified for degree at most 3 and
    /// recorded as unchecked above that.
    pub fn plane_curve(relation: &MultiPoly) -> Result<SectionRing> {
        let ring = relation.ring().clone();
        if ring.nvars() != 3 {
            return Err(Error::OutOfRange("plane curve needs three variables".into()));
        }
        if relation.is_zero() || !relation.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let degree = relation.total_degree().unwrap_or(0);
        if degree == 0 {
            return Err(Error::OutOfRange("relation must have positive degree".into()));
        }
        let field = ring.field().clone();
        let smoothness_checked = degree <= 3;
        if smoothness_checked {
            if let Some(pt) = singular_point(relation)? {
                return Err(Error::Singular(pt));
            }
        }
        let frame = choose_frame(relation)?;
        let images: Vec<MultiPoly> = (0..3)
            .map(|i| {
                // original coordinate i = sum_j frame[j][i] * X_j
                let mut g = ring.zero();
                for (j, col) in frame.iter().enumerate() {
                    g = &g + &ring.var(j).scale(col[i]);
                }
                g
            })
            .collect();
        let framed = relation.substitute(&images, &ring).monic(MonomialOrder::Grevlex);
        debug_assert_eq!(framed.leading_term(MonomialOrder::Grevlex).unwrap().0, vec![degree, 0, 0]);
        Ok(SectionRing {
            kind: RingKind::PlaneCurve { degree },
            field,
            ring,
            relation: Some(relation.clone()),
            framed: Some(framed),
            frame,
            smoothness_checked,
        })
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn relation(&self) -> Option<&MultiPoly> {
        self.relation.as_ref()
    }

    pub fn framed_relation(&self) -> Option<&MultiPoly> {
        self.framed.as_ref()
    }

    /// Columns: images of the frame coordinates in the original ones.
    pub fn frame(&self) -> &[Vec<Elem>] {
        &self.frame
    }

    pub fn frame_is_identity(&self) -> bool {
        self.frame.iter().enumerate().all(|(i, c)| *c == unit_vector(c.len(), i))
    }

    pub fn smoothness_checked(&self) -> bool {
        self.smoothness_checked
    }

    pub fn characteristic(&self) -> u64 {
        self.field.characteristic()
    }

    /// dim Z.
    pub fn base_dim(&self) -> usize {
        match self.kind {
            RingKind::ProjectiveSpace { n, .. } => n,
            RingKind::PlaneCurve { .. } => 1,
        }
    }

    /// Krull dimension of the section ring, dim Z + 1.
    pub fn krull_dim(&self) -> usize {
        self.base_dim() + 1
    }

    /// Degree t with omega_Z = O(t) in the ambient grading; for P^n the twist
    /// is only a multiple of L when step divides n + 1.
    pub fn canonical_ambient_degree(&self) -> i64 {
        match self.kind {
            RingKind::ProjectiveSpace { n, .. } => -(n as i64) - 1,
            RingKind::PlaneCurve { degree } => degree as i64 - 3,
        }
    }

    /// Ambient polynomial degree of the graded degree n.
    pub fn ambient_degree(&self, n: i64) -> i64 {
        match self.kind {
            RingKind::ProjectiveSpace { step, .. } => n * step as i64,
            RingKind::PlaneCurve { .. } => n,
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            RingKind::ProjectiveSpace { n, step } => alloc::format!("P^{n}, L = O({step})"),
            RingKind::PlaneCurve { .. } => {
                alloc::format!("V({}) in P^2", self.relation.as_ref().unwrap())
            }
        }
    }

    /// Normal-form monomial basis of R_n, grevlex descending.
    pub fn graded_piece(&self, n: i64) -> Vec<Exps> {
        if n < 0 {
            return Vec::new();
        }
        let deg = self.ambient_degree(n) as u32;
        let all = self.ring.monomials_of_degree(deg);
        match &self.relation {
            None => all,
            Some(f) => {
                let lt = f.leading_term(MonomialOrder::Grevlex).unwrap().0;
                all.into_iter().filter(|m| !m.iter().zip(&lt).all(|(a, b)| a >= b)).collect()
            }
        }
    }

    /// Sections H^0(Z, L^n) as a piece with zero denominators.
    pub fn section_piece(&self, n: i64) -> Piece {
        let zero = vec![0u32; self.ring.nvars()];
        let mut basis: Vec<CechClass> =
            self.graded_piece(n).into_iter().map(|m| CechClass { num: m, den: zero.clone() }).collect();
        basis.sort();
        Piece { degree: n, basis }
    }

    /// Basis of H^i_m(R)_n. Only the top index is nonzero: both ring types
    /// are Cohen-Macaulay.
    pub fn local_cohomology_piece(&self, i: usize, n: i64) -> Result<Piece> {
        let top = self.krull_dim();
        if i > top {
            return Err(Error::OutOfRange(alloc::format!("cohomological index {i} above {top}")));
        }
        if i < top {
            return Ok(Piece { degree: n, basis: Vec::new() });
        }
        let m = self.ambient_degree(n);
        let mut basis = Vec::new();
        match self.kind {
            RingKind::ProjectiveSpace { n: dim, .. } => {
                let total = -m;
                if total >= (dim as i64 + 1) {
                    for beta in compositions(total as u32, dim + 1) {
                        basis.push(CechClass { num: vec![0; dim + 1], den: beta });
                    }
                }
            }
            RingKind::PlaneCurve { degree } => {
                for a in 0..degree as i64 {
                    let s = a - m;
                    for beta in 1..s {
                        basis.push(CechClass {
                            num: vec![a as u32, 0, 0],
                            den: vec![0, beta as u32, (s - beta) as u32],
                        });
                    }
                }
            }
        }
        basis.sort();
        Ok(Piece { degree: n, basis })
    }

    /// H^j(Z, L^n): sections for j = 0, top local cohomology for j = dim Z,
    /// zero otherwise.
    pub fn sheaf_cohomology_piece(&self, j: usize, n: i64) -> Result<Piece> {
        let d = self.base_dim();
        if j > d {
            return Err(Error::OutOfRange(alloc::format!("sheaf cohomology index {j} above {d}")));
        }
        if j == 0 {
            Ok(self.section_piece(n))
        } else if j == d {
            self.local_cohomology_piece(d + 1, n)
        } else {
            Ok(Piece { degree: n, basis: Vec::new() })
        }
    }

    /// Projective F_q-points of the curve (or of P^n).
    pub fn projective_point_count(&self) -> u64 {
        match &self.relation {
            None => {
                let q = self.field.order();
                let n = self.base_dim() as u32;
                (0..=n).map(|k| q.pow(k)).sum()
            }
            Some(f) => {
                let field = self.field.clone();
                projective_points(&field, 3).filter(|pt| f.eval(pt).is_zero()).count() as u64
            }
        }
    }

    /// Text of a class in the original variable names (frame coordinates).
    pub fn class_text(&self, c: &CechClass) -> String {
        let vars = self.ring.vars();
        let mono = |e: &[u32]| -> String {
            let parts: Vec<String> = e
                .iter()
                .zip(vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { alloc::format!("{v}^{k}") })
                .collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("*")
            }
        };
        if c.den.iter().all(|&k| k == 0) {
            mono(&c.num)
        } else {
            alloc::format!("{}/({})", mono(&c.num), mono(&c.den))
        }
    }
}

pub(crate) fn unit_vector(n: usize, i: usize) -> Vec<Elem> {
    let mut v = vec![Elem::ZERO; n];
    v[i] = Elem::ONE;
    v
}

/// Compositions of `total` into `parts` positive parts, lex ascending.
fn compositions(total: u32, parts: usize) -> Vec<Exps> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(parts);
    fn rec(rem: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Exps>) {
        if parts == 1 {
            if rem >= 1 {
                cur.push(rem);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for k in 1..=rem.saturating_sub(parts as u32 - 1) {
            cur.push(k);
            rec(rem - k, parts - 1, cur, out);
            cur.pop();
        }
    }
    rec(total, parts, &mut cur, &mut out);
    out
}

/// Representatives of P^{n-1}(field): first nonzero coordinate is one.
pub(crate) fn projective_points(field: &Field, n: usize) -> impl Iterator<Item = Vec<Elem>> {
    let q = field.order();
    let field = field.clone();
    (0..n).flat_map(move |lead| {
        let field = field.clone();
        let free = n - lead - 1;
        (0..q.pow(free as u32)).map(move |mut idx| {
            let mut pt = vec![Elem::ZERO; n];
            pt[lead] = Elem::ONE;
            for slot in pt.iter_mut().skip(lead + 1) {
                *slot = field.element(idx % q);
                idx /= q;
            }
            pt
        })
    })
}

fn partial(f: &MultiPoly, var: usize) -> MultiPoly {
    let ring = f.ring();
    let field = f.field();
    let mut out = ring.zero();
    for (e, c) in f.terms() {
        if e[var] == 0 {
            continue;
        }
        let mut ne = e.clone();
        ne[var] -= 1;
        let k = field.mul(c, field.from_int(e[var] as i64));
        out = &out + &ring.monomial(ne, k);
    }
    out
}

/// A singular point over F_q, F_{q^2} or F_{q^3}, as text. For curves of
/// degree at most 3 every singular point is defined over one of these.
fn singular_point(f: &MultiPoly) -> Result<Option<String>> {
    let field = f.field().clone();
    let polys: Vec<MultiPoly> = core::iter::once(f.clone()).chain((0..3).map(|i| partial(f, i))).collect();
    for k in 1..=3u32 {
        let big = if k == 1 { field.clone() } else { Field::new(field.characteristic(), field.degree() * k)? };
        let emb = field.embedding_into(&big)?;
        for pt in projective_points(&big, 3) {
            if polys.iter().all(|g| g.eval_mapped(&big, |c| emb.map(c), &pt).is_zero()) {
                let coords: Vec<String> = pt.iter().map(|&a| big.format(a)).collect();
                return Ok(Some(alloc::format!("[{}] over F_{}", coords.join(":"), big.order())));
            }
        }
    }
    Ok(None)
}

/// Frame columns (v, u, w) with f(v) != 0, completed by standard vectors.
fn choose_frame(f: &MultiPoly) -> Result<Vec<Vec<Elem>>> {
    let field = f.field().clone();
    let candidates = (0..3).map(|i| unit_vector(3, i)).chain(projective_points(&field, 3));
    for v in candidates {
        if f.eval(&v).is_zero() {
            continue;
        }
        let pivot = v.iter().position(|a| !a.is_zero()).unwrap();
        let mut cols = vec![v];
        for i in 0..3 {
            if i != pivot {
                cols.push(unit_vector(3, i));
            }
        }
        return Ok(cols);
    }
    Err(Error::Unsupported("curve contains every rational point of the plane".into()))
}
