use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::ring::{CechClass, Piece, RingKind, SectionRing};
use crate::error::{Error, Result};
use crate::fparith::{Elem, Exps, Field, MonomialOrder, MultiPoly};
use crate::semilinalg::{Direction, Matrix, SemilinearOperator};

fn p_power(p: u64, e: u32) -> Result<u32> {
    p.checked_pow(e)
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| Error::OutOfRange(alloc::format!("p^{e} overflows")))
}

impl SectionRing {
    /// X^k in frame coordinates reduced modulo the framed relation, dropping
    /// terms whose Y or Z exponent reaches the caps. Reduction only raises
    /// those exponents, so dropped terms never come back.
    fn x_power_truncated(&self, k: u32, cap_y: u32, cap_z: u32) -> MultiPoly {
        let framed = self.framed_relation().expect("plane curve");
        let ring = self.poly_ring();
        let x = ring.var(0);
        let mut cur = ring.one();
        for _ in 0..k {
            cur = (&cur * &x).normal_form(framed, MonomialOrder::Grevlex).expect("homogeneous relation");
            let mut kept = ring.zero();
            for (e, c) in cur.terms() {
                if e[1] < cap_y && e[2] < cap_z {
                    kept = &kept + &ring.monomial(e.clone(), c);
                }
            }
            cur = kept;
        }
        cur
    }

    /// Image of each basis class of `source` under the p^e-th power map,
    /// as coordinate columns in `target`.
    fn frobenius_columns(&self, source: &Piece, target: &Piece, e: u32, top: bool) -> Result<Matrix> {
        let q = p_power(self.characteristic(), e)?;
        let mut m = Matrix::zeros(target.dim(), source.dim());
        let locate = |c: &CechClass| {
            target
                .index_of(c)
                .ok_or_else(|| Error::OutOfRange(alloc::format!("class {c:?} missing from target piece")))
        };
        match (self.kind(), top) {
            (RingKind::ProjectiveSpace { .. }, _) => {
                for (j, b) in source.basis.iter().enumerate() {
                    let img = CechClass {
                        num: b.num.iter().map(|&k| k * q).collect(),
                        den: b.den.iter().map(|&k| k * q).collect(),
                    };
                    m.set(locate(&img)?, j, Elem::ONE);
                }
            }
            (RingKind::PlaneCurve { .. }, false) => {
                let f = self.relation().unwrap();
                let ring = self.poly_ring();
                for (j, b) in source.basis.iter().enumerate() {
                    let mono = ring.monomial(b.num.clone(), Elem::ONE).pow(q as u64);
                    let nf = mono.normal_form(f, MonomialOrder::Grevlex)?;
                    for (ex, c) in nf.terms() {
                        let img = CechClass { num: ex.clone(), den: b.den.clone() };
                        m.set(locate(&img)?, j, c);
                    }
                }
            }
            (RingKind::PlaneCurve { .. }, true) => {
                let mut cache: BTreeMap<u32, MultiPoly> = BTreeMap::new();
                let cap_y = source.basis.iter().map(|b| b.den[1] * q).max().unwrap_or(0);
                let cap_z = source.basis.iter().map(|b| b.den[2] * q).max().unwrap_or(0);
                for (j, b) in source.basis.iter().enumerate() {
                    let a = b.num[0];
                    let nf = cache.entry(a).or_insert_with(|| self.x_power_truncated(a * q, cap_y, cap_z));
                    let (dy, dz) = (b.den[1] * q, b.den[2] * q);
                    for (ex, c) in nf.terms() {
                        if ex[1] >= dy || ex[2] >= dz {
                            continue;
                        }
                        let img = CechClass { num: vec![ex[0], 0, 0], den: vec![0, dy - ex[1], dz - ex[2]] };
                        m.set(locate(&img)?, j, c);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Matrix of the e-fold Frobenius H^i_m(R)_n -> H^i_m(R)_{p^e n},
    /// computed by raising representatives to the p^e-th power.
    pub fn frobenius_iterate_on_piece(&self, i: usize, n: i64, e: u32) -> Result<Matrix> {
        let q = p_power(self.characteristic(), e)? as i64;
        let source = self.local_cohomology_piece(i, n)?;
        let target = self.local_cohomology_piece(i, n * q)?;
        self.frobenius_columns(&source, &target, e, true)
    }

    /// One-step Frobenius H^i_m(R)_n -> H^i_m(R)_{pn}.
    pub fn frobenius_on_piece(&self, i: usize, n: i64) -> Result<Matrix> {
        self.frobenius_iterate_on_piece(i, n, 1)
    }

    /// e-fold Frobenius H^j(Z, L^n) -> H^j(Z, L^{p^e n}).
    pub fn sheaf_frobenius(&self, j: usize, n: i64, e: u32) -> Result<Matrix> {
        let q = p_power(self.characteristic(), e)? as i64;
        let source = self.sheaf_cohomology_piece(j, n)?;
        let target = self.sheaf_cohomology_piece(j, n * q)?;
        let top = j > 0;
        if j > 0 && j < self.base_dim() {
            return Ok(Matrix::zeros(0, 0));
        }
        self.frobenius_columns(&source, &target, e, top)
    }

    /// The Frobenius self-map of H^i_m(R)_0.
    pub fn degree_zero_operator(&self, i: usize) -> Result<SemilinearOperator> {
        let m = self.frobenius_on_piece(i, 0)?;
        SemilinearOperator::new(&self.field().clone(), m, Direction::Frobenius)
    }
}

/// Free-function form of [`SectionRing::graded_piece`].
pub fn graded_piece(ring: &SectionRing, n: i64) -> Vec<Exps> {
    ring.graded_piece(n)
}

pub fn local_cohomology_piece(ring: &SectionRing, i: usize, n: i64) -> Result<Piece> {
    ring.local_cohomology_piece(i, n)
}

pub fn frobenius_on_piece(ring: &SectionRing, i: usize, n: i64) -> Result<Matrix> {
    ring.frobenius_on_piece(i, n)
}

fn require_cubic(ring: &SectionRing) -> Result<()> {
    match ring.kind() {
        RingKind::PlaneCurve { degree: 3 } => Ok(()),
        _ => Err(Error::Unsupported("a smooth plane cubic is required".into())),
    }
}

/// Coefficient of (xyz)^{p-1} in f^{p-1}.
pub fn hasse_invariant(ring: &SectionRing) -> Result<Elem> {
    require_cubic(ring)?;
    let f = ring.relation().unwrap();
    let p = ring.characteristic();
    let k = (p - 1) as u32;
    Ok(f.pow(p - 1).coefficient_of(&[k, k, k]))
}

/// The Cartier operator on H^0(E, omega_E), dual to Frobenius on H^1(E, O_E).
pub fn cartier_on_canonical(ring: &SectionRing) -> Result<SemilinearOperator> {
    require_cubic(ring)?;
    Ok(ring.degree_zero_operator(2)?.dualize())
}

/// Graded pieces on a finite window with the semilinear maps between them.
/// In the Frobenius direction `maps[n]` goes from piece n to piece pn; in the
/// Cartier direction `maps[k]` goes from piece pk to piece k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFrobeniusModule {
    pub field: Field,
    pub direction: Direction,
    pub window: (i64, i64),
    pub pieces: BTreeMap<i64, Piece>,
    pub basis_text: BTreeMap<i64, Vec<String>>,
    pub maps: BTreeMap<i64, Matrix>,
    /// Directly computed two-step maps, same keying as `maps`.
    pub two_step: BTreeMap<i64, Matrix>,
}

impl GradedFrobeniusModule {
    pub fn p(&self) -> i64 {
        self.field.characteristic() as i64
    }

    pub fn in_window(&self, n: i64) -> bool {
        self.window.0 <= n && n <= self.window.1
    }

    /// The stored piece; degrees outside the window are an error.
    pub fn piece(&self, n: i64) -> Result<&Piece> {
        self.pieces
            .get(&n)
            .ok_or_else(|| Error::OutOfRange(alloc::format!("degree {n} outside window {:?}", self.window)))
    }

    pub fn dim(&self, n: i64) -> Result<usize> {
        Ok(self.piece(n)?.dim())
    }

    /// Checks stored shapes and the two-step composition law.
    pub fn check_invariants(&self) -> Result<()> {
        let p = self.p();
        let f = &self.field;
        for (&n, m) in &self.maps {
            let (src, dst) = match self.direction {
                Direction::Frobenius => (n, n * p),
                Direction::Cartier => (n * p, n),
            };
            if m.cols() != self.dim(src)? || m.rows() != self.dim(dst)? {
                return Err(Error::Mismatch("stored map shape disagrees with piece dims"));
            }
        }
        for (&n, direct) in &self.two_step {
            let (Some(first), Some(second)) = (self.maps.get(&n), self.maps.get(&(n * p))) else {
                return Err(Error::Mismatch("two-step map without its stages"));
            };
            let composite = match self.direction {
                Direction::Frobenius => second.mul(f, &first.twist(f, 1)),
                Direction::Cartier => first.twist(f, 1).mul(f, second),
            };
            if &composite != direct {
                return Err(Error::Mismatch("two-step map is not the twisted composite"));
            }
        }
        Ok(())
    }

    /// Dual module: degrees negated, matrices transposed, direction flipped.
    pub fn dual(&self) -> GradedFrobeniusModule {
        let neg = |m: &BTreeMap<i64, Matrix>| m.iter().map(|(&n, a)| (-n, a.transpose())).collect();
        GradedFrobeniusModule {
            field: self.field.clone(),
            direction: self.direction.flip(),
            window: (-self.window.1, -self.window.0),
            pieces: self
                .pieces
                .iter()
                .map(|(&n, pc)| (-n, Piece { degree: -n, basis: pc.basis.clone() }))
                .collect(),
            basis_text: self.basis_text.iter().map(|(&n, b)| (-n, b.clone())).collect(),
            maps: neg(&self.maps),
            two_step: neg(&self.two_step),
        }
    }
}

/// Frobenius module H^i_m(R) on degrees lo..=hi.
pub fn local_cohomology_module(ring: &SectionRing, i: usize, lo: i64, hi: i64) -> Result<GradedFrobeniusModule> {
    build_module(ring, lo, hi, |n| ring.local_cohomology_piece(i, n), |n, e| ring.frobenius_iterate_on_piece(i, n, e))
}

/// Frobenius module of sheaf cohomology H^j(Z, L^n) on degrees lo..=hi.
pub fn sheaf_cohomology_module(ring: &SectionRing, j: usize, lo: i64, hi: i64) -> Result<GradedFrobeniusModule> {
    build_module(ring, lo, hi, |n| ring.sheaf_cohomology_piece(j, n), |n, e| ring.sheaf_frobenius(j, n, e))
}

fn build_module(
    ring: &SectionRing,
    lo: i64,
    hi: i64,
    piece: impl Fn(i64) -> Result<Piece>,
    map: impl Fn(i64, u32) -> Result<Matrix>,
) -> Result<GradedFrobeniusModule> {
    if lo > hi {
        return Err(Error::OutOfRange("empty window".into()));
    }
    let p = ring.characteristic() as i64;
    let mut pieces = BTreeMap::new();
    let mut basis_text = BTreeMap::new();
    let mut maps = BTreeMap::new();
    let mut two_step = BTreeMap::new();
    for n in lo..=hi {
        let pc = piece(n)?;
        basis_text.insert(n, pc.basis.iter().map(|c| ring.class_text(c)).collect());
        pieces.insert(n, pc);
    }
    let inside = |n: i64| lo <= n && n <= hi;
    for n in lo..=hi {
        if inside(n * p) {
            maps.insert(n, map(n, 1)?);
            if inside(n * p * p) {
                two_step.insert(n, map(n, 2)?);
            }
        }
    }
    Ok(GradedFrobeniusModule {
        field: ring.field().clone(),
        direction: Direction::Frobenius,
        window: (lo, hi),
        pieces,
        basis_text,
        maps,
        two_step,
    })
}
