use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::ConeSpec;
use crate::error::{Error, Result};
use crate::semilinalg::Matrix;

/// The component map out of the source piece r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Psi {
    /// r = p^e k: the e-fold trace into target piece k, as the matrix A with
    /// Tr(w) = (A w)^(1/p^e).
    Trace { k: i64, matrix: Matrix },
    /// p^e does not divide r.
    Zero { source_dim: usize },
}

/// The graded trace module: pieces H^i(Z, omega (x) L^r) for 1 <= r <= m p^e
/// mapping to pieces 1 <= n <= m.
///
/// H^i(Z, omega (x) L^r) carries the basis dual to H^{dim Z - i}(Z, L^{-r}),
/// so the trace is the transpose of Frobenius on the dual side.
#[derive(Clone, Debug)]
pub struct GrTraceModule {
    pub i: usize,
    pub m: i64,
    pub e: u32,
    pub p: i64,
    pub source_dims: BTreeMap<i64, usize>,
    pub target_dims: BTreeMap<i64, usize>,
    pub psi: BTreeMap<i64, Psi>,
}

impl GrTraceModule {
    /// True when every component map is zero.
    pub fn is_zero(&self) -> bool {
        self.psi.values().all(|ps| match ps {
            Psi::Zero { .. } => true,
            Psi::Trace { matrix, .. } => matrix.is_zero(),
        })
    }

    /// Checks the shape invariants: zero exactly off multiples of p^e, and
    /// traces landing in piece r / p^e with matching dims.
    pub fn check_structure(&self) -> Result<()> {
        let q = self.p.pow(self.e);
        for (&r, ps) in &self.psi {
            match ps {
                Psi::Zero { source_dim } => {
                    if r % q == 0 || *source_dim != self.source_dims[&r] {
                        return Err(Error::Mismatch("zero component at a multiple of p^e"));
                    }
                }
                Psi::Trace { k, matrix } => {
                    if r % q != 0 || *k != r / q {
                        return Err(Error::Mismatch("trace component off a multiple of p^e"));
                    }
                    if matrix.cols() != self.source_dims[&r] || matrix.rows() != self.target_dims[k] {
                        return Err(Error::Mismatch("trace matrix shape"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trace_matrix(&self, k: i64) -> Option<&Matrix> {
        match self.psi.get(&(k * self.p.pow(self.e)))? {
            Psi::Trace { matrix, .. } => Some(matrix),
            Psi::Zero { .. } => None,
        }
    }
}

/// Assembles all psi_r for the cone's index `spec.i`. Index 0 is accepted
/// so that the trace maps are not all trivially zero.
pub fn gr_trace_module(spec: &ConeSpec, m: i64, e: u32) -> Result<GrTraceModule> {
    if e == 0 {
        return Err(Error::OutOfRange("e must be at least 1".into()));
    }
    if m < 1 {
        return Err(Error::OutOfRange("m must be at least 1".into()));
    }
    let base = &spec.base;
    let dz = base.base_dim();
    let i = spec.i;
    if i > dz {
        return Err(Error::OutOfRange(alloc::format!("index {i} above dim Z")));
    }
    let j = dz - i;
    let p = base.characteristic() as i64;
    let q = p
        .checked_pow(e)
        .filter(|q| q.checked_mul(m).is_some())
        .ok_or_else(|| Error::OutOfRange("p^e m overflows".into()))?;
    let mut source_dims = BTreeMap::new();
    let mut target_dims = BTreeMap::new();
    let mut psi = BTreeMap::new();
    for n in 1..=m {
        target_dims.insert(n, base.sheaf_cohomology_piece(j, -n)?.dim());
    }
    for r in 1..=m * q {
        let sd = base.sheaf_cohomology_piece(j, -r)?.dim();
        source_dims.insert(r, sd);
        if r % q == 0 {
            let k = r / q;
            let frob = base.sheaf_frobenius(j, -k, e)?;
            psi.insert(r, Psi::Trace { k, matrix: frob.transpose() });
        } else {
            psi.insert(r, Psi::Zero { source_dim: sd });
        }
    }
    Ok(GrTraceModule { i, m, e, p, source_dims, target_dims, psi })
}

/// Composite traces Tr^{e1} o Tr^{e2} into pieces 1..=outer.m, where `outer`
/// has exponent e1 and `inner` has exponent e2 on the window m p^{e1}. With
/// Tr^{e1}(u) = (A u)^(1/p^e1) and Tr^{e2}(w) = (B w)^(1/p^e2) the composite
/// has matrix A^(p^e2) B.
pub fn compose_stages(
    spec: &ConeSpec,
    outer: &GrTraceModule,
    inner: &GrTraceModule,
) -> Result<BTreeMap<i64, Matrix>> {
    let f = spec.base.field();
    let q1 = outer.p.pow(outer.e);
    if inner.m < outer.m * q1 {
        return Err(Error::Mismatch("inner window does not cover the outer sources"));
    }
    let mut out = BTreeMap::new();
    for k in 1..=outer.m {
        let a = outer.trace_matrix(k).ok_or(Error::Mismatch("missing outer trace"))?;
        let b = inner.trace_matrix(k * q1).ok_or(Error::Mismatch("missing inner trace"))?;
        out.insert(k, a.twist(f, inner.e as i64).mul(f, b));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrVerdict {
    pub nilpotent: bool,
    pub e0: Option<u32>,
    /// Least n >= 1 from which H^i(Z, omega (x) L^k) = 0 for all scanned k.
    pub serre_threshold: Option<i64>,
    pub reason: String,
}

/// Least e <= e_max for which every trace composite into the window is zero.
pub fn decide_gr_nilpotent(spec: &ConeSpec, i: usize) -> Result<GrVerdict> {
    if i < 1 {
        return Err(Error::OutOfRange("index must be at least 1".into()));
    }
    let spec = ConeSpec { i, ..spec.clone() };
    let base = &spec.base;
    let j = base.base_dim().checked_sub(i).ok_or_else(|| Error::OutOfRange("index above dim Z".into()))?;
    let dims: Vec<usize> = (1..=spec.window)
        .map(|n| base.sheaf_cohomology_piece(j, -n).map(|pc| pc.dim()))
        .collect::<Result<_>>()?;
    let serre_threshold = (1..=spec.window).find(|&n| dims[(n - 1) as usize..].iter().all(|&d| d == 0));
    for e in 1..=spec.e_max {
        let module = gr_trace_module(&spec, spec.window, e)?;
        if module.is_zero() {
            let reason = if serre_threshold == Some(1) {
                alloc::format!("H^{i}(Z, omega (x) L^n) = 0 for 1 <= n <= {}, so every trace lands in zero", spec.window)
            } else {
                alloc::format!("all trace composites vanish at e = {e}")
            };
            return Ok(GrVerdict { nilpotent: true, e0: Some(e), serre_threshold, reason });
        }
    }
    Ok(GrVerdict {
        nilpotent: false,
        e0: None,
        serre_threshold,
        reason: alloc::format!("nonzero trace composite for every e <= {}", spec.e_max),
    })
}
