use alloc::string::String;
use alloc::vec::Vec;

use super::{describe_nilpotence, is_fp_rational_cone, ConeSpec};
use crate::error::{Error, Result};
use crate::gradedcoh::{local_cohomology_module, GradedFrobeniusModule};
use crate::semilinalg::{Direction, Matrix, SemilinearOperator};

/// Behaviour of the iterated structure map on one piece, as far as the
/// window allows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainVerdict {
    pub label: String,
    /// None when the chain leaves the window before dying.
    pub nilpotent: Option<bool>,
    pub steps: u32,
}

impl ChainVerdict {
    fn zero_piece() -> ChainVerdict {
        ChainVerdict { label: "zero piece".into(), nilpotent: Some(true), steps: 0 }
    }

    fn dies(k: u32) -> ChainVerdict {
        ChainVerdict { label: alloc::format!("zero after {k} steps"), nilpotent: Some(true), steps: k }
    }

    fn leaves(k: u32) -> ChainVerdict {
        ChainVerdict {
            label: alloc::format!("nonzero for {k} steps, then leaves the window"),
            nilpotent: None,
            steps: k,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityPair {
    /// Degree of the local cohomology piece.
    pub n: i64,
    pub frobenius: ChainVerdict,
    /// Degree -n on the Cartier side.
    pub cartier: ChainVerdict,
    pub consistent: bool,
}

#[derive(Clone, Debug)]
pub struct DualityReport {
    pub hypothesis_met: bool,
    pub cone_dim: usize,
    pub i: usize,
    pub dual_index: usize,
    pub window: i64,
    pub pairs: Vec<DualityPair>,
    pub consistent: bool,
    pub note: String,
}

fn degree_zero(m: &GradedFrobeniusModule, direction: Direction) -> Result<ChainVerdict> {
    let op = SemilinearOperator::new(&m.field, m.maps[&0].clone(), direction)?;
    let nil = op.is_nilpotent();
    Ok(ChainVerdict { label: describe_nilpotence(&nil), nilpotent: Some(nil.nilpotent), steps: nil.index.unwrap_or(0) })
}

/// Frobenius chain n -> pn -> p^2 n ... inside the window.
fn frobenius_chain(m: &GradedFrobeniusModule, n: i64) -> Result<ChainVerdict> {
    if m.dim(n)? == 0 {
        return Ok(ChainVerdict::zero_piece());
    }
    if n == 0 {
        return degree_zero(m, Direction::Frobenius);
    }
    let f = &m.field;
    let p = m.p();
    let Some(first) = m.maps.get(&n) else {
        return Ok(ChainVerdict::leaves(0));
    };
    let mut acc: Matrix = first.clone();
    let mut cur = n * p;
    let mut k = 1;
    loop {
        if acc.is_zero() {
            return Ok(ChainVerdict::dies(k));
        }
        match m.maps.get(&cur) {
            Some(next) => {
                acc = next.mul(f, &acc.twist(f, 1));
                cur *= p;
                k += 1;
            }
            None => return Ok(ChainVerdict::leaves(k)),
        }
    }
}

/// Cartier chain ending at degree `t`: ... -> p^2 t -> p t -> t.
fn cartier_chain(m: &GradedFrobeniusModule, t: i64) -> Result<ChainVerdict> {
    if m.dim(t)? == 0 {
        return Ok(ChainVerdict::zero_piece());
    }
    if t == 0 {
        return degree_zero(m, Direction::Cartier);
    }
    let f = &m.field;
    let p = m.p();
    let Some(first) = m.maps.get(&t) else {
        return Ok(ChainVerdict::leaves(0));
    };
    let mut acc: Matrix = first.clone();
    let mut src = t * p;
    let mut k = 1;
    loop {
        if acc.is_zero() {
            return Ok(ChainVerdict::dies(k));
        }
        match m.maps.get(&src) {
            Some(next) => {
                acc = acc.twist(f, 1).mul(f, next);
                src *= p;
                k += 1;
            }
            None => return Ok(ChainVerdict::leaves(k)),
        }
    }
}

/// Compares, piece by piece on |n| <= window, the Frobenius behaviour of
/// H^i_m(R) with the Cartier behaviour of its graded dual, which models
/// R^{d-i} f_* omega_Y.
pub fn duality_crosscheck(spec: &ConeSpec, i: usize, window: i64) -> Result<DualityReport> {
    let d = spec.cone_dim();
    if i > d {
        return Err(Error::OutOfRange(alloc::format!("index {i} above cone dimension {d}")));
    }
    if window < 1 {
        return Err(Error::OutOfRange("window must be positive".into()));
    }
    let verdict = is_fp_rational_cone(spec)?;
    let mut report = DualityReport {
        hypothesis_met: verdict.rational,
        cone_dim: d,
        i,
        dual_index: d - i,
        window,
        pairs: Vec::new(),
        consistent: false,
        note: String::new(),
    };
    if !verdict.rational {
        report.note = "hypothesis not met: the cone is not F_p-rational".into();
        return Ok(report);
    }
    let frob = local_cohomology_module(&spec.base, i, -window, window)?;
    let cart = frob.dual();
    for n in -window..=window {
        let fv = frobenius_chain(&frob, n)?;
        let cv = cartier_chain(&cart, -n)?;
        let consistent = fv.nilpotent == cv.nilpotent && fv.steps == cv.steps;
        report.pairs.push(DualityPair { n, frobenius: fv, cartier: cv, consistent });
    }
    report.consistent = report.pairs.iter().all(|pr| pr.consistent);
    report.note = alloc::format!("{} pairs compared", report.pairs.len());
    Ok(report)
}
