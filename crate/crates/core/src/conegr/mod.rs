//! Cones C_a(Z, L) over the bases of [`crate::gradedcoh`]: higher direct
//! images of the structure sheaf under the blow-up of the vertex, the
//! graded trace module of the dualizing sheaf, and the local-duality
//! comparison between the two.

mod duality;
mod trace;

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gradedcoh::{sheaf_cohomology_module, GradedFrobeniusModule, RingKind, SectionRing};
use crate::semilinalg::{Direction, Nilpotence, SemilinearOperator};

pub use duality::{duality_crosscheck, ChainVerdict, DualityPair, DualityReport};
pub use trace::{compose_stages, decide_gr_nilpotent, gr_trace_module, GrTraceModule, GrVerdict, Psi};

/// The cone over (Z, L) with the finite bounds a computation may use.
#[derive(Clone, Debug)]
pub struct ConeSpec {
    pub base: SectionRing,
    /// Largest graded degree m considered.
    pub window: i64,
    /// Iteration bound for trace composites.
    pub e_max: u32,
    /// Cohomological index under study.
    pub i: usize,
}

impl ConeSpec {
    pub fn new(base: SectionRing, window: i64, e_max: u32, i: usize) -> Result<ConeSpec> {
        if window < 1 || e_max < 1 {
            return Err(Error::OutOfRange("window and e_max must be positive".into()));
        }
        Ok(ConeSpec { base, window, e_max, i })
    }

    /// Dimension of the cone, dim Z + 1.
    pub fn cone_dim(&self) -> usize {
        self.base.krull_dim()
    }

    fn with_i(&self, i: usize) -> ConeSpec {
        ConeSpec { i, ..self.clone() }
    }
}

/// R^i f_* O_Y as the graded module of H^i(Z, L^n), n >= 0.
#[derive(Clone, Debug)]
pub struct HigherDirectImage {
    pub i: usize,
    pub module: GradedFrobeniusModule,
    /// Least n with H^i(Z, L^k) = 0 for every k >= n.
    pub n0: i64,
}

/// Degree beyond which H^i(Z, L^n) = 0 for i >= 1 is classical.
fn regularity_bound(base: &SectionRing) -> i64 {
    match base.kind() {
        RingKind::ProjectiveSpace { .. } => 0,
        RingKind::PlaneCurve { degree } => (*degree as i64 - 2).max(0),
    }
}

pub fn cone_higher_direct_image(spec: &ConeSpec) -> Result<HigherDirectImage> {
    let i = spec.i;
    if i < 1 || i > spec.base.base_dim() {
        return Err(Error::OutOfRange(alloc::format!("index {i} outside 1..=dim Z")));
    }
    let bound = regularity_bound(&spec.base);
    let mut n0 = 0;
    for n in 0..=bound {
        if spec.base.sheaf_cohomology_piece(i, n)?.dim() != 0 {
            n0 = n + 1;
        }
    }
    if spec.window < n0 {
        return Err(Error::WindowTooSmall { needed: n0, window: spec.window });
    }
    let module = sheaf_cohomology_module(&spec.base, i, 0, spec.window)?;
    Ok(HigherDirectImage { i, module, n0 })
}

/// Evidence for one index i of the rationality verdict.
#[derive(Clone, Debug)]
pub struct RationalityWitness {
    pub i: usize,
    pub n0: i64,
    /// Frobenius on H^i(Z, O_Z), the degree zero piece.
    pub operator: SemilinearOperator,
    pub nilpotence: Nilpotence,
    /// Degrees 1..n0 with nonzero pieces; Frobenius pushes each past n0.
    pub transient_degrees: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct RationalityVerdict {
    pub rational: bool,
    /// True when every piece of every R^i f_* O_Y vanishes.
    pub vacuous: bool,
    pub witnesses: Vec<RationalityWitness>,
}

pub fn is_fp_rational_cone(spec: &ConeSpec) -> Result<RationalityVerdict> {
    let mut witnesses = Vec::new();
    let mut rational = true;
    let mut vacuous = true;
    for i in 1..=spec.base.base_dim() {
        let hdi = cone_higher_direct_image(&spec.with_i(i))?;
        let m0 = hdi.module.maps.get(&0).cloned().expect("degree zero self-map is always stored");
        let operator = SemilinearOperator::new(spec.base.field(), m0, Direction::Frobenius)?;
        let nilpotence = operator.is_nilpotent();
        let transient_degrees: Vec<i64> =
            (1..hdi.n0).filter(|&n| hdi.module.dim(n).map(|d| d > 0).unwrap_or(false)).collect();
        if hdi.module.pieces.values().any(|pc| pc.dim() > 0) {
            vacuous = false;
        }
        rational &= nilpotence.nilpotent;
        witnesses.push(RationalityWitness { i, n0: hdi.n0, operator, nilpotence, transient_degrees });
    }
    Ok(RationalityVerdict { rational, vacuous, witnesses })
}

/// One row of a dimension table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimRow {
    pub degree: i64,
    pub i: usize,
    pub dim: usize,
    pub map_rank: Option<usize>,
    pub nilpotent: Option<bool>,
}

/// dim H^i(Z, L^n) for 0 <= n <= window with the rank of Frobenius out of
/// each piece and, at n = 0, the nilpotency flag.
pub fn direct_image_table(spec: &ConeSpec) -> Result<Vec<DimRow>> {
    let mut rows = Vec::new();
    for i in 1..=spec.base.base_dim() {
        let hdi = cone_higher_direct_image(&spec.with_i(i))?;
        let f = spec.base.field();
        for (&n, pc) in &hdi.module.pieces {
            let map = hdi.module.maps.get(&n);
            let nilpotent = if n == 0 {
                let op = SemilinearOperator::new(f, map.unwrap().clone(), Direction::Frobenius)?;
                Some(op.is_nilpotent().nilpotent)
            } else {
                // positive degrees leave every bounded window, hence nilpotent
                Some(true)
            };
            rows.push(DimRow { degree: n, i, dim: pc.dim(), map_rank: map.map(|m| m.rank(f)), nilpotent });
        }
    }
    Ok(rows)
}

/// dim H^i(Z, omega_Z (x) L^n) for 1 <= n <= window, via Serre duality.
pub fn canonical_dimension_table(spec: &ConeSpec) -> Result<Vec<DimRow>> {
    let d = spec.base.base_dim();
    let mut rows = Vec::new();
    for i in 0..=d {
        for n in 1..=spec.window {
            let dim = spec.base.sheaf_cohomology_piece(d - i, -n)?.dim();
            rows.push(DimRow { degree: n, i, dim, map_rank: None, nilpotent: None });
        }
    }
    Ok(rows)
}

pub(crate) fn describe_nilpotence(n: &Nilpotence) -> String {
    match n.index {
        Some(k) => alloc::format!("nilpotent, index {k}"),
        None => "not nilpotent".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fparith::{parse_poly, Field, PolyRing};

    fn cubic_cone(text: &str) -> ConeSpec {
        let f = Field::prime(2).unwrap();
        let r = PolyRing::new(&f, &["x", "y", "z"]);
        let base = SectionRing::plane_curve(&parse_poly(&r, text).unwrap()).unwrap();
        ConeSpec::new(base, 4, 2, 1).unwrap()
    }

    #[test]
    fn supersingular_and_ordinary() {
        let ss = is_fp_rational_cone(&cubic_cone("y^2*z + y*z^2 + x^3")).unwrap();
        assert!(ss.rational);
        assert_eq!(ss.witnesses[0].nilpotence.index, Some(1));
        let ord = is_fp_rational_cone(&cubic_cone("y^2*z + x*y*z + x^3 + z^3")).unwrap();
        assert!(!ord.rational);
        assert!(!ord.witnesses[0].operator.matrix().is_zero());
    }

    #[test]
    fn direct_image_threshold() {
        let hdi = cone_higher_direct_image(&cubic_cone("y^2*z + y*z^2 + x^3")).unwrap();
        assert_eq!(hdi.n0, 1);
        assert_eq!(hdi.module.dim(0).unwrap(), 1);
        assert!((1..=4).all(|n| hdi.module.dim(n).unwrap() == 0));
    }

    #[test]
    fn p1_trace_pattern() {
        let f = Field::prime(2).unwrap();
        let base = SectionRing::projective_space(&f, 1, 1).unwrap();
        let spec = ConeSpec::new(base, 1, 1, 1).unwrap();
        let t = gr_trace_module(&spec, 1, 1).unwrap();
        assert!(matches!(t.psi[&1], Psi::Zero { .. }));
        assert!(matches!(t.psi[&2], Psi::Trace { k: 1, .. }));
        t.check_structure().unwrap();
        assert!(gr_trace_module(&spec, 1, 0).is_err());
        let v = decide_gr_nilpotent(&spec, 1).unwrap();
        assert_eq!((v.nilpotent, v.e0), (true, Some(1)));
    }

    #[test]
    fn duality_on_supersingular_cone() {
        let spec = cubic_cone("y^2*z + y*z^2 + x^3");
        let rep = duality_crosscheck(&spec, 2, 8).unwrap();
        assert!(rep.hypothesis_met && rep.consistent);
        let ord = duality_crosscheck(&cubic_cone("y^2*z + x*y*z + x^3 + z^3"), 2, 8).unwrap();
        assert!(!ord.hypothesis_met);
        assert!(ord.note.contains("hypothesis not met"));
    }
}
