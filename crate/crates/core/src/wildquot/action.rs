use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fparith::{eval_poly_at, Elem, Field, FractionRing, LocalizedFraction, PolyRing};

/// The ambient ring an action lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionKind {
    LocalizedAffine,
    LaurentTorus,
    ProjectiveChart,
}

impl ActionKind {
    pub fn name(self) -> &'static str {
        match self {
            ActionKind::LocalizedAffine => "localized_affine",
            ActionKind::LaurentTorus => "laurent_torus",
            ActionKind::ProjectiveChart => "projective_chart",
        }
    }

    pub fn from_name(s: &str) -> Option<ActionKind> {
        match s {
            "localized_affine" => Some(ActionKind::LocalizedAffine),
            "laurent_torus" => Some(ActionKind::LaurentTorus),
            "projective_chart" => Some(ActionKind::ProjectiveChart),
            _ => None,
        }
    }
}

/// An action of Z/p = <sigma> on a localized ring, given by the images of
/// the generators.
#[derive(Clone, Debug)]
pub struct CyclicAction {
    kind: ActionKind,
    ring: FractionRing,
    images: Vec<LocalizedFraction>,
}

impl CyclicAction {
    /// Validates that every atom maps to a unit and that sigma^p fixes every
    /// generator.
    pub fn new(kind: ActionKind, ring: &FractionRing, images: Vec<LocalizedFraction>) -> Result<CyclicAction> {
        if images.len() != ring.nvars() {
            return Err(Error::Mismatch("one image per generator is required"));
        }
        if images.iter().any(|g| g.ring() != ring) {
            return Err(Error::Mismatch("image lives in another ring"));
        }
        for a in ring.atoms() {
            let img = eval_poly_at(a, &images, ring)?;
            if !img.is_unit() {
                return Err(Error::NotUnit(alloc::format!("sigma({a}) = {img}")));
            }
        }
        let action = CyclicAction { kind, ring: ring.clone(), images };
        let p = ring.field().characteristic();
        for i in 0..ring.nvars() {
            let x = ring.var(i);
            if action.sigma_power(&x, p)? != x {
                return Err(Error::OutOfRange(alloc::format!(
                    "sigma^{p} does not fix {}",
                    ring.poly().vars()[i]
                )));
            }
        }
        Ok(action)
    }

    /// Parses one image per generator.
    pub fn from_texts<S: AsRef<str>>(kind: ActionKind, ring: &FractionRing, texts: &[S]) -> Result<CyclicAction> {
        let images = texts
            .iter()
            .map(|t| crate::fparith::parse_fraction(ring, t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        CyclicAction::new(kind, ring, images)
    }

    /// sigma(x_i) = x_i / (1 + x_i) on (A^1 minus {1..p-1})^n.
    pub fn moebius<S: AsRef<str>>(field: &Field, vars: &[S]) -> Result<CyclicAction> {
        let ring = FractionRing::punctured_affine(field, vars)?;
        let images = (0..ring.nvars())
            .map(|i| ring.var(i).try_div(&ring.var(i).try_add(&ring.one())?))
            .collect::<Result<Vec<_>>>()?;
        CyclicAction::new(ActionKind::LocalizedAffine, &ring, images)
    }

    /// x_i -> 1/x_i on the torus; an action of order p only for p = 2.
    pub fn torus_inversion<S: AsRef<str>>(field: &Field, vars: &[S]) -> Result<CyclicAction> {
        let ring = FractionRing::laurent(field, vars)?;
        let images = (0..ring.nvars()).map(|i| ring.var(i).inverse()).collect::<Result<Vec<_>>>()?;
        CyclicAction::new(ActionKind::LaurentTorus, &ring, images)
    }

    /// The identity action.
    pub fn trivial(kind: ActionKind, ring: &FractionRing) -> Result<CyclicAction> {
        let images = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        CyclicAction::new(kind, ring, images)
    }

    pub fn kind(&self) -> ActionKind {
        self.kind
    }

    pub fn ring(&self) -> &FractionRing {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn p(&self) -> u64 {
        self.ring.field().characteristic()
    }

    pub fn images(&self) -> &[LocalizedFraction] {
        &self.images
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().enumerate().all(|(i, g)| *g == self.ring.var(i))
    }

    pub fn var_names(&self) -> &[String] {
        self.ring.poly().vars()
    }

    pub fn poly_ring(&self) -> &PolyRing {
        self.ring.poly()
    }

    pub fn sigma_apply(&self, f: &LocalizedFraction) -> Result<LocalizedFraction> {
        f.map_hom(&self.images, &self.ring)
    }

    pub fn sigma_power(&self, f: &LocalizedFraction, k: u64) -> Result<LocalizedFraction> {
        let mut cur = f.clone();
        for _ in 0..k {
            cur = self.sigma_apply(&cur)?;
        }
        Ok(cur)
    }

    /// I(s) = sigma(s) - s.
    pub fn difference(&self, s: &LocalizedFraction) -> Result<LocalizedFraction> {
        self.sigma_apply(s)?.try_sub(s)
    }

    /// Tr(f) = sum over i < p of sigma^i(f).
    pub fn trace(&self, f: &LocalizedFraction) -> Result<LocalizedFraction> {
        let mut acc = self.ring.zero();
        let mut cur = f.clone();
        for _ in 0..self.p() {
            acc = acc.try_add(&cur)?;
            cur = self.sigma_apply(&cur)?;
        }
        Ok(acc)
    }

    /// Whether sigma fixes `point` (every image defined there).
    pub fn fixes_point(&self, point: &[Elem]) -> bool {
        self.images
            .iter()
            .zip(point)
            .all(|(g, &c)| g.eval(point) == Some(c))
    }

    pub fn image_texts(&self) -> Vec<String> {
        self.images.iter().map(|g| g.to_text()).collect()
    }
}

pub fn sigma_apply(action: &CyclicAction, f: &LocalizedFraction) -> Result<LocalizedFraction> {
    action.sigma_apply(f)
}

pub fn difference(action: &CyclicAction, s: &LocalizedFraction) -> Result<LocalizedFraction> {
    action.difference(s)
}

pub fn trace(action: &CyclicAction, f: &LocalizedFraction) -> Result<LocalizedFraction> {
    action.trace(f)
}

/// The two affine charts of P^1 under [x : y] -> [x + y : y].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompactificationChart {
    /// y = 1, coordinate x: x -> x + 1.
    Finite,
    /// x = 1, coordinate t = y/x: t -> t / (1 + t).
    Infinity,
}

/// The action on one chart of (P^1)^n, one copy of the chart per factor.
pub fn compactification_chart<S: AsRef<str>>(
    field: &Field,
    vars: &[S],
    chart: CompactificationChart,
) -> Result<CyclicAction> {
    match chart {
        CompactificationChart::Finite => {
            let poly = PolyRing::new(field, vars);
            let ring = FractionRing::new(&poly, Vec::new())?;
            let images = (0..ring.nvars())
                .map(|i| ring.var(i).try_add(&ring.one()))
                .collect::<Result<Vec<_>>>()?;
            CyclicAction::new(ActionKind::ProjectiveChart, &ring, images)
        }
        CompactificationChart::Infinity => {
            let m = CyclicAction::moebius(field, vars)?;
            CyclicAction::new(ActionKind::ProjectiveChart, m.ring(), m.images().to_vec())
        }
    }
}
