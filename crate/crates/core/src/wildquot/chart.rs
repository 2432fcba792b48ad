use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::action::CyclicAction;
use crate::error::{Error, Result};
use crate::fparith::{gcd, Elem, FractionRing, LocalizedFraction, MonomialOrder, MultiPoly, PolyRing};

/// The action on one affine chart of the blow-up at the origin.
#[derive(Clone, Debug)]
pub struct ChartAction {
    pub parent: CyclicAction,
    /// Index of the parent coordinate kept in the chart (w_center = 1).
    pub center_index: usize,
    /// Chart coordinates: x_center first, then w_j for j != center.
    pub action: CyclicAction,
    /// For each parent coordinate, its expression in the chart.
    pub substitution: Vec<MultiPoly>,
}

impl ChartAction {
    pub fn ring(&self) -> &FractionRing {
        self.action.ring()
    }

    /// A parent element read in the chart.
    pub fn pull_back(&self, f: &LocalizedFraction) -> Result<LocalizedFraction> {
        let ring = self.ring();
        let num = f.numerator().substitute(&self.substitution, ring.poly());
        let mut out = ring.from_poly(num);
        for (i, &k) in f.denominator_exponents().iter().enumerate() {
            if k == 0 {
                continue;
            }
            let a = f.ring().atoms()[i].substitute(&self.substitution, ring.poly());
            out = out.try_mul(&ring.from_poly(a).inverse()?.pow(k as i64)?)?;
        }
        Ok(out)
    }

    /// Checks that sigma on the chart agrees with the parent sigma on every
    /// parent coordinate.
    pub fn verify_overlap(&self) -> Result<bool> {
        let pr = self.parent.ring();
        for i in 0..pr.nvars() {
            let x = pr.var(i);
            let via_parent = self.pull_back(&self.parent.sigma_apply(&x)?)?;
            let via_chart = self.action.sigma_apply(&self.pull_back(&x)?)?;
            if via_parent != via_chart {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Chart w_center = 1 of the blow-up of the origin: x_j = x_center * w_j.
pub fn blowup_chart(action: &CyclicAction, center_index: usize) -> Result<ChartAction> {
    let pr = action.ring();
    let n = pr.nvars();
    if center_index >= n {
        return Err(Error::OutOfRange(alloc::format!("chart index {center_index} with {n} coordinates")));
    }
    let field = pr.field();
    let origin = vec![Elem::ZERO; n];
    if pr.atoms().iter().any(|a| a.eval(&origin).is_zero()) || !action.fixes_point(&origin) {
        return Err(Error::Unsupported("the action must be defined at and fix the origin".into()));
    }
    let names = action.var_names();
    let mut chart_names: Vec<String> = vec![names[center_index].clone()];
    for j in (0..n).filter(|&j| j != center_index) {
        chart_names.push(alloc::format!("w{j}"));
    }
    let cpoly = PolyRing::new(field, &chart_names);
    let xc = cpoly.var(0);
    let mut substitution = Vec::with_capacity(n);
    let mut slot = 1;
    for j in 0..n {
        if j == center_index {
            substitution.push(xc.clone());
        } else {
            substitution.push(&xc * &cpoly.var(slot));
            slot += 1;
        }
    }
    let atoms = pr.atoms().iter().map(|a| a.substitute(&substitution, &cpoly)).collect();
    let cring = FractionRing::new(&cpoly, atoms)?;
    let stub = ChartAction {
        parent: action.clone(),
        center_index,
        action: CyclicAction::trivial(action.kind(), &cring)?,
        substitution,
    };
    let b = stub.pull_back(&action.images()[center_index])?;
    let (rest, extra) = cring.strip_atoms(b.numerator());
    let mut images = vec![b.clone()];
    for j in (0..n).filter(|&j| j != center_index) {
        let a = stub.pull_back(&action.images()[j])?;
        let q = a.numerator().exact_div(&rest).ok_or_else(|| {
            Error::NotUnit(alloc::format!("sigma({}) does not divide sigma({})", names[center_index], names[j]))
        })?;
        let den: Vec<u32> = a.denominator_exponents().iter().zip(&extra).map(|(x, y)| x + y).collect();
        let back = cring.from_poly(b.denominator());
        images.push(cring.fraction(q, den)?.try_mul(&back)?);
    }
    let chart_action = CyclicAction::new(action.kind(), &cring, images)?;
    Ok(ChartAction { action: chart_action, ..stub })
}

/// Fixed-scheme ideal generated by I(s) over the chart coordinates, with
/// unit factors removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSchemeIdeal {
    /// Nonzero normalized generators, in coordinate order.
    pub generators: Vec<MultiPoly>,
    /// The raw differences I(s), one per coordinate.
    pub differences: Vec<LocalizedFraction>,
}

impl FixedSchemeIdeal {
    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator_texts(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.to_text(MonomialOrder::Grevlex)).collect()
    }
}

/// Strips atom factors and the leading scalar (lex).
pub fn normalize_generator(ring: &FractionRing, f: &LocalizedFraction) -> MultiPoly {
    let (rest, _) = ring.strip_atoms(f.numerator());
    rest.monic(MonomialOrder::Lex)
}

pub fn fixed_scheme_ideal_of(action: &CyclicAction) -> Result<FixedSchemeIdeal> {
    let ring = action.ring();
    let mut differences = Vec::new();
    let mut generators = Vec::new();
    for i in 0..ring.nvars() {
        let d = action.difference(&ring.var(i))?;
        if !d.is_zero() {
            generators.push(normalize_generator(ring, &d));
        }
        differences.push(d);
    }
    Ok(FixedSchemeIdeal { generators, differences })
}

pub fn fixed_scheme_ideal(chart: &ChartAction) -> Result<FixedSchemeIdeal> {
    fixed_scheme_ideal_of(&chart.action)
}

/// Where the ideal fails to be locally principal among the rational points
/// of the chart domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalityReport {
    /// gcd of the generators.
    pub common_factor: MultiPoly,
    pub points_checked: usize,
    pub nonprincipal_points: Vec<Vec<Elem>>,
}

/// With h the gcd of the generators g_k, the ideal is h * (g_k / h), and in a
/// regular local ring it is principal at P exactly when some g_k / h does not
/// vanish at P. Every F_q point where no atom vanishes is checked.
pub fn principality_locus(ring: &FractionRing, ideal: &FixedSchemeIdeal) -> Result<PrincipalityReport> {
    let poly = ring.poly();
    let field = ring.field();
    let n = ring.nvars();
    if ideal.is_zero() {
        return Ok(PrincipalityReport { common_factor: poly.zero(), points_checked: 0, nonprincipal_points: Vec::new() });
    }
    let h = ideal.generators.iter().skip(1).fold(ideal.generators[0].clone(), |acc, g| gcd(&acc, g));
    let quotients = ideal
        .generators
        .iter()
        .map(|g| g.exact_div(&h).ok_or(Error::Mismatch("gcd does not divide a generator")))
        .collect::<Result<Vec<_>>>()?;
    let q = field.order();
    let total = q.checked_pow(n as u32).filter(|&t| t <= 1 << 22).ok_or(Error::ResourceCap {
        dim: usize::MAX,
        cap: 1 << 22,
    })?;
    let mut checked = 0;
    let mut bad = Vec::new();
    for mut idx in 0..total {
        let mut pt = vec![Elem::ZERO; n];
        for slot in pt.iter_mut() {
            *slot = field.element(idx % q);
            idx /= q;
        }
        if ring.atoms().iter().any(|a| a.eval(&pt).is_zero()) {
            continue;
        }
        checked += 1;
        if quotients.iter().all(|g| g.eval(&pt).is_zero()) {
            bad.push(pt);
        }
    }
    bad.sort();
    Ok(PrincipalityReport { common_factor: h, points_checked: checked, nonprincipal_points: bad })
}
