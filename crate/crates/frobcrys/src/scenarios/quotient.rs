use frobcrys_core::fparith::{parse_fraction, parse_poly, Elem, MonomialOrder};
use frobcrys_core::wildquot::{
    blowup_chart, class_of_one_test, fixed_scheme_ideal_of, principality_locus, CyclicAction,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{build_action, elem_json, start, RunOptions};
use crate::config::common::ActionParams;
use crate::error::{CliResult, Context};
use crate::report::Report;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct FixedParams {
    action: ActionParams,
    /// Blow-up chart index; without it the parent ring is used.
    #[serde(default)]
    chart: Option<usize>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct FixedExpect {
    /// Up to order and unit factors.
    generators: Option<Vec<String>>,
    differences: Option<Vec<String>>,
    chart_images: Option<Vec<String>>,
    nonprincipal_points: Option<Vec<Vec<u64>>>,
}

fn point_json(f: &frobcrys_core::fparith::Field, pt: &[Elem]) -> Value {
    Value::Array(pt.iter().map(|&a| elem_json(f, a)).collect())
}

pub fn run_fixed_ideal(text: &str, opts: RunOptions) -> CliResult<Report> {
    let (doc, mut report) = start::<FixedParams, FixedExpect>(text, opts)?;
    let parent = build_action(&doc.params.action)?;
    let f = parent.field().clone();
    report.provenance("example", "fixed scheme of a wild Z/p action on a blow-up chart of the origin");
    report.provenance("checked", "sigma^p = id on generators, I(s) = sigma(s) - s, normalized ideal and its principality at every rational point");
    report.verdict("order_p", true);
    report.witness("parent_images", parent.image_texts());
    let (action, overlap): (CyclicAction, Option<bool>) = match doc.params.chart {
        Some(c) => {
            let ch = blowup_chart(&parent, c).at("params.chart")?;
            let ok = ch.verify_overlap().at("params.chart")?;
            (ch.action, Some(ok))
        }
        None => (parent, None),
    };
    let ring = action.ring().clone();
    let ideal = fixed_scheme_ideal_of(&action).at("params.action")?;
    let diffs: Vec<String> = ideal.differences.iter().map(|d| d.to_text()).collect();
    let origin = vec![Elem::ZERO; ring.nvars()];
    let vanish = ideal.differences.iter().all(|d| d.eval(&origin).map_or(true, |v| v.is_zero()));
    let locus = principality_locus(&ring, &ideal).at("params.action")?;
    let mut generators = ideal.generator_texts();
    generators.sort();
    report.verdict("chart_vars", ring.poly().vars());
    report.verdict("chart_images", action.image_texts());
    report.verdict("overlap_verified", overlap);
    report.verdict("differences", &diffs);
    report.verdict("generators", &generators);
    report.verdict("differences_vanish_at_origin", vanish);
    report.verdict("common_factor", locus.common_factor.to_text(MonomialOrder::Grevlex));
    report.verdict("points_checked", locus.points_checked);
    let bad: Vec<Value> = locus.nonprincipal_points.iter().map(|pt| point_json(&f, pt)).collect();
    report.verdict("nonprincipal_points", &bad);
    let expect = doc.expect.unwrap_or_default();
    if let Some(want) = &expect.generators {
        let mut norm = Vec::new();
        for (k, t) in want.iter().enumerate() {
            let g = parse_poly(ring.poly(), t).at(&format!("expect.generators[{k}]"))?;
            let (rest, _) = ring.strip_atoms(&g);
            norm.push(rest.monic(MonomialOrder::Lex).to_text(MonomialOrder::Grevlex));
        }
        norm.sort();
        report.expect("generators", Some(norm), &generators);
    }
    if let Some(want) = &expect.differences {
        let mut texts = Vec::new();
        for (k, t) in want.iter().enumerate() {
            texts.push(parse_fraction(&ring, t).at(&format!("expect.differences[{k}]"))?.to_text());
        }
        report.expect("differences", Some(texts), &diffs);
    }
    if let Some(want) = &expect.chart_images {
        let mut texts = Vec::new();
        for (k, t) in want.iter().enumerate() {
            texts.push(parse_fraction(&ring, t).at(&format!("expect.chart_images[{k}]"))?.to_text());
        }
        report.expect("chart_images", Some(texts), action.image_texts());
    }
    if let Some(want) = &expect.nonprincipal_points {
        let mut pts: Vec<Value> =
            want.iter().map(|pt| Value::Array(pt.iter().map(|&x| elem_json(&f, f.element(x % f.order()))).collect())).collect();
        pts.sort_by_key(|v| v.to_string());
        let mut have = bad.clone();
        have.sort_by_key(|v| v.to_string());
        report.expect("nonprincipal_points", Some(pts), have);
    }
    Ok(report)
}

fn range_0_2() -> Vec<u32> {
    vec![0, 1, 2]
}

fn zero() -> Vec<u32> {
    vec![0]
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct CohomologyParams {
    action: ActionParams,
    /// Filtration bounds N.
    #[serde(default = "range_0_2")]
    ns: Vec<u32>,
    /// Perfection levels.
    #[serde(default = "zero")]
    ells: Vec<u32>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct CohomologyExpect {
    /// Expected for every (N, l).
    nonzero: Option<bool>,
    certificates_verified: Option<bool>,
    trace_check: Option<bool>,
}

pub fn run_cohomology(text: &str, opts: RunOptions) -> CliResult<Report> {
    let (doc, mut report) = start::<CohomologyParams, CohomologyExpect>(text, opts)?;
    let action = build_action(&doc.params.action)?;
    let f = action.field().clone();
    let ring = action.ring();
    report.provenance("example", "class of 1 in H^1(G, R^(1/p^l)) = ker Tr / im(sigma - 1) for G = Z/p");
    report.provenance(
        "machine_checked",
        "on each filtered piece: 1 is not in im(sigma - 1), with a functional vanishing on the image and equal to 1 at 1; Tr o (sigma - 1) = 0; Frobenius fixes 1",
    );
    report.provenance(
        "not_machine_checked",
        "the passage from the untruncated class to the depth bound of the invariant ring is a theorem, not a computation",
    );
    let tr_one = action.trace(&ring.one()).at("params.action")?.is_zero();
    report.verdict("trace_of_one_is_zero", tr_one);
    let mut cases = Vec::new();
    let (mut all_nonzero, mut all_verified, mut all_trace, mut all_residue) = (true, true, true, true);
    for &ell in &doc.params.ells {
        for &n in &doc.params.ns {
            let r = class_of_one_test(&action, n, ell, opts.cap()).at("params.ns")?;
            let verified = r.certificate.as_ref().map(|c| c.verified);
            all_nonzero &= r.nonzero;
            all_verified &= verified.unwrap_or(false);
            all_trace &= r.trace_check;
            all_residue &= r.residue_check.unwrap_or(true);
            let support: Vec<Value> = r
                .certificate
                .as_ref()
                .map(|c| {
                    c.functional
                        .iter()
                        .filter_map(|(i, v)| r.support_text.get(i).map(|t| json!({"basis": t, "value": elem_json(&f, *v)})))
                        .collect()
                })
                .unwrap_or_default();
            cases.push(json!({
                "n": n,
                "ell": ell,
                "level_bound": r.level_bound,
                "dim": r.dim,
                "image_rank": r.image_rank,
                "nonzero": r.nonzero,
                "certificate_support_size": r.certificate.as_ref().map(|c| c.functional.len()),
                "certificate_verified": verified,
                "certificate_support_head": support,
                "fixed_point": r.fixed_point.as_ref().map(|pt| point_json(&f, pt)),
                "residue_check": r.residue_check,
                "trace_check": r.trace_check,
                "trace_check_method": r.trace_check_method,
            }));
        }
    }
    report.verdict("all_nonzero", all_nonzero);
    report.verdict("all_certificates_verified", all_verified);
    report.verdict("all_trace_checks", all_trace);
    report.verdict("all_residue_checks", all_residue);
    report.verdict("frobenius_fixes_one", ring.poly().one().frobenius_power(3) == ring.poly().one());
    report.witness("cases", cases);
    let expect = doc.expect.unwrap_or_default();
    report.expect("nonzero", expect.nonzero, all_nonzero);
    report.expect("certificates_verified", expect.certificates_verified, all_verified);
    report.expect("trace_check", expect.trace_check, all_trace && tr_one);
    Ok(report)
}
