use frobcrys_core::conegr::{
    canonical_dimension_table, compose_stages, decide_gr_nilpotent, direct_image_table, duality_crosscheck,
    gr_trace_module, is_fp_rational_cone, ConeSpec, Psi,
};
use frobcrys_core::gradedcoh::SectionRing;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{base_ring, operator_json, start, RunOptions};
use crate::config::common::BaseParams;
use crate::error::{CliResult, Context};
use crate::report::Report;
use crate::table::TableRow;

fn four() -> i64 {
    4
}

fn two() -> u32 {
    2
}

fn one_two() -> Vec<u32> {
    vec![1, 2]
}

fn spec(base: &SectionRing, window: i64, e_max: u32, i: usize) -> CliResult<ConeSpec> {
    ConeSpec::new(base.clone(), window, e_max, i).at("params.window")
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RationalityParams {
    base: BaseParams,
    #[serde(default = "four")]
    window: i64,
    #[serde(default = "two")]
    e_max: u32,
    /// When set, compare Frobenius and Cartier chains over |n| <= this.
    #[serde(default)]
    duality_window: Option<i64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RationalityExpect {
    rational: Option<bool>,
    /// Nilpotency index of Frobenius on H^1(Z, O_Z).
    nilpotency_index: Option<u32>,
    witness_nonzero: Option<bool>,
    duality_consistent: Option<bool>,
}

pub fn run_rationality(text: &str, opts: RunOptions) -> CliResult<Report> {
    let (doc, mut report) = start::<RationalityParams, RationalityExpect>(text, opts)?;
    let p = &doc.params;
    let base = base_ring(&p.base)?;
    let cone = spec(&base, p.window, p.e_max, 1)?;
    let verdict = is_fp_rational_cone(&cone).at("params.window")?;
    report.provenance("example", "cone over a polarized base: F_p-rationality from Frobenius on H^i(Z, L^n)");
    report.provenance("checked", "H^i(Z, L^n) = 0 for n above the regularity bound; nilpotence of Frobenius at n = 0");
    report.verdict("rational", verdict.rational);
    report.verdict("vacuous", verdict.vacuous);
    report.verdict("base", base.describe());
    let index = verdict.witnesses.first().and_then(|w| w.nilpotence.index);
    let nonzero = verdict.witnesses.iter().any(|w| !w.operator.matrix().is_zero());
    report.verdict("nilpotency_index", index);
    report.verdict("witness_nonzero", nonzero);
    let witnesses: Vec<Value> = verdict
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "i": w.i,
                "n0": w.n0,
                "nilpotent": w.nilpotence.nilpotent,
                "index": w.nilpotence.index,
                "operator": operator_json(&w.operator),
                "transient_degrees": w.transient_degrees,
            })
        })
        .collect();
    report.witness("degree_zero_operators", witnesses);
    let expect = doc.expect.unwrap_or_default();
    report.expect("rational", expect.rational, verdict.rational);
    report.expect("nilpotency_index", expect.nilpotency_index, index);
    report.expect("witness_nonzero", expect.witness_nonzero, nonzero);
    if let Some(w) = p.duality_window {
        let mut all = true;
        let mut reports = Vec::new();
        for i in 0..=cone.cone_dim() {
            let rep = duality_crosscheck(&cone, i, w).at("params.duality_window")?;
            all &= rep.hypothesis_met && rep.consistent;
            let pairs: Vec<Value> = rep
                .pairs
                .iter()
                .map(|pr| json!({"n": pr.n, "frobenius": pr.frobenius.label, "cartier": pr.cartier.label, "consistent": pr.consistent}))
                .collect();
            reports.push(json!({
                "i": i,
                "dual_index": rep.dual_index,
                "hypothesis_met": rep.hypothesis_met,
                "consistent": rep.consistent,
                "note": rep.note,
                "pairs": pairs,
            }));
        }
        report.verdict("duality_consistent", all);
        report.witness("duality", reports);
        report.expect("duality_consistent", expect.duality_consistent, all);
    }
    report.table = direct_image_table(&cone).at("params.window")?.iter().map(TableRow::from).collect();
    Ok(report)
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct GrParams {
    base: BaseParams,
    #[serde(default = "four")]
    window: i64,
    #[serde(default = "two")]
    e_max: u32,
    #[serde(default = "one_two")]
    ms: Vec<u32>,
    #[serde(default = "one_two")]
    es: Vec<u32>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct GrExpect {
    nilpotent: Option<bool>,
    e0: Option<u32>,
    psi_pattern: Option<bool>,
    composition: Option<bool>,
}

pub fn run_gr_trace(text: &str, opts: RunOptions) -> CliResult<Report> {
    let (doc, mut report) = start::<GrParams, GrExpect>(text, opts)?;
    let p = &doc.params;
    let base = base_ring(&p.base)?;
    let q = base.characteristic() as i64;
    report.provenance("example", "graded trace of the dualizing sheaf on a cone over a polarized base");
    report.provenance("checked", "psi_r = 0 exactly when p^e does not divide r; Tr^(e1+e2) = Tr^e1 o F^e1_* Tr^e2");
    let mut nilpotent = true;
    let mut e0: Option<u32> = Some(0);
    let mut per_index = Vec::new();
    for i in 1..=base.base_dim() {
        let s = spec(&base, p.window, p.e_max, i)?;
        let v = decide_gr_nilpotent(&s, i).at("params.window")?;
        nilpotent &= v.nilpotent;
        e0 = match (e0, v.e0) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        per_index.push(json!({"i": i, "nilpotent": v.nilpotent, "e0": v.e0, "serre_threshold": v.serre_threshold, "reason": v.reason}));
    }
    let mut pattern = true;
    let mut composition = true;
    let mut modules = Vec::new();
    let s = spec(&base, p.window, p.e_max, 1)?;
    for &m in &p.ms {
        for &e in &p.es {
            let t = gr_trace_module(&s, m as i64, e).at("params.es")?;
            let ok_structure = t.check_structure().is_ok();
            let ok_pattern =
                t.psi.iter().all(|(&r, psi)| matches!(psi, Psi::Trace { .. }) == (r % q.pow(e) == 0));
            pattern &= ok_structure && ok_pattern;
            let zero_at: Vec<i64> = t.psi.iter().filter(|(_, v)| matches!(v, Psi::Zero { .. })).map(|(&r, _)| r).collect();
            modules.push(json!({"m": m, "e": e, "zero_at": zero_at, "is_zero": t.is_zero(), "pattern": ok_pattern}));
            for &e2 in &p.es {
                let inner = gr_trace_module(&s, m as i64 * q.pow(e), e2).at("params.es")?;
                let whole = gr_trace_module(&s, m as i64, e + e2).at("params.es")?;
                let composed = compose_stages(&s, &t, &inner).at("params.es")?;
                composition &= composed.iter().all(|(&k, mat)| whole.trace_matrix(k) == Some(mat));
            }
        }
    }
    let e0 = if nilpotent { e0 } else { None };
    report.verdict("nilpotent", nilpotent);
    report.verdict("e0", e0);
    report.verdict("psi_pattern", pattern);
    report.verdict("composition", composition);
    report.verdict("base", base.describe());
    report.witness("indices", per_index);
    report.witness("trace_modules", modules);
    let expect = doc.expect.unwrap_or_default();
    report.expect("nilpotent", expect.nilpotent, nilpotent);
    report.expect("e0", expect.e0, e0);
    report.expect("psi_pattern", expect.psi_pattern, pattern);
    report.expect("composition", expect.composition, composition);
    report.table = canonical_dimension_table(&s).at("params.window")?.iter().map(TableRow::from).collect();
    Ok(report)
}
