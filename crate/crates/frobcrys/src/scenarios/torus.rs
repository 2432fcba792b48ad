use frobcrys_core::fparith::{parse_fraction, FractionRing};
use frobcrys_core::wildquot::{cartier_laurent, char2_form_pullback, LogForm};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{elem_json, field, input, start, RunOptions};
use crate::config::common::{one, xyz};
use crate::error::{CliResult, Context};
use crate::report::Report;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct Params {
    p: u64,
    #[serde(default = "one")]
    e: u32,
    #[serde(default = "xyz")]
    vars: Vec<String>,
    /// Laurent monomial images; defaults to x -> 1/x on every variable.
    #[serde(default)]
    images: Option<Vec<String>>,
    /// Exponent vectors a of x^a * omega fed to the Cartier operator.
    #[serde(default)]
    cartier_inputs: Vec<Vec<i64>>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct Expect {
    invariant: Option<bool>,
    cartier_fixes_omega: Option<bool>,
}

pub fn run(text: &str, opts: RunOptions) -> CliResult<Report> {
    let (doc, mut report) = start::<Params, Expect>(text, opts)?;
    let p = &doc.params;
    let f = field(p.p, p.e)?;
    let ring = FractionRing::laurent(&f, &p.vars).at("params.vars")?;
    let images = match &p.images {
        Some(texts) => {
            if texts.len() != ring.nvars() {
                return Err(input("params.images", "one image per variable is required"));
            }
            texts
                .iter()
                .enumerate()
                .map(|(k, t)| parse_fraction(&ring, t).at(&format!("params.images[{k}]")))
                .collect::<CliResult<Vec<_>>>()?
        }
        None => (0..ring.nvars()).map(|i| ring.var(i).inverse()).collect::<frobcrys_core::Result<_>>().at("params.vars")?,
    };
    let pull = char2_form_pullback(&ring, &images).at("params.images")?;
    let omega = LogForm::omega(ring.nvars());
    let fixes = cartier_laurent(&f, &omega) == omega;
    report.provenance("example", "monomial action on the torus and the log form dx/x ^ dy/y ^ dz/z");
    report.provenance("checked", "sigma^* omega = det(exponent matrix) omega, read in the base field; Cartier operator on log monomials");
    report.verdict("exponent_matrix", &pull.exponents);
    report.verdict("determinant", pull.determinant);
    report.verdict("pullback_factor", elem_json(&f, pull.factor));
    report.verdict("invariant", pull.invariant);
    report.verdict("cartier_fixes_omega", fixes);
    let cart: Vec<_> = p
        .cartier_inputs
        .iter()
        .map(|a| {
            let out = cartier_laurent(&f, &LogForm { coeff: f.one(), exps: a.clone() });
            json!({"input": a, "zero": out.is_zero(), "output": if out.is_zero() { None } else { Some(out.exps) }})
        })
        .collect();
    report.witness("cartier", cart);
    let expect = doc.expect.unwrap_or_default();
    report.expect("invariant", expect.invariant, pull.invariant);
    report.expect("cartier_fixes_omega", expect.cartier_fixes_omega, fixes);
    Ok(report)
}
