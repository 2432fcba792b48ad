//! One module per scenario. Each parses its typed config, runs the core
//! computation, and fills a [`Report`].

mod cone;
mod curve;
mod quotient;
mod semilinear;
mod torus;

use std::time::Instant;

use frobcrys_core::fparith::{Elem, Field, PolyRing};
use frobcrys_core::gradedcoh::SectionRing;
use frobcrys_core::semilinalg::SemilinearOperator;
use frobcrys_core::wildquot::{ActionKind, CyclicAction};
use frobcrys_core::fparith::{parse_fraction, parse_poly, FractionRing};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{self, common, Document, ScenarioName};
use crate::error::{CliError, CliResult, Context};
use crate::report::Report;

/// Dimension cap applied when neither the command line nor the config sets one.
pub const DEFAULT_CAP_DIM: usize = 20_000;

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Overrides the config seed.
    pub seed: Option<u64>,
    pub cap_dim: Option<usize>,
}

impl RunOptions {
    fn cap(&self) -> usize {
        self.cap_dim.unwrap_or(DEFAULT_CAP_DIM)
    }
}

/// Parses `text`, runs its scenario and returns the report. Expectation
/// failures are recorded in the report, not returned as errors.
pub fn run_config(text: &str, opts: RunOptions) -> CliResult<Report> {
    let start = Instant::now();
    let mut report = match config::scenario_of(text)? {
        ScenarioName::Semilinear => semilinear::run(text, opts)?,
        ScenarioName::CurveHasse => curve::run(text, opts)?,
        ScenarioName::ConeRationality => cone::run_rationality(text, opts)?,
        ScenarioName::ConeGrTrace => cone::run_gr_trace(text, opts)?,
        ScenarioName::QuotientFixedIdeal => quotient::run_fixed_ideal(text, opts)?,
        ScenarioName::QuotientCohomology => quotient::run_cohomology(text, opts)?,
        ScenarioName::TorusChar2 => torus::run(text, opts)?,
    };
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    Ok(report)
}

/// Loads the typed document and starts a report echoing it.
fn start<P, E>(text: &str, opts: RunOptions) -> CliResult<(Document<P, E>, Report)>
where
    P: DeserializeOwned + Serialize,
    E: DeserializeOwned + Serialize,
{
    let mut doc: Document<P, E> = config::load(text)?;
    if opts.seed.is_some() {
        doc.seed = opts.seed;
    }
    let echo = json!({
        "seed": doc.seed,
        "params": serde_json::to_value(&doc.params).expect("params serialize"),
        "expect": serde_json::to_value(&doc.expect).expect("expect serializes"),
    });
    let report = Report::new(doc.scenario, echo);
    Ok((doc, report))
}

fn field(p: u64, e: u32) -> CliResult<Field> {
    Field::new(p, e).at("params.p")
}

fn elem_json(f: &Field, a: Elem) -> Value {
    Value::String(f.format(a))
}

fn operator_json(op: &SemilinearOperator) -> Value {
    let rec = op.to_record();
    json!({
        "p": rec.p,
        "e": rec.e,
        "modulus": rec.modulus,
        "dim": rec.dim,
        "direction": rec.direction,
        "entries": rec.entries,
        "matrix": op.matrix().format(op.field()),
    })
}

fn base_ring(b: &common::BaseParams) -> CliResult<SectionRing> {
    let f = field(b.p, b.e)?;
    match b.base {
        common::BaseKind::ProjectiveSpace => {
            let n = b.n.ok_or_else(|| input("params.n", "projective_space needs n"))?;
            SectionRing::projective_space(&f, n, b.step.unwrap_or(1)).at("params.n")
        }
        common::BaseKind::PlaneCurve => {
            let text = b.curve.as_deref().ok_or_else(|| input("params.curve", "plane_curve needs curve"))?;
            let ring = PolyRing::new(&f, &common::xyz());
            let poly = parse_poly(&ring, text).at("params.curve")?;
            SectionRing::plane_curve(&poly).at("params.curve")
        }
    }
}

fn input(path: &str, message: &str) -> CliError {
    CliError::Input { path: path.into(), message: message.into() }
}

fn action_kind(name: &str) -> CliResult<ActionKind> {
    ActionKind::from_name(name).ok_or_else(|| input("params.kind", "expected localized_affine, laurent_torus or projective_chart"))
}

fn action_ring(a: &common::ActionParams, kind: ActionKind) -> CliResult<FractionRing> {
    let f = field(a.p, a.e)?;
    match &a.atoms {
        Some(atoms) => {
            let poly = PolyRing::new(&f, &a.vars);
            let parsed = atoms
                .iter()
                .enumerate()
                .map(|(k, t)| parse_poly(&poly, t).at(&format!("params.atoms[{k}]")))
                .collect::<CliResult<Vec<_>>>()?;
            FractionRing::new(&poly, parsed).at("params.atoms")
        }
        None => match kind {
            ActionKind::LaurentTorus => FractionRing::laurent(&f, &a.vars).at("params.vars"),
            _ => FractionRing::punctured_affine(&f, &a.vars).at("params.vars"),
        },
    }
}

fn build_action(a: &common::ActionParams) -> CliResult<CyclicAction> {
    let kind = action_kind(&a.kind)?;
    let ring = action_ring(a, kind)?;
    match &a.images {
        Some(texts) => {
            if texts.len() != ring.nvars() {
                return Err(input("params.images", "one image per variable is required"));
            }
            let images = texts
                .iter()
                .enumerate()
                .map(|(k, t)| parse_fraction(&ring, t).at(&format!("params.images[{k}]")))
                .collect::<CliResult<Vec<_>>>()?;
            CyclicAction::new(kind, &ring, images).at("params.images")
        }
        None => {
            let images = (0..ring.nvars())
                .map(|i| ring.var(i).try_div(&ring.var(i).try_add(&ring.one())?))
                .collect::<frobcrys_core::Result<Vec<_>>>()
                .at("params.images")?;
            CyclicAction::new(kind, &ring, images).at("params.images")
        }
    }
}
