//! Scenario configuration files.
//!
//! A config is a TOML document with a `scenario` name, an optional `seed`,
//! a `[params]` table and an optional `[expect]` table. Both tables are
//! checked against the scenario's schema; unknown keys are rejected.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioName {
    Semilinear,
    CurveHasse,
    ConeRationality,
    ConeGrTrace,
    QuotientFixedIdeal,
    QuotientCohomology,
    TorusChar2,
}

impl ScenarioName {
    pub const ALL: [ScenarioName; 7] = [
        ScenarioName::Semilinear,
        ScenarioName::CurveHasse,
        ScenarioName::ConeRationality,
        ScenarioName::ConeGrTrace,
        ScenarioName::QuotientFixedIdeal,
        ScenarioName::QuotientCohomology,
        ScenarioName::TorusChar2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::Semilinear => "semilinear",
            ScenarioName::CurveHasse => "curve-hasse",
            ScenarioName::ConeRationality => "cone-rationality",
            ScenarioName::ConeGrTrace => "cone-gr-trace",
            ScenarioName::QuotientFixedIdeal => "quotient-fixed-ideal",
            ScenarioName::QuotientCohomology => "quotient-cohomology",
            ScenarioName::TorusChar2 => "torus-char2",
        }
    }
}

#[derive(Deserialize)]
struct Header {
    scenario: ScenarioName,
}

/// A fully typed config for one scenario.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Document<P, E> {
    pub scenario: ScenarioName,
    #[serde(default)]
    pub seed: Option<u64>,
    pub params: P,
    #[serde(default = "Option::default")]
    pub expect: Option<E>,
}

/// 1-based line of a byte offset.
pub fn line_of(text: &str, offset: usize) -> usize {
    text.as_bytes()[..offset.min(text.len())].iter().filter(|&&b| b == b'\n').count() + 1
}

fn parse_as<T: DeserializeOwned>(text: &str) -> CliResult<T> {
    let de = toml::Deserializer::parse(text).map_err(|e| schema_error(text, String::new(), &e))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema_error(text, path, e.inner())
    })
}

fn schema_error(text: &str, path: String, e: &toml::de::Error) -> CliError {
    let line = e.span().map(|s| line_of(text, s.start)).unwrap_or(1);
    let path = if path.is_empty() || path == "." { "<root>".to_string() } else { path };
    CliError::Schema { path, line, message: e.message().trim().to_string() }
}

/// Reads only the scenario name.
pub fn scenario_of(text: &str) -> CliResult<ScenarioName> {
    Ok(parse_as::<Header>(text)?.scenario)
}

pub fn load<P: DeserializeOwned, E: DeserializeOwned>(text: &str) -> CliResult<Document<P, E>> {
    parse_as(text)
}

/// Field, ring and action parameters shared by several scenarios.
pub mod common {
    use serde::{Deserialize, Serialize};

    pub fn one() -> u32 {
        1
    }

    pub fn xyz() -> Vec<String> {
        ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    pub fn x012() -> Vec<String> {
        ["x0", "x1", "x2"].iter().map(|s| s.to_string()).collect()
    }

    #[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
    #[serde(rename_all = "snake_case")]
    pub enum BaseKind {
        ProjectiveSpace,
        PlaneCurve,
    }

    /// The polarized base (Z, L) of a cone.
    #[derive(Clone, Debug, Deserialize, Serialize)]
    #[serde(deny_unknown_fields)]
    pub struct BaseParams {
        pub p: u64,
        #[serde(default = "one")]
        pub e: u32,
        pub base: BaseKind,
        /// Dimension of projective space.
        #[serde(default)]
        pub n: Option<usize>,
        /// L = O(step) on projective space.
        #[serde(default)]
        pub step: Option<u32>,
        /// Plane curve equation in x, y, z.
        #[serde(default)]
        pub curve: Option<String>,
    }

    #[derive(Clone, Debug, Deserialize, Serialize)]
    #[serde(deny_unknown_fields)]
    pub struct ActionParams {
        pub p: u64,
        #[serde(default = "one")]
        pub e: u32,
        #[serde(default = "default_kind")]
        pub kind: String,
        #[serde(default = "x012")]
        pub vars: Vec<String>,
        /// Denominator atoms; defaults depend on the kind.
        #[serde(default)]
        pub atoms: Option<Vec<String>>,
        /// sigma(x_i) as fraction strings; defaults to x/(1+x) per variable.
        #[serde(default)]
        pub images: Option<Vec<String>>,
    }

    fn default_kind() -> String {
        "localized_affine".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, Deserialize)]
    #[serde(deny_unknown_fields)]
    struct P {
        p: u64,
    }

    #[test]
    fn unknown_key_reports_line() {
        let text = "scenario = \"curve-hasse\"\n[params]\np = 2\nq = 3\n";
        match load::<P, P>(text) {
            Err(CliError::Schema { path, line, .. }) => {
                assert_eq!(line, 4);
                assert!(path.starts_with("params"), "{path}");
            }
            other => panic!("{other:?}"),
        }
        let doc = load::<P, P>("scenario = \"semilinear\"\n[params]\np = 5\n").unwrap();
        assert_eq!(doc.params.p, 5);
        assert!(doc.expect.is_none());
        assert!(matches!(scenario_of("scenario = \"nope\""), Err(CliError::Schema { line: 1, .. })));
    }
}
