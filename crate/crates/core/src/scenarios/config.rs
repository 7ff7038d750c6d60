use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bochner::LpIndex;
use crate::convex_solver::{HPolytope, HalfSpace};
use crate::error::{Error, Result};
use crate::normed_space::{NormSpec, Vector};
use crate::projection::ConvexBody;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NormDesc {
    Lp { dim: usize, p: LpIndex },
    Euclidean { dim: usize },
    L1 { dim: usize },
    Linf { dim: usize },
    Polyhedral { generators: Vec<Vector> },
    SupDirectSum { inner: Box<NormDesc>, extra: usize },
}

impl NormDesc {
    pub fn build(&self) -> Result<NormSpec> {
        match self {
            NormDesc::Lp { dim, p } => NormSpec::lp(*dim, p.get()),
            NormDesc::Euclidean { dim } => Ok(NormSpec::euclidean(*dim)),
            NormDesc::L1 { dim } => Ok(NormSpec::l1(*dim)),
            NormDesc::Linf { dim } => Ok(NormSpec::linf(*dim)),
            NormDesc::Polyhedral { generators } => NormSpec::polyhedral(generators.clone()),
            NormDesc::SupDirectSum { inner, extra } => NormSpec::sup_direct_sum(inner.build()?, *extra),
        }
        .and_then(|n| {
            n.validate()?;
            Ok(n)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDesc {
    pub norm: NormDesc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodyDesc {
    Subspace {
        basis: Vec<Vector>,
    },
    /// Span of the listed standard basis vectors.
    CoordinateSubspace {
        dim: usize,
        keep: Vec<usize>,
    },
    SubspaceBall {
        basis: Vec<Vector>,
        radius: f64,
    },
    NormBall {
        radius: f64,
    },
    Polytope {
        dim: usize,
        rows: Vec<HalfSpace>,
    },
}

impl BodyDesc {
    pub fn build(&self) -> Result<ConvexBody> {
        match self {
            BodyDesc::Subspace { basis } => ConvexBody::subspace(basis.clone()),
            BodyDesc::CoordinateSubspace { dim, keep } => {
                if keep.iter().any(|&i| i >= *dim) {
                    return Err(Error::InvalidInput(format!("coordinate index out of range for dimension {dim}")));
                }
                ConvexBody::coordinate_subspace(*dim, keep)
            }
            BodyDesc::SubspaceBall { basis, radius } => ConvexBody::subspace_ball(basis.clone(), *radius),
            BodyDesc::NormBall { radius } => ConvexBody::norm_ball(*radius),
            BodyDesc::Polytope { dim, rows } => {
                let rows = rows.iter().map(|r| (r.normal.clone(), r.offset)).collect();
                Ok(ConvexBody::polytope(HPolytope::from_rows(*dim, rows)?))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Distance,
    Project,
    StrongModulus,
    UniformModulus,
    HalfBall,
    ThreeTwoIp,
    ContinuityProbe,
    LzFalsify,
    LiftSubspace,
    LiftBall,
    LiftProjectionSet,
    LiftModulus,
    Average,
}

/// The status a scenario is documented to produce.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    #[default]
    Pass,
    /// The check is meant to report a violation.
    Fail,
    /// A modulus estimate that must be positive.
    Estimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<BodyDesc>,
    pub check: Check,
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub expect: Expectation,
}

impl Scenario {
    pub fn norm(&self) -> Result<NormSpec> {
        self.space.as_ref().ok_or_else(|| config_error("space", "this check needs a space"))?.norm.build()
    }

    pub fn body(&self) -> Result<ConvexBody> {
        self.body.as_ref().ok_or_else(|| config_error("body", "this check needs a body"))?.build()
    }

    pub fn tol(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }

    /// Decodes the check parameters, reporting errors with their field path.
    pub fn params<T: DeserializeOwned>(&self) -> Result<T> {
        let value = serde_json::Value::Object(self.params.clone());
        serde_path_to_error::deserialize(value)
            .map_err(|e| config_error(&format!("params.{}", e.path()), &e.inner().to_string()))
    }
}

pub(crate) fn config_error(path: &str, message: &str) -> Error {
    Error::Config { path: path.to_string(), message: message.to_string() }
}

/// Parses one scenario, or an array of scenarios, from JSON text.
pub fn parse_scenarios(text: &str) -> Result<Vec<Scenario>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| config_error("", &format!("invalid JSON: {e}")))?;
    let decode = |v: serde_json::Value, prefix: String| -> Result<Scenario> {
        serde_path_to_error::deserialize(v).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { prefix.clone() } else { format!("{prefix}{path}") };
            config_error(&path, &e.inner().to_string())
        })
    };
    match value {
        serde_json::Value::Array(items) => {
            items.into_iter().enumerate().map(|(i, v)| decode(v, format!("[{i}]."))).collect()
        }
        v => Ok(vec![decode(v, String::new())?]),
    }
}

/// Loads a scenario file, or every `*.json` file of a directory in name order.
pub fn load_path(path: &Path) -> Result<Vec<Scenario>> {
    let read = |p: &Path| -> Result<Vec<Scenario>> {
        let text = std::fs::read_to_string(p).map_err(|e| config_error(&p.display().to_string(), &e.to_string()))?;
        parse_scenarios(&text).map_err(|e| match e {
            Error::Config { path, message } => Error::Config { path: format!("{}:{path}", p.display()), message },
            other => other,
        })
    };
    if path.is_dir() {
        let mut files: Vec<_> = std::fs::read_dir(path)
            .map_err(|e| config_error(&path.display().to_string(), &e.to_string()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        let mut out = Vec::new();
        for f in files {
            out.extend(read(&f)?);
        }
        Ok(out)
    } else {
        read(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_scenario() {
        let text = r#"{
            "name": "disk",
            "space": {"norm": {"kind": "euclidean", "dim": 2}},
            "body": {"kind": "norm_ball", "radius": 1},
            "check": "distance",
            "params": {"x": [2, 0], "expected": 1}
        }"#;
        let s = &parse_scenarios(text).unwrap()[0];
        assert_eq!(s.check, Check::Distance);
        assert_eq!(s.seed, 0);
        assert_eq!(s.expect, Expectation::Pass);
        assert_eq!(s.norm().unwrap(), NormSpec::euclidean(2));
    }

    #[test]
    fn errors_carry_the_field_path() {
        let text = r#"[{"name": "a", "check": "distance"},
                       {"name": "b", "check": "distance", "space": {"norm": {"kind": "lp", "dim": 2, "p": 0.5}}}]"#;
        match parse_scenarios(text) {
            Err(Error::Config { path, .. }) => assert!(path.starts_with("[1].space.norm"), "{path}"),
            other => panic!("{other:?}"),
        }
        match parse_scenarios(r#"{"name": "a", "check": "nope"}"#) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "check"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn p_accepts_infinity() {
        let d: NormDesc = serde_json::from_str(r#"{"kind": "lp", "dim": 3, "p": "inf"}"#).unwrap();
        assert_eq!(d.build().unwrap(), NormSpec::linf(3));
    }
}
