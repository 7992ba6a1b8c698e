//! The JSON pencil-spec file: either a built-in family with parameters,
//! or a fully custom logarithmic pencil with string-encoded rationals
//! ("p/q", matrices row-major).
//!
//! ```json
//! {"family": "verma_kz", "params": {"r": 3}}
//! {"family": "dunkl", "params": {"group": "S3", "rep": "reflection"}}
//! {"custom": {"base_dim": 1, "fiber_dim": 2,
//!             "param_names": ["s"], "coord_names": ["x"],
//!             "hyperplanes": [{"normal": ["1"], "offset": "0",
//!                              "label": "x=0",
//!                              "residue": {"constant": [["0","1"],["0","0"]],
//!                                          "linear": {"s": [["1","0"],["0","0"]]}}}]}}
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{parse_rat, rat_to_string, Mat, ParamLinear, Rat};
use crate::arrangement::{Arrangement, Hyperplane};
use crate::families::{self, AnyPencil, FamilyError, FamilySpec, GroupName, RepKind};
use crate::pencil::{LogPencil, PencilError};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed spec JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown family `{0}` (expected exshift, verma_kz, tensor_kz, dunkl)")]
    UnknownFamily(String),
    #[error("family `{family}` needs parameter `{param}`")]
    MissingParam { family: String, param: String },
    #[error("bad rational `{0}`")]
    BadRational(String),
    #[error("custom pencil: {0}")]
    Validation(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

/// Whole spec file. Exactly one of the two shapes is present.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PencilSpecFile {
    Builtin {
        family: String,
        #[serde(default, skip_serializing_if = "BuiltinParams::is_empty")]
        params: BuiltinParams,
    },
    Custom {
        custom: CustomSpec,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, Default, PartialEq)]
pub struct BuiltinParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rep: Option<String>,
}

impl BuiltinParams {
    fn is_empty(&self) -> bool {
        self == &BuiltinParams::default()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CustomSpec {
    pub base_dim: usize,
    pub fiber_dim: usize,
    pub param_names: Vec<String>,
    pub coord_names: Vec<String>,
    pub hyperplanes: Vec<HyperplaneSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HyperplaneSpec {
    pub normal: Vec<String>,
    pub offset: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub residue: ResidueSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResidueSpec {
    pub constant: Vec<Vec<String>>,
    /// Parameter name -> coefficient matrix; missing parameters mean zero.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub linear: BTreeMap<String, Vec<Vec<String>>>,
}

impl PencilSpecFile {
    pub fn from_path(path: &std::path::Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization cannot fail")
    }

    /// Builds the pencil this spec describes. Custom pencils are
    /// structurally validated by the constructors here; flatness checking
    /// is the caller's decision (the `flatness` command must be able to
    /// load intentionally broken fixtures).
    pub fn build(&self) -> Result<AnyPencil, SpecError> {
        match self {
            PencilSpecFile::Builtin { family, params } => {
                let spec = match family.as_str() {
                    "exshift" => FamilySpec::ExShift,
                    "verma_kz" => FamilySpec::VermaKz {
                        r: params.r.ok_or_else(|| SpecError::MissingParam {
                            family: family.clone(),
                            param: "r".into(),
                        })?,
                    },
                    "tensor_kz" => FamilySpec::TensorKz {
                        n: params.n.ok_or_else(|| SpecError::MissingParam {
                            family: family.clone(),
                            param: "n".into(),
                        })?,
                    },
                    "dunkl" => {
                        let group = params.group.as_ref().ok_or_else(|| {
                            SpecError::MissingParam {
                                family: family.clone(),
                                param: "group".into(),
                            }
                        })?;
                        let rep = match params.rep.as_deref().unwrap_or("reflection") {
                            "reflection" => RepKind::Reflection,
                            "regular" => RepKind::Regular,
                            other => {
                                return Err(SpecError::Validation(format!(
                                    "unknown representation `{other}`"
                                )))
                            }
                        };
                        FamilySpec::Dunkl {
                            group: GroupName::parse(group)?,
                            rep,
                        }
                    }
                    other => return Err(SpecError::UnknownFamily(other.to_string())),
                };
                Ok(families::parse_family(&spec)?)
            }
            PencilSpecFile::Custom { custom } => Ok(AnyPencil::Exact(custom.build()?)),
        }
    }

    /// A stable identifier for reports.
    pub fn id(&self) -> String {
        match self {
            PencilSpecFile::Builtin { family, params } => {
                let mut id = family.clone();
                if let Some(r) = params.r {
                    id.push_str(&format!("(r={r})"));
                }
                if let Some(n) = params.n {
                    id.push_str(&format!("(n={n})"));
                }
                if let Some(g) = &params.group {
                    id.push_str(&format!("({g},{})", params.rep.as_deref().unwrap_or("reflection")));
                }
                id
            }
            PencilSpecFile::Custom { .. } => "custom".to_string(),
        }
    }
}

impl CustomSpec {
    pub fn build(&self) -> Result<LogPencil<Rat>, SpecError> {
        if self.coord_names.len() != self.base_dim {
            return Err(SpecError::Validation(format!(
                "{} coord_names for base_dim {}",
                self.coord_names.len(),
                self.base_dim
            )));
        }
        let parse = |s: &str| parse_rat(s).map_err(|_| SpecError::BadRational(s.to_string()));
        let parse_matrix = |rows: &Vec<Vec<String>>, what: &str| -> Result<Mat<Rat>, SpecError> {
            if rows.len() != self.fiber_dim || rows.iter().any(|r| r.len() != self.fiber_dim) {
                return Err(SpecError::Validation(format!(
                    "{what} must be {0}x{0} row-major",
                    self.fiber_dim
                )));
            }
            let mut m = Mat::zeros(self.fiber_dim, self.fiber_dim);
            for (i, row) in rows.iter().enumerate() {
                for (j, cell) in row.iter().enumerate() {
                    *m.at_mut(i, j) = parse(cell)?;
                }
            }
            Ok(m)
        };
        let mut hyperplanes = Vec::new();
        let mut residues = Vec::new();
        for (idx, h) in self.hyperplanes.iter().enumerate() {
            let label = h.label.clone().unwrap_or_else(|| format!("H{idx}"));
            let normal: Result<Vec<Rat>, _> = h.normal.iter().map(|s| parse(s)).collect();
            hyperplanes.push(Hyperplane::new(normal?, parse(&h.offset)?, label.clone()).map_err(PencilError::from)?);
            let constant = parse_matrix(&h.residue.constant, &format!("residue[{label}].constant"))?;
            let mut linear = vec![Mat::zeros(self.fiber_dim, self.fiber_dim); self.param_names.len()];
            for (pname, rows) in &h.residue.linear {
                let j = self
                    .param_names
                    .iter()
                    .position(|p| p == pname)
                    .ok_or_else(|| {
                        SpecError::Validation(format!(
                            "linear part of `{label}` names unknown parameter `{pname}`"
                        ))
                    })?;
                linear[j] = parse_matrix(rows, &format!("residue[{label}].linear[{pname}]"))?;
            }
            residues.push(
                ParamLinear::new(constant, linear).map_err(PencilError::from)?,
            );
        }
        let arr = Arrangement::new(self.base_dim, hyperplanes).map_err(PencilError::from)?;
        Ok(LogPencil::new(
            arr,
            self.fiber_dim,
            self.param_names.clone(),
            self.coord_names.clone(),
            residues,
        )?)
    }

    /// Inverse of [`CustomSpec::build`], for round-tripping.
    pub fn from_pencil(p: &LogPencil<Rat>) -> CustomSpec {
        let mat_to_rows = |m: &Mat<Rat>| -> Vec<Vec<String>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| rat_to_string(m.at(i, j))).collect())
                .collect()
        };
        let hyperplanes = p
            .arrangement()
            .hyperplanes()
            .iter()
            .zip(p.residues())
            .map(|(h, res)| {
                let mut linear = BTreeMap::new();
                for (j, name) in p.param_names().iter().enumerate() {
                    if !res.linear(j).is_zero() {
                        linear.insert(name.clone(), mat_to_rows(res.linear(j)));
                    }
                }
                HyperplaneSpec {
                    normal: h.normal.iter().map(rat_to_string).collect(),
                    offset: rat_to_string(&h.offset),
                    label: Some(h.label.clone()),
                    residue: ResidueSpec {
                        constant: mat_to_rows(res.constant()),
                        linear,
                    },
                }
            })
            .collect();
        CustomSpec {
            base_dim: p.base_dim(),
            fiber_dim: p.fiber_dim(),
            param_names: p.param_names().to_vec(),
            coord_names: p.coord_names().to_vec(),
            hyperplanes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_exshift;

    #[test]
    fn builtin_specs_build() {
        for (text, fiber) in [
            (r#"{"family": "exshift"}"#, 2usize),
            (r#"{"family": "verma_kz", "params": {"r": 3}}"#, 3),
            (r#"{"family": "tensor_kz", "params": {"n": 2}}"#, 4),
            (
                r#"{"family": "dunkl", "params": {"group": "S3", "rep": "reflection"}}"#,
                2,
            ),
        ] {
            let spec = PencilSpecFile::from_str(text).unwrap();
            let p = spec.build().unwrap();
            assert_eq!(p.fiber_dim(), fiber, "spec {text}");
        }
    }

    #[test]
    fn missing_and_unknown_rejected() {
        let spec = PencilSpecFile::from_str(r#"{"family": "verma_kz"}"#).unwrap();
        assert!(matches!(spec.build(), Err(SpecError::MissingParam { .. })));
        let spec = PencilSpecFile::from_str(r#"{"family": "mystery"}"#).unwrap();
        assert!(matches!(spec.build(), Err(SpecError::UnknownFamily(_))));
        assert!(PencilSpecFile::from_str("not json").is_err());
    }

    #[test]
    fn custom_round_trip_is_identity() {
        let p = build_exshift();
        let spec = CustomSpec::from_pencil(&p);
        let file = PencilSpecFile::Custom {
            custom: spec.clone(),
        };
        let text = file.to_json();
        let reparsed = PencilSpecFile::from_str(&text).unwrap();
        assert_eq!(file, reparsed);
        let rebuilt = match reparsed.build().unwrap() {
            AnyPencil::Exact(p) => p,
            _ => panic!(),
        };
        let spec2 = CustomSpec::from_pencil(&rebuilt);
        assert_eq!(spec, spec2);
    }

    #[test]
    fn duplicate_hyperplanes_rejected() {
        let text = r#"{"custom": {"base_dim": 1, "fiber_dim": 1,
            "param_names": ["s"], "coord_names": ["x"],
            "hyperplanes": [
              {"normal": ["1"], "offset": "0", "residue": {"constant": [["0"]], "linear": {"s": [["1"]]}}},
              {"normal": ["2"], "offset": "0", "residue": {"constant": [["0"]], "linear": {"s": [["1"]]}}}
            ]}}"#;
        let spec = PencilSpecFile::from_str(text).unwrap();
        assert!(spec.build().is_err());
    }

    #[test]
    fn rank_one_footnote_pencil_builds() {
        // d - s dx/x on the punctured line, fiber C^1
        let text = r#"{"custom": {"base_dim": 1, "fiber_dim": 1,
            "param_names": ["s"], "coord_names": ["x"],
            "hyperplanes": [
              {"normal": ["1"], "offset": "0", "label": "x=0",
               "residue": {"constant": [["0"]], "linear": {"s": [["1"]]}}}
            ]}}"#;
        let spec = PencilSpecFile::from_str(text).unwrap();
        let p = spec.build().unwrap();
        assert_eq!(p.fiber_dim(), 1);
        assert_eq!(spec.id(), "custom");
    }
}
