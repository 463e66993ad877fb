//! JSON documents for matrices, pencils, quadratic-form pairs and scenarios.
//!
//! Rationals are `"p/q"` strings; integers are accepted on input. Matrix
//! entries are a flat row-major array (nested rows are accepted on input).

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::rat::{format_rat, parse_rat, Rat};
use crate::matpoly::pencil::{Orientation, Pencil};
use crate::matpoly::qmatrix::QMatrix;
use crate::oscillate::model::{build_model, MechModel, ModelKind};
use crate::oscillate::modal::InitialConditions;
use crate::oscillate::trajectory::TGrid;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatLit {
    Str(String),
    Int(i64),
}

impl RatLit {
    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            RatLit::Str(s) => parse_rat(s),
            RatLit::Int(n) => Ok(crate::exactnum::rat::int(*n)),
        }
    }
}

impl From<&Rat> for RatLit {
    fn from(r: &Rat) -> Self {
        RatLit::Str(format_rat(r))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entries {
    Flat(Vec<RatLit>),
    Nested(Vec<Vec<RatLit>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
    pub entries: Entries,
}

impl MatrixDoc {
    pub fn from_matrix(m: &QMatrix) -> Self {
        MatrixDoc {
            rows: m.rows(),
            cols: m.cols(),
            symmetric: m.is_square().then(|| m.is_symmetric()),
            entries: Entries::Flat(m.entries().iter().map(RatLit::from).collect()),
        }
    }

    pub fn to_matrix(&self) -> Result<QMatrix> {
        let flat: Vec<&RatLit> = match &self.entries {
            Entries::Flat(v) => v.iter().collect(),
            Entries::Nested(rows) => {
                if rows.len() != self.rows || rows.iter().any(|r| r.len() != self.cols) {
                    return Err(Error::Parse(format!("nested entries do not form a {}x{} array", self.rows, self.cols)));
                }
                rows.iter().flatten().collect()
            }
        };
        if flat.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "expected {} entries for a {}x{} matrix, found {}",
                self.rows * self.cols,
                self.rows,
                self.cols,
                flat.len()
            )));
        }
        let vals = flat.into_iter().map(RatLit::to_rat).collect::<Result<Vec<_>>>()?;
        let m = QMatrix::new(self.rows, self.cols, vals)?;
        if self.symmetric == Some(true) && !m.is_symmetric() {
            return Err(Error::Parse("matrix declared symmetric but is not".into()));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilDoc {
    #[serde(rename = "A")]
    pub a: MatrixDoc,
    /// Absent means the identity.
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatrixDoc>,
    #[serde(default)]
    pub orientation: Orientation,
}

impl PencilDoc {
    pub fn from_pencil(p: &Pencil) -> Self {
        PencilDoc { a: MatrixDoc::from_matrix(&p.a), b: Some(MatrixDoc::from_matrix(&p.b)), orientation: p.orientation }
    }

    pub fn to_pencil(&self) -> Result<Pencil> {
        let a = self.a.to_matrix()?;
        let b = match &self.b {
            Some(b) => b.to_matrix()?,
            None => QMatrix::identity(a.rows()),
        };
        Pencil::new(a, b, self.orientation)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    #[serde(rename = "Phi")]
    pub phi: MatrixDoc,
    #[serde(rename = "Psi")]
    pub psi: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub kind: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, RatLit>,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixDoc>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatrixDoc>,
}

impl ModelDoc {
    pub fn to_model(&self) -> Result<MechModel> {
        let kind: ModelKind = self.kind.parse()?;
        let params = self
            .parameters
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.to_rat()?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let custom = match (&self.a, &self.b) {
            (Some(a), Some(b)) => Some((a.to_matrix()?, b.to_matrix()?)),
            (None, None) => None,
            _ => return Err(Error::InvalidModel("custom model needs both A and B".into())),
        };
        if kind != ModelKind::Custom && custom.is_some() {
            return Err(Error::InvalidModel(format!("model '{kind}' takes parameters, not matrices")));
        }
        build_model(kind, params, custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConditionsDoc {
    pub positions: Vec<f64>,
    pub velocities: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TGridDoc {
    pub t_max: f64,
    pub steps: usize,
}

/// `sum_k coefficients[k] y^{(k)} = 0` with `y^{(j)}(0) = initial_values[j]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarDoc {
    pub coefficients: Vec<RatLit>,
    pub initial_values: Vec<f64>,
}

/// Exactly one of `model` (with `initial_conditions`), `first_order` (with
/// `initial_state`) or `scalar` is present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_conditions: Option<InitialConditionsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_order: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<Vec<RatLit>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<ScalarDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_grid: Option<TGridDoc>,
}

pub enum Scenario {
    SecondOrder { model: MechModel, ic: InitialConditions },
    FirstOrder { m: QMatrix, x0: Vec<Rat> },
    Scalar { f: crate::exactnum::poly::UPoly, ic: Vec<f64> },
}

impl ScenarioDoc {
    pub fn scenario(&self) -> Result<Scenario> {
        let count = [self.model.is_some(), self.first_order.is_some(), self.scalar.is_some()]
            .iter()
            .filter(|b| **b)
            .count();
        if count != 1 {
            return Err(Error::Parse("scenario needs exactly one of model, first_order, scalar".into()));
        }
        if let Some(md) = &self.model {
            let model = md.to_model()?;
            let ic = match &self.initial_conditions {
                Some(d) => InitialConditions::new(d.positions.clone(), d.velocities.clone())?,
                None => InitialConditions::zeros(model.size()),
            };
            if ic.positions.len() != model.size() {
                return Err(Error::DimensionMismatch(format!(
                    "initial conditions have {} entries, model has {}",
                    ic.positions.len(),
                    model.size()
                )));
            }
            return Ok(Scenario::SecondOrder { model, ic });
        }
        if let Some(md) = &self.first_order {
            let m = md.to_matrix()?;
            let x0 = match &self.initial_state {
                Some(v) => v.iter().map(RatLit::to_rat).collect::<Result<Vec<_>>>()?,
                None => return Err(Error::Parse("first_order scenario needs initial_state".into())),
            };
            return Ok(Scenario::FirstOrder { m, x0 });
        }
        let sd = self.scalar.as_ref().expect("counted above");
        let coeffs = sd.coefficients.iter().map(RatLit::to_rat).collect::<Result<Vec<_>>>()?;
        Ok(Scenario::Scalar { f: crate::exactnum::poly::UPoly::from_coeffs(coeffs), ic: sd.initial_values.clone() })
    }

    pub fn grid(&self) -> Option<Result<TGrid>> {
        self.t_grid.as_ref().map(|g| TGrid::new(g.t_max, g.steps))
    }
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_matrix(text: &str) -> Result<QMatrix> {
    from_json::<MatrixDoc>(text)?.to_matrix()
}

pub fn parse_pencil(text: &str) -> Result<Pencil> {
    from_json::<PencilDoc>(text)?.to_pencil()
}

/// Parses a pencil document, or a bare matrix `M` read as `M - sI`.
pub fn parse_pencil_or_matrix(text: &str) -> Result<Pencil> {
    let value: serde_json::Value = from_json(text)?;
    if value.get("A").is_some() {
        parse_pencil(text)
    } else {
        Pencil::standard(parse_matrix(text)?)
    }
}

pub fn parse_pair(text: &str) -> Result<(QMatrix, QMatrix)> {
    let d: PairDoc = from_json(text)?;
    Ok((d.phi.to_matrix()?, d.psi.to_matrix()?))
}

pub fn parse_scenario(text: &str) -> Result<ScenarioDoc> {
    from_json(text)
}

pub fn rats_to_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}
