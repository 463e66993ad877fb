use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::rat::{self, Rat};
use crate::matpoly::pencil::Pencil;
use crate::matpoly::qmatrix::QMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    LoadedString,
    DalembertTwoMass,
    YvonVillarceau2dof,
    CoupledSprings,
    Custom,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::LoadedString => "loaded-string",
            ModelKind::DalembertTwoMass => "dalembert-two-mass",
            ModelKind::YvonVillarceau2dof => "yvon-villarceau-2dof",
            ModelKind::CoupledSprings => "coupled-springs",
            ModelKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "loaded-string" => Ok(ModelKind::LoadedString),
            "dalembert-two-mass" => Ok(ModelKind::DalembertTwoMass),
            "yvon-villarceau-2dof" => Ok(ModelKind::YvonVillarceau2dof),
            "coupled-springs" => Ok(ModelKind::CoupledSprings),
            "custom" => Ok(ModelKind::Custom),
            other => Err(Error::InvalidModel(format!("unknown model kind '{other}'"))),
        }
    }
}

/// `A y'' + B y = 0` with `A` the kinetic and `B` the potential matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MechModel {
    pub kind: ModelKind,
    pub parameters: BTreeMap<String, Rat>,
    pub a: QMatrix,
    pub b: QMatrix,
}

impl MechModel {
    pub fn size(&self) -> usize {
        self.a.rows()
    }

    /// `K A - B`, whose roots are the squared frequencies `K`.
    pub fn pencil(&self) -> Pencil {
        Pencil::generalized(self.a.clone(), self.b.clone()).expect("validated at construction")
    }

    pub fn is_symmetric(&self) -> bool {
        self.a.is_symmetric() && self.b.is_symmetric()
    }
}

fn param(params: &BTreeMap<String, Rat>, name: &str) -> Result<Rat> {
    params
        .get(name)
        .cloned()
        .ok_or_else(|| Error::InvalidModel(format!("missing parameter '{name}'")))
}

fn param_or(params: &BTreeMap<String, Rat>, name: &str, default: Rat) -> Rat {
    params.get(name).cloned().unwrap_or(default)
}

fn positive(name: &str, v: &Rat) -> Result<()> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("parameter '{name}' must be positive, got {v}")))
    }
}

/// Builds one of the named models. `custom` takes its matrices from `custom`.
pub fn build_model(
    kind: ModelKind,
    parameters: BTreeMap<String, Rat>,
    custom: Option<(QMatrix, QMatrix)>,
) -> Result<MechModel> {
    let (a, b) = match kind {
        ModelKind::LoadedString => loaded_string(&parameters)?,
        ModelKind::DalembertTwoMass => dalembert(&parameters)?,
        ModelKind::YvonVillarceau2dof => yvon_villarceau(&parameters)?,
        ModelKind::CoupledSprings => coupled_springs(&parameters)?,
        ModelKind::Custom => {
            custom.ok_or_else(|| Error::InvalidModel("custom model needs matrices A and B".into()))?
        }
    };
    Pencil::generalized(a.clone(), b.clone())?;
    Ok(MechModel { kind, parameters, a, b })
}

/// `n` equal masses hanging from a fixed point at spacing `a`, numbered from
/// the bottom; gravity and masses are unity. Mass `k` feels the tension `k`
/// of the segment above it and `k - 1` of the one below.
fn loaded_string(p: &BTreeMap<String, Rat>) -> Result<(QMatrix, QMatrix)> {
    let n = param(p, "n")?;
    if !rat::is_integer(&n) || !n.is_positive() {
        return Err(Error::InvalidModel("parameter 'n' must be a positive integer".into()));
    }
    let n: usize = n
        .to_integer()
        .try_into()
        .map_err(|_| Error::InvalidModel("parameter 'n' too large".into()))?;
    let a = param(p, "a")?;
    positive("a", &a)?;
    let inv_a = a.recip();
    let b = QMatrix::from_fn(n, n, |i, j| {
        let k = rat::int(i as i64 + 1);
        if i == j {
            (&k * rat::int(2) - Rat::one()) * &inv_a
        } else if j == i + 1 {
            -&k * &inv_a
        } else if i == j + 1 {
            -rat::int(j as i64 + 1) * &inv_a
        } else {
            Rat::zero()
        }
    });
    Ok((QMatrix::identity(n), b))
}

/// Two-mass pendulum with equal masses and lengths. The raw equations
/// `-x'' = (2x - y) 2/T^2`, `-y'' = (2y - 2x) 2/T^2` are symmetrized by
/// doubling the first row.
fn dalembert(p: &BTreeMap<String, Rat>) -> Result<(QMatrix, QMatrix)> {
    let t = param(p, "T")?;
    positive("T", &t)?;
    let m = param_or(p, "m", Rat::one());
    positive("m", &m)?;
    let c = rat::int(2) * &m / (&t * &t);
    let a = QMatrix::diag(&[rat::int(2), rat::int(1)]).scale(&m);
    let b = QMatrix::from_ints(&[[4, -2], [-2, 2]]).scale(&c);
    Ok((a, b))
}

/// Kinetic form `[[g, a], [a, f]]`, potential `c I`.
fn yvon_villarceau(p: &BTreeMap<String, Rat>) -> Result<(QMatrix, QMatrix)> {
    let g = param(p, "g")?;
    let f = param(p, "f")?;
    let a = param_or(p, "a", Rat::zero());
    let c = param(p, "c")?;
    positive("g", &g)?;
    positive("f", &f)?;
    positive("c", &c)?;
    if !(&f * &g - &a * &a).is_positive() {
        return Err(Error::InvalidModel("kinetic form needs f g > a^2".into()));
    }
    let am = QMatrix::from_rows(vec![vec![g, a.clone()], vec![a, f]])?;
    Ok((am, QMatrix::identity(2).scale(&c)))
}

/// Two masses `m` tied to walls by springs `k0` and to each other by `k`.
fn coupled_springs(p: &BTreeMap<String, Rat>) -> Result<(QMatrix, QMatrix)> {
    let m = param(p, "m")?;
    let k = param(p, "k")?;
    let k0 = param(p, "k0")?;
    positive("m", &m)?;
    positive("k", &k)?;
    positive("k0", &k0)?;
    let d = &k0 + &k;
    let b = QMatrix::from_rows(vec![vec![d.clone(), -k.clone()], vec![-k, d]])?;
    Ok((QMatrix::identity(2).scale(&m), b))
}

pub fn params(pairs: &[(&str, Rat)]) -> BTreeMap<String, Rat> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::poly::UPoly;
    use crate::exactnum::rat::{frac, int};

    fn build(kind: ModelKind, p: &[(&str, Rat)]) -> MechModel {
        build_model(kind, params(p), None).unwrap()
    }

    #[test]
    fn single_loaded_mass() {
        let m = build(ModelKind::LoadedString, &[("n", int(1)), ("a", int(1))]);
        // det(K - 1) with K = -rho^2 is -(1 + rho^2)
        assert_eq!(m.pencil().char_poly().unwrap(), UPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn loaded_string_rows() {
        let m = build(ModelKind::LoadedString, &[("n", int(3)), ("a", frac(1, 2))]);
        assert_eq!(m.b, QMatrix::from_ints(&[[2, -2, 0], [-2, 6, -4], [0, -4, 10]]));
        assert!(m.is_symmetric());
    }

    #[test]
    fn coupled_springs_frequencies() {
        let m = build(ModelKind::CoupledSprings, &[("m", int(1)), ("k", int(1)), ("k0", int(1))]);
        assert_eq!(m.pencil().char_poly().unwrap(), UPoly::from_ints(&[3, -4, 1]));
    }

    #[test]
    fn yvon_villarceau_equation() {
        let (g, f, a, c) = (int(3), int(2), int(1), int(5));
        let m = build(ModelKind::YvonVillarceau2dof, &[("g", g.clone()), ("f", f.clone()), ("a", a.clone()), ("c", c.clone())]);
        let expected = UPoly::from_coeffs(vec![&c * &c, -(&f + &g) * &c, &f * &g - &a * &a]);
        assert_eq!(m.pencil().char_poly().unwrap(), expected);
    }

    #[test]
    fn dalembert_equation() {
        let m = build(ModelKind::DalembertTwoMass, &[("T", int(1))]);
        // 2 (K^2 - 8K + 8)
        assert_eq!(m.pencil().char_poly().unwrap(), UPoly::from_ints(&[16, -16, 2]));
    }

    #[test]
    fn invalid_parameters() {
        assert!(build_model(ModelKind::CoupledSprings, params(&[("m", int(0)), ("k", int(1)), ("k0", int(1))]), None).is_err());
        assert!(build_model(ModelKind::LoadedString, params(&[("n", frac(3, 2)), ("a", int(1))]), None).is_err());
        assert!(build_model(ModelKind::Custom, BTreeMap::new(), None).is_err());
        assert!("pendulum".parse::<ModelKind>().is_err());
        assert_eq!("coupled-springs".parse::<ModelKind>().unwrap(), ModelKind::CoupledSprings);
    }
}
