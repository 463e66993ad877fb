use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};

use super::model::MechModel;
use crate::error::{Error, Result};
use crate::exactnum::rat::Rat;
use crate::exactnum::sturm::RealRoot;
use crate::spectral::{is_definite, spectral_decomposition, Eigvec};

#[derive(Clone, Debug, PartialEq)]
pub struct InitialConditions {
    pub positions: Vec<f64>,
    pub velocities: Vec<f64>,
}

impl InitialConditions {
    pub fn new(positions: Vec<f64>, velocities: Vec<f64>) -> Result<Self> {
        if positions.len() != velocities.len() {
            return Err(Error::DimensionMismatch("positions and velocities differ in length".into()));
        }
        Ok(InitialConditions { positions, velocities })
    }

    pub fn zeros(n: usize) -> Self {
        InitialConditions { positions: vec![0.0; n], velocities: vec![0.0; n] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mode {
    /// Squared frequency `K`.
    pub k: RealRoot,
    pub omega: f64,
    /// Unit `A`-norm shape.
    pub shape: Vec<f64>,
    /// Primitive integer direction when the root is rational.
    pub exact_shape: Option<Vec<Rat>>,
    /// `E` in `E sin(omega t + eps)`; the offset for a rigid mode.
    pub amplitude: f64,
    /// `eps` in `[0, 2 pi)`; zero for a rigid mode.
    pub phase: f64,
    pub rigid: bool,
    /// Drift velocity of a rigid mode.
    pub drift: f64,
}

impl Mode {
    fn coordinate(&self, t: f64) -> (f64, f64) {
        if self.rigid {
            (self.amplitude + self.drift * t, self.drift)
        } else {
            let arg = self.omega * t + self.phase;
            (self.amplitude * arg.sin(), self.amplitude * self.omega * arg.cos())
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModalSolution {
    pub modes: Vec<Mode>,
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
}

impl ModalSolution {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn position(&self, t: f64) -> Vec<f64> {
        self.state(t).0
    }

    pub fn velocity(&self, t: f64) -> Vec<f64> {
        self.state(t).1
    }

    pub fn state(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        let mut y = vec![0.0; n];
        let mut v = vec![0.0; n];
        for m in &self.modes {
            let (q, dq) = m.coordinate(t);
            for i in 0..n {
                y[i] += q * m.shape[i];
                v[i] += dq * m.shape[i];
            }
        }
        (y, v)
    }

    /// `(y'^T A y' + y^T B y) / 2`
    pub fn energy(&self, t: f64) -> f64 {
        let (y, v) = self.state(t);
        let y = DVector::from_vec(y);
        let v = DVector::from_vec(v);
        0.5 * (v.dot(&(&self.a * &v)) + y.dot(&(&self.b * &y)))
    }

    /// `sum |E_i| |shape_i|`, an upper bound for oscillating modes.
    pub fn modal_bound(&self) -> f64 {
        self.modes
            .iter()
            .filter(|m| !m.rigid)
            .map(|m| m.amplitude.abs() * m.shape.iter().fold(0.0f64, |a, x| a.max(x.abs())))
            .sum()
    }

    pub fn rigid_modes(&self) -> usize {
        self.modes.iter().filter(|m| m.rigid).count()
    }

    pub fn min_omega(&self) -> Option<f64> {
        self.modes.iter().filter(|m| !m.rigid).map(|m| m.omega).reduce(f64::min)
    }
}

/// Normal-mode solution of `A y'' + B y = 0` fitted to the initial state.
pub fn solve_modal(model: &MechModel, ic: &InitialConditions) -> Result<ModalSolution> {
    let n = model.size();
    if ic.positions.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "initial conditions have {} entries, model has {n}",
            ic.positions.len()
        )));
    }
    if !model.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !is_definite(&model.a) || !model.a.get(0, 0).is_positive() {
        return Err(Error::NotDefinite("kinetic matrix must be positive definite".into()));
    }
    let pencil = model.pencil();
    let dec = spectral_decomposition(&pencil)?;
    let af = model.a.to_f64();
    let y0 = DVector::from_column_slice(&ic.positions);
    let v0 = DVector::from_column_slice(&ic.velocities);
    let ay = &af * &y0;
    let av = &af * &v0;
    let mut modes = Vec::with_capacity(n);
    for (root, vectors) in dec.roots.iter().zip(&dec.vectors) {
        let k = root.approx();
        let exact_zero = root.value().is_some_and(Zero::is_zero);
        if !exact_zero && (k < 0.0 || root.upper().is_negative()) {
            return Err(Error::NotDefinite(format!("negative squared frequency {k}")));
        }
        for e in vectors {
            let shape = e.unit(&model.a);
            let exact_shape = match e {
                Eigvec::Exact { entries, .. } => Some(entries.clone()),
                Eigvec::Float(_) => None,
            };
            let p: f64 = shape.iter().zip(ay.iter()).map(|(s, x)| s * x).sum();
            let q: f64 = shape.iter().zip(av.iter()).map(|(s, x)| s * x).sum();
            let mode = if exact_zero {
                Mode { k: root.clone(), omega: 0.0, shape, exact_shape, amplitude: p, phase: 0.0, rigid: true, drift: q }
            } else {
                let omega = k.sqrt();
                let amplitude = p.hypot(q / omega);
                let phase = p.atan2(q / omega).rem_euclid(TAU);
                Mode { k: root.clone(), omega, shape, exact_shape, amplitude, phase, rigid: false, drift: 0.0 }
            };
            modes.push(mode);
        }
    }
    Ok(ModalSolution { modes, a: af, b: model.b.to_f64() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::int;
    use crate::matpoly::qmatrix::QMatrix;
    use crate::oscillate::model::{build_model, params, ModelKind};

    fn springs() -> MechModel {
        build_model(ModelKind::CoupledSprings, params(&[("m", int(1)), ("k", int(1)), ("k0", int(1))]), None).unwrap()
    }

    #[test]
    fn beat_solution() {
        let sol = solve_modal(&springs(), &InitialConditions::new(vec![2.0, 0.0], vec![0.0, 0.0]).unwrap()).unwrap();
        let (w1, w2) = (1.0f64, 3f64.sqrt());
        for i in 0..200 {
            let t = i as f64 * 0.2;
            let x = sol.position(t);
            assert!((x[0] - (w1 * t).cos() - (w2 * t).cos()).abs() < 1e-12);
            assert!((x[1] - (w1 * t).cos() + (w2 * t).cos()).abs() < 1e-12);
        }
        let omegas: Vec<f64> = sol.modes.iter().map(|m| m.omega).collect();
        assert!((omegas[0] - 1.0).abs() < 1e-15 && (omegas[1] - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_initial_state() {
        let sol = solve_modal(&springs(), &InitialConditions::zeros(2)).unwrap();
        assert!(sol.modes.iter().all(|m| m.amplitude == 0.0));
    }

    #[test]
    fn reproduces_initial_state() {
        let m = build_model(ModelKind::LoadedString, params(&[("n", int(4)), ("a", int(1))]), None).unwrap();
        let ic = InitialConditions::new(vec![0.3, -0.1, 0.2, 0.5], vec![0.0, 1.0, -0.4, 0.25]).unwrap();
        let sol = solve_modal(&m, &ic).unwrap();
        let (y, v) = sol.state(0.0);
        for i in 0..4 {
            assert!((y[i] - ic.positions[i]).abs() < 1e-12);
            assert!((v[i] - ic.velocities[i]).abs() < 1e-12);
        }
        let e0 = sol.energy(0.0);
        assert!(((sol.energy(37.5) - e0) / e0).abs() < 1e-12);
    }

    #[test]
    fn rigid_mode_drifts() {
        let a = QMatrix::identity(2);
        let b = QMatrix::from_ints(&[[1, -1], [-1, 1]]);
        let m = build_model(ModelKind::Custom, Default::default(), Some((a, b))).unwrap();
        let sol = solve_modal(&m, &InitialConditions::new(vec![1.0, 1.0], vec![1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(sol.rigid_modes(), 1);
        let y = sol.position(2.0);
        assert!((y[0] - 3.0).abs() < 1e-12 && (y[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn unstable_model_rejected() {
        let m = build_model(ModelKind::Custom, Default::default(), Some((QMatrix::identity(1), QMatrix::diag(&[int(-1)])))).unwrap();
        assert!(matches!(solve_modal(&m, &InitialConditions::zeros(1)), Err(Error::NotDefinite(_))));
    }
}
