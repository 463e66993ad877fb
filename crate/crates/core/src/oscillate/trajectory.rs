use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::jordan::JordanSolution;
use super::modal::ModalSolution;
use crate::error::{Error, Result};

pub trait Trajectory {
    fn dim(&self) -> usize;
    fn eval(&self, t: f64) -> Vec<f64>;
}

impl Trajectory for ModalSolution {
    fn dim(&self) -> usize {
        ModalSolution::dim(self)
    }

    fn eval(&self, t: f64) -> Vec<f64> {
        self.position(t)
    }
}

impl Trajectory for JordanSolution {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, t: f64) -> Vec<f64> {
        JordanSolution::eval(self, t)
    }
}

/// `steps + 1` equally spaced times on `[0, t_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TGrid {
    pub t_max: f64,
    pub steps: usize,
}

impl TGrid {
    pub fn new(t_max: f64, steps: usize) -> Result<Self> {
        if !t_max.is_finite() || t_max < 0.0 {
            return Err(Error::Precondition(format!("t_max must be finite and non-negative, got {t_max}")));
        }
        if steps == 0 {
            return Err(Error::Precondition("t grid needs at least one step".into()));
        }
        Ok(TGrid { t_max, steps })
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|i| self.t_max * i as f64 / self.steps as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub times: Vec<f64>,
    /// One row per time.
    pub values: Vec<Vec<f64>>,
    pub sup_norm: f64,
}

impl Table {
    pub fn dim(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t");
        for i in 1..=self.dim() {
            write!(s, ",y{i}").unwrap();
        }
        s.push('\n');
        for (t, row) in self.times.iter().zip(&self.values) {
            write!(s, "{t}").unwrap();
            for v in row {
                write!(s, ",{v}").unwrap();
            }
            s.push('\n');
        }
        s
    }
}

pub fn sample_trajectory(sol: &dyn Trajectory, grid: &TGrid) -> Table {
    let times = grid.times();
    let values: Vec<Vec<f64>> = times.iter().map(|&t| sol.eval(t)).collect();
    let sup_norm = values.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    Table { times, values, sup_norm }
}
