//! Characteristic roots, adjugate-column eigenvectors and B-orthogonality.

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::poly::UPoly;
use crate::exactnum::rat::{self, Rat};
use crate::exactnum::sturm::{pow10_neg, refine_root, sturm_isolate, RealRoot};
use crate::invariants::inertia;
use crate::matpoly::pencil::Pencil;
use crate::matpoly::qmatrix::{dot, normalize_direction, QMatrix};

/// Relative singular-value threshold of the floating nullspace.
pub const FLOAT_NULL_THRESHOLD: f64 = 1e-10;

/// Interval width used before evaluating at an irrational root.
pub fn float_refine_width() -> Rat {
    pow10_neg(30)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Eigvec {
    /// Unnormalized rational vector with its squared metric norm.
    Exact { entries: Vec<Rat>, norm_sq: Rat },
    /// Unit metric norm.
    Float(Vec<f64>),
}

impl Eigvec {
    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Eigvec::Exact { entries, .. } => entries.iter().map(rat::to_f64).collect(),
            Eigvec::Float(v) => v.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Eigvec::Exact { .. })
    }

    /// Float vector scaled to unit norm under `metric`.
    pub fn unit(&self, metric: &QMatrix) -> Vec<f64> {
        let v = self.to_f64();
        let n = metric_norm_sq_f64(&metric.to_f64(), &v).sqrt();
        v.iter().map(|x| x / n).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomp {
    pub roots: Vec<RealRoot>,
    pub vectors: Vec<Vec<Eigvec>>,
    pub orthonormal: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rat::to_f64(r),
            Scalar::Float(x) => *x,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QFactor {
    pub root: RealRoot,
    pub deflated_value: Scalar,
    pub derivative_value: Scalar,
    /// Normalization scalar, fixed to one.
    pub scale: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalityReport {
    pub pairs_checked: usize,
    pub exact: bool,
    pub max_violation: f64,
    pub passed: bool,
}

fn metric_norm_sq_f64(m: &DMatrix<f64>, v: &[f64]) -> f64 {
    let x = nalgebra::DVector::from_column_slice(v);
    (x.transpose() * m * &x)[(0, 0)]
}

/// Whether a symmetric matrix is positive or negative definite.
pub fn is_definite(m: &QMatrix) -> bool {
    m.is_symmetric()
        && inertia(m).is_ok_and(|r| r.zeros == 0 && (r.negatives == 0 || r.positives == 0))
}

/// Real roots of the pencil determinant, isolated to `width`.
pub fn char_roots_with_width(p: &Pencil, width: &Rat) -> Result<Vec<RealRoot>> {
    let det = p.char_poly()?;
    if det.is_zero() {
        return Err(Error::SingularPencil);
    }
    let roots = sturm_isolate(&det, width)?;
    if p.is_symmetric() && is_definite(p.metric()) {
        let total: u32 = roots.iter().map(|r| r.multiplicity).sum();
        if total as usize != p.size() {
            return Err(Error::Internal(format!(
                "symmetric definite pencil of size {} has only {total} real roots",
                p.size()
            )));
        }
    }
    Ok(roots)
}

pub fn char_roots(p: &Pencil) -> Result<Vec<RealRoot>> {
    char_roots_with_width(p, &pow10_neg(30))
}

/// Pencil evaluated at the root, or at a midpoint of a refined interval.
fn eval_at_root(p: &Pencil, root: &RealRoot) -> (QMatrix, bool) {
    match root.value() {
        Some(v) => (p.eval(v), true),
        None => (p.eval(&refine_root(root, &float_refine_width()).midpoint()), false),
    }
}

fn sign_normalize_f64(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8 * max) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn unit_float(v: Vec<f64>, metric: &DMatrix<f64>) -> Vec<f64> {
    let n = metric_norm_sq_f64(metric, &v).abs().sqrt();
    let mut out: Vec<f64> = v.into_iter().map(|x| x / n).collect();
    sign_normalize_f64(&mut out);
    out
}

fn exact_vec(entries: Vec<Rat>, metric: &QMatrix) -> Eigvec {
    let norm_sq = metric.bilinear(&entries, &entries);
    Eigvec::Exact { entries, norm_sq }
}

/// First non-null column of the adjugate of the characteristic matrix at
/// the root, scaled to a primitive integer direction.
pub fn adjugate_eigenvector(p: &Pencil, root: &RealRoot) -> Result<Eigvec> {
    let (m, exact) = eval_at_root(p, root);
    let adj = m.adjugate()?;
    let n = p.size();
    if exact {
        let col = (0..n)
            .map(|j| adj.col(j))
            .find(|c| c.iter().any(|x| !x.is_zero()))
            .ok_or(Error::HigherGeometricMultiplicity)?;
        return Ok(exact_vec(normalize_direction(&col), p.metric()));
    }
    let cols: Vec<Vec<f64>> = (0..n).map(|j| adj.col(j).iter().map(rat::to_f64).collect()).collect();
    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let max = norms.iter().cloned().fold(0.0, f64::max);
    let entry_scale = m.entries().iter().map(|x| rat::to_f64(x).abs()).fold(1.0, f64::max);
    if max <= 1e-12 * entry_scale.powi(n as i32 - 1) {
        return Err(Error::HigherGeometricMultiplicity);
    }
    let j = norms.iter().position(|&x| x >= 1e-6 * max).expect("max column exists");
    Ok(Eigvec::Float(unit_float(cols[j].clone(), &p.metric().to_f64())))
}

/// Basis of the kernel of the characteristic matrix at the root.
pub fn nullspace_at_root(p: &Pencil, root: &RealRoot) -> Result<Vec<Eigvec>> {
    let (m, exact) = eval_at_root(p, root);
    if exact {
        return Ok(m
            .nullspace()
            .into_iter()
            .map(|v| exact_vec(normalize_direction(&v), p.metric()))
            .collect());
    }
    let metric = p.metric().to_f64();
    Ok(float_nullspace(&m.to_f64())
        .into_iter()
        .map(|v| Eigvec::Float(unit_float(v, &metric)))
        .collect())
}

/// Right singular vectors whose singular value is below the relative threshold.
pub fn float_nullspace(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut out = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s <= FLOAT_NULL_THRESHOLD * smax.max(f64::MIN_POSITIVE) {
            out.push((0..n).map(|j| v_t[(k, j)]).collect());
        }
    }
    // Rank-deficient wide SVDs report fewer singular values than columns.
    for k in svd.singular_values.len()..n {
        out.push((0..n).map(|j| v_t[(k, j)]).collect());
    }
    out
}

fn gram_schmidt_exact(vs: Vec<Vec<Rat>>, metric: &QMatrix) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::with_capacity(vs.len());
    for mut v in vs {
        for u in &out {
            let c = metric.bilinear(u, &v) / metric.bilinear(u, u);
            for (x, y) in v.iter_mut().zip(u) {
                *x -= &c * y;
            }
        }
        out.push(normalize_direction(&v));
    }
    out
}

fn gram_schmidt_f64(vs: Vec<Vec<f64>>, metric: &DMatrix<f64>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vs.len());
    for mut v in vs {
        for u in &out {
            let mu = metric * nalgebra::DVector::from_column_slice(u);
            let c: f64 = v.iter().zip(mu.iter()).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= c * y;
            }
        }
        out.push(unit_float(v, metric));
    }
    out
}

/// Roots with kernel bases. For symmetric pencils with a definite metric the
/// bases are made metric-orthogonal within each root.
pub fn spectral_decomposition(p: &Pencil) -> Result<SpectralDecomp> {
    let roots = char_roots(p)?;
    let orthonormal = p.is_symmetric() && is_definite(p.metric());
    let metric_f = p.metric().to_f64();
    let mut vectors = Vec::with_capacity(roots.len());
    for r in &roots {
        let basis = nullspace_at_root(p, r)?;
        if !orthonormal {
            vectors.push(basis);
            continue;
        }
        let v = if r.is_exact() {
            let raw = basis
                .into_iter()
                .map(|e| match e {
                    Eigvec::Exact { entries, .. } => entries,
                    Eigvec::Float(_) => unreachable!("exact root yields exact vectors"),
                })
                .collect();
            gram_schmidt_exact(raw, p.metric()).into_iter().map(|e| exact_vec(e, p.metric())).collect()
        } else {
            let raw = basis.iter().map(Eigvec::to_f64).collect();
            gram_schmidt_f64(raw, &metric_f).into_iter().map(Eigvec::Float).collect()
        };
        vectors.push(v);
    }
    Ok(SpectralDecomp { roots, vectors, orthonormal })
}

/// Checks `v_i^T B v_j = 0` for vectors attached to distinct roots.
pub fn cauchy_orthogonality(dec: &SpectralDecomp, b: &QMatrix) -> OrthogonalityReport {
    let bf = b.to_f64();
    let mut pairs = 0;
    let mut exact = true;
    let mut max_violation = 0.0f64;
    let mut exact_fail = false;
    for i in 0..dec.vectors.len() {
        for j in i + 1..dec.vectors.len() {
            for u in &dec.vectors[i] {
                for v in &dec.vectors[j] {
                    pairs += 1;
                    match (u, v) {
                        (Eigvec::Exact { entries: a, .. }, Eigvec::Exact { entries: c, .. }) => {
                            let val = b.bilinear(a, c);
                            if !val.is_zero() {
                                exact_fail = true;
                                max_violation = max_violation.max(rat::to_f64(&val).abs());
                            }
                        }
                        _ => {
                            exact = false;
                            let uf = u.unit(b);
                            let vf = v.unit(b);
                            let x = nalgebra::DVector::from_column_slice(&uf);
                            let y = nalgebra::DVector::from_column_slice(&vf);
                            let val = (x.transpose() * &bf * y)[(0, 0)];
                            max_violation = max_violation.max(val.abs());
                        }
                    }
                }
            }
        }
    }
    let passed = !exact_fail && max_violation <= 1e-9;
    OrthogonalityReport { pairs_checked: pairs, exact, max_violation, passed }
}

/// Value of `P / (x - r)` at a simple root `r`, cross-checked against `P'(r)`.
pub fn q_factor(p: &UPoly, root: &RealRoot) -> Result<QFactor> {
    if root.multiplicity > 1 {
        return Err(Error::MultipleRoot(root.multiplicity));
    }
    let deriv = p.derivative();
    match root.value() {
        Some(r) => {
            let deflated = p.div_exact(&UPoly::linear_root(r))?.eval(r);
            let d = deriv.eval(r);
            if deflated != d {
                return Err(Error::Internal("deflation and derivative disagree".into()));
            }
            Ok(QFactor {
                root: root.clone(),
                deflated_value: Scalar::Exact(deflated),
                derivative_value: Scalar::Exact(d),
                scale: Rat::one(),
            })
        }
        None => {
            let x = root.approx();
            // p = defining * h, so the deflated value is defining'(r) h(r).
            let h = p.div_exact(&root.defining)?;
            let deflated = root.defining.derivative().eval_f64(x) * h.eval_f64(x);
            Ok(QFactor {
                root: root.clone(),
                deflated_value: Scalar::Float(deflated),
                derivative_value: Scalar::Float(deriv.eval_f64(x)),
                scale: Rat::one(),
            })
        }
    }
}

/// Metric inner product of two exact vectors.
pub fn metric_dot(metric: &QMatrix, u: &[Rat], v: &[Rat]) -> Rat {
    dot(u, &metric.mul_vec(v))
}
