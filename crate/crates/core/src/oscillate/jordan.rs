//! `x' = M x` solved through Jordan chains built from nested kernels of
//! `(M - sigma I)^k`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Zero;

use super::numeric::{complex_roots, kernel_basis, orthonormalize, project_out};
use crate::error::{Error, Result};
use crate::exactnum::factor::kronecker_factor;
use crate::exactnum::poly::UPoly;
use crate::exactnum::rat::{self, Rat};
use crate::exactnum::sturm::{pow10_neg, sturm_isolate};
use crate::matpoly::pmatrix::{det_pencil, PMatrix};
use crate::matpoly::qmatrix::QMatrix;
use crate::path::ArithPath;

#[derive(Clone, Debug, PartialEq)]
pub struct JordanChain {
    pub sigma: Complex64,
    pub exact_sigma: Option<Rat>,
    /// `v_1, ..., v_r` with `v_1` an eigenvector and `(M - sigma) v_{j+1} = v_j`.
    pub vectors: Vec<Vec<Complex64>>,
    pub exact_vectors: Option<Vec<Vec<Rat>>>,
    /// Weights `c_1, ..., c_r` of the chain's basis solutions in the fitted solution.
    pub weights: Vec<Complex64>,
    /// `psi(t) = sum_k t^k psi[k]`, the chain's share of the fitted solution
    /// divided by `exp(sigma t)`.
    pub psi: Vec<Vec<Complex64>>,
    pub exact_psi: Option<Vec<Vec<Rat>>>,
}

impl JordanChain {
    pub fn length(&self) -> usize {
        self.vectors.len()
    }

    /// Highest power of `t` with a nonzero coefficient in the fitted `psi`.
    pub fn psi_degree(&self) -> Option<usize> {
        let tol = 1e-12 * self.psi.iter().flatten().fold(0.0f64, |a, z| a.max(z.norm())).max(f64::MIN_POSITIVE);
        match &self.exact_psi {
            Some(ps) => ps.iter().rposition(|c| c.iter().any(|x| !x.is_zero())),
            None => self.psi.iter().rposition(|c| c.iter().any(|z| z.norm() > tol)),
        }
    }

    /// Value and derivative of `exp(sigma t) psi(t)`.
    fn contribution(&self, t: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.vectors[0].len();
        let e = (self.sigma * t).exp();
        let mut val = vec![Complex64::zero(); n];
        let mut der = vec![Complex64::zero(); n];
        let mut tk = 1.0;
        for (k, c) in self.psi.iter().enumerate() {
            let dtk = if k == 0 { 0.0 } else { k as f64 * t.powi(k as i32 - 1) };
            for i in 0..n {
                val[i] += c[i] * tk;
                der[i] += c[i] * dtk;
            }
            tk *= t;
        }
        let d: Vec<Complex64> = (0..n).map(|i| e * (self.sigma * val[i] + der[i])).collect();
        let v: Vec<Complex64> = val.into_iter().map(|x| e * x).collect();
        (v, d)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JordanSolution {
    pub dim: usize,
    pub chains: Vec<JordanChain>,
    pub path: ArithPath,
}

impl JordanSolution {
    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.state(t).0
    }

    pub fn derivative(&self, t: f64) -> Vec<f64> {
        self.state(t).1
    }

    pub fn state(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let mut x = vec![0.0; self.dim];
        let mut dx = vec![0.0; self.dim];
        for c in &self.chains {
            let (v, d) = c.contribution(t);
            for i in 0..self.dim {
                x[i] += v[i].re;
                dx[i] += d[i].re;
            }
        }
        (x, dx)
    }
}

fn rank_of(vs: &[Vec<Rat>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    QMatrix::from_rows(vs.to_vec()).map(|m| m.rank()).unwrap_or(0)
}

/// Jordan chains for the rational eigenvalue `sigma` of algebraic multiplicity `mu`,
/// longest first.
pub fn exact_chains(m: &QMatrix, sigma: &Rat, mu: usize) -> Vec<Vec<Vec<Rat>>> {
    let n = m.rows();
    let nmat = m - &QMatrix::identity(n).scale(sigma);
    let mut kernels: Vec<Vec<Vec<Rat>>> = vec![Vec::new()];
    let mut power = QMatrix::identity(n);
    while kernels.last().map_or(0, Vec::len) < mu {
        power = &power * &nmat;
        kernels.push(power.nullspace());
    }
    let nu = kernels.len() - 1;
    let mut chains: Vec<Vec<Vec<Rat>>> = Vec::new();
    let mut carried: Vec<Vec<Rat>> = Vec::new();
    for k in (1..=nu).rev() {
        let mut span: Vec<Vec<Rat>> = kernels[k - 1].clone();
        span.extend(carried.iter().cloned());
        let mut rank = rank_of(&span);
        let mut tops = Vec::new();
        for w in &kernels[k] {
            span.push(w.clone());
            let r = rank_of(&span);
            if r > rank {
                rank = r;
                tops.push(w.clone());
            } else {
                span.pop();
            }
        }
        for w in &tops {
            let mut chain = vec![w.clone()];
            for _ in 1..k {
                let next = nmat.mul_vec(chain.last().unwrap());
                chain.push(next);
            }
            chain.reverse();
            chains.push(chain);
        }
        carried = carried.iter().chain(&tops).map(|v| nmat.mul_vec(v)).collect();
    }
    chains
}

fn to_complex(v: &[Rat]) -> Vec<Complex64> {
    v.iter().map(|x| Complex64::new(rat::to_f64(x), 0.0)).collect()
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn fill_psi_complex(chain: &mut JordanChain) {
    let r = chain.length();
    let n = chain.vectors[0].len();
    chain.psi = (0..r)
        .map(|k| {
            let mut c = vec![Complex64::zero(); n];
            for j in k + 1..=r {
                for i in 0..n {
                    c[i] += chain.weights[j - 1] * chain.vectors[j - k - 1][i];
                }
            }
            c.into_iter().map(|x| x / factorial(k)).collect()
        })
        .collect();
}

fn solve_exact(m: &QMatrix, ic: &[Rat], roots: &[(Rat, usize)]) -> Result<JordanSolution> {
    let n = m.rows();
    let mut raw: Vec<(Rat, Vec<Vec<Rat>>)> = Vec::new();
    for (sigma, mu) in roots {
        for chain in exact_chains(m, sigma, *mu) {
            raw.push((sigma.clone(), chain));
        }
    }
    let columns: Vec<Vec<Rat>> = raw.iter().flat_map(|(_, c)| c.iter().cloned()).collect();
    if columns.len() != n {
        return Err(Error::Internal("Jordan basis has the wrong size".into()));
    }
    let basis = QMatrix::from_fn(n, n, |i, j| columns[j][i].clone());
    let weights = basis.solve(ic)?;
    let mut offset = 0;
    let mut chains = Vec::with_capacity(raw.len());
    for (sigma, vectors) in raw {
        let r = vectors.len();
        let w: Vec<Rat> = weights[offset..offset + r].to_vec();
        offset += r;
        let exact_psi: Vec<Vec<Rat>> = (0..r)
            .map(|k| {
                let kf = Rat::from_integer((1..=k as i64).product::<i64>().into());
                let mut c = vec![Rat::zero(); n];
                for j in k + 1..=r {
                    for i in 0..n {
                        c[i] += &w[j - 1] * &vectors[j - k - 1][i];
                    }
                }
                c.into_iter().map(|x| x / &kf).collect()
            })
            .collect();
        chains.push(JordanChain {
            sigma: Complex64::new(rat::to_f64(&sigma), 0.0),
            exact_sigma: Some(sigma),
            vectors: vectors.iter().map(|v| to_complex(v)).collect(),
            weights: w.iter().map(|x| Complex64::new(rat::to_f64(x), 0.0)).collect(),
            psi: exact_psi.iter().map(|v| to_complex(v)).collect(),
            exact_vectors: Some(vectors),
            exact_psi: Some(exact_psi),
        });
    }
    Ok(JordanSolution { dim: n, chains, path: ArithPath::Exact })
}

/// Evaluates a polynomial at a square matrix by Horner's rule.
pub fn poly_at_matrix(p: &UPoly, m: &QMatrix) -> QMatrix {
    let n = m.rows();
    let mut acc = QMatrix::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * m) + &QMatrix::identity(n).scale(c);
    }
    acc
}

/// `count` orthonormal directions from `vs` by Gram-Schmidt with largest-norm pivoting.
fn pivoted_basis(mut vs: Vec<DVector<Complex64>>, count: usize) -> Vec<DVector<Complex64>> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count && !vs.is_empty() {
        let (best, _) = vs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("nonempty");
        let q = vs.swap_remove(best).normalize();
        for v in vs.iter_mut() {
            let c = q.dotc(v);
            *v -= &q * c;
        }
        out.push(q);
    }
    out
}

fn solve_float(m: &QMatrix, ic: &[Rat], charpoly: &UPoly) -> Result<JordanSolution> {
    let n = m.rows();
    let mf = m.to_f64().map(|x| Complex64::new(x, 0.0));
    let cap = charpoly.degree().unwrap_or(0).max(crate::exactnum::DEFAULT_DEGREE_CAP);
    let mut chains: Vec<JordanChain> = Vec::new();
    for (phi, mu) in kronecker_factor(charpoly, cap)? {
        let delta = phi.degree().unwrap_or(1);
        let phim = poly_at_matrix(&phi, m);
        // kernel dimensions per root, from exact ranks
        let mut dims = vec![0usize];
        let mut power = QMatrix::identity(n);
        while *dims.last().unwrap() < mu as usize {
            power = &power * &phim;
            dims.push((n - power.rank()) / delta);
        }
        let nu = dims.len() - 1;
        for sigma in complex_roots(&phi) {
            let nm = &mf - DMatrix::identity(n, n) * sigma;
            let mut kernels = vec![Vec::new()];
            let mut pw = DMatrix::<Complex64>::identity(n, n);
            for k in 1..=nu {
                pw = &pw * &nm;
                kernels.push(kernel_basis(&pw, dims[k]));
            }
            let mut carried: Vec<DVector<Complex64>> = Vec::new();
            for k in (1..=nu).rev() {
                let above = if k < nu { dims[k + 1] - dims[k] } else { 0 };
                let tops_needed = (dims[k] - dims[k - 1]) - above;
                let mut span = kernels[k - 1].clone();
                span.extend(carried.iter().cloned());
                let span = orthonormalize(&span, 1e-8);
                let tops: Vec<DVector<Complex64>> = if tops_needed == 0 {
                    Vec::new()
                } else {
                    let residuals: Vec<DVector<Complex64>> = kernels[k].iter().map(|v| project_out(v, &span)).collect();
                    pivoted_basis(residuals, tops_needed)
                };
                for w in &tops {
                    let mut chain = vec![w.clone()];
                    for _ in 1..k {
                        let next = &nm * chain.last().unwrap();
                        chain.push(next);
                    }
                    chain.reverse();
                    chains.push(JordanChain {
                        sigma,
                        exact_sigma: None,
                        vectors: chain.iter().map(|v| v.iter().cloned().collect()).collect(),
                        exact_vectors: None,
                        weights: Vec::new(),
                        psi: Vec::new(),
                        exact_psi: None,
                    });
                }
                carried = carried.iter().chain(&tops).map(|v| &nm * v).collect();
            }
        }
    }
    let columns: Vec<DVector<Complex64>> = chains
        .iter()
        .flat_map(|c| c.vectors.iter().map(|v| DVector::from_vec(v.clone())))
        .collect();
    if columns.len() != n {
        return Err(Error::Internal("Jordan basis has the wrong size".into()));
    }
    let basis = DMatrix::from_columns(&columns);
    let x0 = DVector::from_iterator(n, ic.iter().map(|x| Complex64::new(rat::to_f64(x), 0.0)));
    let w = basis
        .lu()
        .solve(&x0)
        .ok_or_else(|| Error::Internal("numerical Jordan basis is singular".into()))?;
    let mut offset = 0;
    for c in chains.iter_mut() {
        let r = c.length();
        c.weights = w.iter().skip(offset).take(r).cloned().collect();
        offset += r;
        fill_psi_complex(c);
    }
    Ok(JordanSolution { dim: n, chains, path: ArithPath::Floating })
}

/// Solves `x' = M x`, `x(0) = ic`. Rational spectra are handled exactly,
/// anything else in complex double precision.
pub fn solve_jordan(m: &QMatrix, ic: &[Rat]) -> Result<JordanSolution> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if ic.len() != m.rows() {
        return Err(Error::DimensionMismatch("initial state length differs from the matrix size".into()));
    }
    let charpoly = det_pencil(&PMatrix::char_matrix(m)?)?;
    let roots = sturm_isolate(&charpoly, &pow10_neg(6))?;
    let real_total: u32 = roots.iter().map(|r| r.multiplicity).sum();
    if real_total as usize == m.rows() && roots.iter().all(|r| r.is_exact()) {
        let exact: Vec<(Rat, usize)> = roots
            .iter()
            .map(|r| (r.value().unwrap().clone(), r.multiplicity as usize))
            .collect();
        return solve_exact(m, ic, &exact);
    }
    solve_float(m, ic, &charpoly)
}

/// Maximum of `|x' - M x|` over the samples relative to `max |x'|`, with
/// `x'` from central differences of step `h`.
pub fn finite_difference_residual(sol: &JordanSolution, m: &QMatrix, times: &[f64], h: f64) -> f64 {
    let mf = m.to_f64();
    let mut worst = 0.0f64;
    let mut scale = f64::MIN_POSITIVE;
    for &t in times {
        let xp = sol.eval(t + h);
        let xm = sol.eval(t - h);
        let x = DVector::from_vec(sol.eval(t));
        let fd = DVector::from_iterator(x.len(), xp.iter().zip(&xm).map(|(a, b)| (a - b) / (2.0 * h)));
        let rhs = &mf * &x;
        worst = worst.max((&fd - &rhs).amax());
        scale = scale.max(rhs.amax()).max(fd.amax());
    }
    worst / scale
}

impl JordanSolution {
    pub fn is_exact(&self) -> bool {
        self.path == ArithPath::Exact
    }

    /// Chain lengths grouped per eigenvalue, for reporting.
    pub fn chain_lengths(&self) -> Vec<(Complex64, usize)> {
        self.chains.iter().map(|c| (c.sigma, c.length())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::int;

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn single_block() {
        let m = QMatrix::from_ints(&[[2, 1], [0, 2]]);
        let sol = solve_jordan(&m, &ints(&[3, 5])).unwrap();
        assert!(sol.is_exact());
        assert_eq!(sol.chains.len(), 1);
        let c = &sol.chains[0];
        assert_eq!(c.length(), 2);
        assert_eq!(c.exact_psi.as_ref().unwrap(), &vec![ints(&[3, 5]), ints(&[5, 0])]);
        assert_eq!(c.psi_degree(), Some(1));
        let t: f64 = 0.7;
        let x = sol.eval(t);
        assert!((x[0] - (2.0 * t).exp() * (3.0 + 5.0 * t)).abs() < 1e-12);
        assert!((x[1] - 5.0 * (2.0 * t).exp()).abs() < 1e-12);
    }

    #[test]
    fn diagonal_matrix() {
        let m = QMatrix::diag(&ints(&[1, -1, 3]));
        let sol = solve_jordan(&m, &ints(&[1, 2, 3])).unwrap();
        assert_eq!(sol.chains.len(), 3);
        assert!(sol.chains.iter().all(|c| c.length() == 1 && c.psi_degree() == Some(0)));
    }

    #[test]
    fn projector_example_blocks() {
        let m = QMatrix::from_ints(&[[1, 4, -2], [0, 6, -3], [-1, 4, 0]]);
        let sol = solve_jordan(&m, &ints(&[1, 0, 0])).unwrap();
        let mut lens: Vec<(Rat, usize)> = sol.chains.iter().map(|c| (c.exact_sigma.clone().unwrap(), c.length())).collect();
        lens.sort();
        assert_eq!(lens, vec![(int(2), 2), (int(3), 1)]);
        let times: Vec<f64> = (0..20).map(|i| i as f64 * 0.05).collect();
        assert!(finite_difference_residual(&sol, &m, &times, 1e-4) < 1e-6);
    }

    #[test]
    fn rotation_uses_complex_pair() {
        let m = QMatrix::from_ints(&[[0, -1], [1, 0]]);
        let sol = solve_jordan(&m, &ints(&[1, 0])).unwrap();
        assert_eq!(sol.path, ArithPath::Floating);
        for i in 0..10 {
            let t = i as f64 * 0.3;
            let x = sol.eval(t);
            assert!((x[0] - t.cos()).abs() < 1e-12 && (x[1] - t.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn irrational_defective() {
        // (x^2 - 2)^2 companion: two Jordan blocks of size 2 at +-sqrt 2
        let f = UPoly::from_ints(&[-2, 0, 1]).pow(2);
        let m = crate::invariants::companion_matrix(&f).unwrap();
        let sol = solve_jordan(&m, &ints(&[1, 0, 0, 0])).unwrap();
        assert_eq!(sol.path, ArithPath::Floating);
        assert!(sol.chains.iter().all(|c| c.length() == 2));
        let times: Vec<f64> = (0..20).map(|i| i as f64 * 0.05).collect();
        assert!(finite_difference_residual(&sol, &m, &times, 1e-4) < 1e-6);
        let x0 = sol.eval(0.0);
        assert!((x0[0] - 1.0).abs() < 1e-12 && x0[1..].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn nilpotent_growth() {
        let m = QMatrix::from_ints(&[[0, 1], [0, 0]]);
        let sol = solve_jordan(&m, &ints(&[0, 2])).unwrap();
        let x = sol.eval(10.0);
        assert!((x[0] - 20.0).abs() < 1e-12);
    }
}
