//! Scalar constant-coefficient equations `F(D) y = 0` solved as
//! `y = sum Res Phi(r) e^{r x} / F(r)` over the roots of `F`.

use num_complex::Complex64;
use num_traits::Zero;

use super::numeric::complex_roots;
use crate::error::{Error, Result};
use crate::exactnum::gcd::squarefree_decompose;
use crate::exactnum::poly::UPoly;

/// `x^power e^{alpha x} (cos_coef cos(beta x) + sin_coef sin(beta x))`
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueTerm {
    pub alpha: f64,
    pub beta: f64,
    pub power: usize,
    pub cos_coef: f64,
    pub sin_coef: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueSolution {
    /// Real form, conjugate pairs merged.
    pub terms: Vec<ResidueTerm>,
    /// `(r, k, c)` for `c x^k e^{r x}`, one entry per root including conjugates.
    complex_terms: Vec<(Complex64, usize, Complex64)>,
}

impl ResidueSolution {
    pub fn eval(&self, x: f64) -> f64 {
        self.derivative(x, 0)
    }

    /// `j`-th derivative at `x`.
    pub fn derivative(&self, x: f64, j: usize) -> f64 {
        let mut acc = Complex64::zero();
        for &(r, p, c) in &self.complex_terms {
            let e = (r * x).exp();
            // d^j (x^p e^{rx}) = sum_i C(j,i) p!/(p-i)! x^{p-i} r^{j-i} e^{rx}
            let mut s = Complex64::zero();
            let mut binom = 1.0;
            let mut falling = 1.0;
            for i in 0..=j.min(p) {
                if i > 0 {
                    binom *= (j - i + 1) as f64 / i as f64;
                    falling *= (p - i + 1) as f64;
                }
                s += r.powu((j - i) as u32) * (binom * falling * x.powi((p - i) as i32));
            }
            acc += c * e * s;
        }
        acc.re
    }
}

fn taylor(coeffs: &[Complex64], z: Complex64) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    let mut out = Vec::with_capacity(c.len());
    while !c.is_empty() {
        for i in (0..c.len() - 1).rev() {
            let hi = c[i + 1];
            c[i] += hi * z;
        }
        out.push(c.remove(0));
    }
    out
}

/// First `m` coefficients of the power series `num / den`.
fn series_div(num: &[Complex64], den: &[Complex64], m: usize) -> Vec<Complex64> {
    let at = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
    let mut q = Vec::with_capacity(m);
    for k in 0..m {
        let mut s = at(num, k);
        for i in 0..k {
            s -= q[i] * at(den, k - i);
        }
        q.push(s / den[0]);
    }
    q
}

/// Solves `sum_k f_k y^{(k)} = 0` with `y^{(j)}(0) = ic[j]`, `j < deg F`.
pub fn scalar_residue_solve(f: &UPoly, ic: &[f64]) -> Result<ResidueSolution> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial("characteristic polynomial"))?;
    if deg == 0 {
        return Err(Error::Precondition("constant characteristic polynomial has no solutions".into()));
    }
    if ic.len() != deg {
        return Err(Error::DimensionMismatch(format!("need {deg} initial values, got {}", ic.len())));
    }
    let fc: Vec<Complex64> = f.to_f64_coeffs().into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    // Phi(s) = sum_k f_k sum_{j<k} s^{k-1-j} y^{(j)}(0)
    let mut phi = vec![Complex64::zero(); deg];
    for (k, fk) in fc.iter().enumerate() {
        for (j, y) in ic.iter().enumerate().take(k) {
            phi[k - 1 - j] += fk * y;
        }
    }
    let mut complex_terms = Vec::new();
    for (factor, mult) in squarefree_decompose(f)? {
        let m = mult as usize;
        for r in complex_roots(&factor) {
            let ft = taylor(&fc, r);
            let ht = &ft[m..];
            let g = series_div(&taylor(&phi, r), ht, m);
            let mut fact = 1.0;
            for j in 0..m {
                if j > 0 {
                    fact *= j as f64;
                }
                complex_terms.push((r, j, g[m - 1 - j] / fact));
            }
        }
    }
    let mut terms = Vec::new();
    for &(r, p, c) in &complex_terms {
        if r.im < 0.0 {
            continue;
        }
        let w = if r.im > 0.0 { 2.0 } else { 1.0 };
        terms.push(ResidueTerm { alpha: r.re, beta: r.im, power: p, cos_coef: w * c.re, sin_coef: -w * c.im });
    }
    Ok(ResidueSolution { terms, complex_terms })
}
