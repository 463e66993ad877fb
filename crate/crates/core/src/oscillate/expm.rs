//! `exp(M t)` from spectral projectors obtained with Bezout cofactors of the
//! characteristic factorization.

use nalgebra::DMatrix;

use super::jordan::poly_at_matrix;
use crate::error::{Error, Result};
use crate::exactnum::gcd::poly_ext_gcd;
use crate::exactnum::poly::UPoly;
use crate::exactnum::rat::{self, Rat};
use crate::exactnum::sturm::{pow10_neg, sturm_isolate};
use crate::matpoly::pmatrix::{det_pencil, PMatrix};
use crate::matpoly::qmatrix::QMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projector {
    pub sigma: Rat,
    pub multiplicity: u32,
    /// Smallest `k` with `(M - sigma)^k p = 0`.
    pub index: usize,
    pub p: QMatrix,
    /// `(M - sigma)^k p` for `k < index`.
    pub nilpotent_powers: Vec<QMatrix>,
}

/// Spectral projectors of `M`, one per distinct eigenvalue, in increasing order.
/// Fails with `PathUnavailable` when some eigenvalue is not rational.
pub fn spectral_projectors(m: &QMatrix) -> Result<Vec<Projector>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let charpoly = det_pencil(&PMatrix::char_matrix(m)?)?;
    let roots = sturm_isolate(&charpoly, &pow10_neg(6))?;
    let total: u32 = roots.iter().map(|r| r.multiplicity).sum();
    if total as usize != n || !roots.iter().all(|r| r.is_exact()) {
        return Err(Error::PathUnavailable(
            "eigenvalues are not all rational; use the floating Jordan solver".into(),
        ));
    }
    let factors: Vec<(Rat, u32, UPoly)> = roots
        .iter()
        .map(|r| {
            let s = r.value().unwrap().clone();
            let f = UPoly::linear_root(&s).pow(r.multiplicity);
            (s, r.multiplicity, f)
        })
        .collect();
    let mut out = Vec::with_capacity(factors.len());
    for (i, (sigma, mu, f)) in factors.iter().enumerate() {
        let q = factors
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(UPoly::one(), |acc, (_, (_, _, g))| &acc * g);
        let (g, s, _) = poly_ext_gcd(&q, f)?;
        let cofactor = (&s * &q).scale(&g.leading().expect("nonzero gcd").recip());
        let p = poly_at_matrix(&cofactor, m);
        let nmat = m - &QMatrix::identity(n).scale(sigma);
        let mut powers = vec![p.clone()];
        loop {
            let next = &nmat * powers.last().unwrap();
            if next.is_zero() {
                break;
            }
            powers.push(next);
        }
        out.push(Projector { sigma: sigma.clone(), multiplicity: *mu, index: powers.len(), p, nilpotent_powers: powers });
    }
    Ok(out)
}

/// `exp(M t) = sum_i exp(sigma_i t) sum_{k < index_i} t^k / k! (M - sigma_i)^k p_i`.
pub fn expm_projectors(m: &QMatrix, t: f64) -> Result<DMatrix<f64>> {
    Ok(expm_from(&spectral_projectors(m)?, m.rows(), t))
}

pub fn expm_from(projectors: &[Projector], n: usize, t: f64) -> DMatrix<f64> {
    let mut acc = DMatrix::<f64>::zeros(n, n);
    for pr in projectors {
        let e = (rat::to_f64(&pr.sigma) * t).exp();
        let mut coef = e;
        for (k, nk) in pr.nilpotent_powers.iter().enumerate() {
            if k > 0 {
                coef *= t / k as f64;
            }
            acc += nk.to_f64() * coef;
        }
    }
    acc
}

/// Checks `p_i^2 = p_i`, `p_i p_j = 0` and `sum p_i = I` exactly.
pub fn projector_identities_hold(projectors: &[Projector], n: usize) -> bool {
    let mut sum = QMatrix::zeros(n, n);
    for (i, a) in projectors.iter().enumerate() {
        if &a.p * &a.p != a.p {
            return false;
        }
        for (j, b) in projectors.iter().enumerate() {
            if i != j && !(&a.p * &b.p).is_zero() {
                return false;
            }
        }
        sum = &sum + &a.p;
    }
    sum == QMatrix::identity(n)
}
