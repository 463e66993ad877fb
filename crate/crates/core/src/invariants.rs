//! Minor-gcd chains, invariant factors, elementary divisors and inertia.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::factor::kronecker_factor;
use crate::exactnum::gcd::poly_gcd;
use crate::exactnum::poly::UPoly;
use crate::exactnum::rat::{self, Rat};
use crate::exactnum::sturm::{pow10_neg, sturm_isolate, RealRoot};
use crate::matpoly::pmatrix::{det_pencil, PMatrix};
use crate::matpoly::qmatrix::QMatrix;

/// Largest size for which all minors are enumerated.
pub const MINOR_CHAIN_MAX_N: usize = 6;

/// `deltas[k-1]` is the monic gcd of all `k x k` minors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorGcdChain {
    pub deltas: Vec<UPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFactors {
    pub factors: Vec<UPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryDivisors {
    pub divisors: Vec<(UPoly, u32)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InertiaMethod {
    MinorFormula,
    CongruenceFallback,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InertiaReport {
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
    /// `(D_n, D_{n-1}, ..., D_1, 1)` with `D_k` the leading `k x k` minor.
    pub minor_sequence: Vec<Rat>,
    pub method: InertiaMethod,
}

/// Evidence for one repeated irreducible factor of the determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootWitness {
    pub factor: UPoly,
    pub multiplicity: u32,
    /// Whether `factor^(multiplicity-1)` divides every `(n-1) x (n-1)` minor.
    pub annihilates_minors: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalizabilityReport {
    pub diagonalizable: bool,
    pub elementary_divisors: ElementaryDivisors,
    pub witnesses: Vec<RootWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureStep {
    pub root: RealRoot,
    pub jump: i64,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn gcd_of_minors(p: &PMatrix, k: usize) -> Result<UPoly> {
    let sets = combinations(p.rows(), k);
    let mut acc: Option<UPoly> = None;
    for rows in &sets {
        for cols in &sets {
            let m = det_pencil(&p.select(rows, cols))?;
            if m.is_zero() {
                continue;
            }
            let g = match &acc {
                None => m.monic(),
                Some(a) => poly_gcd(a, &m)?,
            };
            if g.is_constant() {
                return Ok(g);
            }
            acc = Some(g);
        }
    }
    acc.ok_or(Error::SingularPencil)
}

/// Exhaustive minor-gcd chain `(Delta_1, ..., Delta_n)`.
pub fn minor_gcd_chain(p: &PMatrix) -> Result<MinorGcdChain> {
    if !p.is_square() {
        return Err(Error::NotSquare { rows: p.rows(), cols: p.cols() });
    }
    let n = p.rows();
    if n > MINOR_CHAIN_MAX_N {
        return Err(Error::CostGuard { what: "minor enumeration", size: n, limit: MINOR_CHAIN_MAX_N });
    }
    let det = det_pencil(p)?;
    if det.is_zero() {
        return Err(Error::SingularPencil);
    }
    let mut deltas = Vec::with_capacity(n);
    for k in 1..n {
        deltas.push(gcd_of_minors(p, k)?);
    }
    deltas.push(det.monic());
    Ok(MinorGcdChain { deltas })
}

/// `i_k = Delta_k / Delta_{k-1}` with the divisibility chain checked.
pub fn invariant_factors(chain: &MinorGcdChain) -> Result<InvariantFactors> {
    let mut prev = UPoly::one();
    let mut factors = Vec::with_capacity(chain.deltas.len());
    for d in &chain.deltas {
        let q = d
            .div_exact(&prev)
            .map_err(|_| Error::Internal("minor gcd chain is not a divisibility chain".into()))?;
        factors.push(q.monic());
        prev = d.clone();
    }
    for w in factors.windows(2) {
        if !w[0].divides(&w[1]) {
            return Err(Error::Internal("invariant factors do not divide one another".into()));
        }
    }
    Ok(InvariantFactors { factors })
}

/// Splits every invariant factor into powers of irreducibles.
pub fn elementary_divisors(inv: &InvariantFactors) -> Result<ElementaryDivisors> {
    let mut divisors = Vec::new();
    for f in &inv.factors {
        if f.is_constant() {
            continue;
        }
        let cap = f.degree().unwrap_or(0).max(crate::exactnum::DEFAULT_DEGREE_CAP);
        divisors.extend(kronecker_factor(f, cap)?);
    }
    Ok(ElementaryDivisors { divisors })
}

impl ElementaryDivisors {
    /// Rebuilds `n` invariant factors by handing the largest power of each
    /// irreducible to the last factor, the next largest to the one before, and so on.
    pub fn to_invariant_factors(&self, n: usize) -> InvariantFactors {
        let mut groups: Vec<(UPoly, Vec<u32>)> = Vec::new();
        for (phi, e) in &self.divisors {
            match groups.iter_mut().find(|(g, _)| g == phi) {
                Some((_, es)) => es.push(*e),
                None => groups.push((phi.clone(), vec![*e])),
            }
        }
        let mut factors = vec![UPoly::one(); n];
        for (phi, mut es) in groups {
            es.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, e) in es.into_iter().enumerate() {
                let idx = n - 1 - slot;
                factors[idx] = &factors[idx] * &phi.pow(e);
            }
        }
        InvariantFactors { factors }
    }
}

/// Companion matrix whose characteristic polynomial is `monic(p)`.
pub fn companion_matrix(p: &UPoly) -> Result<QMatrix> {
    let n = match p.degree() {
        Some(d) if d > 0 => d,
        _ => return Err(Error::Precondition("companion matrix needs positive degree".into())),
    };
    let m = p.monic();
    Ok(QMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -m.coeff(i)
        } else if i == j + 1 {
            Rat::one()
        } else {
            Rat::zero()
        }
    }))
}

fn char_form_operator(p: &PMatrix) -> Result<QMatrix> {
    let linear_ok = p.max_degree().is_some_and(|d| d <= 1);
    let n = p.rows();
    let lead = p.coefficient(1);
    let id = QMatrix::identity(n);
    if !p.is_square() || !linear_ok {
        return Err(Error::Precondition("expected a pencil of the form sI - A".into()));
    }
    if lead == id {
        Ok(-&p.coefficient(0))
    } else if lead == -&id {
        Ok(p.coefficient(0))
    } else {
        Err(Error::Precondition("expected a pencil of the form sI - A".into()))
    }
}

/// Diagonalizability of `sI - A` (or `A - sI`) from its elementary divisors,
/// with a per-root witness on the `(n-1) x (n-1)` minors.
pub fn is_diagonalizable(p: &PMatrix) -> Result<DiagonalizabilityReport> {
    char_form_operator(p)?;
    let chain = minor_gcd_chain(p)?;
    let inv = invariant_factors(&chain)?;
    let elementary = elementary_divisors(&inv)?;
    let diagonalizable = elementary.divisors.iter().all(|(_, e)| *e == 1);
    let n = chain.deltas.len();
    let det = &chain.deltas[n - 1];
    let sub = if n >= 2 { chain.deltas[n - 2].clone() } else { UPoly::one() };
    let cap = det.degree().unwrap_or(0).max(crate::exactnum::DEFAULT_DEGREE_CAP);
    let mut witnesses = Vec::new();
    for (phi, mu) in kronecker_factor(det, cap)? {
        if mu < 2 {
            continue;
        }
        witnesses.push(RootWitness {
            annihilates_minors: phi.pow(mu - 1).divides(&sub),
            factor: phi,
            multiplicity: mu,
        });
    }
    Ok(DiagonalizabilityReport { diagonalizable, elementary_divisors: elementary, witnesses })
}

/// Convenience wrapper for a plain matrix `A`.
pub fn is_diagonalizable_matrix(a: &QMatrix) -> Result<DiagonalizabilityReport> {
    is_diagonalizable(&PMatrix::char_matrix(a)?)
}

fn sign(r: &Rat) -> Ordering {
    r.cmp(&Rat::zero())
}

/// Signature from the leading-principal-minor sequence, falling back to
/// symmetric congruence elimination when a minor vanishes.
pub fn inertia(m: &QMatrix) -> Result<InertiaReport> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut seq = m.leading_principal_minors()?;
    seq.reverse();
    seq.push(Rat::one());
    if seq.iter().any(Zero::is_zero) {
        let (positives, negatives, zeros) = congruence_inertia(m)?;
        return Ok(InertiaReport {
            positives,
            negatives,
            zeros,
            minor_sequence: seq,
            method: InertiaMethod::CongruenceFallback,
        });
    }
    let permanences = seq.windows(2).filter(|w| sign(&w[0]) == sign(&w[1])).count();
    Ok(InertiaReport {
        positives: permanences,
        negatives: m.rows() - permanences,
        zeros: 0,
        minor_sequence: seq,
        method: InertiaMethod::MinorFormula,
    })
}

/// `(positives, negatives, zeros)` by simultaneous row/column elimination.
pub fn congruence_inertia(m: &QMatrix) -> Result<(usize, usize, usize)> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows();
    let mut a: Vec<Vec<Rat>> = (0..n).map(|i| m.row(i)).collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut k = 0;
    while k < n {
        let pivot = (k..n).find(|&i| !a[i][i].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => {
                let pair = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
                let Some((i, j)) = pair else {
                    zero += n - k;
                    break;
                };
                // row_i += row_j, col_i += col_j makes the diagonal entry 2 a_ij
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
                i
            }
        };
        a.swap(k, pivot);
        for row in a.iter_mut() {
            row.swap(k, pivot);
        }
        let d = a[k][k].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &d;
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
        for i in k + 1..n {
            a[k][i] = Rat::zero();
            a[i][k] = Rat::zero();
        }
        k += 1;
    }
    Ok((pos, neg, zero))
}

/// Eigenvalues of a symmetric `M` seen as the points where the number of
/// positive squares of `x^T M x - lambda |x|^2` changes, and the jump there.
pub fn darboux_signature_steps(m: &QMatrix) -> Result<Vec<SignatureStep>> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows();
    let charpoly = det_pencil(&PMatrix::char_matrix(m)?)?;
    let roots = sturm_isolate(&charpoly, &pow10_neg(6))?;
    let id = QMatrix::identity(n);
    let positives_at = |lambda: &Rat| -> Result<usize> { Ok(inertia(&(m - &id.scale(lambda)))?.positives) };
    let mut steps = Vec::with_capacity(roots.len());
    for (i, r) in roots.iter().enumerate() {
        let below = if i == 0 {
            r.lower() - Rat::one()
        } else {
            (roots[i - 1].upper() + r.lower()) / rat::int(2)
        };
        let above = match roots.get(i + 1) {
            Some(next) => (r.upper() + next.lower()) / rat::int(2),
            None => r.upper() + Rat::one(),
        };
        let jump = positives_at(&above)? as i64 - positives_at(&below)? as i64;
        steps.push(SignatureStep { root: r.clone(), jump });
    }
    Ok(steps)
}
