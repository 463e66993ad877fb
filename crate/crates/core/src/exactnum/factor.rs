//! Factorization over the rationals by Kronecker's evaluation/interpolation
//! search.
//!
//! For a primitive integer polynomial `f` of degree `n`, any integer factor
//! `g` of degree `d <= n/2` satisfies `g(x_i) | f(x_i)` at every integer
//! point. Choosing `d + 1` points and running over all divisor tuples gives
//! finitely many interpolation candidates; each is tested by exact division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gcd::squarefree_decompose;
use super::poly::UPoly;
use super::rat::Rat;
use crate::error::{Error, Result};

pub const DEFAULT_DEGREE_CAP: usize = 12;

/// Complete factorization of `p` into monic irreducibles over the rationals.
///
/// The output is sorted by degree then coefficients; the product of
/// `factor^exponent` equals `monic(p)`. Constants factor as the empty list.
pub fn kronecker_factor(p: &UPoly, degree_cap: usize) -> Result<Vec<(UPoly, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("factorization"));
    }
    let deg = p.degree().unwrap();
    if deg > degree_cap {
        return Err(Error::DegreeCapExceeded { degree: deg, cap: degree_cap });
    }
    let mut out = Vec::new();
    for (part, e) in squarefree_decompose(p)? {
        let ints = part.primitive_integer();
        for g in split_squarefree(ints) {
            out.push((UPoly::from_bigints(&g).monic(), e));
        }
    }
    out.sort_by(|a, b| poly_order(&a.0, &b.0).then(a.1.cmp(&b.1)));
    Ok(out)
}

/// True when no factor of degree `1..=deg/2` exists.
pub fn is_irreducible(p: &UPoly) -> bool {
    let Some(n) = p.degree() else { return false };
    if n == 0 {
        return false;
    }
    let f = p.primitive_integer();
    (1..=n / 2).all(|d| find_factor(&f, d).is_none())
}

/// Deterministic ordering on monic polynomials: degree first; linear factors
/// by root, others by coefficients from the top.
pub fn poly_order(a: &UPoly, b: &UPoly) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        if a.degree() == Some(1) {
            (-a.coeff(0)).cmp(&-b.coeff(0))
        } else {
            a.coeffs().iter().rev().cmp(b.coeffs().iter().rev())
        }
    })
}

type IntPoly = Vec<BigInt>;

fn degree(f: &IntPoly) -> usize {
    f.len().saturating_sub(1)
}

fn eval_int(f: &IntPoly, x: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn split_squarefree(f: IntPoly) -> Vec<IntPoly> {
    let mut found = Vec::new();
    let mut rest = f;
    let mut d = 1;
    while 2 * d <= degree(&rest) {
        match find_factor(&rest, d) {
            Some(g) => {
                rest = exact_int_div(&rest, &g).expect("candidate was checked");
                found.push(g);
            }
            None => d += 1,
        }
    }
    if degree(&rest) >= 1 {
        found.push(rest);
    }
    found
}

/// Exact division in Z[x]; `None` when the quotient is not integral.
fn exact_int_div(f: &IntPoly, g: &IntPoly) -> Option<IntPoly> {
    let n = degree(f);
    let m = degree(g);
    if m > n {
        return None;
    }
    let lc = g.last().unwrap();
    let mut rem = f.clone();
    let mut quot = vec![BigInt::zero(); n - m + 1];
    for k in (0..=n - m).rev() {
        let (q, r) = rem[k + m].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (j, c) in g.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
        }
        quot[k] = q;
    }
    if rem.iter().all(Zero::is_zero) {
        Some(quot)
    } else {
        None
    }
}

/// Evaluation points 0, 1, -1, 2, -2, ...
fn point_sequence() -> impl Iterator<Item = BigInt> {
    (0i64..).flat_map(|k| if k == 0 { vec![0] } else { vec![k, -k] }).map(BigInt::from)
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if let Some(small) = n.to_u64() {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        let mut i = 1u64;
        while i * i <= small {
            if small % i == 0 {
                lo.push(BigInt::from(i));
                if i * i != small {
                    hi.push(BigInt::from(small / i));
                }
            }
            i += 1;
        }
        lo.extend(hi.into_iter().rev());
        return lo;
    }
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    let root = n.sqrt();
    let mut i = BigInt::one();
    while i <= root {
        if (&n % &i).is_zero() {
            let q = &n / &i;
            if q != i {
                hi.push(q);
            }
            lo.push(i.clone());
        }
        i += 1;
    }
    lo.extend(hi.into_iter().rev());
    lo
}

/// Searches for a factor of `f` of exact degree `d`, normalized with a
/// positive leading coefficient.
fn find_factor(f: &IntPoly, d: usize) -> Option<IntPoly> {
    let n = degree(f);
    if d == 0 || d > n / 2 {
        return None;
    }
    // Gather candidate points; a vanishing value yields a linear factor directly.
    let mut pts: Vec<(BigInt, BigInt, usize)> = Vec::new();
    for x in point_sequence().take(d + 1 + 8) {
        let v = eval_int(f, &x);
        if v.is_zero() {
            if d == 1 {
                return Some(vec![-x, BigInt::one()]);
            }
            continue;
        }
        let ndiv = divisor_count_estimate(&v);
        pts.push((x, v, ndiv));
    }
    if pts.len() < d + 1 {
        return None;
    }
    // Fewest divisors first keeps the search small.
    pts.sort_by_key(|p| p.2);
    pts.truncate(d + 1);
    let xs: Vec<BigInt> = pts.iter().map(|p| p.0.clone()).collect();
    let choices: Vec<Vec<BigInt>> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let pos = positive_divisors(&p.1);
            if i == 0 {
                // g and -g are the same factor; fix the sign at the first point.
                pos
            } else {
                pos.iter().flat_map(|q| [q.clone(), -q]).collect()
            }
        })
        .collect();
    let lc_f = f.last().unwrap().clone();
    let c0_f = f[0].clone();
    let mut idx = vec![0usize; d + 1];
    loop {
        let ys: Vec<BigInt> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
        if let Some(g) = interpolate_integer(&xs, &ys, d) {
            let lc = g.last().unwrap();
            let c0 = &g[0];
            let plausible = (&lc_f % lc).is_zero() && (c0.is_zero() || (&c0_f % c0).is_zero());
            if plausible && exact_int_div(f, &g).is_some() {
                let g = if lc.is_negative() { g.into_iter().map(|c| -c).collect() } else { g };
                return Some(g);
            }
        }
        // odometer
        let mut k = 0;
        loop {
            if k == idx.len() {
                return None;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn divisor_count_estimate(v: &BigInt) -> usize {
    match v.abs().to_u64() {
        Some(small) if small < 1 << 40 => positive_divisors(v).len(),
        _ => usize::MAX,
    }
}

/// Newton interpolation; returns the integer polynomial of exact degree `d`
/// through the points, or `None` if it is not integral or has lower degree.
fn interpolate_integer(xs: &[BigInt], ys: &[BigInt], d: usize) -> Option<IntPoly> {
    let xr: Vec<Rat> = xs.iter().map(|x| Rat::from_integer(x.clone())).collect();
    let mut coef: Vec<Rat> = ys.iter().map(|y| Rat::from_integer(y.clone())).collect();
    let m = xr.len();
    for j in 1..m {
        for i in (j..m).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xr[i] - &xr[i - j]);
        }
    }
    let mut poly = UPoly::constant(coef[m - 1].clone());
    for i in (0..m - 1).rev() {
        poly = &(&poly * &UPoly::linear_root(&xr[i])) + &UPoly::constant(coef[i].clone());
    }
    if poly.degree() != Some(d) {
        return None;
    }
    poly.coeffs()
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::{frac, int};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    fn lin(r: i64) -> UPoly {
        UPoly::linear_root(&int(r))
    }

    #[test]
    fn splits_quadratic() {
        assert_eq!(
            kronecker_factor(&p(&[2, -3, 1]), DEFAULT_DEGREE_CAP).unwrap(),
            vec![(lin(1), 1), (lin(2), 1)]
        );
    }

    #[test]
    fn irreducible_quadratic() {
        let f = p(&[1, 0, 1]);
        assert_eq!(kronecker_factor(&f, DEFAULT_DEGREE_CAP).unwrap(), vec![(f.clone(), 1)]);
        assert!(is_irreducible(&f));
    }

    #[test]
    fn repeated_linear_factors() {
        let f = &(&lin(1).pow(2) * &lin(2).pow(3)) * &lin(3);
        let fac = kronecker_factor(&f, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(fac, vec![(lin(1), 2), (lin(2), 3), (lin(3), 1)]);
    }

    #[test]
    fn quartic_into_quadratics() {
        // (x^2 + x + 1)(x^2 - 2) with rational scaling
        let f = (&p(&[1, 1, 1]) * &p(&[-2, 0, 1])).scale(&frac(-3, 5));
        let fac = kronecker_factor(&f, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(fac, vec![(p(&[-2, 0, 1]), 1), (p(&[1, 1, 1]), 1)]);
    }

    #[test]
    fn non_monic_rational_roots() {
        let f = &p(&[-1, 2]) * &p(&[3, 5]);
        let fac = kronecker_factor(&f, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(
            fac,
            vec![
                (UPoly::linear_root(&frac(-3, 5)), 1),
                (UPoly::linear_root(&frac(1, 2)), 1)
            ]
        );
    }

    #[test]
    fn degree_cap() {
        let f = lin(1).pow(13);
        assert_eq!(
            kronecker_factor(&f, DEFAULT_DEGREE_CAP),
            Err(Error::DegreeCapExceeded { degree: 13, cap: 12 })
        );
        assert!(kronecker_factor(&UPoly::zero(), 12).is_err());
        assert!(kronecker_factor(&p(&[4]), 12).unwrap().is_empty());
    }

    #[test]
    fn cyclotomic_sextic() {
        // x^6 - 1 = (x-1)(x+1)(x^2+x+1)(x^2-x+1)
        let fac = kronecker_factor(&p(&[-1, 0, 0, 0, 0, 0, 1]), DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(
            fac,
            vec![
                (lin(-1), 1),
                (lin(1), 1),
                (p(&[1, -1, 1]), 1),
                (p(&[1, 1, 1]), 1)
            ]
        );
    }

    fn irreducible_pool() -> Vec<UPoly> {
        vec![
            lin(0),
            lin(2),
            lin(-3),
            p(&[1, 0, 1]),
            p(&[-2, 0, 1]),
            p(&[1, 1, 1]),
            p(&[-2, 0, 0, 1]),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn factors_reconstruct_and_are_irreducible(
            picks in proptest::collection::vec((0usize..7, 1u32..3), 1..4),
            scale in 1i64..9,
        ) {
            let pool = irreducible_pool();
            let f = picks
                .iter()
                .fold(UPoly::constant(int(scale)), |acc, (i, e)| &acc * &pool[*i].pow(*e));
            prop_assume!(f.degree().unwrap() <= DEFAULT_DEGREE_CAP);
            let fac = kronecker_factor(&f, DEFAULT_DEGREE_CAP).unwrap();
            let prod = fac.iter().fold(UPoly::one(), |acc, (g, e)| &acc * &g.pow(*e));
            prop_assert_eq!(prod, f.monic());
            for (g, _) in &fac {
                prop_assert!(g.is_monic());
                prop_assert!(is_irreducible(g));
            }
        }
    }
}
