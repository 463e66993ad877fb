use num_traits::One;

use super::poly::UPoly;
use super::rat::Rat;
use crate::error::{Error, Result};

/// Monic greatest common divisor. `gcd(p, 0) = monic(p)`; `gcd(0, 0)` is an error.
pub fn poly_gcd(p: &UPoly, q: &UPoly) -> Result<UPoly> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroPolynomial("gcd(0, 0)"));
    }
    let mut a = p.monic();
    let mut b = q.monic();
    while !b.is_zero() {
        let r = a.rem(&b)?;
        a = b;
        b = r.monic();
    }
    Ok(a.monic())
}

/// Gcd of a whole family; zero members are ignored. Errors when every member is zero.
pub fn poly_gcd_many<'a>(polys: impl IntoIterator<Item = &'a UPoly>) -> Result<UPoly> {
    let mut acc: Option<UPoly> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        let g = match &acc {
            None => p.monic(),
            Some(a) => poly_gcd(a, p)?,
        };
        let done = g.is_constant();
        acc = Some(g);
        if done {
            break;
        }
    }
    acc.ok_or(Error::ZeroPolynomial("gcd of an all-zero family"))
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn poly_ext_gcd(a: &UPoly, b: &UPoly) -> Result<(UPoly, UPoly, UPoly)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial("gcd(0, 0)"));
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
    let (mut t0, mut t1) = (UPoly::zero(), UPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let lc: Rat = r0.leading().cloned().unwrap_or_else(Rat::one);
    let inv = lc.recip();
    Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
}

/// Square-free decomposition (Yun). Returns monic, pairwise coprime,
/// square-free factors with their exponents, in increasing exponent order.
/// Constant inputs give an empty list.
pub fn squarefree_decompose(p: &UPoly) -> Result<Vec<(UPoly, u32)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("square-free decomposition"));
    }
    let f = p.monic();
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return Ok(out);
    }
    let df = f.derivative();
    let a = poly_gcd(&f, &df)?;
    let mut b = f.div_exact(&a)?;
    let mut d = &df.div_exact(&a)? - &b.derivative();
    let mut i = 1u32;
    while b.degree().unwrap_or(0) > 0 {
        let g = poly_gcd(&b, &d)?;
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), i));
        }
        b = b.div_exact(&g)?;
        let c = d.div_exact(&g)?;
        d = &c - &b.derivative();
        i += 1;
    }
    Ok(out)
}

/// Monic square-free part `monic(p) / gcd(p, p')`.
pub fn squarefree_part(p: &UPoly) -> Result<UPoly> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("square-free part"));
    }
    let g = poly_gcd(p, &p.derivative())?;
    Ok(p.monic().div_exact(&g)?.monic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::int;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    fn lin(r: i64) -> UPoly {
        UPoly::linear_root(&int(r))
    }

    #[test]
    fn gcd_common_factor() {
        let a = &lin(1).pow(2) * &lin(2);
        let b = &lin(1) * &lin(3);
        assert_eq!(poly_gcd(&a, &b).unwrap(), lin(1));
    }

    #[test]
    fn gcd_with_zero() {
        let a = p(&[4, 2]);
        assert_eq!(poly_gcd(&a, &UPoly::zero()).unwrap(), p(&[2, 1]));
        assert!(poly_gcd(&UPoly::zero(), &UPoly::zero()).is_err());
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = lin(2).pow(2);
        let b = lin(3);
        let (g, s, t) = poly_ext_gcd(&a, &b).unwrap();
        assert_eq!(g, UPoly::one());
        assert_eq!(&(&s * &a) + &(&t * &b), UPoly::one());
    }

    #[test]
    fn squarefree_examples() {
        let f = &lin(2).pow(2) * &lin(3);
        assert_eq!(
            squarefree_decompose(&f.scale(&int(-1))).unwrap(),
            vec![(lin(3), 1), (lin(2), 2)]
        );
        assert_eq!(squarefree_decompose(&lin(5)).unwrap(), vec![(lin(5), 1)]);
        let x2p1 = p(&[1, 0, 1]);
        assert_eq!(squarefree_decompose(&x2p1.pow(3)).unwrap(), vec![(x2p1, 3)]);
        assert!(squarefree_decompose(&UPoly::zero()).is_err());
        assert!(squarefree_decompose(&p(&[7])).unwrap().is_empty());
    }

    fn factor_poly() -> impl Strategy<Value = UPoly> {
        proptest::collection::vec((-4i64..5, 1u32..4), 1..4).prop_map(|v| {
            v.into_iter()
                .fold(UPoly::from_ints(&[3]), |acc, (r, e)| &acc * &lin(r).pow(e))
        })
    }

    proptest! {
        #[test]
        fn squarefree_reconstructs(f in factor_poly(), extra in proptest::collection::vec(-5i64..5, 0..4)) {
            let f = &f * &UPoly::from_ints(&extra).monic();
            prop_assume!(!f.is_zero());
            let parts = squarefree_decompose(&f).unwrap();
            let prod = parts.iter().fold(UPoly::one(), |acc, (g, e)| &acc * &g.pow(*e));
            prop_assert_eq!(prod, f.monic());
            for (i, (g, _)) in parts.iter().enumerate() {
                prop_assert!(poly_gcd(g, &g.derivative()).unwrap().is_constant());
                for (h, _) in parts.iter().skip(i + 1) {
                    prop_assert!(poly_gcd(g, h).unwrap().is_constant());
                }
            }
        }

        #[test]
        fn gcd_divides_inputs(a in factor_poly(), b in factor_poly()) {
            let g = poly_gcd(&a, &b).unwrap();
            prop_assert!(g.is_monic());
            prop_assert!(a.rem(&g).unwrap().is_zero());
            prop_assert!(b.rem(&g).unwrap().is_zero());
        }
    }
}
