use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::{self, Rat};
use crate::error::{Error, Result};

/// Dense univariate polynomial over the rationals, lowest degree first.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn x() -> Self {
        UPoly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    /// `c * x^deg`
    pub fn monomial(c: Rat, deg: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); deg + 1];
        coeffs[deg] = c;
        UPoly::from_coeffs(coeffs)
    }

    /// `x - r`
    pub fn linear_root(r: &Rat) -> Self {
        UPoly::from_coeffs(vec![-r.clone(), Rat::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UPoly::from_coeffs(coeffs.iter().map(|&c| rat::int(c)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        UPoly::from_coeffs(coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }

    /// Product of `(x - r)` over the given roots.
    pub fn from_roots(roots: &[Rat]) -> Self {
        roots
            .iter()
            .fold(UPoly::one(), |acc, r| &acc * &UPoly::linear_root(r))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True for nonzero constants.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rat::to_f64(c))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + rat::to_f64(c))
    }

    /// Sign of `p(x)` by homogeneous integer evaluation, free of gcd reductions.
    pub fn sign_at(&self, x: &Rat) -> Ordering {
        let Some(n) = self.degree() else { return Ordering::Equal };
        let l = rat::denominator_lcm(&self.coeffs);
        let c: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|v| v.numer() * (&l / v.denom()))
            .collect();
        let (num, den) = (x.numer(), x.denom());
        let mut acc = c[n].clone();
        let mut qpow = BigInt::one();
        for i in (0..n).rev() {
            qpow *= den;
            acc = acc * num + &c[i] * &qpow;
        }
        acc.cmp(&BigInt::zero())
    }

    pub fn derivative(&self) -> Self {
        UPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat::int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> Self {
        UPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Leading coefficient one; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => UPoly::zero(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn divrem(&self, divisor: &UPoly) -> Result<(UPoly, UPoly)> {
        let dlead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let ddeg = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= ddeg {
            return Ok((UPoly::zero(), self.clone()));
        }
        let inv = dlead.recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rat::zero(); rem.len() - ddeg];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + ddeg] * &inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(ddeg);
        Ok((UPoly::from_coeffs(quot), UPoly::from_coeffs(rem)))
    }

    pub fn rem(&self, divisor: &UPoly) -> Result<UPoly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Quotient of an exact division; errors when a remainder is left.
    pub fn div_exact(&self, divisor: &UPoly) -> Result<UPoly> {
        let (q, r) = self.divrem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    pub fn divides(&self, other: &UPoly) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Largest `k` with `factor^k | self`; `None` when `self` is zero.
    pub fn multiplicity_of(&self, factor: &UPoly) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut cur = self.clone();
        while factor.degree().unwrap_or(0) > 0 {
            match cur.divrem(factor) {
                Ok((q, r)) if r.is_zero() => {
                    cur = q;
                    k += 1;
                }
                _ => break,
            }
        }
        Some(k)
    }

    /// `p(x + r)`
    pub fn shift(&self, r: &Rat) -> Self {
        // Horner in the shifted variable.
        let step = UPoly::from_coeffs(vec![r.clone(), Rat::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(UPoly::zero(), |acc, c| &(&acc * &step) + &UPoly::constant(c.clone()))
    }

    /// Integer coefficients with unit content and a positive leading term,
    /// proportional to `self` by a positive or negative rational factor.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = rat::denominator_lcm(&self.coeffs);
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rat::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -1 } else { 1 };
        ints.into_iter().map(|c| c / &content * sign).collect()
    }

    /// `primitive_integer` scaled by a positive factor only, so signs of
    /// values are preserved.
    pub fn primitive_part_positive(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let p = UPoly::from_bigints(&self.primitive_integer());
        if p.leading().unwrap().is_positive() == self.leading().unwrap().is_positive() {
            p
        } else {
            -p
        }
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rat::to_f64).collect()
    }

    /// Human readable form in the variable `var`, highest degree first.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let unit = mag.is_one();
            let body = if rat::is_integer(&mag) {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            match i {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if !unit {
                        out.push_str(&body);
                    }
                    out.push_str(var);
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for UPoly {
            type Output = UPoly;
            fn $m(self, rhs: UPoly) -> UPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        -&self
    }
}
