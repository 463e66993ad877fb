//! Sturm-sequence counting and real-root isolation by exact bisection.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::gcd::squarefree_decompose;
use super::poly::UPoly;
use super::rat::{self, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootKind {
    Exact(Rat),
    /// Open interval holding exactly one root of the defining polynomial.
    Isolated { lo: Rat, hi: Rat },
}

/// A real root together with the square-free polynomial that pins it down
/// and its multiplicity in the polynomial it was extracted from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub kind: RootKind,
    pub defining: UPoly,
    pub multiplicity: u32,
}

impl RealRoot {
    pub fn exact(value: Rat, multiplicity: u32) -> Self {
        RealRoot {
            defining: UPoly::linear_root(&value),
            kind: RootKind::Exact(value),
            multiplicity,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.kind, RootKind::Exact(_))
    }

    pub fn value(&self) -> Option<&Rat> {
        match &self.kind {
            RootKind::Exact(v) => Some(v),
            RootKind::Isolated { .. } => None,
        }
    }

    pub fn lower(&self) -> &Rat {
        match &self.kind {
            RootKind::Exact(v) => v,
            RootKind::Isolated { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &Rat {
        match &self.kind {
            RootKind::Exact(v) => v,
            RootKind::Isolated { hi, .. } => hi,
        }
    }

    pub fn width(&self) -> Rat {
        self.upper() - self.lower()
    }

    pub fn midpoint(&self) -> Rat {
        (self.lower() + self.upper()) / rat::int(2)
    }

    /// Whether `x` lies in the closed isolating interval (or equals the exact value).
    pub fn contains(&self, x: &Rat) -> bool {
        self.lower() <= x && x <= self.upper()
    }

    /// Float approximation accurate to the last bit or so.
    pub fn approx(&self) -> f64 {
        match &self.kind {
            RootKind::Exact(v) => rat::to_f64(v),
            RootKind::Isolated { .. } => {
                let scale = self.lower().abs().max(self.upper().abs()).max(Rat::one());
                let tol = scale * Rat::new(BigInt::one(), BigInt::one() << 60usize);
                rat::to_f64(&refine_root(self, &tol).midpoint())
            }
        }
    }

    /// Halve the isolating interval once. Returns false for exact roots.
    fn bisect_once(&mut self) -> bool {
        let RootKind::Isolated { lo, hi } = &self.kind else {
            return false;
        };
        let m = (lo + hi) / rat::int(2);
        let sm = self.defining.sign_at(&m);
        if sm == Ordering::Equal {
            self.kind = RootKind::Exact(m);
            return true;
        }
        let slo = self.defining.sign_at(lo);
        let (lo, hi) = if sm == slo { (m, hi.clone()) } else { (lo.clone(), m) };
        self.kind = RootKind::Isolated { lo, hi };
        true
    }
}

/// Sturm chain with every member scaled by a positive factor to a
/// primitive integer polynomial, which leaves sign variations intact.
#[derive(Clone, Debug)]
pub struct SturmChain {
    seq: Vec<UPoly>,
}

impl SturmChain {
    pub fn new(p: &UPoly) -> Self {
        let mut seq = Vec::new();
        if p.is_zero() {
            return SturmChain { seq };
        }
        seq.push(p.primitive_part_positive());
        let d = p.derivative();
        if !d.is_zero() {
            seq.push(d.primitive_part_positive());
        }
        while seq.len() >= 2 {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            seq.push((-r).primitive_part_positive());
        }
        SturmChain { seq }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn variations(&self, x: &Rat) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct roots in `(lo, hi]`.
    pub fn count_in(&self, lo: &Rat, hi: &Rat) -> usize {
        self.variations(lo).saturating_sub(self.variations(hi))
    }
}

/// Integer strictly above the modulus of every root (Cauchy's bound plus one).
pub fn root_bound(p: &UPoly) -> Rat {
    let lc = p.leading().expect("nonzero polynomial").abs();
    let n = p.degree().unwrap_or(0);
    let max = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(Rat::zero);
    Rat::from_integer((max + rat::int(2)).ceil().to_integer())
}

/// Isolates every distinct real root of `p` with its multiplicity.
///
/// Roots come back sorted, with pairwise disjoint intervals each narrower
/// than `target_width`. Rational roots are always reported exactly.
pub fn sturm_isolate(p: &UPoly, target_width: &Rat) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("real-root isolation"));
    }
    if !target_width.is_positive() {
        return Err(Error::Precondition("target width must be positive".into()));
    }
    let mut roots = Vec::new();
    for (factor, mult) in squarefree_decompose(p)? {
        roots.extend(isolate_squarefree(&factor, mult, target_width));
    }
    sort_roots(&mut roots);
    Ok(roots)
}

/// Same root with interval width at most `width`.
pub fn refine_root(r: &RealRoot, width: &Rat) -> RealRoot {
    let mut out = r.clone();
    while !out.is_exact() && &out.width() > width {
        out.bisect_once();
    }
    out
}

/// Orders roots by value, refining isolated intervals until neighbours are disjoint.
pub fn sort_roots(roots: &mut [RealRoot]) {
    for i in 1..roots.len() {
        let mut j = i;
        while j > 0 {
            let (left, right) = roots.split_at_mut(j);
            if separate(&mut left[j - 1], &mut right[0]) == Ordering::Greater {
                roots.swap(j - 1, j);
                j -= 1;
            } else {
                break;
            }
        }
    }
}

/// Compares two distinct roots, shrinking intervals until they no longer overlap.
pub fn separate(a: &mut RealRoot, b: &mut RealRoot) -> Ordering {
    loop {
        if a.upper() < b.lower() {
            return Ordering::Less;
        }
        if b.upper() < a.lower() {
            return Ordering::Greater;
        }
        if a.is_exact() && b.is_exact() {
            // Equal values can only arise from a malformed input list.
            return Ordering::Equal;
        }
        if a.width() >= b.width() {
            a.bisect_once();
        } else {
            b.bisect_once();
        }
    }
}

fn isolate_squarefree(factor: &UPoly, mult: u32, target_width: &Rat) -> Vec<RealRoot> {
    let f = factor.primitive_part_positive();
    let lc = f.leading().unwrap().abs();
    let chain = SturmChain::new(&f);
    let bound = root_bound(&f);
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound.clone())];
    let two = rat::int(2);
    while let Some((lo, hi)) = stack.pop() {
        let count = chain.count_in(&lo, &hi);
        if count == 0 {
            continue;
        }
        if count == 1 {
            out.push(settle(factor, &f, &lc, lo, hi, mult, target_width));
            continue;
        }
        let m = (&lo + &hi) / &two;
        if f.eval(&m).is_zero() {
            out.push(RealRoot {
                kind: RootKind::Exact(m.clone()),
                defining: factor.clone(),
                multiplicity: mult,
            });
            // Pull the split point off the root until the gap holds only `m`.
            let mut delta = (&hi - &lo) / rat::int(4);
            loop {
                let a = &m - &delta;
                let b = &m + &delta;
                if !f.eval(&a).is_zero() && !f.eval(&b).is_zero() && chain.count_in(&a, &b) == 1 {
                    stack.push((lo.clone(), a));
                    stack.push((b, hi.clone()));
                    break;
                }
                delta /= &two;
            }
        } else {
            stack.push((lo, m.clone()));
            stack.push((m, hi));
        }
    }
    out
}

/// Narrows a single-root interval below the target width and below
/// `1/|lc|`, then tests the unique candidate `k/lc` for an exact rational root.
fn settle(
    factor: &UPoly,
    f: &UPoly,
    lc: &Rat,
    lo: Rat,
    hi: Rat,
    mult: u32,
    target_width: &Rat,
) -> RealRoot {
    let mut root = RealRoot {
        kind: RootKind::Isolated { lo, hi },
        defining: factor.clone(),
        multiplicity: mult,
    };
    let rational_scale = lc.recip();
    while !root.is_exact() && (&root.width() >= target_width || root.width() >= rational_scale) {
        root.bisect_once();
    }
    if let RootKind::Isolated { lo, hi } = &root.kind {
        let k: BigInt = (lo * lc).floor().to_integer() + BigInt::one();
        let cand = Rat::new(k, lc.to_integer());
        if &cand < hi && f.eval(&cand).is_zero() {
            root.kind = RootKind::Exact(cand);
        }
    }
    root
}

/// Multiplicity of the exact rational `r` as a root of `p` (0 when not a root).
pub fn root_multiplicity(p: &UPoly, r: &Rat) -> u32 {
    p.multiplicity_of(&UPoly::linear_root(r)).unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RealRootDoc {
    Exact {
        #[serde(with = "rat::serde_rat")]
        value: Rat,
        multiplicity: u32,
        approx: f64,
    },
    Isolated {
        #[serde(with = "rat::serde_rat")]
        lo: Rat,
        #[serde(with = "rat::serde_rat")]
        hi: Rat,
        #[serde(with = "rat::serde_rat_vec")]
        defining_poly: Vec<Rat>,
        multiplicity: u32,
        approx: f64,
    },
}

impl From<&RealRoot> for RealRootDoc {
    fn from(r: &RealRoot) -> Self {
        match &r.kind {
            RootKind::Exact(v) => RealRootDoc::Exact {
                value: v.clone(),
                multiplicity: r.multiplicity,
                approx: rat::to_f64(v),
            },
            RootKind::Isolated { lo, hi } => RealRootDoc::Isolated {
                lo: lo.clone(),
                hi: hi.clone(),
                defining_poly: r.defining.coeffs().to_vec(),
                multiplicity: r.multiplicity,
                approx: r.approx(),
            },
        }
    }
}

/// `2^-bits`.
pub fn pow2_neg(bits: usize) -> Rat {
    Rat::new(BigInt::one(), BigInt::one() << bits)
}

/// `10^-digits`.
pub fn pow10_neg(digits: u32) -> Rat {
    Rat::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::{frac, int};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    /// Independent bisection on `f64` values, used only as an oracle.
    fn bisect_oracle(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> f64 {
        let flo = f(lo);
        while hi - lo > width {
            let m = 0.5 * (lo + hi);
            if (f(m) > 0.0) == (flo > 0.0) {
                lo = m;
            } else {
                hi = m;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn characteristic_roots_exact() {
        // -x(3-x)(1-x)
        let s = p(&[0, -3, 4, -1]);
        let roots = sturm_isolate(&s, &pow10_neg(6)).unwrap();
        let vals: Vec<Rat> = roots.iter().map(|r| r.value().unwrap().clone()).collect();
        assert_eq!(vals, vec![int(0), int(1), int(3)]);
        assert!(roots.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn repeated_roots() {
        let f = &UPoly::linear_root(&int(2)).pow(2) * &UPoly::linear_root(&int(3));
        let roots = sturm_isolate(&f.scale(&int(-1)), &pow10_neg(6)).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].value(), Some(&int(2)));
        assert_eq!(roots[0].multiplicity, 2);
        assert_eq!(roots[1].value(), Some(&int(3)));
        assert_eq!(roots[1].multiplicity, 1);
    }

    #[test]
    fn sqrt_two_brackets() {
        let f = p(&[-2, 0, 1]);
        let w = pow2_neg(40);
        let roots = sturm_isolate(&f, &w).unwrap();
        assert_eq!(roots.len(), 2);
        let oracle = bisect_oracle(|x| x * x - 2.0, 0.0, 2.0, 2f64.powi(-40));
        for (r, sign) in roots.iter().zip([-1.0, 1.0]) {
            assert!(!r.is_exact());
            assert!(r.width() < w);
            let lo = rat::to_f64(r.lower());
            let hi = rat::to_f64(r.upper());
            assert!(lo <= sign * oracle + 1e-11 && sign * oracle - 1e-11 <= hi);
        }
    }

    #[test]
    fn refine_sqrt_two() {
        let f = p(&[-2, 0, 1]);
        let roots = sturm_isolate(&f, &frac(1, 2)).unwrap();
        let r = refine_root(&roots[1], &pow10_neg(12));
        assert!(r.width() <= pow10_neg(12));
        let mid = rat::to_f64(&r.midpoint());
        assert!((mid - 1.414213562373).abs() < 5e-13 + 1e-12);
        assert!((mid - 2f64.sqrt()).abs() < 1e-12);
        // wider request leaves it alone
        assert_eq!(refine_root(&r, &int(1)), r);
        let e = RealRoot::exact(int(3), 1);
        assert_eq!(refine_root(&e, &pow10_neg(20)), e);
    }

    #[test]
    fn non_dyadic_rational_roots_are_exact() {
        let f = &UPoly::from_ints(&[-1, 3]) * &UPoly::from_ints(&[2, 7]);
        let roots = sturm_isolate(&f, &frac(1, 10)).unwrap();
        let vals: Vec<_> = roots.iter().map(|r| r.value().cloned()).collect();
        assert_eq!(vals, vec![Some(frac(-2, 7)), Some(frac(1, 3))]);
    }

    #[test]
    fn no_real_roots() {
        assert!(sturm_isolate(&p(&[1, 0, 1]), &frac(1, 4)).unwrap().is_empty());
        assert!(sturm_isolate(&p(&[5]), &frac(1, 4)).unwrap().is_empty());
    }

    #[test]
    fn midpoint_root_is_caught() {
        // roots at 0 = midpoint of the initial bracket, plus -1 and 1
        let f = p(&[0, -1, 0, 1]);
        let roots = sturm_isolate(&f, &frac(1, 8)).unwrap();
        let vals: Vec<_> = roots.iter().map(|r| r.value().cloned().unwrap()).collect();
        assert_eq!(vals, vec![int(-1), int(0), int(1)]);
    }

    #[test]
    fn close_roots_from_different_factors_are_separated() {
        // sqrt(2) and 1414/1000 (rational) are very close
        let f = &p(&[-2, 0, 1]) * &UPoly::linear_root(&frac(1414, 1000));
        let roots = sturm_isolate(&f, &int(1)).unwrap();
        assert_eq!(roots.len(), 3);
        for w in roots.windows(2) {
            assert!(w[0].upper() < w[1].lower());
        }
        assert_eq!(roots[1].value(), Some(&frac(707, 500)));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(sturm_isolate(&UPoly::zero(), &int(1)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn isolation_invariants(
            planted in proptest::collection::vec((-12i64..12, 1i64..5, 1u32..3), 1..5),
            quad in proptest::collection::vec(-6i64..6, 0..3),
        ) {
            let mut f = UPoly::from_ints(&quad);
            if f.is_zero() { f = UPoly::one(); }
            for (n, d, e) in &planted {
                f = &f * &UPoly::linear_root(&frac(*n, *d)).pow(*e);
            }
            let w = frac(1, 1000);
            let roots = sturm_isolate(&f, &w).unwrap();
            let deg = f.degree().unwrap();
            prop_assert!(roots.len() <= deg);
            for r in &roots {
                if let RootKind::Isolated { lo, hi } = &r.kind {
                    prop_assert!(lo < hi);
                    prop_assert!(&(hi - lo) < &w);
                    let a = r.defining.sign_at(lo);
                    let b = r.defining.sign_at(hi);
                    prop_assert!(a != Ordering::Equal && b != Ordering::Equal && a != b);
                }
            }
            for win in roots.windows(2) {
                prop_assert!(win[0].upper() < win[1].lower());
            }
            // every planted root is found exactly with at least its planted multiplicity
            for (n, d, _) in &planted {
                let v = frac(*n, *d);
                let hit = roots.iter().find(|r| r.value() == Some(&v));
                prop_assert!(hit.is_some());
                prop_assert_eq!(hit.unwrap().multiplicity, root_multiplicity(&f, &v));
            }
            // total real multiplicity matches the count of real roots with multiplicity
            let total: u32 = roots.iter().map(|r| r.multiplicity).sum();
            let mut real_count = 0u32;
            for (g, e) in squarefree_decompose(&f).unwrap() {
                let chain = SturmChain::new(&g);
                let b = root_bound(&g);
                real_count += chain.count_in(&-b.clone(), &b) as u32 * e;
            }
            prop_assert_eq!(total, real_count);
        }
    }
}
