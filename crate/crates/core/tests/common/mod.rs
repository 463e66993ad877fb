//! Independent oracles and instance generators shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secular::exactnum::{frac, int, Rat, UPoly};
use secular::matpoly::QMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `exp(M)` by a Taylor series after scaling `M` below norm 1/2, then squaring.
pub fn expm_taylor(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.iter().map(|x| x.abs()).sum::<f64>();
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.5 {
        s += 1;
    }
    let a = m / 2f64.powi(s);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn parity(p: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 0
}

/// `det(s B - A)` by the Leibniz expansion over polynomial entries.
pub fn leibniz_det(entries: &[Vec<UPoly>]) -> UPoly {
    let n = entries.len();
    let mut acc = UPoly::zero();
    for p in permutations(n) {
        let mut term = UPoly::one();
        for (i, &j) in p.iter().enumerate() {
            term = &term * &entries[i][j];
        }
        acc = if parity(&p) { &acc + &term } else { &acc - &term };
    }
    acc
}

pub fn rand_int_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, lo: i64, hi: i64) -> QMatrix {
    QMatrix::from_fn(rows, cols, |_, _| int(r.gen_range(lo..=hi)))
}

pub fn rand_symmetric(r: &mut ChaCha8Rng, n: usize, lo: i64, hi: i64) -> QMatrix {
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = frac(r.gen_range(lo..=hi), r.gen_range(1..=3));
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

/// Random invertible integer matrix.
pub fn rand_invertible(r: &mut ChaCha8Rng, n: usize) -> QMatrix {
    loop {
        let s = rand_int_matrix(r, n, n, -3, 3);
        if !s.det().unwrap().is_zero() {
            return s;
        }
    }
}

/// Unit upper triangular times unit lower triangular, so the inverse stays integral.
pub fn rand_unimodular(r: &mut ChaCha8Rng, n: usize) -> QMatrix {
    let u = QMatrix::from_fn(n, n, |i, j| if i == j { Rat::one() } else if j > i { int(r.gen_range(-2..=2)) } else { Rat::zero() });
    let l = QMatrix::from_fn(n, n, |i, j| if i == j { Rat::one() } else if j < i { int(r.gen_range(-2..=2)) } else { Rat::zero() });
    &u * &l
}

/// Block-diagonal Jordan matrix; `blocks` lists `(eigenvalue, size)`.
pub fn jordan_matrix(blocks: &[(Rat, usize)]) -> QMatrix {
    let n: usize = blocks.iter().map(|b| b.1).sum();
    let mut m = QMatrix::zeros(n, n);
    let mut off = 0;
    for (s, k) in blocks {
        for i in 0..*k {
            m.set(off + i, off + i, s.clone());
            if i + 1 < *k {
                m.set(off + i, off + i + 1, Rat::one());
            }
        }
        off += k;
    }
    m
}

/// Integer partitions of `n`, parts in non-increasing order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Ordered compositions of `n` into exactly `k` positive parts.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Jordan structures of size `n` on the given eigenvalues, using at most
/// `roots.len()` of them: each entry is `(eigenvalue, block partition)`.
pub fn jordan_structures(n: usize, roots: &[Rat]) -> Vec<Vec<(Rat, Vec<usize>)>> {
    let mut out = Vec::new();
    for k in 1..=roots.len().min(n) {
        for comp in compositions(n, k) {
            let mut acc: Vec<Vec<(Rat, Vec<usize>)>> = vec![Vec::new()];
            for (i, m) in comp.iter().enumerate() {
                let mut next = Vec::new();
                for prefix in &acc {
                    for part in partitions(*m) {
                        let mut p = prefix.clone();
                        p.push((roots[i].clone(), part));
                        next.push(p);
                    }
                }
                acc = next;
            }
            out.extend(acc);
        }
    }
    out
}

/// Invariant factors `i_1 | i_2 | ... | i_n` of a Jordan structure.
pub fn structure_invariant_factors(n: usize, structure: &[(Rat, Vec<usize>)]) -> Vec<UPoly> {
    (0..n)
        .map(|k| {
            // i_{n-k} takes the (k+1)-th largest block of every eigenvalue
            let mut f = UPoly::one();
            for (s, parts) in structure {
                if let Some(&size) = parts.get(k) {
                    f = &f * &UPoly::linear_root(s).pow(size as u32);
                }
            }
            f
        })
        .rev()
        .collect()
}

/// Exact Gram-Schmidt in the metric `phi` on random integer vectors.
pub fn metric_orthogonal_basis(r: &mut ChaCha8Rng, phi: &QMatrix) -> Vec<Vec<Rat>> {
    let n = phi.rows();
    loop {
        let raw = rand_int_matrix(r, n, n, -3, 3);
        if raw.det().unwrap().is_zero() {
            continue;
        }
        let mut basis: Vec<Vec<Rat>> = Vec::new();
        for j in 0..n {
            let mut v = raw.col(j);
            for b in &basis {
                let c = phi.bilinear(b, &v) / phi.bilinear(b, b);
                for i in 0..n {
                    v[i] -= &c * &b[i];
                }
            }
            basis.push(v);
        }
        return basis;
    }
}

/// `Phi = L^T L + I` and a symmetric `Psi` whose roots of `det(s Phi - Psi)` are `values`.
pub fn planted_pair(r: &mut ChaCha8Rng, values: &[Rat]) -> (QMatrix, QMatrix) {
    let n = values.len();
    let l = rand_int_matrix(r, n, n, -2, 2);
    let phi = &(&l.transpose() * &l) + &QMatrix::identity(n);
    let w = metric_orthogonal_basis(r, &phi);
    let mut psi = QMatrix::zeros(n, n);
    for (d, v) in values.iter().zip(&w) {
        let pv = phi.mul_vec(v);
        let norm = phi.bilinear(v, v);
        let outer = QMatrix::from_fn(n, n, |i, j| &pv[i] * &pv[j] * d / &norm);
        psi = &psi + &outer;
    }
    (phi, psi)
}

pub fn shuffle<T>(r: &mut ChaCha8Rng, v: &mut [T]) {
    v.shuffle(r);
}

/// Coefficients of `sum_k C(n,k) a^k x^k / k!`.
pub fn loaded_string_series(n: usize, a: &Rat) -> UPoly {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut binom = Rat::one();
    let mut fact = Rat::one();
    let mut ak = Rat::one();
    for k in 0..=n {
        if k > 0 {
            binom = binom * int((n - k + 1) as i64) / int(k as i64);
            fact *= int(k as i64);
            ak *= a;
        }
        coeffs.push(&binom * &ak / &fact);
    }
    UPoly::from_coeffs(coeffs)
}
