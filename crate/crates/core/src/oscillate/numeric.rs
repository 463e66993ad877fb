use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::exactnum::poly::UPoly;

/// Complex roots of a square-free polynomial, from the companion matrix
/// eigenvalues followed by Newton polishing. Sorted by real, then imaginary part.
pub fn complex_roots(p: &UPoly) -> Vec<Complex64> {
    let Some(n) = p.degree() else { return Vec::new() };
    if n == 0 {
        return Vec::new();
    }
    let m = p.monic();
    let c: Vec<f64> = m.to_f64_coeffs();
    let comp = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let dp = m.derivative();
    let mut roots: Vec<Complex64> = comp
        .complex_eigenvalues()
        .iter()
        .map(|z0| {
            let mut z = *z0;
            for _ in 0..50 {
                let d = dp.eval_complex(z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = m.eval_complex(z) / d;
                z -= step;
                if step.norm() <= 1e-17 * z.norm().max(1.0) {
                    break;
                }
            }
            z
        })
        .collect();
    for z in roots.iter_mut() {
        if z.im.abs() <= 1e-13 * z.norm().max(1.0) {
            z.im = 0.0;
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    roots
}

/// Taylor coefficients of `p` about `z`, lowest order first.
pub fn taylor_at(p: &UPoly, z: Complex64) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = p.to_f64_coeffs().into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    let n = c.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        // synthetic division by (x - z); the remainder is the k-th coefficient
        let len = n - k;
        for i in (0..len - 1).rev() {
            let hi = c[i + 1];
            c[i] += hi * z;
        }
        out.push(c[0]);
        c.remove(0);
    }
    out
}

/// Orthonormal basis of the kernel of `m`, taking the `dim` smallest singular directions.
pub fn kernel_basis(m: &DMatrix<Complex64>, dim: usize) -> Vec<DVector<Complex64>> {
    let n = m.ncols();
    if dim == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
    idx.into_iter()
        .take(dim)
        .map(|k| v_t.row(k).adjoint().into_owned())
        .collect()
}

/// Components of `v` orthogonal to the span of `basis` (assumed orthonormal).
pub fn project_out(v: &DVector<Complex64>, basis: &[DVector<Complex64>]) -> DVector<Complex64> {
    let mut w = v.clone();
    for b in basis {
        let c = b.dotc(&w);
        w -= b * c;
    }
    w
}

/// Orthonormalizes a family, dropping vectors that fall below `tol` relative norm.
pub fn orthonormalize(vs: &[DVector<Complex64>], tol: f64) -> Vec<DVector<Complex64>> {
    let mut out: Vec<DVector<Complex64>> = Vec::new();
    for v in vs {
        let scale = v.norm().max(f64::MIN_POSITIVE);
        let w = project_out(&project_out(v, &out), &out);
        if w.norm() > tol * scale {
            out.push(w.normalize());
        }
    }
    out
}
