use super::qmatrix::QMatrix;
use crate::error::{Error, Result};
use crate::exactnum::poly::UPoly;
use crate::exactnum::rat::{self, Rat};

/// Entrywise cost guard for the cofactor adjugate.
pub const ADJUGATE_MAX_N: usize = 8;

/// Matrix with polynomial entries, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PMatrix {
    rows: usize,
    cols: usize,
    data: Vec<UPoly>,
}

impl PMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<UPoly>) -> Result<Self> {
        if data.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} polynomial matrix",
                data.len()
            )));
        }
        Ok(PMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> UPoly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        PMatrix { rows, cols, data }
    }

    /// `s * lin + constant`
    pub fn linear(lin: &QMatrix, constant: &QMatrix) -> Result<Self> {
        if (lin.rows(), lin.cols()) != (constant.rows(), constant.cols()) {
            return Err(Error::DimensionMismatch("pencil coefficient shapes differ".into()));
        }
        Ok(Self::from_fn(lin.rows(), lin.cols(), |i, j| {
            UPoly::from_coeffs(vec![constant.get(i, j).clone(), lin.get(i, j).clone()])
        }))
    }

    /// `s I - A`, the characteristic matrix in the invariant-factor orientation.
    pub fn char_matrix(a: &QMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        Self::linear(&QMatrix::identity(a.rows()), &-a)
    }

    pub fn constant(m: &QMatrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| UPoly::constant(m.get(i, j).clone()))
    }

    pub fn diag(entries: Vec<UPoly>) -> Self {
        let n = entries.len();
        let mut out = Self::from_fn(n, n, |_, _| UPoly::zero());
        for (i, p) in entries.into_iter().enumerate() {
            out.data[i * n + i] = p;
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &UPoly {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[UPoly] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn eval(&self, s: &Rat) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval(s))
    }

    /// Coefficient matrix of `s^k`.
    pub fn coefficient(&self, k: usize) -> QMatrix {
        QMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).coeff(k))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.data.iter().filter_map(UPoly::degree).max()
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn mul(&self, rhs: &PMatrix) -> Result<PMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch("inner dimensions differ".into()));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(UPoly::zero(), |acc, k| &acc + &(self.get(i, k) * rhs.get(k, j)))
        }))
    }

    pub fn map(&self, f: impl Fn(&UPoly) -> Result<UPoly>) -> Result<PMatrix> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(PMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, p: &UPoly) -> PMatrix {
        PMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|e| e * p).collect() }
    }

    /// Multiplies by an invertible constant matrix on both sides: `L P R`.
    pub fn sandwich(&self, left: &QMatrix, right: &QMatrix) -> Result<PMatrix> {
        PMatrix::constant(left).mul(self)?.mul(&PMatrix::constant(right))
    }
}

/// Exact determinant by evaluation at `0, 1, 2, ...` and interpolation.
///
/// The number of points is one more than the sum of the per-row maximum
/// degrees, which bounds the degree of the determinant.
pub fn det_pencil(p: &PMatrix) -> Result<UPoly> {
    if !p.is_square() {
        return Err(Error::NotSquare { rows: p.rows, cols: p.cols });
    }
    let n = p.rows;
    let mut bound = 0usize;
    for i in 0..n {
        match (0..n).filter_map(|j| p.get(i, j).degree()).max() {
            Some(d) => bound += d,
            None => return Ok(UPoly::zero()),
        }
    }
    let xs: Vec<Rat> = (0..=bound as i64).map(rat::int).collect();
    let ys = xs.iter().map(|x| p.eval(x).det()).collect::<Result<Vec<_>>>()?;
    Ok(interpolate(&xs, &ys))
}

/// Newton-form interpolation through distinct nodes.
pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> UPoly {
    assert_eq!(xs.len(), ys.len());
    let m = xs.len();
    if m == 0 {
        return UPoly::zero();
    }
    let mut coef = ys.to_vec();
    for j in 1..m {
        for i in (j..m).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut poly = UPoly::constant(coef[m - 1].clone());
    for i in (0..m - 1).rev() {
        poly = &(&poly * &UPoly::linear_root(&xs[i])) + &UPoly::constant(coef[i].clone());
    }
    poly
}

/// Determinant of the submatrix left after deleting the given rows and
/// columns (0-based indices).
pub fn minor(p: &PMatrix, drop_rows: &[usize], drop_cols: &[usize]) -> Result<UPoly> {
    if drop_rows.len() != drop_cols.len() {
        return Err(Error::DimensionMismatch("row and column drop sets differ in size".into()));
    }
    for &r in drop_rows {
        if r >= p.rows {
            return Err(Error::IndexOutOfRange { index: r, size: p.rows });
        }
    }
    for &c in drop_cols {
        if c >= p.cols {
            return Err(Error::IndexOutOfRange { index: c, size: p.cols });
        }
    }
    let rows: Vec<usize> = (0..p.rows).filter(|r| !drop_rows.contains(r)).collect();
    let cols: Vec<usize> = (0..p.cols).filter(|c| !drop_cols.contains(c)).collect();
    if rows.len() != cols.len() {
        return Err(Error::NotSquare { rows: rows.len(), cols: cols.len() });
    }
    if rows.is_empty() {
        return Ok(UPoly::one());
    }
    det_pencil(&p.select(&rows, &cols))
}

/// Transposed matrix of signed cofactors, so `P adj(P) = det(P) I`.
pub fn adjugate_pencil(p: &PMatrix) -> Result<PMatrix> {
    if !p.is_square() {
        return Err(Error::NotSquare { rows: p.rows, cols: p.cols });
    }
    let n = p.rows;
    if n > ADJUGATE_MAX_N {
        return Err(Error::CostGuard { what: "cofactor adjugate", size: n, limit: ADJUGATE_MAX_N });
    }
    if n == 1 {
        return Ok(PMatrix::constant(&QMatrix::identity(1)));
    }
    let mut data = vec![UPoly::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let c = minor(p, &[j], &[i])?;
            data[i * n + j] = if (i + j) % 2 == 1 { -c } else { c };
        }
    }
    PMatrix::new(n, n, data)
}

/// True when the result is the zero polynomial matrix.
pub fn is_zero_matrix(p: &PMatrix) -> bool {
    p.data.iter().all(UPoly::is_zero)
}
