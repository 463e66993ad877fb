use serde::{Deserialize, Serialize};

use super::pmatrix::{det_pencil, PMatrix};
use super::qmatrix::QMatrix;
use crate::error::{Error, Result};
use crate::exactnum::poly::UPoly;
use crate::exactnum::rat::Rat;

/// Which side of the pencil carries the parameter.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, Default)]
pub enum Orientation {
    /// `s A - B`
    #[default]
    #[serde(rename = "sA-B")]
    SAMinusB,
    /// `A - s B`; with `B = I` this is the classic `A - sI`.
    #[serde(rename = "A-sB", alias = "A-sI")]
    AMinusSB,
}

/// A pair of square matrices of equal size plus the orientation marker.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pencil {
    pub a: QMatrix,
    pub b: QMatrix,
    pub orientation: Orientation,
}

impl Pencil {
    pub fn new(a: QMatrix, b: QMatrix, orientation: Orientation) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        if !b.is_square() {
            return Err(Error::NotSquare { rows: b.rows(), cols: b.cols() });
        }
        if a.rows() != b.rows() {
            return Err(Error::DimensionMismatch(format!(
                "pencil blocks are {0}x{0} and {1}x{1}",
                a.rows(),
                b.rows()
            )));
        }
        Ok(Pencil { a, b, orientation })
    }

    /// `A - sI`
    pub fn standard(a: QMatrix) -> Result<Self> {
        let n = a.rows();
        Self::new(a, QMatrix::identity(n), Orientation::AMinusSB)
    }

    /// `s A - B`
    pub fn generalized(a: QMatrix, b: QMatrix) -> Result<Self> {
        Self::new(a, b, Orientation::SAMinusB)
    }

    pub fn size(&self) -> usize {
        self.a.rows()
    }

    /// The matrix multiplied by `s`.
    pub fn metric(&self) -> &QMatrix {
        match self.orientation {
            Orientation::SAMinusB => &self.a,
            Orientation::AMinusSB => &self.b,
        }
    }

    /// The constant-side matrix, so the pencil vanishes on `(s M - N) v = 0`
    /// up to sign with `M = metric()` and `N = operator()`.
    pub fn operator(&self) -> &QMatrix {
        match self.orientation {
            Orientation::SAMinusB => &self.b,
            Orientation::AMinusSB => &self.a,
        }
    }

    pub fn char_matrix(&self) -> PMatrix {
        let (lin, cst) = match self.orientation {
            Orientation::SAMinusB => (self.a.clone(), -&self.b),
            Orientation::AMinusSB => (-&self.b, self.a.clone()),
        };
        PMatrix::linear(&lin, &cst).expect("shapes checked at construction")
    }

    pub fn char_poly(&self) -> Result<UPoly> {
        det_pencil(&self.char_matrix())
    }

    pub fn eval(&self, s: &Rat) -> QMatrix {
        match self.orientation {
            Orientation::SAMinusB => &self.a.scale(s) - &self.b,
            Orientation::AMinusSB => &self.a - &self.b.scale(s),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.a.is_symmetric() && self.b.is_symmetric()
    }

    pub fn transpose(&self) -> Pencil {
        Pencil { a: self.a.transpose(), b: self.b.transpose(), orientation: self.orientation }
    }
}

/// Compares the determinant of the pencil with that of its transpose.
pub fn transpose_check(p: &Pencil) -> Result<bool> {
    Ok(p.char_poly()? == p.transpose().char_poly()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample3() -> QMatrix {
        QMatrix::from_ints(&[[1, -1, 0], [-1, 2, 1], [0, 1, 1]])
    }

    #[test]
    fn orientations_agree_on_roots() {
        let p = Pencil::standard(sample3()).unwrap();
        assert_eq!(p.char_poly().unwrap(), UPoly::from_ints(&[0, -3, 4, -1]));
        let q = Pencil::generalized(QMatrix::identity(3), sample3()).unwrap();
        assert_eq!(q.char_poly().unwrap(), UPoly::from_ints(&[0, 3, -4, 1]));
        assert_eq!(p.eval(&int(3)), -&q.eval(&int(3)));
    }

    #[test]
    fn generalized_example() {
        let p = Pencil::generalized(QMatrix::from_ints(&[[2, 1], [1, 2]]), QMatrix::identity(2)).unwrap();
        assert_eq!(p.char_poly().unwrap(), UPoly::from_ints(&[1, -4, 3]));
        assert_eq!(p.metric(), &QMatrix::from_ints(&[[2, 1], [1, 2]]));
    }

    #[test]
    fn transpose_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let a = QMatrix::from_fn(3, 3, |_, _| int(rng.gen_range(-5..6)));
            let b = QMatrix::from_fn(3, 3, |_, _| int(rng.gen_range(-5..6)));
            assert!(transpose_check(&Pencil::generalized(a, b).unwrap()).unwrap());
        }
        assert!(transpose_check(&Pencil::standard(sample3()).unwrap()).unwrap());
    }

    #[test]
    fn shape_errors() {
        assert!(Pencil::generalized(QMatrix::identity(2), QMatrix::identity(3)).is_err());
    }

    #[test]
    fn orientation_serde() {
        let o: Orientation = serde_json::from_str("\"A-sI\"").unwrap();
        assert_eq!(o, Orientation::AMinusSB);
        assert_eq!(serde_json::to_string(&Orientation::SAMinusB).unwrap(), "\"sA-B\"");
    }
}
