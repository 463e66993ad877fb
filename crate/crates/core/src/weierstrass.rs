//! Simultaneous reduction of a definite pair of quadratic forms by the
//! partial-fraction expansion of `adj(s Phi - Psi) / det(s Phi - Psi)`.

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::gcd::squarefree_decompose;
use crate::exactnum::poly::UPoly;
use crate::exactnum::rat::{self, Rat};
use crate::exactnum::sturm::{pow10_neg, sturm_isolate, RealRoot};
use crate::invariants::inertia;
use crate::matpoly::pencil::Pencil;
use crate::matpoly::pmatrix::{adjugate_pencil, det_pencil, PMatrix};
use crate::matpoly::qmatrix::QMatrix;
use crate::path::{ArithPath, PathRequest};

/// Residual bound of the floating path.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Definiteness {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadPair {
    pub phi: QMatrix,
    pub psi: QMatrix,
    pub definiteness: Definiteness,
}

impl QuadPair {
    pub fn new(phi: QMatrix, psi: QMatrix) -> Result<Self> {
        if !phi.is_square() {
            return Err(Error::NotSquare { rows: phi.rows(), cols: phi.cols() });
        }
        if (psi.rows(), psi.cols()) != (phi.rows(), phi.cols()) {
            return Err(Error::DimensionMismatch("Phi and Psi differ in size".into()));
        }
        if !phi.is_symmetric() || !psi.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if phi.det()?.is_zero() {
            return Err(Error::NotDefinite("det(Phi) = 0".into()));
        }
        let minors = phi.leading_principal_minors()?;
        let definiteness = if minors.iter().all(Signed::is_positive) {
            Definiteness::Positive
        } else if minors
            .iter()
            .enumerate()
            .all(|(k, d)| if k % 2 == 0 { d.is_negative() } else { d.is_positive() })
        {
            Definiteness::Negative
        } else {
            return Err(Error::NotDefinite("Phi is indefinite".into()));
        };
        Ok(QuadPair { phi, psi, definiteness })
    }

    pub fn size(&self) -> usize {
        self.phi.rows()
    }

    /// `s Phi - Psi`
    pub fn pencil(&self) -> Pencil {
        Pencil::generalized(self.phi.clone(), self.psi.clone()).expect("validated shapes")
    }

    fn positive_forms(&self) -> (QMatrix, QMatrix) {
        match self.definiteness {
            Definiteness::Positive => (self.phi.clone(), self.psi.clone()),
            Definiteness::Negative => (-&self.phi, -&self.psi),
        }
    }

    fn sign(&self) -> Rat {
        match self.definiteness {
            Definiteness::Positive => Rat::one(),
            Definiteness::Negative => -Rat::one(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ThetaMatrix {
    Exact(QMatrix),
    Float(DMatrix<f64>),
}

impl ThetaMatrix {
    pub fn to_f64(&self) -> DMatrix<f64> {
        match self {
            ThetaMatrix::Exact(m) => m.to_f64(),
            ThetaMatrix::Float(m) => m.clone(),
        }
    }

    pub fn path(&self) -> ArithPath {
        match self {
            ThetaMatrix::Exact(_) => ArithPath::Exact,
            ThetaMatrix::Float(_) => ArithPath::Floating,
        }
    }

    fn scaled(&self, c: &Rat) -> ThetaMatrix {
        match self {
            ThetaMatrix::Exact(m) => ThetaMatrix::Exact(m.scale(c)),
            ThetaMatrix::Float(m) => ThetaMatrix::Float(m * rat::to_f64(c)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaComponent {
    pub root: RealRoot,
    pub multiplicity: u32,
    /// Coefficient of `1/(s - s_mu)` in `adj(s Phi - Psi)/det(s Phi - Psi)`.
    pub residue: ThetaMatrix,
    pub theta: ThetaMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThetaDecomp {
    pub components: Vec<ThetaComponent>,
}

impl ThetaDecomp {
    pub fn path(&self) -> ArithPath {
        if self.components.iter().all(|c| c.theta.path() == ArithPath::Exact) {
            ArithPath::Exact
        } else {
            ArithPath::Floating
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircumstanceEntry {
    /// Square-free factor of the determinant carrying the roots.
    pub factor: UPoly,
    pub multiplicity: u32,
    pub divisible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircumstanceReport {
    pub entries: Vec<CircumstanceEntry>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremReport {
    pub path: ArithPath,
    pub sum_residual: f64,
    pub weighted_residual: f64,
    pub ranks_ok: bool,
    pub semidefinite_ok: bool,
    pub multiplicity_total: u32,
    pub passed: bool,
}

fn adj_and_det(phi: &QMatrix, psi: &QMatrix) -> Result<(PMatrix, UPoly)> {
    let p = PMatrix::linear(phi, &-psi)?;
    Ok((adjugate_pencil(&p)?, det_pencil(&p)?))
}

/// Checks that each adjugate entry is divisible by `g^(lambda-1)` for every
/// square-free factor `g` of the determinant with exponent `lambda`.
pub fn remarkable_circumstance_check(pair: &QuadPair) -> Result<CircumstanceReport> {
    let (adj, f) = adj_and_det(&pair.phi, &pair.psi)?;
    let mut entries = Vec::new();
    for (g, lambda) in squarefree_decompose(&f)? {
        let d = g.pow(lambda - 1);
        let divisible = adj.entries().iter().all(|e| d.divides(e));
        entries.push(CircumstanceEntry { factor: g, multiplicity: lambda, divisible });
    }
    let passed = entries.iter().all(|e| e.divisible);
    Ok(CircumstanceReport { entries, passed })
}

fn exact_residue(adj: &PMatrix, f: &UPoly, s: &Rat, lambda: u32) -> Result<QMatrix> {
    let lin = UPoly::linear_root(s);
    let defl = lin.pow(lambda - 1);
    let g = adj.map(|e| e.div_exact(&defl))?;
    let h = f.div_exact(&lin.pow(lambda))?;
    let hs = h.eval(s);
    Ok(g.eval(s).scale(&hs.recip()))
}

fn float_residue(adj: &PMatrix, f: &UPoly, root: &RealRoot) -> Result<DMatrix<f64>> {
    let g = &root.defining;
    let lambda = root.multiplicity;
    let gl = g.pow(lambda - 1);
    let gmat = adj.map(|e| e.div_exact(&gl))?;
    let h = f.div_exact(&g.pow(lambda))?;
    let x = root.approx();
    let denom = h.eval_f64(x) * g.derivative().eval_f64(x);
    let n = adj.rows();
    Ok(DMatrix::from_fn(n, n, |i, j| gmat.get(i, j).eval_f64(x) / denom))
}

/// Theta components with the arithmetic chosen automatically.
pub fn theta_components(pair: &QuadPair) -> Result<ThetaDecomp> {
    theta_components_with(pair, PathRequest::Auto)
}

/// Theta components. `Exact` fails on irrational roots, `Float` evaluates
/// every residue in double precision, `Auto` keeps rational roots exact.
pub fn theta_components_with(pair: &QuadPair, request: PathRequest) -> Result<ThetaDecomp> {
    let (phi, psi) = pair.positive_forms();
    let (adj, f) = adj_and_det(&phi, &psi)?;
    let report = remarkable_circumstance_check(pair)?;
    if !report.passed {
        return Err(Error::Internal("adjugate not divisible by the repeated factor".into()));
    }
    let roots = sturm_isolate(&f, &pow10_neg(30))?;
    let total: u32 = roots.iter().map(|r| r.multiplicity).sum();
    if total as usize != pair.size() {
        return Err(Error::Internal("definite pair with non-real roots".into()));
    }
    if request == PathRequest::Exact && roots.iter().any(|r| !r.is_exact()) {
        return Err(Error::PathUnavailable("irrational roots; use the floating path".into()));
    }
    let phi_f = phi.to_f64();
    let sign = pair.sign();
    let mut components = Vec::with_capacity(roots.len());
    for root in roots {
        let (residue, theta) = match (root.value(), request) {
            (Some(s), PathRequest::Exact | PathRequest::Auto) => {
                let r = exact_residue(&adj, &f, s, root.multiplicity)?;
                let t = &(&phi * &r) * &phi;
                (ThetaMatrix::Exact(r), ThetaMatrix::Exact(t))
            }
            _ => {
                let r = float_residue(&adj, &f, &root)?;
                let t = &phi_f * &r * &phi_f;
                (ThetaMatrix::Float(r), ThetaMatrix::Float(t))
            }
        };
        // Residues of the negated pair are the negated residues; theta flips back.
        components.push(ThetaComponent {
            multiplicity: root.multiplicity,
            residue: residue.scaled(&sign),
            theta: theta.scaled(&sign),
            root,
        });
    }
    Ok(ThetaDecomp { components })
}

fn float_rank(m: &DMatrix<f64>, scale: f64) -> usize {
    m.singular_values().iter().filter(|s| **s > FLOAT_TOLERANCE * scale).count()
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Checks both sum identities, ranks, semidefiniteness and the multiplicity total.
pub fn verify_theorem(dec: &ThetaDecomp, pair: &QuadPair) -> TheoremReport {
    let n = pair.size();
    let path = dec.path();
    let multiplicity_total: u32 = dec.components.iter().map(|c| c.multiplicity).sum();
    let sign = pair.sign();
    let (sum_residual, weighted_residual, ranks_ok, semidefinite_ok) = match path {
        ArithPath::Exact => {
            let mut sum = QMatrix::zeros(n, n);
            let mut weighted = QMatrix::zeros(n, n);
            let mut ranks_ok = true;
            let mut psd_ok = true;
            for c in &dec.components {
                let ThetaMatrix::Exact(t) = &c.theta else { unreachable!("exact path") };
                let s = c.root.value().expect("exact root");
                sum = &sum + t;
                weighted = &weighted + &t.scale(s);
                ranks_ok &= t.rank() == c.multiplicity as usize;
                psd_ok &= t.is_symmetric() && inertia(&t.scale(&sign)).is_ok_and(|r| r.negatives == 0);
            }
            let r1 = max_abs(&(&sum - &pair.phi).to_f64());
            let r2 = max_abs(&(&weighted - &pair.psi).to_f64());
            let exact_ok = sum == pair.phi && weighted == pair.psi;
            (if exact_ok { 0.0 } else { r1.max(f64::MIN_POSITIVE) }, r2, ranks_ok, psd_ok)
        }
        ArithPath::Floating => {
            let scale = max_abs(&pair.phi.to_f64()).max(max_abs(&pair.psi.to_f64())).max(1.0);
            let mut sum = DMatrix::zeros(n, n);
            let mut weighted = DMatrix::zeros(n, n);
            let mut ranks_ok = true;
            let mut psd_ok = true;
            for c in &dec.components {
                let t = c.theta.to_f64();
                sum += &t;
                weighted += &t * c.root.approx();
                ranks_ok &= float_rank(&t, scale) == c.multiplicity as usize;
                let sym = (&t + t.transpose()) * (0.5 * rat::to_f64(&sign));
                let min_eig = sym.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
                psd_ok &= min_eig >= -FLOAT_TOLERANCE * scale;
            }
            let r1 = max_abs(&(sum - pair.phi.to_f64())) / scale;
            let r2 = max_abs(&(weighted - pair.psi.to_f64())) / scale;
            (r1, r2, ranks_ok, psd_ok)
        }
    };
    let sums_ok = match path {
        ArithPath::Exact => sum_residual == 0.0 && weighted_residual == 0.0,
        ArithPath::Floating => sum_residual <= FLOAT_TOLERANCE && weighted_residual <= FLOAT_TOLERANCE,
    };
    TheoremReport {
        path,
        sum_residual,
        weighted_residual,
        ranks_ok,
        semidefinite_ok,
        multiplicity_total,
        passed: sums_ok && ranks_ok && semidefinite_ok && multiplicity_total as usize == n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::{frac, int};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn exact(t: &ThetaMatrix) -> &QMatrix {
        match t {
            ThetaMatrix::Exact(m) => m,
            ThetaMatrix::Float(_) => panic!("expected exact theta"),
        }
    }

    #[test]
    fn diagonal_pair() {
        let pair = QuadPair::new(QMatrix::identity(2), QMatrix::diag(&ints(&[3, 7]))).unwrap();
        let dec = theta_components(&pair).unwrap();
        assert_eq!(dec.components.len(), 2);
        assert_eq!(exact(&dec.components[0].theta), &QMatrix::diag(&ints(&[1, 0])));
        assert_eq!(exact(&dec.components[1].theta), &QMatrix::diag(&ints(&[0, 1])));
        assert!(verify_theorem(&dec, &pair).passed);
    }

    #[test]
    fn repeated_root_single_component() {
        let pair = QuadPair::new(QMatrix::identity(2), QMatrix::identity(2)).unwrap();
        let circ = remarkable_circumstance_check(&pair).unwrap();
        assert!(circ.passed);
        assert_eq!(circ.entries[0].multiplicity, 2);
        let dec = theta_components(&pair).unwrap();
        assert_eq!(dec.components.len(), 1);
        assert_eq!(dec.components[0].multiplicity, 2);
        assert_eq!(exact(&dec.components[0].theta), &QMatrix::identity(2));
        assert!(verify_theorem(&dec, &pair).passed);
    }

    #[test]
    fn double_root_circumstance() {
        let pair = QuadPair::new(QMatrix::identity(3), QMatrix::diag(&ints(&[2, 2, 5]))).unwrap();
        let circ = remarkable_circumstance_check(&pair).unwrap();
        assert!(circ.passed);
        assert!(circ.entries.iter().any(|e| e.multiplicity == 2 && e.factor == UPoly::from_ints(&[-2, 1])));
    }

    #[test]
    fn coupled_pair() {
        let phi = QMatrix::from_ints(&[[2, 1], [1, 2]]);
        let pair = QuadPair::new(phi.clone(), QMatrix::identity(2)).unwrap();
        let dec = theta_components(&pair).unwrap();
        let roots: Vec<Rat> = dec.components.iter().map(|c| c.root.value().unwrap().clone()).collect();
        assert_eq!(roots, vec![frac(1, 3), int(1)]);
        let t1 = exact(&dec.components[0].theta);
        let t2 = exact(&dec.components[1].theta);
        assert_eq!(&(t1 + t2), &phi);
        assert_eq!(&(&t1.scale(&frac(1, 3)) + t2), &QMatrix::identity(2));
        let rep = verify_theorem(&dec, &pair);
        assert!(rep.passed);
        assert_eq!(rep.path, ArithPath::Exact);
        // theta = (Phi v)(Phi v)^T / (v^T Phi v) for v = (1, 1) and (1, -1)
        assert_eq!(t1, &QMatrix::from_fn(2, 2, |_, _| frac(3, 2)));
        assert_eq!(t2, &QMatrix::from_fn(2, 2, |i, j| if i == j { frac(1, 2) } else { frac(-1, 2) }));
    }

    #[test]
    fn tampered_fails() {
        let pair = QuadPair::new(QMatrix::identity(2), QMatrix::diag(&ints(&[3, 7]))).unwrap();
        let mut dec = theta_components(&pair).unwrap();
        dec.components[0].theta = dec.components[0].theta.scaled(&int(2));
        let rep = verify_theorem(&dec, &pair);
        assert!(!rep.passed);
        assert!(rep.sum_residual > 0.0);
    }

    #[test]
    fn scalar_pair() {
        let pair = QuadPair::new(QMatrix::diag(&ints(&[5])), QMatrix::diag(&ints(&[2]))).unwrap();
        let dec = theta_components(&pair).unwrap();
        assert_eq!(dec.components.len(), 1);
        assert_eq!(exact(&dec.components[0].theta), &QMatrix::diag(&ints(&[5])));
    }

    #[test]
    fn negative_definite_pair() {
        let phi = QMatrix::from_ints(&[[-2, 1], [1, -3]]);
        let psi = QMatrix::from_ints(&[[1, 0], [0, 4]]);
        let pair = QuadPair::new(phi, psi).unwrap();
        assert_eq!(pair.definiteness, Definiteness::Negative);
        let dec = theta_components(&pair).unwrap();
        assert!(verify_theorem(&dec, &pair).passed);
    }

    #[test]
    fn indefinite_rejected() {
        let phi = QMatrix::from_ints(&[[1, 0], [0, -1]]);
        let psi = QMatrix::from_ints(&[[0, 1], [1, 0]]);
        assert!(matches!(QuadPair::new(phi, psi), Err(Error::NotDefinite(_))));
        let singular = QMatrix::from_ints(&[[1, 1], [1, 1]]);
        assert!(QuadPair::new(singular, QMatrix::identity(2)).is_err());
    }

    #[test]
    fn irrational_roots_float_path() {
        let pair = QuadPair::new(QMatrix::identity(2), QMatrix::from_ints(&[[2, 1], [1, 1]])).unwrap();
        assert!(matches!(theta_components_with(&pair, PathRequest::Exact), Err(Error::PathUnavailable(_))));
        let dec = theta_components(&pair).unwrap();
        assert_eq!(dec.path(), ArithPath::Floating);
        let rep = verify_theorem(&dec, &pair);
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn perturbation_converges_to_double_root() {
        let psi = QMatrix::diag(&ints(&[2, 2, 5]));
        let eps = frac(1, 1_000_000);
        let psi_eps = QMatrix::diag(&[int(2), int(2) + eps, int(5)]);
        let double = QuadPair::new(QMatrix::identity(3), psi).unwrap();
        let split = QuadPair::new(QMatrix::identity(3), psi_eps).unwrap();
        let d = theta_components_with(&double, PathRequest::Float).unwrap();
        let s = theta_components_with(&split, PathRequest::Float).unwrap();
        assert_eq!(d.components.len(), 2);
        assert_eq!(s.components.len(), 3);
        let merged = s.components[0].theta.to_f64() + s.components[1].theta.to_f64();
        assert!(max_abs(&(merged - d.components[0].theta.to_f64())) <= 1e-4);
        assert!(verify_theorem(&s, &split).passed);
    }

    /// Phi = L^T L + I and Psi = sum d_i (Phi w_i)(Phi w_i)^T / (w_i^T Phi w_i)
    /// over a Phi-orthogonal rational basis w, so the roots are exactly d.
    fn random_pair() -> impl Strategy<Value = (QMatrix, QMatrix)> {
        (
            proptest::collection::vec(-2i64..3, 9),
            proptest::collection::vec(-3i64..4, 9),
            proptest::collection::vec(-3i64..4, 3),
            0usize..3,
        )
            .prop_filter_map("dependent basis", |(l, w, d, copy)| {
                let l = QMatrix::from_fn(3, 3, |i, j| int(l[i * 3 + j]));
                let phi = &(&l.transpose() * &l) + &QMatrix::identity(3);
                let raw = QMatrix::from_fn(3, 3, |i, j| int(w[i * 3 + j]));
                if raw.det().unwrap().is_zero() {
                    return None;
                }
                let mut basis: Vec<Vec<Rat>> = Vec::new();
                for i in 0..3 {
                    let mut v = raw.row(i);
                    for u in &basis {
                        let c = phi.bilinear(u, &v) / phi.bilinear(u, u);
                        for (x, y) in v.iter_mut().zip(u) {
                            *x -= &c * y;
                        }
                    }
                    basis.push(v);
                }
                let mut d: Vec<Rat> = d.iter().map(|&x| int(x)).collect();
                d[2] = d[copy].clone();
                let mut psi = QMatrix::zeros(3, 3);
                for (w, di) in basis.iter().zip(&d) {
                    let pw = phi.mul_vec(w);
                    let k = di / phi.bilinear(w, w);
                    psi = &psi + &QMatrix::from_fn(3, 3, |i, j| &k * &pw[i] * &pw[j]);
                }
                Some((phi, psi))
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn partial_fractions_complete((phi, psi) in random_pair()) {
            let pair = QuadPair::new(phi.clone(), psi.clone()).unwrap();
            let dec = theta_components(&pair).unwrap();
            let rep = verify_theorem(&dec, &pair);
            prop_assert!(rep.passed, "{:?}", rep);
            if dec.path() == ArithPath::Exact {
                let n = pair.size();
                let mut sum_r = QMatrix::zeros(n, n);
                let mut sum_sr = QMatrix::zeros(n, n);
                for c in &dec.components {
                    let r = exact(&c.residue);
                    let s = c.root.value().unwrap();
                    sum_r = &sum_r + r;
                    sum_sr = &sum_sr + &r.scale(s);
                    prop_assert!((&pair.phi.scale(s) - &pair.psi).mul_vec(&r.col(0)).iter().all(Zero::is_zero));
                }
                let inv = phi.inverse().unwrap();
                prop_assert_eq!(sum_r, inv.clone());
                prop_assert_eq!(sum_sr, &(&inv * &psi) * &inv);
            }
        }
    }
}
