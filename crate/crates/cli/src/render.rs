use secular::exactnum::sturm::{RealRoot, RealRootDoc};
use secular::exactnum::{format_rat, Rat, UPoly};
use secular::matpoly::QMatrix;
use secular::spectral::Eigvec;
use secular::ArithPath;
use serde_json::{json, Value};

pub fn rat(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

pub fn rats(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

/// Finite floats as numbers, anything else as a string.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(x.to_string())
    }
}

pub fn floats(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| float(*x)).collect())
}

pub fn poly(p: &UPoly) -> Value {
    json!({ "coefficients": rats(p.coeffs()), "display": p.display_with("x") })
}

pub fn matrix(m: &QMatrix) -> Value {
    serde_json::to_value(secular::io::MatrixDoc::from_matrix(m)).expect("serializable")
}

pub fn float_matrix(m: &nalgebra::DMatrix<f64>) -> Value {
    json!({
        "rows": m.nrows(),
        "cols": m.ncols(),
        "entries": Value::Array((0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| (i, j))).map(|(i, j)| float(m[(i, j)])).collect()),
    })
}

pub fn root(r: &RealRoot) -> Value {
    serde_json::to_value(RealRootDoc::from(r)).expect("serializable")
}

pub fn root_path(r: &RealRoot) -> ArithPath {
    if r.is_exact() {
        ArithPath::Exact
    } else {
        ArithPath::Floating
    }
}

pub fn path(p: ArithPath) -> Value {
    serde_json::to_value(p).expect("serializable")
}

pub fn eigvec(e: &Eigvec) -> Value {
    match e {
        Eigvec::Exact { entries, norm_sq } => json!({ "path": "exact", "entries": rats(entries), "norm_sq": rat(norm_sq) }),
        Eigvec::Float(v) => json!({ "path": "floating", "entries": floats(v) }),
    }
}

pub fn combine(paths: impl IntoIterator<Item = ArithPath>) -> ArithPath {
    if paths.into_iter().all(|p| p == ArithPath::Exact) {
        ArithPath::Exact
    } else {
        ArithPath::Floating
    }
}
