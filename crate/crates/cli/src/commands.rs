use num_traits::{One, Zero};
use secular::exactnum::rat::{from_f64, Rat};
use secular::exactnum::parse_rat;
use secular::exactnum::sturm::pow10_neg;
use secular::invariants::{
    darboux_signature_steps, elementary_divisors, inertia, invariant_factors, is_diagonalizable_matrix,
    minor_gcd_chain, DiagonalizabilityReport,
};
use secular::io::{self, Scenario, ScenarioDoc};
use secular::matpoly::{Pencil, QMatrix};
use secular::oscillate::{
    classify_stability, expm::spectral_projectors, expm_projectors, finite_difference_residual,
    sample_trajectory, scalar_residue_solve, solve_jordan, solve_modal, JordanSolution, MechModel,
    ModalSolution, ResidueSolution, TGrid, Trajectory,
};
use secular::spectral::{adjugate_eigenvector, cauchy_orthogonality, char_roots_with_width, nullspace_at_root, SpectralDecomp};
use secular::weierstrass::{remarkable_circumstance_check, theta_components_with, verify_theorem, QuadPair};
use secular::{ArithPath, Error, PathRequest, Result};
use serde_json::{json, Value};

use crate::render;

pub struct Options {
    pub tolerance: f64,
    pub width: Rat,
    pub path: PathRequest,
    pub t_max: Option<f64>,
    pub t_steps: Option<usize>,
    pub time: f64,
}

pub enum Output {
    Json(Value),
    Csv(String),
}

fn document(command: &str, algorithm: &str, source: &str, path: ArithPath, result: Value) -> Output {
    Output::Json(json!({
        "command": command,
        "provenance": { "algorithm": algorithm, "source": source },
        "path": render::path(path),
        "result": result,
    }))
}

/// Parses `p/q`, an integer, or `1e-N`.
pub fn parse_width(s: &str) -> Result<Rat> {
    let t = s.trim();
    let w = if let Some(d) = t.strip_prefix("1e-") {
        let digits: u32 = d.parse().map_err(|_| Error::Parse(format!("bad width {s:?}")))?;
        pow10_neg(digits)
    } else {
        parse_rat(t)?
    };
    if w <= Rat::zero() {
        return Err(Error::Parse("width must be positive".into()));
    }
    Ok(w)
}

fn require_exact(opts: &Options, path: ArithPath, what: &str) -> Result<()> {
    if opts.path == PathRequest::Exact && path != ArithPath::Exact {
        return Err(Error::PathUnavailable(format!("{what} needs floating arithmetic")));
    }
    Ok(())
}

pub fn charpoly(text: &str) -> Result<Output> {
    let p = io::parse_pencil_or_matrix(text)?;
    let f = p.char_poly()?;
    Ok(document(
        "charpoly",
        "fraction-free determinant by evaluation and interpolation",
        "cauchy-1829",
        ArithPath::Exact,
        json!({ "orientation": p.orientation, "polynomial": render::poly(&f) }),
    ))
}

pub fn roots(text: &str, opts: &Options) -> Result<Output> {
    let p = io::parse_pencil_or_matrix(text)?;
    let roots = char_roots_with_width(&p, &opts.width)?;
    let path = render::combine(roots.iter().map(render::root_path));
    require_exact(opts, path, "an irrational root")?;
    let det = p.char_poly()?;
    let real: u32 = roots.iter().map(|r| r.multiplicity).sum();
    Ok(document(
        "roots",
        "sturm sequence isolation with exact bisection",
        "sturm-1829",
        path,
        json!({
            "polynomial": render::poly(&det),
            "roots": roots.iter().map(render::root).collect::<Vec<_>>(),
            "real_count": real,
            "non_real_count": det.degree().unwrap_or(0) as u32 - real,
        }),
    ))
}

fn eigvecs_for(p: &Pencil, root: &secular::exactnum::RealRoot) -> Result<(Vec<secular::spectral::Eigvec>, &'static str)> {
    match adjugate_eigenvector(p, root) {
        Ok(v) if root.multiplicity == 1 => Ok((vec![v], "adjugate-column")),
        Ok(_) | Err(Error::HigherGeometricMultiplicity) => Ok((nullspace_at_root(p, root)?, "nullspace")),
        Err(e) => Err(e),
    }
}

pub fn eigvec(text: &str, opts: &Options) -> Result<Output> {
    let p = io::parse_pencil_or_matrix(text)?;
    let roots = char_roots_with_width(&p, &opts.width)?;
    let mut entries = Vec::new();
    let mut paths = Vec::new();
    let mut vectors = Vec::new();
    for r in &roots {
        let (vs, method) = eigvecs_for(&p, r)?;
        paths.extend(vs.iter().map(|v| if v.is_exact() { ArithPath::Exact } else { ArithPath::Floating }));
        entries.push(json!({
            "root": render::root(r),
            "method": method,
            "geometric_multiplicity": vs.len(),
            "vectors": vs.iter().map(render::eigvec).collect::<Vec<_>>(),
        }));
        vectors.push(vs);
    }
    let path = render::combine(paths);
    require_exact(opts, path, "an irrational root")?;
    let mut result = json!({ "orientation": p.orientation, "eigenpairs": entries });
    if p.is_symmetric() {
        let dec = SpectralDecomp { roots: roots.clone(), vectors, orthonormal: false };
        let rep = cauchy_orthogonality(&dec, p.metric());
        result["orthogonality"] = json!({
            "pairs_checked": rep.pairs_checked,
            "exact": rep.exact,
            "max_violation": render::float(rep.max_violation),
            "passed": rep.passed,
        });
    }
    Ok(document("eigvec", "adjugate column of the characteristic matrix at each root", "cauchy-1829", path, result))
}

pub fn invariant_factors_cmd(text: &str) -> Result<Output> {
    let p = io::parse_pencil_or_matrix(text)?;
    let chain = minor_gcd_chain(&p.char_matrix())?;
    let inv = invariant_factors(&chain)?;
    Ok(document(
        "invariant-factors",
        "gcd chain of k x k minors",
        "weierstrass-1868",
        ArithPath::Exact,
        json!({
            "minor_gcds": chain.deltas.iter().map(render::poly).collect::<Vec<_>>(),
            "invariant_factors": inv.factors.iter().map(render::poly).collect::<Vec<_>>(),
        }),
    ))
}

pub fn elementary_divisors_cmd(text: &str) -> Result<Output> {
    let p = io::parse_pencil_or_matrix(text)?;
    let inv = invariant_factors(&minor_gcd_chain(&p.char_matrix())?)?;
    let ed = elementary_divisors(&inv)?;
    Ok(document(
        "elementary-divisors",
        "irreducible factorization of the invariant factors",
        "weierstrass-1868",
        ArithPath::Exact,
        json!({
            "elementary_divisors": ed
                .divisors
                .iter()
                .map(|(f, e)| json!({ "factor": render::poly(f), "exponent": e }))
                .collect::<Vec<_>>(),
        }),
    ))
}

/// The operator whose similarity class the pencil describes.
fn pencil_operator(p: &Pencil) -> Result<QMatrix> {
    let metric = p.metric();
    if *metric == QMatrix::identity(p.size()) {
        return Ok(p.operator().clone());
    }
    let inv = metric
        .inverse()
        .map_err(|_| Error::Precondition("metric matrix is singular; no equivalent operator".into()))?;
    Ok(&inv * p.operator())
}

fn diag_report(r: &DiagonalizabilityReport) -> Value {
    json!({
        "diagonalizable": r.diagonalizable,
        "elementary_divisors": r
            .elementary_divisors
            .divisors
            .iter()
            .map(|(f, e)| json!({ "factor": render::poly(f), "exponent": e }))
            .collect::<Vec<_>>(),
        "witnesses": r
            .witnesses
            .iter()
            .map(|w| json!({
                "factor": render::poly(&w.factor),
                "multiplicity": w.multiplicity,
                "annihilates_minors": w.annihilates_minors,
            }))
            .collect::<Vec<_>>(),
    })
}

pub fn diagonalizable(text: &str) -> Result<Output> {
    let p = io::parse_pencil_or_matrix(text)?;
    let r = is_diagonalizable_matrix(&pencil_operator(&p)?)?;
    Ok(document("diagonalizable", "elementary divisors all simple", "weierstrass-1868", ArithPath::Exact, diag_report(&r)))
}

pub fn inertia_cmd(text: &str) -> Result<Output> {
    let m = io::parse_matrix(text)?;
    let r = inertia(&m)?;
    Ok(document(
        "inertia",
        "sign permanences of leading principal minors",
        "darboux-1874",
        ArithPath::Exact,
        json!({
            "positives": r.positives,
            "negatives": r.negatives,
            "zeros": r.zeros,
            "minor_sequence": render::rats(&r.minor_sequence),
            "method": r.method,
        }),
    ))
}

pub fn darboux_steps(text: &str) -> Result<Output> {
    let m = io::parse_matrix(text)?;
    let steps = darboux_signature_steps(&m)?;
    let path = render::combine(steps.iter().map(|s| render::root_path(&s.root)));
    Ok(document(
        "darboux-steps",
        "signature jumps of A - sI across its roots",
        "darboux-1874",
        path,
        json!({
            "steps": steps.iter().map(|s| json!({ "root": render::root(&s.root), "jump": s.jump })).collect::<Vec<_>>(),
        }),
    ))
}

pub fn weierstrass_reduce(text: &str, opts: &Options) -> Result<Output> {
    let (phi, psi) = io::parse_pair(text)?;
    let pair = QuadPair::new(phi, psi)?;
    let circ = remarkable_circumstance_check(&pair)?;
    let dec = theta_components_with(&pair, opts.path)?;
    let report = verify_theorem(&dec, &pair);
    let components: Vec<Value> = dec
        .components
        .iter()
        .map(|c| {
            let theta = match &c.theta {
                secular::weierstrass::ThetaMatrix::Exact(m) => render::matrix(m),
                secular::weierstrass::ThetaMatrix::Float(m) => render::float_matrix(m),
            };
            json!({
                "root": render::root(&c.root),
                "multiplicity": c.multiplicity,
                "path": render::path(c.theta.path()),
                "theta": theta,
            })
        })
        .collect();
    let passed = report.ranks_ok
        && report.semidefinite_ok
        && report.sum_residual <= opts.tolerance
        && report.weighted_residual <= opts.tolerance
        && report.multiplicity_total as usize == pair.size();
    Ok(document(
        "weierstrass-reduce",
        "residues of adj(s Phi - Psi) / det(s Phi - Psi)",
        "weierstrass-1858",
        dec.path(),
        json!({
            "components": components,
            "remarkable_circumstance": {
                "passed": circ.passed,
                "factors": circ.entries.iter().map(|e| json!({
                    "factor": render::poly(&e.factor),
                    "multiplicity": e.multiplicity,
                    "divisible": e.divisible,
                })).collect::<Vec<_>>(),
            },
            "verification": {
                "sum_residual": render::float(report.sum_residual),
                "weighted_residual": render::float(report.weighted_residual),
                "ranks_ok": report.ranks_ok,
                "semidefinite_ok": report.semidefinite_ok,
                "multiplicity_total": report.multiplicity_total,
                "tolerance": render::float(opts.tolerance),
                "passed": passed,
            },
        }),
    ))
}

pub fn expm(text: &str, opts: &Options) -> Result<Output> {
    let m = io::parse_matrix(text)?;
    let projectors = match (spectral_projectors(&m), opts.path) {
        (Ok(ps), PathRequest::Exact | PathRequest::Auto) => ps,
        (Err(Error::PathUnavailable(_)), PathRequest::Auto) | (_, PathRequest::Float) => return expm_floating(&m, opts),
        (Err(e), _) => return Err(e),
    };
    let e = expm_projectors(&m, opts.time)?;
    Ok(document(
        "expm",
        "spectral projectors from Bezout cofactors",
        "jordan-1871",
        ArithPath::Floating,
        json!({
            "t": render::float(opts.time),
            "projectors": projectors.iter().map(|p| json!({
                "sigma": render::rat(&p.sigma),
                "multiplicity": p.multiplicity,
                "index": p.index,
                "path": "exact",
                "projector": render::matrix(&p.p),
            })).collect::<Vec<_>>(),
            "exp": render::float_matrix(&e),
        }),
    ))
}

/// Columns of `exp(Mt)` as Jordan solutions started from the unit vectors.
fn expm_floating(m: &QMatrix, opts: &Options) -> Result<Output> {
    let n = m.rows();
    let mut e = nalgebra::DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let unit: Vec<Rat> = (0..n).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect();
        let col = solve_jordan(m, &unit)?.eval(opts.time);
        for (i, x) in col.into_iter().enumerate() {
            e[(i, j)] = x;
        }
    }
    Ok(document(
        "expm",
        "generalized eigenvector chains in floating point",
        "jordan-1871",
        ArithPath::Floating,
        json!({ "t": render::float(opts.time), "projectors": Value::Null, "exp": render::float_matrix(&e) }),
    ))
}

/// `x' = [[0, I], [-A^-1 B, 0]] x` for `A y'' + B y = 0`.
fn first_order_of(model: &MechModel) -> Result<QMatrix> {
    let n = model.size();
    let ainv = model.a.inverse()?;
    let k = -&(&ainv * &model.b);
    Ok(QMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i < n && j == i + n {
            Rat::from_integer(1.into())
        } else if i >= n && j < n {
            k.get(i - n, j).clone()
        } else {
            Rat::zero()
        }
    }))
}

fn rational_state(v: &[f64]) -> Result<Vec<Rat>> {
    v.iter()
        .map(|x| from_f64(*x).ok_or_else(|| Error::Parse(format!("non-finite initial value {x}"))))
        .collect()
}

enum Solved {
    Modal(ModalSolution),
    Jordan(JordanSolution, QMatrix),
    Scalar(ResidueSolution),
}

fn solve_scenario(doc: &ScenarioDoc) -> Result<Solved> {
    Ok(match doc.scenario()? {
        Scenario::SecondOrder { model, ic } => match solve_modal(&model, &ic) {
            Ok(sol) => Solved::Modal(sol),
            Err(Error::NotDefinite(_)) | Err(Error::NotSymmetric) => {
                let m = first_order_of(&model)?;
                let mut x0 = rational_state(&ic.positions)?;
                x0.extend(rational_state(&ic.velocities)?);
                Solved::Jordan(solve_jordan(&m, &x0)?, m)
            }
            Err(e) => return Err(e),
        },
        Scenario::FirstOrder { m, x0 } => Solved::Jordan(solve_jordan(&m, &x0)?, m),
        Scenario::Scalar { f, ic } => Solved::Scalar(scalar_residue_solve(&f, &ic)?),
    })
}

fn complex(z: num_complex::Complex64) -> Value {
    json!({ "re": render::float(z.re), "im": render::float(z.im) })
}

pub fn solve(text: &str, opts: &Options) -> Result<Output> {
    let doc = io::parse_scenario(text)?;
    match solve_scenario(&doc)? {
        Solved::Modal(sol) => {
            let (y0, v0) = sol.state(0.0);
            let modes: Vec<Value> = sol
                .modes
                .iter()
                .map(|m| {
                    json!({
                        "k": render::root(&m.k),
                        "omega": render::float(m.omega),
                        "shape": render::floats(&m.shape),
                        "exact_shape": m.exact_shape.as_ref().map(|v| render::rats(v)),
                        "amplitude": render::float(m.amplitude),
                        "phase": render::float(m.phase),
                        "rigid": m.rigid,
                        "drift": render::float(m.drift),
                    })
                })
                .collect();
            Ok(document(
                "solve",
                "normal modes fitted by metric projection",
                "lagrange-1766",
                ArithPath::Floating,
                json!({
                    "kind": "modal",
                    "modes": modes,
                    "rigid_modes": sol.rigid_modes(),
                    "reconstructed_positions": render::floats(&y0),
                    "reconstructed_velocities": render::floats(&v0),
                    "energy": render::float(sol.energy(0.0)),
                }),
            ))
        }
        Solved::Jordan(sol, m) => {
            let times: Vec<f64> = (0..=100).map(|i| i as f64 * 0.01).collect();
            let residual = finite_difference_residual(&sol, &m, &times, 1e-4);
            let chains: Vec<Value> = sol
                .chains
                .iter()
                .map(|c| {
                    let mut v = json!({
                        "sigma": complex(c.sigma),
                        "length": c.length(),
                        "psi_degree": c.psi_degree(),
                        "psi": c.psi.iter().map(|row| row.iter().map(|z| complex(*z)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    });
                    if let (Some(s), Some(ps)) = (&c.exact_sigma, &c.exact_psi) {
                        v["exact_sigma"] = render::rat(s);
                        v["exact_psi"] = Value::Array(ps.iter().map(|r| render::rats(r)).collect());
                    }
                    v
                })
                .collect();
            require_exact(opts, sol.path, "a non-rational eigenvalue")?;
            Ok(document(
                "solve",
                "jordan chains from nested kernels",
                "jordan-1871",
                sol.path,
                json!({
                    "kind": "jordan",
                    "chains": chains,
                    "residual": render::float(residual),
                    "residual_ok": residual <= 1e-6,
                }),
            ))
        }
        Solved::Scalar(sol) => Ok(document(
            "solve",
            "residues of Phi(r) e^{rx} / F(r)",
            "cauchy-1826",
            ArithPath::Floating,
            json!({
                "kind": "scalar",
                "terms": sol.terms.iter().map(|t| json!({
                    "alpha": render::float(t.alpha),
                    "beta": render::float(t.beta),
                    "power": t.power,
                    "cos": render::float(t.cos_coef),
                    "sin": render::float(t.sin_coef),
                })).collect::<Vec<_>>(),
            }),
        )),
    }
}

pub fn classify(text: &str) -> Result<Output> {
    let doc = io::parse_scenario(text)?;
    let model = match doc.scenario()? {
        Scenario::SecondOrder { model, .. } => model,
        _ => return Err(Error::Precondition("classify needs a second-order model scenario".into())),
    };
    let v = classify_stability(&model);
    Ok(document(
        "classify",
        "root trichotomy against symmetry and definiteness",
        "lagrange-1766/weierstrass-1858",
        ArithPath::Exact,
        json!({
            "model": model.kind.name(),
            "historical": { "verdict": v.historical, "rule": v.historical_rule },
            "corrected": { "verdict": v.corrected, "rule": v.corrected_rule },
            "agreement": v.agreement,
            "rigid_modes": v.rigid_modes,
            "roots": {
                "degree": v.census.degree,
                "negative_rho2": v.census.negative_rho2,
                "zero_rho2": v.census.zero_rho2,
                "positive_rho2": v.census.positive_rho2,
                "complex": v.census.complex,
                "repeated": v.census.repeated,
            },
        }),
    ))
}

struct ScalarTrajectory(ResidueSolution);

impl Trajectory for ScalarTrajectory {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, t: f64) -> Vec<f64> {
        vec![self.0.eval(t)]
    }
}

/// First-order solutions of a second-order model report positions only.
struct Positions(JordanSolution, usize);

impl Trajectory for Positions {
    fn dim(&self) -> usize {
        self.1
    }

    fn eval(&self, t: f64) -> Vec<f64> {
        let mut x = self.0.eval(t);
        x.truncate(self.1);
        x
    }
}

pub fn trajectory(text: &str, opts: &Options) -> Result<Output> {
    let doc = io::parse_scenario(text)?;
    let base = doc.grid().transpose()?;
    let t_max = opts.t_max.or(base.map(|g| g.t_max));
    let steps = opts.t_steps.or(base.map(|g| g.steps));
    let (Some(t_max), Some(steps)) = (t_max, steps) else {
        return Err(Error::Precondition("trajectory needs t_grid in the scenario or --t-max and --t-steps".into()));
    };
    let grid = TGrid::new(t_max, steps)?;
    let second_order = match doc.scenario()? {
        Scenario::SecondOrder { model, .. } => Some(model.size()),
        _ => None,
    };
    let table = match solve_scenario(&doc)? {
        Solved::Modal(sol) => sample_trajectory(&sol, &grid),
        Solved::Jordan(sol, _) => match second_order {
            Some(n) => sample_trajectory(&Positions(sol, n), &grid),
            None => sample_trajectory(&sol, &grid),
        },
        Solved::Scalar(sol) => sample_trajectory(&ScalarTrajectory(sol), &grid),
    };
    Ok(Output::Csv(table.to_csv()))
}
