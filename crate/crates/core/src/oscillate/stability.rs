//! Two stability verdicts for `A y'' + B y = 0`: the classical trichotomy on
//! the roots `rho^2 = -K`, and the rule based on symmetry and definiteness.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::model::MechModel;
use crate::exactnum::rat::Rat;
use crate::exactnum::sturm::{pow10_neg, refine_root, sturm_isolate, RealRoot};
use crate::invariants::inertia;
use crate::spectral::is_definite;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HistoricalVerdict {
    Stable,
    Unstable,
    Conditional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorrectedVerdict {
    Stable,
    Unstable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCensus {
    /// Degree of `det(K A - B)` in `K`.
    pub degree: usize,
    /// Real roots `K > 0`, i.e. `rho^2 < 0`, counted with multiplicity.
    pub negative_rho2: usize,
    pub zero_rho2: usize,
    pub positive_rho2: usize,
    /// Roots off the real axis, counted with multiplicity.
    pub complex: usize,
    pub repeated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub historical: HistoricalVerdict,
    pub historical_rule: String,
    pub corrected: CorrectedVerdict,
    pub corrected_rule: String,
    pub agreement: bool,
    /// Zero-frequency modes, each a drift `E + V t`.
    pub rigid_modes: usize,
    pub census: RootCensus,
}

fn sign_of_root(r: &RealRoot) -> std::cmp::Ordering {
    if let Some(v) = r.value() {
        return v.cmp(&Rat::zero());
    }
    // 0 is not a root here, so refining eventually separates it
    let mut bits = 20u32;
    loop {
        let rr = refine_root(r, &pow10_neg(bits));
        if rr.lower().is_positive() || (rr.lower().is_zero() && !rr.contains(&Rat::zero())) {
            return std::cmp::Ordering::Greater;
        }
        if rr.upper().is_negative() || (rr.upper().is_zero() && !rr.contains(&Rat::zero())) {
            return std::cmp::Ordering::Less;
        }
        bits += 20;
    }
}

pub fn root_census(model: &MechModel) -> RootCensus {
    let det = model.pencil().char_poly().unwrap_or_default();
    let degree = det.degree().unwrap_or(0);
    let mut census = RootCensus { degree, negative_rho2: 0, zero_rho2: 0, positive_rho2: 0, complex: 0, repeated: false };
    if det.is_zero() {
        return census;
    }
    let roots = sturm_isolate(&det, &pow10_neg(6)).unwrap_or_default();
    let mut real = 0;
    for r in &roots {
        let m = r.multiplicity as usize;
        real += m;
        census.repeated |= m > 1;
        match sign_of_root(r) {
            std::cmp::Ordering::Greater => census.negative_rho2 += m,
            std::cmp::Ordering::Equal => census.zero_rho2 += m,
            std::cmp::Ordering::Less => census.positive_rho2 += m,
        }
    }
    census.complex = degree - real;
    if census.complex > 0 {
        let sf = crate::exactnum::gcd::squarefree_decompose(&det).unwrap_or_default();
        census.repeated |= sf.iter().any(|(_, e)| *e > 1);
    }
    census
}

fn historical(census: &RootCensus, n: usize) -> (HistoricalVerdict, String) {
    if census.degree == n && census.negative_rho2 == n && !census.repeated {
        (
            HistoricalVerdict::Stable,
            "case 1: all roots rho^2 real, negative and unequal; every coordinate is a sum of sines".into(),
        )
    } else if census.negative_rho2 == 0 {
        (
            HistoricalVerdict::Unstable,
            "case 2: no root rho^2 is real and negative; real exponentials grow without bound".into(),
        )
    } else {
        let why = if census.repeated { "equal roots let t leave the sine" } else { "mixed roots" };
        (
            HistoricalVerdict::Conditional,
            format!("case 3: {why}; motion stays bounded only for special initial conditions"),
        )
    }
}

/// Classifies `model` under both rules.
pub fn classify_stability(model: &MechModel) -> StabilityVerdict {
    let n = model.size();
    let census = root_census(model);
    let (historical, historical_rule) = historical(&census, n);
    let a_pd = is_definite(&model.a) && model.a.get(0, 0).is_positive();
    let b_inertia = if model.b.is_symmetric() { inertia(&model.b).ok() } else { None };
    let (corrected, corrected_rule, rigid_modes) = if !model.is_symmetric() {
        (CorrectedVerdict::Unstable, "pencil is not symmetric; the definite-pair argument does not apply".to_string(), 0)
    } else if !a_pd {
        (CorrectedVerdict::Unstable, "kinetic form A is not positive definite".to_string(), 0)
    } else {
        let b = b_inertia.expect("symmetric B");
        if b.negatives > 0 {
            (
                CorrectedVerdict::Unstable,
                format!("potential form B has {} negative squares; some K < 0", b.negatives),
                0,
            )
        } else {
            (
                CorrectedVerdict::Stable,
                "A positive definite and B positive semidefinite; all K real and non-negative whatever their multiplicity"
                    .to_string(),
                b.zeros,
            )
        }
    };
    let agreement = matches!(
        (historical, corrected),
        (HistoricalVerdict::Stable, CorrectedVerdict::Stable) | (HistoricalVerdict::Unstable, CorrectedVerdict::Unstable)
    );
    StabilityVerdict { historical, historical_rule, corrected, corrected_rule, agreement, rigid_modes, census }
}
