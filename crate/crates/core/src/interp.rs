//! Interpolation of multiple exponents: convex-hull certificates, the two
//! anchor conditions under which the Khinchine product bounds `C_{m,q}`, and the
//! sharp 3-linear families.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::constants::{
    bh_upper_real, lower_bound_pos1, lower_bound_pos2, mixed_littlewood_upper, BoundKind,
    BoundReport, Field,
};
use crate::error::{Error, Result};
use crate::lp::feasible_point;
use crate::mixednorm::{AdmissibilityMode, ExponentVector};
use crate::rational::{
    format_rational, format_rational_list, int, rat, serde_rational_vec, Rational,
};

/// Convex weights `θ_k` placing a point in the hull of a vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullCertificate {
    #[serde(with = "serde_rational_vec")]
    pub weights: Vec<Rational>,
}

impl HullCertificate {
    /// Exact substitution check: nonnegative weights summing to one that
    /// reproduce `point` coordinate by coordinate.
    pub fn verify(&self, point: &[Rational], vertices: &[Vec<Rational>]) -> bool {
        if self.weights.len() != vertices.len() || self.weights.iter().any(Signed::is_negative) {
            return false;
        }
        if self.weights.iter().sum::<Rational>() != Rational::one() {
            return false;
        }
        if vertices.iter().any(|v| v.len() != point.len()) {
            return false;
        }
        (0..point.len()).all(|i| {
            let s: Rational = self
                .weights
                .iter()
                .zip(vertices)
                .map(|(w, v)| w * &v[i])
                .sum();
            s == point[i]
        })
    }
}

/// Exact hull membership. `None` when `point` lies outside the hull of `vertices`.
pub fn in_convex_hull(
    point: &[Rational],
    vertices: &[Vec<Rational>],
) -> Result<Option<HullCertificate>> {
    if let Some(v) = vertices.iter().find(|v| v.len() != point.len()) {
        return Err(Error::DimensionMismatch(format!(
            "vertex of dimension {} for point of dimension {}",
            v.len(),
            point.len()
        )));
    }
    if vertices.is_empty() {
        return Ok(None);
    }
    // Rows: one per coordinate, then Σθ = 1.
    let mut a: Vec<Vec<Rational>> = (0..point.len())
        .map(|i| vertices.iter().map(|v| v[i].clone()).collect())
        .collect();
    a.push(vec![Rational::one(); vertices.len()]);
    let mut b = point.to_vec();
    b.push(Rational::one());
    let Some(weights) = feasible_point(&a, &b) else {
        return Ok(None);
    };
    let cert = HullCertificate { weights };
    if !cert.verify(point, vertices) {
        return Err(Error::Internal(
            "hull certificate failed re-verification".into(),
        ));
    }
    Ok(Some(cert))
}

fn threshold_single(m: usize) -> Rational {
    rat(2 * m as i64 - 2, m as i64)
}

/// `(2m² − 4m + 2) / (m² − m − 1)`, the strict upper limit on `max q_i` for the
/// bounded-maximum anchor condition.
pub fn max_exponent_threshold(m: usize) -> Rational {
    let m = m as i64;
    rat(2 * m * m - 4 * m + 2, m * m - m - 1)
}

fn admissible_for(m: usize, q: &ExponentVector) -> bool {
    m >= 2 && q.len() == m && q.admissible(AdmissibilityMode::Equality)
}

/// Some `q_i ≥ (2m−2)/m` while all the other exponents coincide.
/// False for inadmissible `q`.
pub fn single_large_exponent_applies(m: usize, q: &ExponentVector) -> bool {
    if !admissible_for(m, q) {
        return false;
    }
    let t = threshold_single(m);
    let qs = q.as_slice();
    (0..m).any(|i| {
        if qs[i] < t {
            return false;
        }
        let mut rest = qs
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, x)| x);
        match rest.next() {
            Some(first) => rest.all(|x| x == first),
            None => true,
        }
    })
}

/// `max q_i < (2m² − 4m + 2)/(m² − m − 1)`. False for inadmissible `q`.
pub fn bounded_max_exponent_applies(m: usize, q: &ExponentVector) -> bool {
    admissible_for(m, q) && *q.max() < max_exponent_threshold(m)
}

/// An upper bound together with the hull certificate that established it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifiedUpper {
    pub bound: BoundReport,
    pub certificate: HullCertificate,
}

/// The Khinchine product `bh_upper_real(m)` bounds `C_{m,q}` whenever every
/// anchor satisfies one of the two anchor conditions and `1/q` lies in the hull
/// of the anchors' reciprocals. `None` when this route does not apply.
pub fn interpolated_upper(
    m: usize,
    q: &ExponentVector,
    anchors: &[ExponentVector],
) -> Result<Option<CertifiedUpper>> {
    if q.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} exponents for m = {m}",
            q.len()
        )));
    }
    if let Some(a) = anchors.iter().find(|a| a.len() != m) {
        return Err(Error::DimensionMismatch(format!(
            "anchor {a} has {} exponents for m = {m}",
            a.len()
        )));
    }
    let usable = anchors
        .iter()
        .all(|a| single_large_exponent_applies(m, a) || bounded_max_exponent_applies(m, a));
    if anchors.is_empty() || !usable {
        return Ok(None);
    }
    let vertices: Vec<Vec<Rational>> = anchors.iter().map(ExponentVector::reciprocals).collect();
    let Some(certificate) = in_convex_hull(&q.reciprocals(), &vertices)? else {
        return Ok(None);
    };
    let base = bh_upper_real(m)?;
    let anchor_list: Vec<String> = anchors.iter().map(|a| format!("({a})")).collect();
    let provenance = format!(
        "khinchine product m={m} at q=({q}) interpolated from anchors {} with weights ({})",
        anchor_list.join(" "),
        format_rational_list(&certificate.weights)
    );
    let bound = BoundReport { provenance, ..base };
    Ok(Some(CertifiedUpper { bound, certificate }))
}

/// Coordinate-wise harmonic combination `1/q_i = Σ_k θ_k / q_i(k)`.
pub fn interpolate_exponents(
    anchors: &[ExponentVector],
    weights: &[Rational],
) -> Result<ExponentVector> {
    if anchors.len() != weights.len() || anchors.is_empty() {
        return Err(Error::MalformedWeights(format!(
            "{} weights for {} anchors",
            weights.len(),
            anchors.len()
        )));
    }
    if weights.iter().any(Signed::is_negative) {
        return Err(Error::MalformedWeights("negative weight".into()));
    }
    let total: Rational = weights.iter().sum();
    if total != Rational::one() {
        return Err(Error::MalformedWeights(format!(
            "weights sum to {}",
            format_rational(&total)
        )));
    }
    let m = anchors[0].len();
    if anchors.iter().any(|a| a.len() != m) {
        return Err(Error::DimensionMismatch(
            "anchors of different lengths".into(),
        ));
    }
    let recips: Vec<Rational> = (1..=m)
        .map(|i| anchors.iter().zip(weights).map(|(a, w)| w / a.get(i)).sum())
        .collect();
    ExponentVector::from_reciprocals(&recips)
}

/// Which slot carries the `θ`-controlled exponent `4/(θ+3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Pos1,
    Pos2,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Pos1 => "pos1",
            Variant::Pos2 => "pos2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pos1" | "1" => Ok(Variant::Pos1),
            "pos2" | "2" => Ok(Variant::Pos2),
            other => Err(Error::InvalidForm(format!("unknown variant {other:?}"))),
        }
    }

    fn heavy_slot(self) -> usize {
        match self {
            Variant::Pos1 => 1,
            Variant::Pos2 => 2,
        }
    }
}

/// A point `(τ, θ) ∈ [0, 1]²` of one of the two 3-linear families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrilinearParams {
    tau: Rational,
    theta: Rational,
    variant: Variant,
}

impl TrilinearParams {
    pub fn new(tau: Rational, theta: Rational, variant: Variant) -> Result<Self> {
        for (name, v) in [("tau", &tau), ("theta", &theta)] {
            if v.is_negative() || *v > Rational::one() {
                return Err(Error::ExponentOutOfRange(format!(
                    "{name} = {} not in [0, 1]",
                    format_rational(v)
                )));
            }
        }
        Ok(TrilinearParams {
            tau,
            theta,
            variant,
        })
    }

    pub fn tau(&self) -> &Rational {
        &self.tau
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }
}

/// `(4/(θ+3), 4/(2+τ−θτ), 4/(3+θτ−θ−τ))` for `pos1`; `pos2` swaps the first two slots.
pub fn trilinear_family_q(p: &TrilinearParams) -> ExponentVector {
    let (t, th) = (&p.tau, &p.theta);
    let four = int(4);
    let a = &four / (th + int(3));
    let b = &four / (int(2) + t - th * t);
    let c = &four / (int(3) + th * t - th - t);
    let q = match p.variant {
        Variant::Pos1 => vec![a, b, c],
        Variant::Pos2 => vec![b, a, c],
    };
    let q = ExponentVector::new(q).expect("family exponents lie in [1, 2]");
    assert!(
        q.admissible(AdmissibilityMode::Equality),
        "family point must be admissible"
    );
    q
}

/// Both legs of the sharpness argument at one family point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrilinearReport {
    pub q: ExponentVector,
    pub lower: BoundReport,
    pub upper: Option<BoundReport>,
    pub sharp: bool,
}

fn upper_anchor(variant: Variant) -> ExponentVector {
    ExponentVector::with_slot(3, variant.heavy_slot(), int(1)).expect("valid anchor")
}

fn base_anchors(variant: Variant) -> [ExponentVector; 2] {
    let (f, t) = (rat(4, 3), int(2));
    let first = match variant {
        Variant::Pos1 => vec![f.clone(), t.clone(), f.clone()],
        Variant::Pos2 => vec![t.clone(), f.clone(), f.clone()],
    };
    [
        ExponentVector::new(first).expect("valid anchor"),
        ExponentVector::new(vec![f.clone(), f, t]).expect("valid anchor"),
    ]
}

/// The `θ = 0` member of the family, its certified upper bound, and the bound
/// obtained by interpolating it with `C = 2^{(m-1)/2}` at the `(1,2,2)` or
/// `(2,1,2)` anchor.
fn upper_leg(p: &TrilinearParams, q: &ExponentVector) -> Result<Option<BoundReport>> {
    let base_params = TrilinearParams::new(p.tau.clone(), Rational::zero(), p.variant)?;
    let base_q = trilinear_family_q(&base_params);
    let Some(base) = interpolated_upper(3, &base_q, &base_anchors(p.variant))? else {
        return Ok(None);
    };
    let top = upper_anchor(p.variant);
    let top_bound = mixed_littlewood_upper(3, Field::Real)?;
    let weights = [p.theta.clone(), Rational::one() - &p.theta];
    if interpolate_exponents(&[top.clone(), base_q.clone()], &weights)? != *q {
        return Ok(None);
    }
    let (Some(top_log2), Some(base_log2)) = (&top_bound.log2, &base.bound.log2) else {
        return Ok(None);
    };
    let log2 = &weights[0] * top_log2 + &weights[1] * base_log2;
    let provenance = format!(
        "interpolation with weights ({}) of C=2^({}) at ({top}) and C=2^({}) at ({base_q}) [{}]",
        format_rational_list(&weights),
        format_rational(top_log2),
        format_rational(base_log2),
        base.bound.provenance
    );
    Ok(Some(BoundReport::dyadic(
        BoundKind::Upper,
        log2,
        provenance,
    )))
}

/// Lower and upper legs at a family point.
pub fn trilinear_report(p: &TrilinearParams) -> Result<TrilinearReport> {
    let q = trilinear_family_q(p);
    let lower = match p.variant {
        Variant::Pos1 => lower_bound_pos1(3, &q)?,
        Variant::Pos2 => lower_bound_pos2(3, &q)?,
    };
    let expected = (&p.theta + int(3)) / int(4);
    if lower.log2.as_ref() != Some(&expected) {
        return Err(Error::Internal(format!(
            "lower-bound exponent {:?} differs from (θ+3)/4 = {} at τ={}, θ={}",
            lower.log2.as_ref().map(format_rational),
            format_rational(&expected),
            format_rational(&p.tau),
            format_rational(&p.theta)
        )));
    }
    let upper = upper_leg(p, &q)?;
    let sharp = upper.as_ref().and_then(|u| u.log2.as_ref()) == Some(&expected);
    Ok(TrilinearReport {
        q,
        lower,
        upper,
        sharp,
    })
}

/// `C_{3,q}^ℝ = 2^{(θ+3)/4}` when both legs agree; otherwise the lower bound.
pub fn trilinear_sharp_constant(p: &TrilinearParams) -> Result<BoundReport> {
    let report = trilinear_report(p)?;
    if !report.sharp {
        return Ok(report.lower);
    }
    let upper = report.upper.expect("sharp implies upper");
    let lower_fn = match p.variant {
        Variant::Pos1 => "lower_bound_pos1",
        Variant::Pos2 => "lower_bound_pos2",
    };
    let provenance = format!(
        "lower = {lower_fn} at q=({}); upper = {}",
        report.q, upper.provenance
    );
    Ok(BoundReport::dyadic(
        BoundKind::Sharp,
        upper.log2.expect("dyadic upper"),
        provenance,
    ))
}

/// `{0, 1/(g−1), …, 1}`.
pub fn unit_grid(g: usize) -> Result<Vec<Rational>> {
    if g < 2 {
        return Err(Error::InvalidForm(format!("grid size {g} < 2")));
    }
    let d = g as i64 - 1;
    Ok((0..=d).map(|k| rat(k, d)).collect())
}

/// One row of the sharpness sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub variant: Variant,
    pub tau: Rational,
    pub theta: Rational,
    pub q: ExponentVector,
    pub lower_log2: Rational,
    pub upper_log2: Option<Rational>,
    pub sharp: bool,
}

/// All `(τ, θ)` on a `g × g` grid for each requested variant, `τ` outer, `θ` inner.
pub fn sweep(g: usize, variants: &[Variant]) -> Result<Vec<SweepRow>> {
    let grid = unit_grid(g)?;
    let mut rows = Vec::with_capacity(variants.len() * g * g);
    for &variant in variants {
        for tau in &grid {
            for theta in &grid {
                let p = TrilinearParams::new(tau.clone(), theta.clone(), variant)?;
                let r = trilinear_report(&p)?;
                rows.push(SweepRow {
                    variant,
                    tau: tau.clone(),
                    theta: theta.clone(),
                    q: r.q,
                    lower_log2: r.lower.log2.expect("dyadic lower bound"),
                    upper_log2: r.upper.and_then(|u| u.log2),
                    sharp: r.sharp,
                });
            }
        }
    }
    Ok(rows)
}
