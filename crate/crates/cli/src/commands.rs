use littlewood::constants::{
    bh_lower_real, bh_upper_complex, bh_upper_real, lower_bound_pos1, lower_bound_pos2,
    mixed_littlewood_upper, BoundReport, Field,
};
use littlewood::interp::{
    bounded_max_exponent_applies, in_convex_hull, interpolate_exponents, interpolated_upper,
    single_large_exponent_applies, sweep as sweep_rows, trilinear_sharp_constant, HullCertificate,
    TrilinearParams,
};
use littlewood::mixednorm::{
    mixed_norm as float_norm, mixed_norm_exact, AdmissibilityMode, ExponentVector,
};
use littlewood::opnorm::{
    operator_norm_full_with, operator_norm_with, parse_budget, EnumOptions, DEFAULT_FULL_BITS,
    ENUM_BUDGET_ENV,
};
use littlewood::rational::{
    exact_log2_count, format_rational, format_rational_list, parse_rational, parse_rational_list,
};
use littlewood::Error;
use serde::Serialize;

use crate::render::{self, Format, Output, Table};
use crate::{BoundsArgs, ConstructArgs, InterpolateArgs, MixedNormArgs, OpnormArgs, SweepArgs};

/// A command that could not produce its report.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::config(e.to_string())
    }
}

fn parse_q(s: &str) -> Result<ExponentVector, Failure> {
    ExponentVector::parse(s).map_err(Failure::from)
}

pub fn construct(a: &ConstructArgs, format: Option<Format>) -> Result<Output, Failure> {
    let form = crate::source::family_form(a.form, a.m, a.full)?;
    let body = match format.unwrap_or(Format::Json) {
        Format::Json => form.to_json() + "\n",
        f => {
            let mut header: Vec<String> = (1..=form.arity()).map(|k| format!("j{k}")).collect();
            header.push("coefficient".into());
            let mut t = Table::new(header);
            for (idx, c) in form.entries() {
                let mut row: Vec<String> = idx.iter().map(usize::to_string).collect();
                row.push(c.to_string());
                t.push(row);
            }
            if f == Format::Csv {
                t.csv()
            } else {
                t.text()
            }
        }
    };
    Ok(Output::ok(body))
}

#[derive(Serialize)]
struct MixedNormReport {
    form: String,
    q: String,
    admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    log2: Option<String>,
    value: f64,
    exact: bool,
}

pub fn mixed_norm(a: &MixedNormArgs, format: Option<Format>) -> Result<Output, Failure> {
    let q = parse_q(&a.q)?;
    let form = a.source.load()?;
    if q.len() != form.arity() {
        return Err(Failure::config(format!(
            "{} exponents for a form of arity {}",
            q.len(),
            form.arity()
        )));
    }
    let admissible = q.admissible(AdmissibilityMode::Inequality);
    if a.require_admissible && !admissible {
        return Err(Failure::config(format!(
            "q = ({q}) is not admissible: Σ 1/q_i = {} > {}",
            format_rational(&q.reciprocal_sum()),
            format_rational(&littlewood::rational::rat(q.len() as i64 + 1, 2))
        )));
    }
    let (log2, value, exact) = match mixed_norm_exact(&form, &q) {
        Ok(d) => (Some(format_rational(&d.log2)), d.value(), true),
        Err(Error::NotDyadic(_)) => (None, float_norm(&form, &q)?, false),
        Err(e) => return Err(e.into()),
    };
    let r = MixedNormReport {
        form: a.source.label(),
        q: q.to_string(),
        admissible,
        log2,
        value,
        exact,
    };
    let body = render::render(format.unwrap_or(Format::Json), &r, || {
        let mut t = Table::new(["form", "q", "admissible", "log2", "value", "exact"]);
        t.push(vec![
            r.form.clone(),
            r.q.clone(),
            bit(r.admissible),
            r.log2.clone().unwrap_or_default(),
            float(r.value),
            bit(r.exact),
        ]);
        t
    });
    Ok(Output::ok(body))
}

fn bit(b: bool) -> String {
    if b { "1" } else { "0" }.into()
}

/// Shortest round-trip decimal, identical to the JSON rendering.
fn float(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}

fn signs(w: &[Vec<i8>]) -> String {
    w.iter()
        .map(|v| {
            v.iter()
                .map(|&s| if s < 0 { '-' } else { '+' })
                .collect::<String>()
        })
        .collect::<Vec<_>>()
        .join(";")
}

#[derive(Serialize)]
struct OpnormReport {
    form: String,
    method: &'static str,
    value: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    log2: Option<String>,
    witness: Vec<Vec<i8>>,
}

pub fn opnorm(a: &OpnormArgs, format: Option<Format>) -> Result<Output, Failure> {
    let form = a.source.load()?;
    let (method, result) = if a.brute_force {
        let bits = match std::env::var(ENUM_BUDGET_ENV) {
            Ok(raw) => parse_budget(&raw)?,
            Err(_) => DEFAULT_FULL_BITS,
        };
        ("full", operator_norm_full_with(&form, bits)?)
    } else {
        (
            "prefix",
            operator_norm_with(&form, &EnumOptions::from_env()?)?,
        )
    };
    let log2 = u64::try_from(result.value)
        .ok()
        .and_then(exact_log2_count)
        .map(|k| k.to_string());
    let r = OpnormReport {
        form: a.source.label(),
        method,
        value: result.value,
        log2,
        witness: result.witness,
    };
    let body = render::render(format.unwrap_or(Format::Json), &r, || {
        let mut t = Table::new(["form", "method", "value", "log2", "witness"]);
        t.push(vec![
            r.form.clone(),
            r.method.into(),
            r.value.to_string(),
            r.log2.clone().unwrap_or_default(),
            signs(&r.witness),
        ]);
        t
    });
    Ok(Output::ok(body))
}

#[derive(Serialize)]
pub struct NamedBound {
    pub name: String,
    #[serde(flatten)]
    pub report: BoundReport,
}

fn bound_table(bounds: &[NamedBound]) -> Table {
    let mut t = Table::new(["name", "kind", "log2", "value", "provenance"]);
    for b in bounds {
        t.push(vec![
            b.name.clone(),
            serde_json::to_value(b.report.kind)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            b.report
                .log2
                .as_ref()
                .map(format_rational)
                .unwrap_or_default(),
            float(b.report.value),
            b.report.provenance.clone(),
        ]);
    }
    t
}

pub fn bounds(a: &BoundsArgs, format: Option<Format>) -> Result<Output, Failure> {
    let m = a.m;
    let q = a.q.as_deref().map(parse_q).transpose()?;
    let named = |name: &str, report: BoundReport| NamedBound {
        name: name.into(),
        report,
    };
    let mut out = vec![
        named("bh_lower_real", bh_lower_real(m)?),
        named("bh_upper_real", bh_upper_real(m)?),
        named("bh_upper_complex", bh_upper_complex(m)?),
        named(
            "mixed_littlewood_upper_real",
            mixed_littlewood_upper(m, Field::Real)?,
        ),
        named(
            "mixed_littlewood_upper_complex",
            mixed_littlewood_upper(m, Field::Complex)?,
        ),
    ];
    if let Some(q) = &q {
        out.push(named("lower_bound_pos1", lower_bound_pos1(m, q)?));
        out.push(named("lower_bound_pos2", lower_bound_pos2(m, q)?));
    }
    if let (Some(tau), Some(theta)) = (&a.tau, &a.theta) {
        if m != 3 {
            return Err(Failure::config(
                "--tau/--theta describe 3-linear families; use --m 3",
            ));
        }
        let p = TrilinearParams::new(
            parse_rational(tau)?,
            parse_rational(theta)?,
            a.variant.into(),
        )?;
        out.push(named("trilinear", trilinear_sharp_constant(&p)?));
    }
    let body = render::render(format.unwrap_or(Format::Json), &out, || bound_table(&out));
    Ok(Output::ok(body))
}

#[derive(Serialize)]
struct AnchorReport {
    q: String,
    single_large_exponent: bool,
    bounded_max_exponent: bool,
}

#[derive(Serialize)]
struct CertifyReport {
    q: String,
    anchors: Vec<AnchorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<HullCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    upper: Option<BoundReport>,
}

#[derive(Serialize)]
struct InterpolationReport {
    q: String,
    weights: String,
}

pub fn interpolate(a: &InterpolateArgs, format: Option<Format>) -> Result<Output, Failure> {
    let anchors: Vec<ExponentVector> = a
        .anchors
        .iter()
        .map(|s| parse_q(s))
        .collect::<Result<_, _>>()?;
    let format = format.unwrap_or(Format::Json);
    if let Some(w) = &a.weights {
        let weights = parse_rational_list(w)?;
        let q = interpolate_exponents(&anchors, &weights)?;
        let r = InterpolationReport {
            q: q.to_string(),
            weights: format_rational_list(&weights),
        };
        let body = render::render(format, &r, || {
            let mut t = Table::new(["q", "weights"]);
            t.push(vec![r.q.clone(), r.weights.clone()]);
            t
        });
        return Ok(Output::ok(body));
    }
    let q =
        a.q.as_deref()
            .ok_or_else(|| Failure::config("interpolate needs --q or --weights"))?;
    let q = parse_q(q)?;
    let m = q.len();
    let vertices: Vec<_> = anchors.iter().map(ExponentVector::reciprocals).collect();
    let certificate = in_convex_hull(&q.reciprocals(), &vertices)?;
    let upper = interpolated_upper(m, &q, &anchors)?.map(|c| c.bound);
    let r = CertifyReport {
        q: q.to_string(),
        anchors: anchors
            .iter()
            .map(|x| AnchorReport {
                q: x.to_string(),
                single_large_exponent: single_large_exponent_applies(m, x),
                bounded_max_exponent: bounded_max_exponent_applies(m, x),
            })
            .collect(),
        certificate,
        upper,
    };
    let body = render::render(format, &r, || {
        let mut t = Table::new([
            "anchor",
            "single_large_exponent",
            "bounded_max_exponent",
            "weight",
        ]);
        for (k, x) in r.anchors.iter().enumerate() {
            let weight = r
                .certificate
                .as_ref()
                .map(|c| format_rational(&c.weights[k]))
                .unwrap_or_default();
            t.push(vec![
                x.q.clone(),
                bit(x.single_large_exponent),
                bit(x.bounded_max_exponent),
                weight,
            ]);
        }
        t
    });
    let body = match (&r.upper, format) {
        (Some(u), Format::Text) => {
            body + &format!(
                "upper bound 2^{} = {}\n",
                u.log2.as_ref().map(format_rational).unwrap_or_default(),
                float(u.value)
            )
        }
        _ => body,
    };
    Ok(Output::ok(body))
}

#[derive(Serialize)]
struct SweepRecord {
    variant: &'static str,
    tau: String,
    theta: String,
    q1: String,
    q2: String,
    q3: String,
    lower_log2: String,
    upper_log2: String,
    sharp: u8,
}

pub fn sweep(a: &SweepArgs, format: Option<Format>) -> Result<Output, Failure> {
    let rows = sweep_rows(a.grid, &a.variant.variants())?;
    let records: Vec<SweepRecord> = rows
        .iter()
        .map(|r| {
            let q = r.q.as_slice();
            SweepRecord {
                variant: r.variant.name(),
                tau: format_rational(&r.tau),
                theta: format_rational(&r.theta),
                q1: format_rational(&q[0]),
                q2: format_rational(&q[1]),
                q3: format_rational(&q[2]),
                lower_log2: format_rational(&r.lower_log2),
                upper_log2: r
                    .upper_log2
                    .as_ref()
                    .map(format_rational)
                    .unwrap_or_default(),
                sharp: r.sharp as u8,
            }
        })
        .collect();
    let body = render::render(format.unwrap_or(Format::Csv), &records, || {
        let mut t = Table::new([
            "variant",
            "tau",
            "theta",
            "q1",
            "q2",
            "q3",
            "lower_log2",
            "upper_log2",
            "sharp",
        ]);
        for r in &records {
            t.push(vec![
                r.variant.into(),
                r.tau.clone(),
                r.theta.clone(),
                r.q1.clone(),
                r.q2.clone(),
                r.q3.clone(),
                r.lower_log2.clone(),
                r.upper_log2.clone(),
                r.sharp.to_string(),
            ]);
        }
        t
    });
    Ok(Output::ok(body))
}
