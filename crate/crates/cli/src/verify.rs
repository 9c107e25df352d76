use clap::ValueEnum;
use littlewood::constants::{
    bh_upper_complex, bh_upper_real, gamma, khinchine_a, lower_bound_pos1, lower_bound_pos2, p0,
    MAX_BH_ARITY,
};
use littlewood::forms::{construct_l, construct_t, MultilinearForm};
use littlewood::interp::{
    bounded_max_exponent_applies, in_convex_hull, single_large_exponent_applies, sweep, Variant,
};
use littlewood::mixednorm::{
    equality_grid, mixed_norm_exact, predicted_mixed_norm_l, predicted_mixed_norm_t, DyadicScalar,
    ExponentVector,
};
use littlewood::opnorm::{operator_norm_with, EnumOptions};
use littlewood::rational::{format_rational, format_rational_list, int, rat};
use serde::Serialize;

use crate::commands::Failure;
use crate::render::{self, Format, Output, Table};
use crate::VerifyArgs;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Exact mixed norm of T_m against its closed form.
    MixedNormT,
    /// Exact mixed norm of L_m against its closed form.
    MixedNormL,
    /// ‖T_m‖ = ‖L_m‖ = 2^(m-1).
    Opnorm,
    /// Sublinear growth envelopes of the Khinchine and Gamma products.
    Envelopes,
    /// Lower-bound exponents at (1,2,…,2), (2,1,2,…,2) and the constant corner.
    Sharp,
    /// Sharpness of the 3-linear families on a grid.
    Trilinear,
    /// The worked hull-membership example.
    Hull,
    /// Khinchine constant, p₀ and the m = 2 upper bound.
    Constants,
    All,
}

#[derive(Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

fn check(
    suite: &'static str,
    name: impl Into<String>,
    pass: bool,
    detail: impl Into<String>,
) -> Check {
    Check {
        suite,
        check: name.into(),
        pass,
        detail: detail.into(),
    }
}

/// Inclusive `a..b` or a single integer.
pub fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || {
        Failure::config(format!(
            "invalid arity range {s:?}: expected a..b or an integer"
        ))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (s.trim(), s.trim()),
    };
    let lo: usize = lo.parse().map_err(|_| bad())?;
    let hi: usize = hi.parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// About `min` equality-admissible vectors spread over a rational grid.
fn exponent_sample(m: usize, min: usize) -> Vec<ExponentVector> {
    let mut denom = 8;
    loop {
        let all = equality_grid(m, denom);
        if all.len() >= min || denom > 1024 {
            let stride = (all.len() / min).max(1);
            return all.into_iter().step_by(stride).collect();
        }
        denom *= 2;
    }
}

type Construct = fn(usize) -> littlewood::Result<MultilinearForm>;
type Predict = fn(usize, &ExponentVector) -> littlewood::Result<DyadicScalar>;

fn identity_suite(
    suite: &'static str,
    construct: Construct,
    predict: Predict,
    (lo, hi): (usize, usize),
) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    for m in lo..=hi {
        let form = construct(m)?;
        let qs = exponent_sample(m, 20);
        let mut mismatches = Vec::new();
        for q in &qs {
            let got = mixed_norm_exact(&form, q)?;
            let want = predict(m, q)?;
            if got != want {
                mismatches.push(format!(
                    "q=({q}): {} vs {}",
                    format_rational(&got.log2),
                    format_rational(&want.log2)
                ));
            }
        }
        let detail = if mismatches.is_empty() {
            format!("{} exponent vectors agree exactly", qs.len())
        } else {
            mismatches.join("; ")
        };
        out.push(check(
            suite,
            format!("m={m}"),
            mismatches.is_empty(),
            detail,
        ));
    }
    Ok(out)
}

fn opnorm_suite((lo, hi): (usize, usize)) -> Result<Vec<Check>, Failure> {
    let opts = EnumOptions::from_env()?;
    let mut out = Vec::new();
    for m in lo..=hi {
        let want = 1i64 << (m - 1);
        for (name, form) in [("T", construct_t(m)?), ("L", construct_l(m)?)] {
            let got = operator_norm_with(&form, &opts)?.value;
            out.push(check(
                "opnorm",
                format!("{name}_{m}"),
                got == want,
                format!("norm {got}, expected {want}"),
            ));
        }
    }
    Ok(out)
}

fn envelope_suite(max_m: usize) -> Result<Vec<Check>, Failure> {
    if !(2..=MAX_BH_ARITY).contains(&max_m) {
        return Err(Failure::config(format!(
            "--max-m must be in 2..={MAX_BH_ARITY}"
        )));
    }
    let (mut real_fail, mut complex_fail) = (None, None);
    let (mut real_worst, mut complex_worst) = (0f64, 0f64);
    for m in 2..=max_m {
        let mf = m as f64;
        let r = bh_upper_real(m)?.value / (1.3 * mf.powf(0.36481));
        let c = bh_upper_complex(m)?.value / mf.powf(0.21392);
        real_worst = real_worst.max(r);
        complex_worst = complex_worst.max(c);
        if r >= 1.0 && real_fail.is_none() {
            real_fail = Some(m);
        }
        if c >= 1.0 && complex_fail.is_none() {
            complex_fail = Some(m);
        }
    }
    let describe = |fail: Option<usize>, worst: f64| match fail {
        None => format!("holds for m = 2..{max_m}; largest ratio {worst:.6}"),
        Some(m) => format!("fails first at m = {m}"),
    };
    Ok(vec![
        check(
            "envelopes",
            "real < 1.3 m^0.36481",
            real_fail.is_none(),
            describe(real_fail, real_worst),
        ),
        check(
            "envelopes",
            "complex < m^0.21392",
            complex_fail.is_none(),
            describe(complex_fail, complex_worst),
        ),
    ])
}

fn sharp_suite((lo, hi): (usize, usize)) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    for m in lo..=hi {
        let half = rat(m as i64 - 1, 2);
        let q1 = ExponentVector::with_slot(m, 1, int(1))?;
        let q2 = ExponentVector::with_slot(m, 2, int(1))?;
        let corner = ExponentVector::constant(m, rat(2 * m as i64, m as i64 + 1))?;
        let corner_want = rat(m as i64 - 1, m as i64);
        for (name, got, want) in [
            ("pos1", lower_bound_pos1(m, &q1)?.log2, &half),
            ("pos2", lower_bound_pos2(m, &q2)?.log2, &half),
            ("corner", lower_bound_pos1(m, &corner)?.log2, &corner_want),
        ] {
            let shown = got
                .as_ref()
                .map(format_rational)
                .unwrap_or_else(|| "none".into());
            out.push(check(
                "sharp",
                format!("{name} m={m}"),
                got.as_ref() == Some(want),
                format!("log2 {shown}, expected {}", format_rational(want)),
            ));
        }
    }
    Ok(out)
}

fn trilinear_suite(grid: usize) -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    for variant in [Variant::Pos1, Variant::Pos2] {
        let rows = sweep(grid, &[variant])?;
        let bad: Vec<String> = rows
            .iter()
            .filter(|r| !r.sharp || r.lower_log2 != (&r.theta + int(3)) / int(4))
            .map(|r| {
                format!(
                    "τ={} θ={}",
                    format_rational(&r.tau),
                    format_rational(&r.theta)
                )
            })
            .collect();
        let detail = if bad.is_empty() {
            format!("{} grid points sharp at 2^((θ+3)/4)", rows.len())
        } else {
            format!("not sharp at {}", bad.join(", "))
        };
        out.push(check("trilinear", variant.name(), bad.is_empty(), detail));
    }
    Ok(out)
}

fn hull_suite() -> Result<Vec<Check>, Failure> {
    let point = vec![rat(23, 40), rat(29, 40), rat(28, 40)];
    let verts = vec![
        vec![rat(1, 2), rat(3, 4), rat(3, 4)],
        vec![rat(3, 4), rat(1, 2), rat(3, 4)],
        vec![rat(3, 4), rat(3, 4), rat(1, 2)],
    ];
    let cert = in_convex_hull(&point, &verts)?;
    let (pass, detail) = match &cert {
        Some(c) => (
            c.verify(&point, &verts),
            format!("weights ({})", format_rational_list(&c.weights)),
        ),
        None => (false, "reported outside the hull".into()),
    };
    let q = ExponentVector::parse("40/23,40/29,40/28")?;
    let single = single_large_exponent_applies(3, &q);
    let bounded = bounded_max_exponent_applies(3, &q);
    Ok(vec![
        check("hull", "certificate", pass, detail),
        check(
            "hull",
            "anchor conditions fail",
            !single && !bounded,
            format!("single_large_exponent={single}, bounded_max_exponent={bounded}"),
        ),
    ])
}

fn constants_suite() -> Result<Vec<Check>, Failure> {
    let a2 = khinchine_a(&int(2))?;
    let b2 = bh_upper_real(2)?.value;
    let p = p0();
    let g = gamma((p + 1.0) / 2.0)?;
    let target = std::f64::consts::PI.sqrt() / 2.0;
    Ok(vec![
        check(
            "constants",
            "A_2 = 1",
            (a2 - 1.0).abs() <= 1e-12,
            format!("{a2}"),
        ),
        check(
            "constants",
            "bh_upper_real(2) = sqrt 2",
            (b2 - 2f64.sqrt()).abs() <= 1e-12,
            format!("{b2}"),
        ),
        check(
            "constants",
            "p0 root",
            (1.84..=1.86).contains(&p) && (g - target).abs() <= 1e-12,
            format!("p0 = {p}, gamma residual {:.1e}", (g - target).abs()),
        ),
    ])
}

pub fn run(a: &VerifyArgs, format: Option<Format>) -> Result<Output, Failure> {
    let range = |default: (usize, usize)| a.m.as_deref().map(parse_range).unwrap_or(Ok(default));
    let mut checks = Vec::new();
    let all = a.suite == Suite::All;
    if all || a.suite == Suite::MixedNormT {
        checks.extend(identity_suite(
            "mixed-norm-t",
            construct_t,
            predicted_mixed_norm_t,
            range((2, 6))?,
        )?);
    }
    if all || a.suite == Suite::MixedNormL {
        checks.extend(identity_suite(
            "mixed-norm-l",
            construct_l,
            predicted_mixed_norm_l,
            range((2, 6))?,
        )?);
    }
    if all || a.suite == Suite::Opnorm {
        checks.extend(opnorm_suite(range((2, 4))?)?);
    }
    if all || a.suite == Suite::Envelopes {
        checks.extend(envelope_suite(a.max_m)?);
    }
    if all || a.suite == Suite::Sharp {
        checks.extend(sharp_suite(range((2, 10))?)?);
    }
    if all || a.suite == Suite::Trilinear {
        checks.extend(trilinear_suite(a.grid)?);
    }
    if all || a.suite == Suite::Hull {
        checks.extend(hull_suite()?);
    }
    if all || a.suite == Suite::Constants {
        checks.extend(constants_suite()?);
    }
    let status = if checks.iter().all(|c| c.pass) { 0 } else { 1 };
    let table = || {
        let mut t = Table::new(["suite", "check", "pass", "detail"]);
        for c in &checks {
            t.push(vec![
                c.suite.into(),
                c.check.clone(),
                if c.pass { "1" } else { "0" }.into(),
                c.detail.clone(),
            ]);
        }
        t
    };
    let body = match format.unwrap_or(Format::Json) {
        Format::Json => render::json_lines(&checks),
        Format::Csv => table().csv(),
        Format::Text => table().text(),
    };
    Ok(Output { body, status })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..6").unwrap(), (2, 6));
        assert_eq!(parse_range("2..=6").unwrap(), (2, 6));
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        assert!(parse_range("6..2").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn samples_are_large_enough() {
        for m in 2..=6 {
            assert!(exponent_sample(m, 20).len() >= 20, "m={m}");
        }
    }
}
