//! Scalar constants: Gamma, the Khinchine constants `A_p` and their branch
//! point `p₀`, Bohnenblust–Hille upper and lower estimates, mixed Littlewood
//! constants and the exact lower-bound exponents carried by `T_m` and `L_m`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mixednorm::{weighted_qhat_exponent, AdmissibilityMode, ExponentVector};
use crate::rational::{format_rational, int, rat, serde_rational_opt, to_f64, Rational};

/// Certified range of [`gamma`].
pub const GAMMA_MIN: f64 = 0.5;
pub const GAMMA_MAX: f64 = 50.0;

/// Largest `m` accepted by the Bohnenblust–Hille estimates.
pub const MAX_BH_ARITY: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    Upper,
    Sharp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

/// A constant bound with the exact exponent when it is a power of two.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    #[serde(with = "serde_rational_opt", skip_serializing_if = "Option::is_none")]
    pub log2: Option<Rational>,
    pub value: f64,
    pub provenance: String,
}

impl BoundReport {
    pub fn dyadic(kind: BoundKind, log2: Rational, provenance: String) -> Self {
        let value = to_f64(&log2).exp2();
        BoundReport {
            kind,
            log2: Some(log2),
            value,
            provenance,
        }
    }

    pub fn numeric(kind: BoundKind, value: f64, provenance: String) -> Self {
        BoundReport {
            kind,
            log2: None,
            value,
            provenance,
        }
    }
}

/// `Γ(x)` for `0.5 ≤ x ≤ 50`, relative error below `1e-13`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(GAMMA_MIN..=GAMMA_MAX).contains(&x) {
        return Err(Error::OutOfDomain {
            x,
            lo: GAMMA_MIN,
            hi: GAMMA_MAX,
        });
    }
    // The library's Lanczos sum is most accurate near 1; larger arguments are
    // brought into [1, 2) by Γ(x+1) = xΓ(x), at one rounding per step.
    let mut z = x;
    let mut scale = 1.0;
    while z >= 2.0 {
        z -= 1.0;
        scale *= z;
    }
    Ok(scale * statrs::function::gamma::gamma(z))
}

fn gamma_unchecked(x: f64) -> f64 {
    gamma(x).expect("argument inside certified range")
}

/// The branch point `p₀ ∈ (1, 2)` of the Khinchine constants: the root of
/// `Γ((p+1)/2) = √π/2` below 2. `p = 2` solves the same equation and is excluded
/// by bracketing on `[1.5, 1.9]`.
pub fn p0() -> f64 {
    static ROOT: OnceLock<f64> = OnceLock::new();
    *ROOT.get_or_init(|| {
        let target = PI.sqrt() / 2.0;
        let f = |p: f64| gamma_unchecked((p + 1.0) / 2.0) - target;
        let (mut lo, mut hi) = (1.5, 1.9);
        debug_assert!(f(lo) > 0.0 && f(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

fn khinchine_a_f64(p: f64) -> f64 {
    if p > p0() {
        2f64.sqrt() * (gamma_unchecked((p + 1.0) / 2.0) / PI.sqrt()).powf(1.0 / p)
    } else {
        (0.5 - 1.0 / p).exp2()
    }
}

/// Exact `log2 A_p` when `p ≤ p₀`, where `A_p = 2^{1/2 - 1/p}`.
fn khinchine_a_log2(p: &Rational) -> Option<Rational> {
    (to_f64(p) <= p0()).then(|| rat(1, 2) - p.recip())
}

/// Best constant `A_p` of Khinchine's inequality for `1 ≤ p ≤ 2`.
pub fn khinchine_a(p: &Rational) -> Result<f64> {
    if *p < int(1) || *p > int(2) {
        return Err(Error::ExponentOutOfRange(format!(
            "Khinchine exponent {} not in [1, 2]",
            format_rational(p)
        )));
    }
    Ok(khinchine_a_f64(to_f64(p)))
}

/// Both branches of `A_p` evaluated at the same point: `(gamma branch, power branch)`.
pub fn khinchine_branches(p: f64) -> (f64, f64) {
    (
        2f64.sqrt() * (gamma_unchecked((p + 1.0) / 2.0) / PI.sqrt()).powf(1.0 / p),
        (0.5 - 1.0 / p).exp2(),
    )
}

fn check_bh_arity(m: usize) -> Result<()> {
    if (2..=MAX_BH_ARITY).contains(&m) {
        Ok(())
    } else {
        Err(Error::ArityOutOfRange {
            arity: m,
            min: 2,
            max: MAX_BH_ARITY,
        })
    }
}

/// `Π_{j=2}^m A_{(2j-2)/j}^{-1}`, exact while every `(2j-2)/j ≤ p₀`.
pub fn bh_upper_real(m: usize) -> Result<BoundReport> {
    check_bh_arity(m)?;
    let mut log_sum = 0.0;
    let mut exact = Some(Rational::zero());
    for j in 2..=m as i64 {
        let p = rat(2 * j - 2, j);
        log_sum -= khinchine_a(&p)?.log2();
        exact = match (exact, khinchine_a_log2(&p)) {
            (Some(acc), Some(l)) => Some(acc - l),
            _ => None,
        };
    }
    let provenance = format!("khinchine product m={m}");
    Ok(match exact {
        Some(l) => BoundReport::dyadic(BoundKind::Upper, l, provenance),
        None => BoundReport::numeric(BoundKind::Upper, log_sum.exp2(), provenance),
    })
}

/// `Π_{j=2}^m Γ(2 - 1/j)^{j/(2-2j)}`.
pub fn bh_upper_complex(m: usize) -> Result<BoundReport> {
    check_bh_arity(m)?;
    let mut log_sum = 0.0;
    for j in 2..=m {
        let jf = j as f64;
        log_sum += jf / (2.0 - 2.0 * jf) * gamma(2.0 - 1.0 / jf)?.ln();
    }
    Ok(BoundReport::numeric(
        BoundKind::Upper,
        log_sum.exp(),
        format!("gamma product m={m}"),
    ))
}

/// `2^{1 - 1/m} ≤ B_m^ℝ`.
pub fn bh_lower_real(m: usize) -> Result<BoundReport> {
    check_bh_arity(m)?;
    Ok(BoundReport::dyadic(
        BoundKind::Lower,
        int(1) - rat(1, m as i64),
        format!("real bohnenblust-hille lower m={m}"),
    ))
}

/// `(√2)^{m-1}` for real scalars, `(2/√π)^{m-1}` for complex ones.
pub fn mixed_littlewood_upper(m: usize, field: Field) -> Result<BoundReport> {
    check_bh_arity(m)?;
    Ok(match field {
        Field::Real => BoundReport::dyadic(
            BoundKind::Upper,
            rat(m as i64 - 1, 2),
            format!("mixed littlewood real m={m}"),
        ),
        Field::Complex => BoundReport::numeric(
            BoundKind::Upper,
            (2.0 / PI.sqrt()).powi(m as i32 - 1),
            format!("mixed littlewood complex m={m}"),
        ),
    })
}

fn check_lower_input(m: usize, q: &ExponentVector) -> Result<()> {
    if m < 2 || q.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} exponents for m = {m}",
            q.len()
        )));
    }
    if !q.admissible(AdmissibilityMode::Equality) {
        return Err(Error::Inadmissible(format!(
            "Σ 1/q_i = {} ≠ {}",
            format_rational(&q.reciprocal_sum()),
            format_rational(&rat(m as i64 + 1, 2))
        )));
    }
    Ok(())
}

/// `((m-1) q̂_heavy + Σ_{i≠heavy} q̂_i − (m-1) Π q_i) / Π q_i`.
fn lower_exponent(q: &ExponentVector, heavy: usize) -> Rational {
    let m = q.len() as i64;
    let prod = q.product();
    let numer: Rational = (1..=q.len())
        .map(|i| {
            let h = q.qhat(i);
            if i == heavy {
                h * int(m - 1)
            } else {
                h
            }
        })
        .sum::<Rational>()
        - int(m - 1) * &prod;
    numer / prod
}

fn lower_bound(m: usize, q: &ExponentVector, heavy: usize, form: &str) -> Result<BoundReport> {
    check_lower_input(m, q)?;
    let direct = lower_exponent(q, heavy);
    // The closed form must agree with mixed-norm / ‖form‖ = 2^{m-1}.
    let via_ratio = weighted_qhat_exponent(q, heavy) - int(m as i64 - 1);
    if direct != via_ratio {
        return Err(Error::Internal(format!(
            "lower-bound exponent {} disagrees with norm ratio {}",
            format_rational(&direct),
            format_rational(&via_ratio)
        )));
    }
    Ok(BoundReport::dyadic(
        BoundKind::Lower,
        direct,
        format!("lower bound from {form} m={m} q={q}"),
    ))
}

/// Lower bound for `C_{m,q}^ℝ` witnessed by `T_m` (heavy slot 1).
pub fn lower_bound_pos1(m: usize, q: &ExponentVector) -> Result<BoundReport> {
    lower_bound(m, q, 1, "T_m")
}

/// Lower bound for `C_{m,q}^ℝ` witnessed by `L_m` (heavy slot 2).
pub fn lower_bound_pos2(m: usize, q: &ExponentVector) -> Result<BoundReport> {
    lower_bound(m, q, 2, "L_m")
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_2_SQRT_PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn gamma_reference_values() {
        // 30-digit reference values.
        let table = [
            (0.5, 1.772_453_850_905_516_027_298_167),
            (0.75, 1.225_416_702_465_177_645_129_098),
            (1.0, 1.0),
            (1.25, 0.906_402_477_055_477_077_982_671_3),
            (1.5, 0.886_226_925_452_758_013_649_083_7),
            (5.0 / 3.0, 0.902_745_292_950_933_611_296_858_7),
            (1.9, 0.961_765_831_907_387_388_981_623_6),
            (2.5, 1.329_340_388_179_137_020_473_626),
            (3.3, 2.683_437_381_955_768_300_323_109),
            (7.25, 1_155.381_013_919_989_687_202_704),
            (12.5, 136_843_365.465_565_857_255_649_8),
            (19.9, 90_406_140_079_547_518.549_400_75),
            (33.3, 7.487_577_596_522_632_327_444_354e35),
            (50.0, 6.082_818_640_342_675_608_722_522e62),
        ];
        for (x, want) in table {
            let got = gamma(x).unwrap();
            assert!(rel(got, want) < 1e-13, "Γ({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn gamma_half_integers() {
        // Γ(n + 1/2) = (2n)! √π / (4^n n!)
        let sqrt_pi = PI.sqrt();
        let mut exact = sqrt_pi;
        for n in 0..40u32 {
            let x = n as f64 + 0.5;
            assert!(rel(gamma(x).unwrap(), exact) < 1e-13, "n={n}");
            exact *= x;
        }
    }

    #[test]
    fn gamma_domain() {
        assert!(gamma(0.49).is_err());
        assert!(gamma(50.5).is_err());
        assert!(gamma(f64::NAN).is_err());
    }

    #[test]
    fn p0_root() {
        let p = p0();
        assert!((p - 1.847_416_336_076_342_1).abs() < 1e-12);
        assert!((gamma((p + 1.0) / 2.0).unwrap() - PI.sqrt() / 2.0).abs() < 1e-12);
        let (g, pw) = khinchine_branches(p);
        assert!((g - pw).abs() < 1e-10);
    }

    #[test]
    fn khinchine_examples() {
        assert!((khinchine_a(&int(2)).unwrap() - 1.0).abs() < 1e-12);
        assert!((khinchine_a(&int(1)).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((khinchine_a(&rat(4, 3)).unwrap() - (-0.25f64).exp2()).abs() < 1e-15);
        assert!(khinchine_a(&rat(1, 2)).is_err());
        assert!(khinchine_a(&rat(5, 2)).is_err());
    }

    #[test]
    fn bh_real_estimates() {
        let u2 = bh_upper_real(2).unwrap();
        assert_eq!(u2.log2, Some(rat(1, 2)));
        assert!((u2.value - 2f64.sqrt()).abs() < 1e-12);
        let u3 = bh_upper_real(3).unwrap();
        assert_eq!(u3.log2, Some(rat(3, 4)));
        assert!((u3.value - 1.681_792_830_507_429_1).abs() < 1e-12);
        // (2j-2)/j crosses p₀ between j = 13 and j = 14.
        assert!(bh_upper_real(13).unwrap().log2.is_some());
        assert!(bh_upper_real(14).unwrap().log2.is_none());
        assert!(rel(bh_upper_real(14).unwrap().value, 3.010_908_334_423_467_6) < 1e-12);
        assert!(rel(bh_upper_real(100).unwrap().value, 6.149_344_734_049_730_7) < 1e-12);
        assert!(bh_upper_real(100).unwrap().value < 1.3 * 100f64.powf(0.36481));
        assert!(bh_upper_real(1).is_err());
    }

    #[test]
    fn bh_complex_estimates() {
        assert!(rel(bh_upper_complex(2).unwrap().value, FRAC_2_SQRT_PI) < 1e-13);
        assert!(rel(bh_upper_complex(3).unwrap().value, 1.218_375_437_007_418_9) < 1e-13);
        assert!(
            rel(
                bh_upper_complex(500).unwrap().value,
                3.528_108_496_129_904_2
            ) < 1e-12
        );
        assert!(bh_upper_complex(100).unwrap().value < 100f64.powf(0.21392));
    }

    #[test]
    fn bh_lower_examples() {
        assert_eq!(bh_lower_real(2).unwrap().log2, Some(rat(1, 2)));
        assert_eq!(bh_lower_real(3).unwrap().log2, Some(rat(2, 3)));
        for m in 2..=1000 {
            assert!(bh_lower_real(m).unwrap().value <= bh_upper_real(m).unwrap().value);
        }
    }

    #[test]
    fn mixed_littlewood_examples() {
        let r3 = mixed_littlewood_upper(3, Field::Real).unwrap();
        assert_eq!(r3.log2, Some(int(1)));
        assert_eq!(r3.value, 2.0);
        let c2 = mixed_littlewood_upper(2, Field::Complex).unwrap();
        assert!((c2.value - 2.0 / PI.sqrt()).abs() < 1e-15);
        assert!(c2.log2.is_none());
        assert!(
            (mixed_littlewood_upper(2, Field::Real).unwrap().value - 2f64.sqrt()).abs() < 1e-15
        );
        for m in 2..=200 {
            assert!(
                mixed_littlewood_upper(m, Field::Complex).unwrap().value
                    <= mixed_littlewood_upper(m, Field::Real).unwrap().value
            );
        }
    }

    #[test]
    fn lower_bound_examples() {
        for m in 2..=10 {
            let q1 = ExponentVector::with_slot(m, 1, int(1)).unwrap();
            assert_eq!(
                lower_bound_pos1(m, &q1).unwrap().log2,
                Some(rat(m as i64 - 1, 2))
            );
            let q2 = ExponentVector::with_slot(m, 2, int(1)).unwrap();
            assert_eq!(
                lower_bound_pos2(m, &q2).unwrap().log2,
                Some(rat(m as i64 - 1, 2))
            );
        }
        let corner = ExponentVector::constant(3, rat(3, 2)).unwrap();
        assert_eq!(lower_bound_pos1(3, &corner).unwrap().log2, Some(rat(2, 3)));
        let (a, b, c) = (rat(40, 23), rat(40, 29), rat(40, 28));
        let q = ExponentVector::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
        let abc = &a * &b * &c;
        let tri1 = (int(2) * &b * &c + &a * &b + &a * &c - int(2) * &abc) / &abc;
        let tri2 = (int(2) * &a * &c + &a * &b + &b * &c - int(2) * &abc) / &abc;
        assert_eq!(lower_bound_pos1(3, &q).unwrap().log2, Some(tri1));
        assert_eq!(lower_bound_pos2(3, &q).unwrap().log2, Some(tri2));
        let q2 = ExponentVector::parse("6/5,3/2").unwrap();
        assert_eq!(
            lower_bound_pos1(2, &q2).unwrap().log2,
            lower_bound_pos2(2, &q2).unwrap().log2
        );
    }

    #[test]
    fn lower_bound_rejects_inadmissible() {
        let q = ExponentVector::parse("2,2,2").unwrap();
        assert!(matches!(
            lower_bound_pos1(3, &q),
            Err(Error::Inadmissible(_))
        ));
        assert!(matches!(
            lower_bound_pos2(3, &q),
            Err(Error::Inadmissible(_))
        ));
        let q = ExponentVector::parse("1,2").unwrap();
        assert!(lower_bound_pos1(3, &q).is_err());
    }

    #[test]
    fn bound_report_json() {
        let r = bh_lower_real(3).unwrap();
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["kind"], "lower");
        assert_eq!(j["log2"], "2/3");
        let c = bh_upper_complex(3).unwrap();
        assert!(serde_json::to_value(&c).unwrap().get("log2").is_none());
    }
}
