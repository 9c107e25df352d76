//! Nested mixed `(q_1, …, q_m)`-norms of coefficient tensors.
//!
//! The norm is
//!
//! ```text
//! ( Σ_{j_1} ( Σ_{j_2} ( ⋯ ( Σ_{j_m} |U(e_{j_1},…,e_{j_m})|^{q_m} )^{q_{m-1}/q_m} ⋯ )^{q_2/q_3} )^{q_1/q_2} )^{1/q_1}
//! ```
//!
//! i.e. the innermost sum runs over the **last** slot. Two evaluators share one
//! fold: a compensated floating-point one and an exact one over powers of two
//! with rational exponents.

use std::fmt;

use num::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::forms::MultilinearForm;
use crate::rational::{self, exact_log2, format_rational, int, rat, to_f64, Rational};

/// How `Σ 1/q_i` is compared against `(m+1)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibilityMode {
    Equality,
    Inequality,
}

/// Exponents `q = (q_1, …, q_m) ∈ [1, 2]^m`, held as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct ExponentVector {
    q: Vec<Rational>,
}

impl ExponentVector {
    pub fn new(q: Vec<Rational>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::ExponentOutOfRange("empty exponent vector".into()));
        }
        let (one, two) = (int(1), int(2));
        if let Some(bad) = q.iter().find(|x| **x < one || **x > two) {
            return Err(Error::ExponentOutOfRange(format!(
                "{} not in [1, 2]",
                format_rational(bad)
            )));
        }
        Ok(ExponentVector { q })
    }

    /// Parses comma-separated `a/b` tokens, e.g. `"40/23,40/29,10/7"`.
    pub fn parse(s: &str) -> Result<Self> {
        Self::new(rational::parse_rational_list(s)?)
    }

    /// `(value, …, value)` of length `m`.
    pub fn constant(m: usize, value: Rational) -> Result<Self> {
        Self::new(vec![value; m])
    }

    /// The multiple exponent with value `low` at 1-based `slot` and `2` elsewhere,
    /// e.g. `(1, 2, …, 2)` or `(2, 1, 2, …, 2)`.
    pub fn with_slot(m: usize, slot: usize, low: Rational) -> Result<Self> {
        if slot == 0 || slot > m {
            return Err(Error::ExponentOutOfRange(format!(
                "slot {slot} not in 1..={m}"
            )));
        }
        let mut q = vec![int(2); m];
        q[slot - 1] = low;
        Self::new(q)
    }

    /// Exponents whose reciprocals are the given point (each reciprocal in `[1/2, 1]`).
    pub fn from_reciprocals(r: &[Rational]) -> Result<Self> {
        if r.iter().any(|x| !x.is_positive()) {
            return Err(Error::ExponentOutOfRange("non-positive reciprocal".into()));
        }
        Self::new(r.iter().map(|x| x.recip()).collect())
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.q
    }

    /// 1-based access.
    pub fn get(&self, i: usize) -> &Rational {
        &self.q[i - 1]
    }

    pub fn reciprocals(&self) -> Vec<Rational> {
        self.q.iter().map(|x| x.recip()).collect()
    }

    pub fn reciprocal_sum(&self) -> Rational {
        self.q.iter().map(|x| x.recip()).sum()
    }

    pub fn product(&self) -> Rational {
        self.q.iter().product()
    }

    pub fn max(&self) -> &Rational {
        self.q.iter().max().expect("non-empty")
    }

    pub fn admissible(&self, mode: AdmissibilityMode) -> bool {
        admissible(self, mode)
    }

    /// `q̂_{i,m} = q_1 ⋯ q_m / q_i`, 1-based `i`.
    pub fn qhat(&self, i: usize) -> Rational {
        qhat(self, i)
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::format_rational_list(&self.q))
    }
}

impl TryFrom<Vec<String>> for ExponentVector {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        Self::new(
            v.iter()
                .map(|s| rational::parse_rational(s))
                .collect::<Result<_>>()?,
        )
    }
}

impl From<ExponentVector> for Vec<String> {
    fn from(q: ExponentVector) -> Self {
        q.q.iter().map(format_rational).collect()
    }
}

/// Exact comparison of `Σ 1/q_i` with `(m+1)/2`.
pub fn admissible(q: &ExponentVector, mode: AdmissibilityMode) -> bool {
    let target = rat(q.len() as i64 + 1, 2);
    let s = q.reciprocal_sum();
    match mode {
        AdmissibilityMode::Equality => s == target,
        AdmissibilityMode::Inequality => s <= target,
    }
}

/// Product of all exponents except `q_i` (1-based `i`).
pub fn qhat(q: &ExponentVector, i: usize) -> Rational {
    assert!(i >= 1 && i <= q.len(), "slot {i} out of range");
    q.q.iter()
        .enumerate()
        .filter(|&(k, _)| k != i - 1)
        .map(|(_, x)| x)
        .product()
}

/// All equality-admissible exponent vectors whose reciprocals are multiples of
/// `1/denom`, in lexicographic order of the reciprocals.
pub fn equality_grid(m: usize, denom: u32) -> Vec<ExponentVector> {
    let d = denom as i64;
    let lo = (d + 1) / 2;
    let target = rat(m as i64 + 1, 2);
    let mut out = Vec::new();
    let mut ks = vec![lo; m.saturating_sub(1)];
    loop {
        let partial: Rational = ks.iter().map(|&k| rat(k, d)).sum();
        let last = &target - partial;
        if last >= rat(1, 2) && last <= int(1) {
            let mut r: Vec<Rational> = ks.iter().map(|&k| rat(k, d)).collect();
            r.push(last);
            if let Ok(q) = ExponentVector::from_reciprocals(&r) {
                out.push(q);
            }
        }
        let mut pos = ks.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if ks[pos] < d {
                ks[pos] += 1;
                break;
            }
            ks[pos] = lo;
        }
    }
}

/// An exact scalar `2^log2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyadicScalar {
    pub log2: Rational,
}

impl DyadicScalar {
    pub fn from_log2(log2: Rational) -> Self {
        DyadicScalar { log2 }
    }

    pub fn one() -> Self {
        DyadicScalar {
            log2: Rational::zero(),
        }
    }

    /// `Some` when `n` is a power of two.
    pub fn from_integer(n: i64) -> Option<Self> {
        exact_log2(&int(n)).map(|k| DyadicScalar { log2: int(k) })
    }

    pub fn value(&self) -> f64 {
        to_f64(&self.log2).exp2()
    }

    pub fn mul(&self, other: &Self) -> Self {
        DyadicScalar {
            log2: &self.log2 + &other.log2,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        DyadicScalar {
            log2: &self.log2 - &other.log2,
        }
    }

    pub fn pow(&self, t: &Rational) -> Self {
        DyadicScalar {
            log2: &self.log2 * t,
        }
    }

    /// `2^r + 2^r = 2^{r+1}`; any other sum leaves the dyadic set.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.log2 == other.log2 {
            Ok(DyadicScalar {
                log2: &self.log2 + int(1),
            })
        } else {
            Err(Error::NotDyadic(format!(
                "2^{} + 2^{}",
                format_rational(&self.log2),
                format_rational(&other.log2)
            )))
        }
    }
}

impl fmt::Display for DyadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^({})", format_rational(&self.log2))
    }
}

impl Serialize for DyadicScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DyadicScalar", 2)?;
        st.serialize_field("log2", &format_rational(&self.log2))?;
        st.serialize_field("value", &self.value())?;
        st.end()
    }
}

/// One evaluation domain for the nested fold.
trait FoldDomain {
    type Value: Clone;
    type Acc: Default;

    fn leaf(&self, coeff: i64) -> Result<Self::Value>;
    fn pow(&self, v: Self::Value, slot: usize) -> Result<Self::Value>;
    fn root(&self, v: Self::Value) -> Result<Self::Value>;
    fn push(acc: &mut Self::Acc, v: Self::Value) -> Result<()>;
    fn total(acc: &Self::Acc) -> Result<Self::Value>;
}

/// Right-to-left fold over sorted entries. Completed fibers are closed as soon
/// as the entry stream leaves them, so the fold is a single pass.
fn nested_fold<D: FoldDomain>(
    form: &MultilinearForm,
    q: &ExponentVector,
    dom: &D,
) -> Result<D::Value> {
    let m = form.arity();
    if q.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} exponents for a {m}-linear form",
            q.len()
        )));
    }
    let mut accs: Vec<D::Acc> = (0..m).map(|_| D::Acc::default()).collect();
    let close = |accs: &mut Vec<D::Acc>, from: usize| -> Result<()> {
        for s in (from..m).rev() {
            let v = D::total(&accs[s])?;
            accs[s] = D::Acc::default();
            let lifted = dom.pow(v, s)?;
            D::push(&mut accs[s - 1], lifted)?;
        }
        Ok(())
    };
    let mut prev: Option<&[usize]> = None;
    for (idx, c) in form.entries() {
        if let Some(p) = prev {
            let d = p.iter().zip(idx).position(|(a, b)| a != b).unwrap_or(m - 1);
            close(&mut accs, d + 1)?;
        }
        D::push(&mut accs[m - 1], dom.leaf(c)?)?;
        prev = Some(idx);
    }
    close(&mut accs, 1)?;
    dom.root(D::total(&accs[0])?)
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

struct FloatDomain {
    q: Vec<f64>,
    /// `ratios[s] = q[s-1] / q[s]` for `s ≥ 1`.
    ratios: Vec<f64>,
}

impl FloatDomain {
    fn new(q: &ExponentVector) -> Self {
        let qs = q.as_slice();
        let mut ratios = vec![1.0; qs.len()];
        for s in 1..qs.len() {
            ratios[s] = to_f64(&(&qs[s - 1] / &qs[s]));
        }
        FloatDomain {
            q: qs.iter().map(to_f64).collect(),
            ratios,
        }
    }
}

fn powf_exact_one(x: f64, t: f64) -> f64 {
    if t == 1.0 {
        x
    } else {
        x.powf(t)
    }
}

impl FoldDomain for FloatDomain {
    type Value = f64;
    type Acc = CompensatedSum;

    fn leaf(&self, coeff: i64) -> Result<f64> {
        Ok(powf_exact_one(
            (coeff as f64).abs(),
            *self.q.last().expect("non-empty"),
        ))
    }
    fn pow(&self, v: f64, slot: usize) -> Result<f64> {
        Ok(powf_exact_one(v, self.ratios[slot]))
    }
    fn root(&self, v: f64) -> Result<f64> {
        Ok(powf_exact_one(v, 1.0 / self.q[0]))
    }
    fn push(acc: &mut CompensatedSum, v: f64) -> Result<()> {
        acc.add(v);
        Ok(())
    }
    fn total(acc: &CompensatedSum) -> Result<f64> {
        Ok(acc.value())
    }
}

/// Either zero or `2^r`.
#[derive(Clone, Debug)]
enum ExactValue {
    Zero,
    Pow2(Rational),
}

/// Nonzero terms seen so far: their common exponent and their count.
#[derive(Default)]
struct ExactAcc {
    terms: Option<(Rational, u64)>,
}

struct ExactDomain {
    q_last: Rational,
    ratios: Vec<Rational>,
    inv_q1: Rational,
}

impl ExactDomain {
    fn new(q: &ExponentVector) -> Self {
        let qs = q.as_slice();
        let mut ratios = vec![Rational::one(); qs.len()];
        for s in 1..qs.len() {
            ratios[s] = &qs[s - 1] / &qs[s];
        }
        ExactDomain {
            q_last: qs[qs.len() - 1].clone(),
            ratios,
            inv_q1: qs[0].recip(),
        }
    }
}

impl FoldDomain for ExactDomain {
    type Value = ExactValue;
    type Acc = ExactAcc;

    fn leaf(&self, coeff: i64) -> Result<ExactValue> {
        match exact_log2(&int(coeff.abs())) {
            Some(k) if coeff != 0 => Ok(ExactValue::Pow2(int(k) * &self.q_last)),
            _ => Err(Error::NotDyadic(format!("coefficient {coeff} is not ±2^k"))),
        }
    }
    fn pow(&self, v: ExactValue, slot: usize) -> Result<ExactValue> {
        Ok(match v {
            ExactValue::Zero => ExactValue::Zero,
            ExactValue::Pow2(r) => ExactValue::Pow2(r * &self.ratios[slot]),
        })
    }
    fn root(&self, v: ExactValue) -> Result<ExactValue> {
        self.pow_root(v)
    }
    fn push(acc: &mut ExactAcc, v: ExactValue) -> Result<()> {
        let ExactValue::Pow2(r) = v else {
            return Ok(());
        };
        match &mut acc.terms {
            None => acc.terms = Some((r, 1)),
            Some((r0, n)) if *r0 == r => *n += 1,
            Some((r0, _)) => {
                return Err(Error::NotDyadic(format!(
                    "fiber mixes terms 2^{} and 2^{}",
                    format_rational(r0),
                    format_rational(&r)
                )))
            }
        }
        Ok(())
    }
    fn total(acc: &ExactAcc) -> Result<ExactValue> {
        match &acc.terms {
            None => Ok(ExactValue::Zero),
            Some((r, n)) => match rational::exact_log2_count(*n) {
                Some(k) => Ok(ExactValue::Pow2(r + int(k as i64))),
                None => Err(Error::NotDyadic(format!(
                    "fiber sums {n} equal terms, not a power of two"
                ))),
            },
        }
    }
}

impl ExactDomain {
    fn pow_root(&self, v: ExactValue) -> Result<ExactValue> {
        Ok(match v {
            ExactValue::Zero => ExactValue::Zero,
            ExactValue::Pow2(r) => ExactValue::Pow2(r * &self.inv_q1),
        })
    }
}

/// Floating-point mixed norm with compensated summation on every axis.
pub fn mixed_norm(form: &MultilinearForm, q: &ExponentVector) -> Result<f64> {
    nested_fold(form, q, &FloatDomain::new(q))
}

/// The same fold carried out exactly over `{0} ∪ {2^r : r ∈ ℚ}`.
///
/// Fails with [`Error::NotDyadic`] as soon as a fiber sum leaves that set
/// (unequal exponents or a non-power-of-two count), and for the zero form.
pub fn mixed_norm_exact(form: &MultilinearForm, q: &ExponentVector) -> Result<DyadicScalar> {
    match nested_fold(form, q, &ExactDomain::new(q))? {
        ExactValue::Pow2(r) => Ok(DyadicScalar::from_log2(r)),
        ExactValue::Zero => Err(Error::NotDyadic("mixed norm is zero".into())),
    }
}

fn check_arity(m: usize, q: &ExponentVector) -> Result<()> {
    if m < 2 {
        return Err(Error::ArityOutOfRange {
            arity: m,
            min: 2,
            max: usize::MAX,
        });
    }
    if q.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} exponents for m = {m}",
            q.len()
        )));
    }
    Ok(())
}

/// Closed-form mixed norm of `T_m`:
/// `2^{((m-1) q̂_1 + Σ_{i≥2} q̂_i) / (q_1 ⋯ q_m)}`.
pub fn predicted_mixed_norm_t(m: usize, q: &ExponentVector) -> Result<DyadicScalar> {
    check_arity(m, q)?;
    Ok(DyadicScalar::from_log2(weighted_qhat_exponent(q, 1)))
}

/// Closed-form mixed norm of `L_m`: as for `T_m` with slot 2 carrying the
/// `(m-1)` weight.
pub fn predicted_mixed_norm_l(m: usize, q: &ExponentVector) -> Result<DyadicScalar> {
    check_arity(m, q)?;
    Ok(DyadicScalar::from_log2(weighted_qhat_exponent(q, 2)))
}

/// `((m-1) q̂_heavy + Σ_{i≠heavy} q̂_i) / Π q_i`.
pub(crate) fn weighted_qhat_exponent(q: &ExponentVector, heavy: usize) -> Rational {
    let m = q.len();
    let numer: Rational = (1..=m)
        .map(|i| {
            let h = qhat(q, i);
            if i == heavy {
                h * int(m as i64 - 1)
            } else {
                h
            }
        })
        .sum();
    numer / q.product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{construct_l, construct_t, random_form, Entries};

    fn q(s: &str) -> ExponentVector {
        ExponentVector::parse(s).unwrap()
    }

    #[test]
    fn exponent_vector_validation() {
        assert!(ExponentVector::parse("1,2,2").is_ok());
        assert!(ExponentVector::parse("1/2,2").is_err());
        assert!(ExponentVector::parse("5/2").is_err());
        assert!(ExponentVector::parse("").is_err());
        assert!(ExponentVector::parse("1,x").is_err());
        let v = q("40/23,40/29,40/28");
        assert_eq!(v.to_string(), "40/23,40/29,10/7");
    }

    #[test]
    fn admissibility_examples() {
        use AdmissibilityMode::*;
        assert!(q("3/2,3/2,3/2").admissible(Equality));
        assert!(q("1,2,2").admissible(Equality));
        assert!(!q("2,2,2").admissible(Equality));
        assert!(q("2,2,2").admissible(Inequality));
        assert!(!q("1,1,2").admissible(Inequality));
        assert!(q("40/23,40/29,40/28").admissible(Equality));
    }

    #[test]
    fn qhat_examples() {
        let v = q("1,2,2");
        assert_eq!(v.qhat(1), int(4));
        assert_eq!(v.qhat(2), int(2));
        assert_eq!(q("3/2,3/2,3/2").qhat(3), rat(9, 4));
    }

    #[test]
    fn t2_mixed_norm() {
        let t2 = construct_t(2).unwrap();
        let v = mixed_norm(&t2, &q("1,2")).unwrap();
        assert!((v - 2f64.powf(1.5)).abs() < 1e-14);
        assert_eq!(mixed_norm_exact(&t2, &q("1,2")).unwrap().log2, rat(3, 2));
    }

    #[test]
    fn single_coefficient_collapses() {
        for c in [1i64, -3, 7] {
            let f = MultilinearForm::from_entries(vec![3, 2, 4], [(vec![1, 1, 1], c)]).unwrap();
            for s in ["1,2,2", "3/2,4/3,7/5", "2,2,2"] {
                let v = mixed_norm(&f, &q(s)).unwrap();
                assert!((v - c.abs() as f64).abs() < 1e-12, "{c} {s} {v}");
            }
        }
    }

    #[test]
    fn t3_matches_triple_loop() {
        let t3 = construct_t(3).unwrap();
        let qs = q("3/2,3/2,3/2");
        let p = 1.5f64;
        let mut outer = 0.0;
        for a in 1..=4 {
            let mut mid = 0.0;
            for b in 1..=4 {
                let mut inner = 0.0;
                for c in 1..=2 {
                    inner += (t3.coefficient(&[a, b, c]).unwrap() as f64).abs().powf(p);
                }
                mid += inner.powf(1.0);
            }
            outer += mid.powf(1.0);
        }
        let oracle = outer.powf(1.0 / p);
        let v = mixed_norm(&t3, &qs).unwrap();
        assert!(((v - oracle) / oracle).abs() < 1e-12);
        let exact = mixed_norm_exact(&t3, &qs).unwrap();
        assert_eq!(exact.log2, rat(8, 3));
        assert!(((exact.value() - v) / v).abs() < 1e-10);
    }

    #[test]
    fn l3_at_two_one_two() {
        let l3 = construct_l(3).unwrap();
        let qs = q("2,1,2");
        let exact = mixed_norm_exact(&l3, &qs).unwrap();
        assert_eq!(exact.log2, int(3));
        assert_eq!(exact, predicted_mixed_norm_l(3, &qs).unwrap());
        assert!((mixed_norm(&l3, &qs).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn predictions() {
        assert_eq!(
            predicted_mixed_norm_t(2, &q("1,2")).unwrap().log2,
            rat(3, 2)
        );
        assert_eq!(
            predicted_mixed_norm_t(3, &q("3/2,3/2,3/2")).unwrap().log2,
            rat(8, 3)
        );
        assert_eq!(predicted_mixed_norm_t(3, &q("1,2,2")).unwrap().log2, int(3));
        assert_eq!(predicted_mixed_norm_l(3, &q("2,1,2")).unwrap().log2, int(3));
        assert_eq!(
            predicted_mixed_norm_l(2, &q("1,2")).unwrap().log2,
            rat(3, 2)
        );
        let l4 = construct_l(4).unwrap();
        let qs = q("2,1,2,2");
        assert_eq!(
            predicted_mixed_norm_l(4, &qs).unwrap(),
            mixed_norm_exact(&l4, &qs).unwrap()
        );
        assert!(predicted_mixed_norm_t(3, &q("1,2")).is_err());
    }

    #[test]
    fn not_dyadic_is_reported() {
        let f = MultilinearForm::from_entries(vec![3], [(vec![1], 1), (vec![2], 1), (vec![3], 1)])
            .unwrap();
        assert!(matches!(
            mixed_norm_exact(&f, &q("1")),
            Err(Error::NotDyadic(_))
        ));
        let g = MultilinearForm::from_entries(vec![2], [(vec![1], 3)]).unwrap();
        assert!(matches!(
            mixed_norm_exact(&g, &q("1")),
            Err(Error::NotDyadic(_))
        ));
        let mixed = MultilinearForm::from_entries(vec![2], [(vec![1], 1), (vec![2], 2)]).unwrap();
        assert!(matches!(
            mixed_norm_exact(&mixed, &q("1")),
            Err(Error::NotDyadic(_))
        ));
        let zero = MultilinearForm::zero(vec![2, 2]).unwrap();
        assert!(mixed_norm_exact(&zero, &q("1,2")).is_err());
        assert_eq!(mixed_norm(&zero, &q("1,2")).unwrap(), 0.0);
    }

    #[test]
    fn arity_mismatch() {
        let t2 = construct_t(2).unwrap();
        assert!(matches!(
            mixed_norm(&t2, &q("1,2,2")),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn grid_points_are_admissible() {
        for m in 2..=5 {
            let g = equality_grid(m, 8);
            assert!(!g.is_empty());
            assert!(g
                .iter()
                .all(|v| v.len() == m && v.admissible(AdmissibilityMode::Equality)));
        }
        assert_eq!(equality_grid(2, 40).len(), 21);
    }

    #[test]
    fn dyadic_arithmetic() {
        let a = DyadicScalar::from_log2(rat(1, 2));
        assert_eq!(a.checked_add(&a).unwrap().log2, rat(3, 2));
        assert!(a.checked_add(&DyadicScalar::one()).is_err());
        assert_eq!(a.pow(&int(4)).log2, int(2));
        assert_eq!(DyadicScalar::from_integer(8).unwrap().log2, int(3));
        assert!(DyadicScalar::from_integer(6).is_none());
        assert_eq!(
            serde_json::to_string(&DyadicScalar::from_log2(int(3))).unwrap(),
            r#"{"log2":"3","value":8.0}"#
        );
    }

    #[test]
    fn lowering_one_exponent_never_decreases_norm() {
        for seed in 0..20 {
            let f = random_form(&[3, 2, 3], seed, Entries::Range { lo: -3, hi: 3 }).unwrap();
            let base = q("3/2,7/4,5/4");
            let v0 = mixed_norm(&f, &base).unwrap();
            for slot in 0..3 {
                let mut lower = base.as_slice().to_vec();
                lower[slot] = int(1);
                let v1 = mixed_norm(&f, &ExponentVector::new(lower).unwrap()).unwrap();
                assert!(v1 >= v0 * (1.0 - 1e-12), "seed {seed} slot {slot}");
            }
        }
    }
}
