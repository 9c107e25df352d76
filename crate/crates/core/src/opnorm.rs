//! Sup norm of a real m-linear form over the unit balls of `ℓ∞`.
//!
//! For a multilinear form the supremum over the product of unit cubes is
//! attained at sign vectors. The last slot is optimized analytically:
//! for fixed signs `s^{(1)}, …, s^{(m-1)}`,
//!
//! ```text
//! max_{s^{(m)}} |U(s^{(1)}, …, s^{(m)})| = Σ_{j_m} |Σ_{j_1,…,j_{m-1}} c_j Π_k s^{(k)}_{j_k}|
//! ```
//!
//! so only the prefix slots are enumerated.

use std::env;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::MultilinearForm;
use crate::mixednorm::{mixed_norm, DyadicScalar, ExponentVector};
use crate::rational::to_f64;

/// Default budget for [`operator_norm`]: at most `2^24` sign prefixes.
pub const DEFAULT_PREFIX_BITS: usize = 24;
/// Default budget for [`operator_norm_full`]: at most `2^20` sign patterns.
pub const DEFAULT_FULL_BITS: usize = 20;
/// Environment variable overriding the prefix budget, either as an exponent
/// (`24`) or as a power of two (`16777216`).
pub const ENUM_BUDGET_ENV: &str = "LITTLEWOOD_MAX_ENUM";

/// Inclusive tolerance applied by [`verify_inequality`].
pub const INEQUALITY_SLACK: f64 = 1e-9;

/// Norm value together with sign vectors attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: i64,
    pub witness: Vec<Vec<i8>>,
}

impl NormResult {
    /// Witness as `f64` arguments for [`MultilinearForm::evaluate`].
    pub fn witness_f64(&self) -> Vec<Vec<f64>> {
        self.witness
            .iter()
            .map(|v| v.iter().map(|&s| s as f64).collect())
            .collect()
    }

    pub fn witness_i64(&self) -> Vec<Vec<i64>> {
        self.witness
            .iter()
            .map(|v| v.iter().map(|&s| s as i64).collect())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    /// `log2` of the largest sign-prefix space that may be enumerated.
    pub max_prefix_bits: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            max_prefix_bits: DEFAULT_PREFIX_BITS,
        }
    }
}

impl EnumOptions {
    /// Defaults, overridden by `LITTLEWOOD_MAX_ENUM` when it is set.
    pub fn from_env() -> Result<Self> {
        match env::var(ENUM_BUDGET_ENV) {
            Ok(raw) => Ok(EnumOptions {
                max_prefix_bits: parse_budget(&raw)?,
            }),
            Err(_) => Ok(Self::default()),
        }
    }
}

/// Accepts `"24"` (an exponent) or `"16777216"` (a power of two).
pub fn parse_budget(raw: &str) -> Result<usize> {
    let bad = || {
        Error::InvalidForm(format!(
            "{ENUM_BUDGET_ENV}={raw:?} is not a power-of-two budget"
        ))
    };
    let n: u64 = raw.trim().parse().map_err(|_| bad())?;
    if n <= 63 {
        Ok(n as usize)
    } else if n.is_power_of_two() {
        Ok(n.trailing_zeros() as usize)
    } else {
        Err(bad())
    }
}

/// One coefficient with its prefix coordinates packed into a bit mask.
struct PackedEntry {
    mask: u64,
    last: usize,
    coeff: i64,
}

/// Layout of prefix signs in one `u64`: slot 1 occupies the most significant
/// block and, inside a block, coordinate 1 is the most significant bit. A set
/// bit means `-1`. Increasing integers therefore enumerate sign prefixes
/// lexicographically with `+1 < -1`.
struct PrefixLayout {
    dims: Vec<usize>,
    /// Bit offset of coordinate 1 of each prefix slot.
    top_bit: Vec<usize>,
}

impl PrefixLayout {
    fn new(prefix_dims: &[usize]) -> Self {
        let bits: usize = prefix_dims.iter().sum();
        let mut top_bit = Vec::with_capacity(prefix_dims.len());
        let mut used = 0;
        for &n in prefix_dims {
            top_bit.push(bits - 1 - used);
            used += n;
        }
        PrefixLayout {
            dims: prefix_dims.to_vec(),
            top_bit,
        }
    }

    fn bit(&self, slot: usize, j: usize) -> u64 {
        1u64 << (self.top_bit[slot] - (j - 1))
    }

    /// Expands a counter over the free bits (every coordinate except the
    /// first of each slot) into a full prefix with those first bits clear.
    /// The map is strictly increasing.
    fn expand(&self, mut r: u64) -> u64 {
        let mut p = 0u64;
        for slot in (0..self.dims.len()).rev() {
            let free = self.dims[slot] - 1;
            let chunk = r & ((1u64 << free) - 1);
            r >>= free;
            p |= chunk << (self.top_bit[slot] + 1 - self.dims[slot]);
        }
        p
    }

    fn signs(&self, p: u64) -> Vec<Vec<i8>> {
        (0..self.dims.len())
            .map(|slot| {
                (1..=self.dims[slot])
                    .map(|j| if p & self.bit(slot, j) != 0 { -1 } else { 1 })
                    .collect()
            })
            .collect()
    }
}

fn pack(form: &MultilinearForm, layout: &PrefixLayout) -> Vec<PackedEntry> {
    let m = form.arity();
    form.entries()
        .map(|(idx, coeff)| PackedEntry {
            mask: (0..m - 1).fold(0u64, |acc, k| acc | layout.bit(k, idx[k])),
            last: idx[m - 1] - 1,
            coeff,
        })
        .collect()
}

fn inner_sums(entries: &[PackedEntry], p: u64, out: &mut [i64]) {
    out.iter_mut().for_each(|x| *x = 0);
    for e in entries {
        if (p & e.mask).count_ones() & 1 == 0 {
            out[e.last] += e.coeff;
        } else {
            out[e.last] -= e.coeff;
        }
    }
}

/// Best `(value, counter)` in `range`; ties keep the smallest counter.
fn best_in_range(
    entries: &[PackedEntry],
    layout: &PrefixLayout,
    last_dim: usize,
    range: std::ops::Range<u64>,
) -> (i64, u64) {
    let mut buf = vec![0i64; last_dim];
    let mut best = (-1i64, range.start);
    for r in range {
        inner_sums(entries, layout.expand(r), &mut buf);
        let v: i64 = buf.iter().map(|x| x.abs()).sum();
        if v > best.0 {
            best = (v, r);
        }
    }
    best
}

fn pick(a: (i64, u64), b: (i64, u64)) -> (i64, u64) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// Exact `‖U‖` with the default enumeration budget.
pub fn operator_norm(form: &MultilinearForm) -> Result<NormResult> {
    operator_norm_with(form, &EnumOptions::default())
}

/// Exact `‖U‖`: enumerates signs of slots `1..m-1` and optimizes slot `m`
/// analytically. The witness is the lexicographically smallest maximizing
/// prefix; last-slot signs follow the inner sums, with ties toward `+1`.
///
/// Flipping every sign of one prefix slot negates all inner sums and leaves
/// the value unchanged, so the first coordinate of each prefix slot is pinned
/// to `+1`; the smallest maximizer always has that shape.
pub fn operator_norm_with(form: &MultilinearForm, opts: &EnumOptions) -> Result<NormResult> {
    let m = form.arity();
    let prefix_dims = &form.dims()[..m - 1];
    let bits: usize = prefix_dims.iter().sum();
    if bits > opts.max_prefix_bits || bits > 63 {
        return Err(Error::EnumerationGuard {
            bits,
            limit_bits: opts.max_prefix_bits.min(63),
        });
    }
    let layout = PrefixLayout::new(prefix_dims);
    let entries = pack(form, &layout);
    let last_dim = form.dims()[m - 1];
    let free_bits = bits - prefix_dims.len();
    let total = 1u64 << free_bits;

    // Fixed chunking keeps the reduction independent of the worker count.
    let chunk = (total / 256).max(1 << 10).min(total);
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
    let (value, r) = starts
        .par_iter()
        .map(|&s| best_in_range(&entries, &layout, last_dim, s..(s + chunk).min(total)))
        .reduce(|| (-1, u64::MAX), pick);

    let p = layout.expand(r);
    let mut witness = layout.signs(p);
    let mut buf = vec![0i64; last_dim];
    inner_sums(&entries, p, &mut buf);
    witness.push(buf.iter().map(|&x| if x < 0 { -1 } else { 1 }).collect());
    Ok(NormResult { value, witness })
}

/// Brute-force `‖U‖` over all sign patterns in every slot; test oracle.
pub fn operator_norm_full(form: &MultilinearForm) -> Result<NormResult> {
    operator_norm_full_with(form, DEFAULT_FULL_BITS)
}

pub fn operator_norm_full_with(form: &MultilinearForm, max_bits: usize) -> Result<NormResult> {
    let bits: usize = form.dims().iter().sum();
    if bits > max_bits || bits > 63 {
        return Err(Error::EnumerationGuard {
            bits,
            limit_bits: max_bits.min(63),
        });
    }
    let signs_of = |mut p: u64| -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = Vec::with_capacity(form.arity());
        for &n in form.dims().iter().rev() {
            let mut v = vec![0i64; n];
            for j in (0..n).rev() {
                v[j] = if p & 1 == 1 { -1 } else { 1 };
                p >>= 1;
            }
            out.push(v);
        }
        out.reverse();
        out
    };
    let (value, p) = (0..1u64 << bits)
        .into_par_iter()
        .map(|p| {
            let v = form.evaluate_exact(&signs_of(p)).expect("shapes match");
            (v.unsigned_abs() as i64, p)
        })
        .reduce(|| (-1, u64::MAX), pick);
    let witness = signs_of(p)
        .into_iter()
        .map(|v| v.into_iter().map(|s| s as i8).collect())
        .collect();
    Ok(NormResult { value, witness })
}

/// Outcome of checking `mixed_norm(U, q) ≤ 2^bound · ‖U‖`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub mixed_norm: f64,
    pub operator_norm: i64,
    pub ratio: f64,
    pub bound: f64,
    pub holds: bool,
}

pub fn verify_inequality(
    form: &MultilinearForm,
    q: &ExponentVector,
    bound: &DyadicScalar,
) -> Result<InequalityReport> {
    verify_inequality_with(form, q, bound, &EnumOptions::default())
}

pub fn verify_inequality_with(
    form: &MultilinearForm,
    q: &ExponentVector,
    bound: &DyadicScalar,
    opts: &EnumOptions,
) -> Result<InequalityReport> {
    let norm = operator_norm_with(form, opts)?;
    if norm.value == 0 {
        return Err(Error::ZeroNorm);
    }
    let mn = mixed_norm(form, q)?;
    let ratio = mn / norm.value as f64;
    let b = to_f64(&bound.log2).exp2();
    Ok(InequalityReport {
        mixed_norm: mn,
        operator_norm: norm.value,
        ratio,
        bound: b,
        holds: ratio <= b + INEQUALITY_SLACK,
    })
}
