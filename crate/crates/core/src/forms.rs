//! Real m-linear forms on finite-dimensional sup-norm spaces, stored as sparse
//! integer coefficient tensors, and the two recursively defined extremal
//! families `T_m` and `L_m`.
//!
//! A form `U` on `ℓ∞^{n_1} × … × ℓ∞^{n_m}` is determined by its values on basis
//! vectors, `U(e_{j_1}, …, e_{j_m})`. Indices are 1-based throughout.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Smallest and largest arity accepted by the extremal-form constructors.
pub const MIN_EXTREMAL_ARITY: usize = 2;
pub const MAX_EXTREMAL_ARITY: usize = 8;

/// Dense-size cap for [`random_form`].
pub const MAX_RANDOM_ENTRIES: u128 = 1_000_000;

/// A tuple `(j_1, …, j_m)` of 1-based coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>) -> Self {
        MultiIndex(indices)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check(&self, dims: &[usize]) -> Result<()> {
        let ok =
            self.0.len() == dims.len() && self.0.iter().zip(dims).all(|(&j, &n)| j >= 1 && j <= n);
        if ok {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: self.0.clone(),
                dims: dims.to_vec(),
            })
        }
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, j) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, ")")
    }
}

/// The backward shift `B^amount` applied to the argument in `slot` (1-based).
///
/// On basis vectors `B^s e_j = e_{j-s}` for `j > s` and `0` otherwise, so a
/// form composed with shifts has its coefficients moved `s` places up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftSpec {
    pub slot: usize,
    pub amount: usize,
}

/// Domain used by the extremal constructors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Domain {
    /// Smallest per-slot dimensions that still carry the whole support.
    #[default]
    Reduced,
    /// `2^{m-1}` coordinates in every slot.
    Full,
}

/// An m-linear form with exact integer coefficients. Zero coefficients are
/// never stored; arity and dims are fixed at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearForm {
    dims: Vec<usize>,
    coeffs: BTreeMap<MultiIndex, i64>,
}

impl MultilinearForm {
    /// The zero form on the given dims.
    pub fn zero(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidForm("arity must be at least 1".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidForm(format!("zero dimension in {dims:?}")));
        }
        Ok(MultilinearForm {
            dims,
            coeffs: BTreeMap::new(),
        })
    }

    /// Builds a form from `(index, coefficient)` pairs. Zero coefficients are
    /// dropped; a repeated index is rejected.
    pub fn from_entries<I>(dims: Vec<usize>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, i64)>,
    {
        let mut form = Self::zero(dims)?;
        for (idx, c) in entries {
            let idx = MultiIndex(idx);
            idx.check(&form.dims)?;
            if form.coeffs.contains_key(&idx) {
                return Err(Error::InvalidForm(format!("duplicate index {idx}")));
            }
            if c != 0 {
                form.coeffs.insert(idx, c);
            }
        }
        Ok(form)
    }

    pub fn arity(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of stored (nonzero) coefficients.
    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    /// Stored coefficients in lexicographic index order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], i64)> + '_ {
        self.coeffs.iter().map(|(k, &c)| (k.as_slice(), c))
    }

    pub fn coefficient(&self, idx: &[usize]) -> Result<i64> {
        let key = MultiIndex(idx.to_vec());
        key.check(&self.dims)?;
        Ok(self.coeffs.get(&key).copied().unwrap_or(0))
    }

    /// True when every stored coefficient is `+1` or `-1`.
    pub fn is_sign_form(&self) -> bool {
        self.coeffs.values().all(|&c| c == 1 || c == -1)
    }

    pub fn max_abs_coefficient(&self) -> i64 {
        self.coeffs.values().map(|c| c.abs()).max().unwrap_or(0)
    }

    fn check_args<T>(&self, args: &[Vec<T>]) -> Result<()> {
        if args.len() != self.arity() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} arguments, got {}",
                self.arity(),
                args.len()
            )));
        }
        for (k, (a, &n)) in args.iter().zip(&self.dims).enumerate() {
            if a.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "slot {} expects length {n}, got {}",
                    k + 1,
                    a.len()
                )));
            }
        }
        Ok(())
    }

    /// `U(x^{(1)}, …, x^{(m)}) = Σ c_j Π_k x^{(k)}_{j_k}`.
    pub fn evaluate(&self, args: &[Vec<f64>]) -> Result<f64> {
        self.check_args(args)?;
        Ok(self
            .coeffs
            .iter()
            .map(|(idx, &c)| {
                idx.0
                    .iter()
                    .enumerate()
                    .fold(c as f64, |acc, (k, &j)| acc * args[k][j - 1])
            })
            .sum())
    }

    /// Integer evaluation; exact as long as the result fits in `i128`.
    pub fn evaluate_exact(&self, args: &[Vec<i64>]) -> Result<i128> {
        self.check_args(args)?;
        Ok(self
            .coeffs
            .iter()
            .map(|(idx, &c)| {
                idx.0
                    .iter()
                    .enumerate()
                    .fold(c as i128, |acc, (k, &j)| acc * args[k][j - 1] as i128)
            })
            .sum())
    }

    /// The form `x ↦ self(B^{s_1} x^{(1)}, …, B^{s_m} x^{(m)})` on `dims`.
    ///
    /// Coefficient `c_j` moves to `j + s`; coefficients that land outside the
    /// new dims are dropped (finite section of the shifted argument).
    pub fn compose_shifts(&self, shifts: &[ShiftSpec], dims: Vec<usize>) -> Result<Self> {
        if dims.len() != self.arity() {
            return Err(Error::DimensionMismatch(format!(
                "new dims {dims:?} have wrong arity for a {}-linear form",
                self.arity()
            )));
        }
        let mut offset = vec![0usize; self.arity()];
        for s in shifts {
            if s.slot == 0 || s.slot > self.arity() {
                return Err(Error::IndexOutOfRange {
                    index: vec![s.slot],
                    dims: vec![self.arity()],
                });
            }
            offset[s.slot - 1] += s.amount;
        }
        let mut out = Self::zero(dims)?;
        for (idx, &c) in &self.coeffs {
            let moved: Vec<usize> = idx.0.iter().zip(&offset).map(|(j, s)| j + s).collect();
            if moved.iter().zip(&out.dims).all(|(&j, &n)| j <= n) {
                out.coeffs.insert(MultiIndex(moved), c);
            }
        }
        Ok(out)
    }

    /// Same coefficients on new dims. Fails if the support does not fit.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        let out = self.compose_shifts(&[], dims)?;
        if out.nnz() != self.nnz() {
            return Err(Error::InvalidForm(format!(
                "support does not fit inside dims {:?}",
                out.dims
            )));
        }
        Ok(out)
    }

    /// Reorders slots: slot `k` of the result is slot `perm[k]` of `self` (0-based).
    pub fn permute_slots(&self, perm: &[usize]) -> Result<Self> {
        let m = self.arity();
        let mut seen = vec![false; m];
        if perm.len() != m
            || perm
                .iter()
                .any(|&p| p >= m || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidForm(format!(
                "{perm:?} is not a permutation of 0..{m}"
            )));
        }
        let dims = perm.iter().map(|&p| self.dims[p]).collect();
        let coeffs = self
            .coeffs
            .iter()
            .map(|(idx, &c)| (MultiIndex(perm.iter().map(|&p| idx.0[p]).collect()), c))
            .collect();
        Ok(MultilinearForm { dims, coeffs })
    }

    pub fn scaled(&self, factor: i64) -> Self {
        let coeffs = if factor == 0 {
            BTreeMap::new()
        } else {
            self.coeffs
                .iter()
                .map(|(k, &c)| (k.clone(), c * factor))
                .collect()
        };
        MultilinearForm {
            dims: self.dims.clone(),
            coeffs,
        }
    }

    /// Inserts a coefficient that must not already be present.
    fn insert_fresh(&mut self, idx: Vec<usize>, c: i64) -> Result<()> {
        let key = MultiIndex(idx);
        debug_assert!(key.check(&self.dims).is_ok());
        if self.coeffs.insert(key.clone(), c).is_some() {
            return Err(Error::Internal(format!(
                "recursion branches overlap at {key}"
            )));
        }
        Ok(())
    }

    /// Canonical JSON: `{"arity":m,"dims":[…],"entries":[[j_1,…,j_m,c],…]}`
    /// with entries in lexicographic index order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("form serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidForm(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct FormRepr {
    arity: usize,
    dims: Vec<usize>,
    entries: Vec<Vec<i64>>,
}

impl Serialize for MultilinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self
            .coeffs
            .iter()
            .map(|(idx, &c)| {
                let mut row: Vec<i64> = idx.0.iter().map(|&j| j as i64).collect();
                row.push(c);
                row
            })
            .collect();
        FormRepr {
            arity: self.arity(),
            dims: self.dims.clone(),
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultilinearForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = FormRepr::deserialize(d)?;
        if repr.arity != repr.dims.len() {
            return Err(D::Error::custom(format!(
                "arity {} does not match dims {:?}",
                repr.arity, repr.dims
            )));
        }
        let mut entries = Vec::with_capacity(repr.entries.len());
        for row in repr.entries {
            if row.len() != repr.arity + 1 {
                return Err(D::Error::custom(format!(
                    "entry {row:?} must have {} fields",
                    repr.arity + 1
                )));
            }
            let (idx, c) = row.split_at(repr.arity);
            if idx.iter().any(|&j| j < 1) {
                return Err(D::Error::custom(format!("non-positive index in {row:?}")));
            }
            entries.push((idx.iter().map(|&j| j as usize).collect(), c[0]));
        }
        MultilinearForm::from_entries(repr.dims, entries).map_err(D::Error::custom)
    }
}

fn check_extremal_arity(m: usize) -> Result<()> {
    if (MIN_EXTREMAL_ARITY..=MAX_EXTREMAL_ARITY).contains(&m) {
        Ok(())
    } else {
        Err(Error::ArityOutOfRange {
            arity: m,
            min: MIN_EXTREMAL_ARITY,
            max: MAX_EXTREMAL_ARITY,
        })
    }
}

fn t2() -> MultilinearForm {
    MultilinearForm::from_entries(
        vec![2, 2],
        [
            (vec![1, 1], 1),
            (vec![1, 2], 1),
            (vec![2, 1], 1),
            (vec![2, 2], -1),
        ],
    )
    .expect("T_2 literal is valid")
}

/// Reduced dims of `T_m`: `(2^{m-1}, 2^{m-1}, 2^{m-2}, …, 4, 2)`.
pub fn t_dims(m: usize, domain: Domain) -> Vec<usize> {
    match domain {
        Domain::Full => vec![1 << (m - 1); m],
        Domain::Reduced => (1..=m)
            .map(|k| {
                if k <= 2 {
                    1 << (m - 1)
                } else {
                    1 << (m - k + 1)
                }
            })
            .collect(),
    }
}

/// Reduced dims of `L_m` (m ≥ 3): `(2, 2^{m-1}, 2^{m-1}, 2^{m-2}, …, 4)`.
pub fn l_dims(m: usize, domain: Domain) -> Vec<usize> {
    if m == 2 {
        return t_dims(2, domain);
    }
    match domain {
        Domain::Full => vec![1 << (m - 1); m],
        Domain::Reduced => (1..=m)
            .map(|k| match k {
                1 => 2,
                2 | 3 => 1 << (m - 1),
                _ => 1 << (m - k + 2),
            })
            .collect(),
    }
}

/// Appends a two-coordinate factor `(y_1 ± y_2)` to every coefficient of
/// `inner` and `shifted`, at the end (`leading = false`) or the front.
fn combine_branches(
    dims: Vec<usize>,
    inner: &MultilinearForm,
    shifted: &MultilinearForm,
    leading: bool,
) -> Result<MultilinearForm> {
    let mut out = MultilinearForm::zero(dims)?;
    let place = |idx: &[usize], j: usize| -> Vec<usize> {
        let mut v = Vec::with_capacity(idx.len() + 1);
        if leading {
            v.push(j);
            v.extend_from_slice(idx);
        } else {
            v.extend_from_slice(idx);
            v.push(j);
        }
        v
    };
    for (idx, c) in inner.entries() {
        out.insert_fresh(place(idx, 1), c)?;
        out.insert_fresh(place(idx, 2), c)?;
    }
    for (idx, c) in shifted.entries() {
        out.insert_fresh(place(idx, 1), c)?;
        out.insert_fresh(place(idx, 2), -c)?;
    }
    let expected = 2 * (inner.nnz() + shifted.nnz());
    if out.nnz() != expected {
        return Err(Error::Internal(format!(
            "expected {expected} coefficients, built {}",
            out.nnz()
        )));
    }
    Ok(out)
}

fn build_t(m: usize, domain: Domain) -> Result<MultilinearForm> {
    if m == 2 {
        return Ok(t2());
    }
    let prev = build_t(m - 1, domain)?;
    let dims = t_dims(m, domain);
    let head = dims[..m - 1].to_vec();
    // Slots 1 and 2 shift by 2^{m-2}; slot k ≥ 3 by 2^{m-k}.
    let shifts: Vec<ShiftSpec> = (1..m)
        .map(|k| ShiftSpec {
            slot: k,
            amount: if k <= 2 { 1 << (m - 2) } else { 1 << (m - k) },
        })
        .collect();
    let inner = prev.with_dims(head.clone())?;
    let shifted = prev.compose_shifts(&shifts, head)?;
    if shifted.nnz() != prev.nnz() {
        return Err(Error::Internal(format!(
            "shifted branch of T_{m} left its domain"
        )));
    }
    combine_branches(dims, &inner, &shifted, false)
}

/// The extremal form `T_m`, `2 ≤ m ≤ 8`, on its reduced domain.
///
/// `T_m(x) = (x^{(m)}_1 + x^{(m)}_2) T_{m-1}(x^{(1)},…,x^{(m-1)})
///         + (x^{(m)}_1 − x^{(m)}_2) T_{m-1}(B^{2^{m-2}}x^{(1)}, B^{2^{m-2}}x^{(2)}, B^{2^{m-3}}x^{(3)}, …, B^2 x^{(m-1)})`.
pub fn construct_t(m: usize) -> Result<MultilinearForm> {
    construct_t_on(m, Domain::Reduced)
}

pub fn construct_t_on(m: usize, domain: Domain) -> Result<MultilinearForm> {
    check_extremal_arity(m)?;
    let t = build_t(m, domain)?;
    if domain == Domain::Full {
        return t.with_dims(t_dims(m, Domain::Full));
    }
    Ok(t)
}

/// The extremal form `L_m`, `2 ≤ m ≤ 8`, on its reduced domain. `L_2 = T_2`;
/// for `m ≥ 3` the `(x_1 ± x_2)` factor sits in the first slot and the shifted
/// copy of `T_{m-1}` uses `B^{2^{m-2}}` on slots 2 and 3 and `B^{2^{m-k+1}}` on slot `k ≥ 4`.
pub fn construct_l(m: usize) -> Result<MultilinearForm> {
    construct_l_on(m, Domain::Reduced)
}

pub fn construct_l_on(m: usize, domain: Domain) -> Result<MultilinearForm> {
    check_extremal_arity(m)?;
    if m == 2 {
        return construct_t_on(2, domain);
    }
    let prev = build_t(m - 1, Domain::Reduced)?;
    let dims = l_dims(m, domain);
    let tail = dims[1..].to_vec();
    // Slot k of T_{m-1} feeds slot k+1 of L_m.
    let shifts: Vec<ShiftSpec> = (1..m)
        .map(|k| ShiftSpec {
            slot: k,
            amount: if k <= 2 { 1 << (m - 2) } else { 1 << (m - k) },
        })
        .collect();
    let inner = prev.with_dims(tail.clone())?;
    let shifted = prev.compose_shifts(&shifts, tail)?;
    if shifted.nnz() != prev.nnz() {
        return Err(Error::Internal(format!(
            "shifted branch of L_{m} left its domain"
        )));
    }
    combine_branches(dims, &inner, &shifted, true)
}

/// Entry distribution for [`random_form`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entries {
    /// Every coefficient is `+1` or `-1`.
    Signs,
    /// Uniform integers in `lo..=hi`; zeros are not stored.
    Range { lo: i64, hi: i64 },
}

/// A reproducible dense pseudo-random form: the same seed gives the same form
/// on every platform.
pub fn random_form(dims: &[usize], seed: u64, entries: Entries) -> Result<MultilinearForm> {
    let size: u128 = dims.iter().map(|&n| n as u128).product();
    if size > MAX_RANDOM_ENTRIES {
        return Err(Error::SizeGuard {
            what: "dense random form entries",
            size,
            limit: MAX_RANDOM_ENTRIES,
        });
    }
    if let Entries::Range { lo, hi } = entries {
        if lo > hi {
            return Err(Error::InvalidForm(format!("empty range {lo}..={hi}")));
        }
    }
    let mut form = MultilinearForm::zero(dims.to_vec())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = vec![1usize; dims.len()];
    loop {
        let c = match entries {
            Entries::Signs => {
                if rng.gen::<bool>() {
                    1
                } else {
                    -1
                }
            }
            Entries::Range { lo, hi } => rng.gen_range(lo..=hi),
        };
        if c != 0 {
            form.coeffs.insert(MultiIndex(idx.clone()), c);
        }
        // Advance the odometer, last slot fastest.
        let mut k = dims.len();
        loop {
            if k == 0 {
                return Ok(form);
            }
            k -= 1;
            if idx[k] < dims[k] {
                idx[k] += 1;
                break;
            }
            idx[k] = 1;
        }
    }
}
