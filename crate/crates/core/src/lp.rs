//! Exact feasibility LP: find `x ≥ 0` with `A x = b` by a Phase-I simplex over
//! rationals. Bland's rule picks entering and leaving variables, so the
//! iteration never cycles.

use num::{Signed, Zero};

use crate::rational::Rational;

/// A nonnegative solution of `A x = b`, or `None` when the system is infeasible.
/// `a` is row-major with every row of the same length.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "row count");
    let n = a.first().map_or(0, Vec::len);
    if rows == 0 {
        return Some(vec![Rational::zero(); n]);
    }
    let width = n + rows + 1;
    let rhs = width - 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let flip = bi.is_negative();
        let mut r: Vec<Rational> = row
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        r.extend((0..rows).map(|k| {
            if k == i {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        }));
        r.push(if flip { -bi.clone() } else { bi.clone() });
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + rows).collect();

    // Reduced costs of the Phase-I objective Σ artificials.
    let mut obj = vec![Rational::zero(); width];
    for j in (0..n).chain(std::iter::once(rhs)) {
        obj[j] = -t.iter().map(|r| r[j].clone()).sum::<Rational>();
    }

    while let Some(enter) = (0..n + rows).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, r) in t.iter().enumerate() {
            if !r[enter].is_positive() {
                continue;
            }
            let ratio = &r[rhs] / &r[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase I is bounded below by zero, so an entering column always has a pivot.
        let (p, _) = leave.expect("bounded phase-one objective");
        let pivot = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v /= &pivot;
        }
        let prow = t[p].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i == p || r[enter].is_zero() {
                continue;
            }
            let f = r[enter].clone();
            for (v, pv) in r.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (v, pv) in obj.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
        basis[p] = enter;
    }

    if !obj[rhs].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][rhs].clone();
        }
    }
    Some(x)
}
