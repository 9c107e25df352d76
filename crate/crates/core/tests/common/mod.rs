//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use littlewood::forms::MultilinearForm;

/// Mixed norm by explicit nested loops over the dense coefficient array.
pub fn dense_mixed_norm(form: &MultilinearForm, q: &[f64]) -> f64 {
    let mut idx = vec![1usize; form.arity()];
    let s = dense_level(form, q, &mut idx, 0);
    s.powf(1.0 / q[0])
}

// Returns Σ_{j_slot} (inner)^{q_slot / q_{slot+1}}, i.e. the level-`slot` sum
// before the final 1/q_slot root.
fn dense_level(form: &MultilinearForm, q: &[f64], idx: &mut Vec<usize>, slot: usize) -> f64 {
    let m = form.arity();
    let n = form.dims()[slot];
    let mut total = 0.0;
    for j in 1..=n {
        idx[slot] = j;
        total += if slot + 1 == m {
            (form.coefficient(idx).unwrap().abs() as f64).powf(q[slot])
        } else {
            dense_level(form, q, idx, slot + 1).powf(q[slot] / q[slot + 1])
        };
    }
    total
}

/// `‖U‖` by evaluating every sign vector of every slot.
pub fn brute_operator_norm(form: &MultilinearForm) -> i64 {
    let dims = form.dims().to_vec();
    let bits: usize = dims.iter().sum();
    assert!(bits <= 22, "oracle too large");
    let mut best = 0i128;
    for mask in 0u64..(1u64 << bits) {
        let mut args = Vec::with_capacity(dims.len());
        let mut b = 0;
        for &n in &dims {
            args.push(
                (0..n)
                    .map(|k| if mask >> (b + k) & 1 == 1 { -1 } else { 1 })
                    .collect::<Vec<i64>>(),
            );
            b += n;
        }
        best = best.max(form.evaluate_exact(&args).unwrap().abs());
    }
    best as i64
}

pub fn relative_error(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        ((got - want) / want).abs()
    }
}
