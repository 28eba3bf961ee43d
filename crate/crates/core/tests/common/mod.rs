#![allow(dead_code)]

use bellflow::{FormalSeries, Scalar};
use proptest::prelude::*;

pub fn c(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

/// `g(x) = r x - r x²`.
pub fn logistic(r: f64, n: usize) -> FormalSeries {
    let mut g = vec![0.0; n];
    g[0] = r;
    if n > 1 {
        g[1] = -2.0 * r;
    }
    FormalSeries::from_real_taylor(&g).unwrap()
}

pub fn relative(diff: f64, scale: f64) -> f64 {
    diff / scale.max(f64::MIN_POSITIVE)
}

/// |g_1| in [lo, hi] with random sign, remaining Taylor coefficients in [-1, 1].
pub fn series_with(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = FormalSeries> {
    (lo..hi, any::<bool>(), prop::collection::vec(-1.0..1.0f64, n - 1)).prop_map(|(g1, neg, rest)| {
        let mut g = vec![if neg { -g1 } else { g1 }];
        g.extend(rest);
        FormalSeries::from_real_taylor(&g).unwrap()
    })
}

/// g_1 in [0.2, 0.9] ∪ [1.1, 5].
pub fn contracting_or_expanding(n: usize) -> impl Strategy<Value = FormalSeries> {
    (prop_oneof![0.2..0.9f64, 1.1..5.0f64], prop::collection::vec(-1.0..1.0f64, n - 1)).prop_map(|(g1, rest)| {
        let mut g = vec![g1];
        g.extend(rest);
        FormalSeries::from_real_taylor(&g).unwrap()
    })
}

pub fn small_integer_series(n: usize) -> impl Strategy<Value = Vec<i64>> {
    (prop_oneof![-4..=-1i64, 1..=4i64], prop::collection::vec(-4..=4i64, n - 1)).prop_map(|(g1, rest)| {
        let mut g = vec![g1];
        g.extend(rest);
        g
    })
}

fn poly_mul(a: &[Scalar], b: &[Scalar], n: usize) -> Vec<Scalar> {
    // index j holds the coefficient of x^(j+1) for both factors; the
    // product starts at x^2 and is truncated at x^n
    let mut out = vec![c(0.0); n];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            let deg = i + j + 2;
            if deg <= n {
                out[deg - 1] += ai * bj;
            }
        }
    }
    out
}

/// `f(g(x))` by substituting the monomial polynomial of `g` into that of `f`.
pub fn substitution_oracle(f: &FormalSeries, g: &FormalSeries) -> FormalSeries {
    let n = f.order();
    let fm = f.monomial();
    let gm = g.monomial();
    let mut power = gm.clone();
    let mut acc = vec![c(0.0); n];
    for (k, &fk) in fm.iter().enumerate() {
        if k > 0 {
            power = poly_mul(&power, &gm, n);
        }
        for (a, &p) in acc.iter_mut().zip(&power) {
            *a += fk * p;
        }
    }
    FormalSeries::from_monomial(&acc).unwrap()
}
