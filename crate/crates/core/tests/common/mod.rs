//! Shared fixtures and naive reference implementations for the integration tests.
//!
//! The `naive_*` helpers work on plain coefficient vectors with schoolbook
//! algorithms so they share no code with the series module.
#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use sfunctions::numfield::rationals;
use sfunctions::series::Series;
use sfunctions::{make_field, FieldElem, NumberField, Rational};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

pub fn field(c: &[i64]) -> Arc<NumberField> {
    make_field(&ints(c)).unwrap()
}

pub fn sqrt_m3() -> Arc<NumberField> {
    field(&[3, 0, 1])
}

pub fn cubic7() -> Arc<NumberField> {
    field(&[-1, -2, 1, 1])
}

pub fn li(s: u32, order: usize) -> Series {
    Series::from_rational_fn(&rationals(), order, |k| Rational::new(1.into(), BigInt::from(k).pow(s)))
}

/// Normalized coefficient `a_k = k^s·c_k`.
pub fn normalized(v: &Series, k: usize, s: u32) -> FieldElem {
    v.coeff(k).scale_int(&BigInt::from(k).pow(s))
}

pub fn elem(k: &Arc<NumberField>, coords: &[i64]) -> FieldElem {
    let mut c: Vec<Rational> = coords.iter().map(|&x| q(x, 1)).collect();
    c.resize(k.degree(), q(0, 1));
    FieldElem::from_coords(k, &c).unwrap()
}

/// Coefficient vector of a series, `z^0 … z^N`.
pub fn coeff_vec(v: &Series) -> Vec<FieldElem> {
    (0..=v.order()).map(|k| v.coeff(k).clone()).collect()
}

pub fn from_vec(c: Vec<FieldElem>) -> Series {
    let constant = c[0].clone();
    Series::new(constant, c[1..].to_vec()).unwrap()
}

pub fn naive_mul(a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let n = a.len().min(b.len());
    let zero = FieldElem::zero(a[0].field());
    let mut out = vec![zero; n];
    for i in 0..n {
        for j in 0..n - i {
            out[i + j] = &out[i + j] + &(&a[i] * &b[j]);
        }
    }
    out
}

/// `outer(inner)` by Horner's rule.
pub fn naive_compose(outer: &[FieldElem], inner: &[FieldElem]) -> Vec<FieldElem> {
    let n = outer.len().min(inner.len());
    let k = outer[0].field().clone();
    let mut acc = vec![FieldElem::zero(&k); n];
    for c in outer[..n].iter().rev() {
        acc = naive_mul(&acc, &inner[..n]);
        acc[0] = &acc[0] + c;
    }
    acc
}

/// `1/a` by long division; `a[0]` must be invertible.
pub fn naive_inverse(a: &[FieldElem]) -> Vec<FieldElem> {
    let n = a.len();
    let inv0 = a[0].invert().unwrap();
    let mut out = vec![inv0.clone()];
    for k in 1..n {
        let mut s = FieldElem::zero(a[0].field());
        for j in 1..=k {
            s = &s + &(&a[j] * &out[k - j]);
        }
        out.push(-(&s * &inv0));
    }
    out
}

pub fn naive_pow(a: &[FieldElem], e: i64) -> Vec<FieldElem> {
    let base = if e < 0 { naive_inverse(a) } else { a.to_vec() };
    let mut acc = vec![FieldElem::zero(a[0].field()); a.len()];
    acc[0] = FieldElem::one(a[0].field());
    for _ in 0..e.unsigned_abs() {
        acc = naive_mul(&acc, &base);
    }
    acc
}

/// Compositional inverse by the fixed point `g ← (z - (f∘g - a_1·g))/a_1`.
pub fn naive_revert(f: &[FieldElem]) -> Vec<FieldElem> {
    let n = f.len();
    let k = f[0].field().clone();
    let inv1 = f[1].invert().unwrap();
    let mut g = vec![FieldElem::zero(&k); n];
    for _ in 0..n {
        let fg = naive_compose(f, &g);
        let mut next = vec![FieldElem::zero(&k); n];
        for j in 0..n {
            let lin = &f[1] * &g[j];
            let mut r = -(&fg[j] - &lin);
            if j == 1 {
                r = &r + &FieldElem::one(&k);
            }
            next[j] = &r * &inv1;
        }
        g = next;
    }
    g
}
