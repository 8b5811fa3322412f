//! Generators and tables: cyclotomic (abelian) s-functions, logarithms of
//! polynomials, framed polylogarithm multiplicities, and binomial congruences.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::linalg::{solve, SolveError};
use crate::numfield::{make_field, rationals, FieldElem, NumberField, Rational};
use crate::series::Series;

/// `x = Σ c_i ζ_N^i` together with the weight `s` of the generated series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicSpec {
    pub conductor: u64,
    pub coeffs: BTreeMap<u64, Rational>,
    pub s: u32,
}

impl CyclotomicSpec {
    pub fn new(conductor: u64, coeffs: BTreeMap<u64, Rational>, s: u32) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::BadConductor("conductor must be at least 1".into()));
        }
        if let Some(i) = coeffs.keys().find(|&&i| i >= conductor) {
            return Err(Error::BadConductor(format!("index {i} is not below conductor {conductor}")));
        }
        Ok(CyclotomicSpec { conductor, coeffs, s })
    }
}

/// Exact division of integer polynomials (low-to-high coefficients) by a monic divisor.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

/// `Φ_N`, as coefficients `c_0 … c_φ(N)`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in arith::divisors(n) {
        if d < n {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// `ℚ(ζ_N) = ℚ[y]/Φ_N(y)`.
pub fn cyclotomic_field(n: u64) -> Result<Arc<NumberField>> {
    if n == 0 {
        return Err(Error::BadConductor("conductor must be at least 1".into()));
    }
    make_field(&cyclotomic_polynomial(n))
}

/// `ζ_N^j` for `j = 0 … N-1`.
fn zeta_powers(field: &Arc<NumberField>, n: u64) -> Vec<FieldElem> {
    let zeta = FieldElem::generator(field);
    let mut out = Vec::with_capacity(n as usize);
    let mut acc = FieldElem::one(field);
    for _ in 0..n {
        out.push(acc.clone());
        acc = &acc * &zeta;
    }
    out
}

/// `x = Σ c_i ζ^i` in the cyclotomic field.
pub fn cyclotomic_element(spec: &CyclotomicSpec, field: &Arc<NumberField>) -> FieldElem {
    let zp = zeta_powers(field, spec.conductor);
    spec.coeffs
        .iter()
        .fold(FieldElem::zero(field), |acc, (&i, c)| &acc + &zp[i as usize].scale(c))
}

/// `Σ_i c_i·Li_s(ζ^i z)` over `ℚ(ζ_N)`: raw coefficients `(Σ_i c_i ζ^(ik))/k^s`.
pub fn abelian_generator(spec: &CyclotomicSpec, order: usize) -> Result<Series> {
    let spec = CyclotomicSpec::new(spec.conductor, spec.coeffs.clone(), spec.s)?;
    let field = cyclotomic_field(spec.conductor)?;
    let zp = zeta_powers(&field, spec.conductor);
    let n = spec.conductor;
    Ok(Series::from_fn(&field, order, |k| {
        let a = spec.coeffs.iter().fold(FieldElem::zero(&field), |acc, (&i, c)| {
            &acc + &zp[((i * k as u64) % n) as usize].scale(c)
        });
        a.div_int(&BigInt::from(k).pow(spec.s))
    }))
}

/// Rewrites every coefficient of a series over `ℚ(ζ_N)` in the power basis of
/// `x ∈ ℚ(ζ_N)`, where `x` is a root of the minimal polynomial of `target`.
pub fn descend(v: &Series, target: &Arc<NumberField>, x: &FieldElem) -> Result<Series> {
    if !x.same_field(v.const_term()) {
        return Err(Error::FieldMismatch);
    }
    let src = v.field();
    let minpoly: Vec<FieldElem> = target.minpoly().iter().map(|c| FieldElem::from_int(src, c.clone())).collect();
    if !x.eval_poly(&minpoly).is_zero() {
        return Err(Error::DescentFailed("x is not a root of the target minimal polynomial".into()));
    }
    let d = target.degree();
    let dim = src.degree();
    let mut basis = Vec::with_capacity(d);
    let mut acc = FieldElem::one(src);
    for _ in 0..d {
        basis.push(acc.coords());
        acc = &acc * x;
    }
    // rows: source coordinates, columns: powers of x
    let a: Vec<Vec<Rational>> = (0..dim).map(|r| basis.iter().map(|b| b[r].clone()).collect()).collect();
    let mut out = Series::zero(target, v.order());
    for k in 0..=v.order() {
        let c = v.coeff(k);
        if c.is_zero() {
            continue;
        }
        let u = solve(&a, &c.coords()).map_err(|e| match e {
            SolveError::Singular => Error::DescentFailed("powers of x are linearly dependent".into()),
            SolveError::Inconsistent => Error::DescentFailed(format!("coefficient of z^{k} is outside the subfield")),
        })?;
        out.set_coeff(k, FieldElem::from_coords(target, &u)?);
    }
    Ok(out)
}

/// The series `V` with `δ^(s-1) V = -log Q(z)`, for `Q = q_0 + q_1 z + …` with `q_0 = 1`.
pub fn from_log_poly(field: &Arc<NumberField>, q: &[FieldElem], s: u32, order: usize) -> Result<Series> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be positive".into()));
    }
    match q.first() {
        Some(c) if c.is_one() => {}
        _ => return Err(Error::BadConstant),
    }
    let mut poly = Series::zero(field, order);
    for (i, c) in q.iter().enumerate().take(order + 1) {
        if !c.same_field_as(field) {
            return Err(Error::FieldMismatch);
        }
        poly.set_coeff(i, c.clone());
    }
    let mut v = -poly.log()?;
    for _ in 1..s {
        v = v.dint()?;
    }
    Ok(v)
}

/// Multiplicities `N_d^(f)` of the framed trilogarithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedPolylogTable {
    pub ds: Vec<u64>,
    pub fs: Vec<i64>,
    /// `entries[i][j]` is `N_{ds[i]}^(fs[j])`.
    pub entries: Vec<Vec<Rational>>,
}

/// `log Y_f` as a series in `z_f`, where `z_f = z/(z-1)^f` and `z = (-1)^f·z_f·Y_f`.
pub fn framed_log_unit(f: i64, order: usize) -> Result<Series> {
    let q = rationals();
    let n = order + 1;
    let z = Series::var(&q, n);
    let zm1 = &z - &Series::one(&q, n);
    let zf = &z * &zm1.power(-f)?;
    let back = zf.revert()?;
    let sign = if f.rem_euclid(2) == 0 { BigInt::one() } else { -BigInt::one() };
    let mut y = Series::zero(&q, order);
    for k in 0..=order {
        y.set_coeff(k, back.coeff(k + 1).scale_int(&sign));
    }
    y.log()
}

/// `N_1 … N_D` for one framing parameter, by Möbius inversion of `k³·g_k = Σ_{d|k} d³·N_d`
/// where `g_k` are the coefficients of `∫d ∫d log Y_f`.
pub fn framed_multiplicities(f: i64, dmax: usize) -> Result<Vec<Rational>> {
    let g = framed_log_unit(f, dmax)?.dint()?.dint()?;
    let gk = |k: u64| g.coeff(k as usize).as_rational().expect("rational series");
    Ok((1..=dmax as u64)
        .map(|k| {
            let sum = arith::divisors(k).into_iter().fold(Rational::zero(), |acc, d| {
                let mu = arith::mobius(k / d);
                if mu == 0 {
                    acc
                } else {
                    acc + gk(d) * Rational::from_integer(BigInt::from(mu) * BigInt::from(d).pow(3))
                }
            });
            sum / Rational::from_integer(BigInt::from(k).pow(3))
        })
        .collect())
}

pub fn polylog_frame_table(fs: &[i64], ds: &[u64]) -> Result<FramedPolylogTable> {
    if ds.contains(&0) {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let dmax = ds.iter().copied().max().unwrap_or(0) as usize;
    let cols: Vec<Vec<Rational>> = fs.par_iter().map(|&f| framed_multiplicities(f, dmax)).collect::<Result<_>>()?;
    let entries = ds
        .iter()
        .map(|&d| cols.iter().map(|col| col[d as usize - 1].clone()).collect())
        .collect();
    Ok(FramedPolylogTable { ds: ds.to_vec(), fs: fs.to_vec(), entries })
}

pub fn rational_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl FramedPolylogTable {
    pub fn get(&self, d: u64, f: i64) -> Option<&Rational> {
        let i = self.ds.iter().position(|&x| x == d)?;
        let j = self.fs.iter().position(|&x| x == f)?;
        Some(&self.entries[i][j])
    }

    /// Entries with `f ≠ 0` for which `6·N_d^(f)/f` is not an integer.
    pub fn six_n_over_f_exceptions(&self) -> Vec<(u64, i64, Rational)> {
        let mut out = Vec::new();
        for (i, &d) in self.ds.iter().enumerate() {
            for (j, &f) in self.fs.iter().enumerate() {
                if f == 0 {
                    continue;
                }
                let q = &self.entries[i][j] * Rational::new(6.into(), f.into());
                if !q.is_integer() {
                    out.push((d, f, q));
                }
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("d");
        for f in &self.fs {
            let _ = write!(out, ",{f}");
        }
        out.push('\n');
        for (d, row) in self.ds.iter().zip(&self.entries) {
            let _ = write!(out, "{d}");
            for q in row {
                let _ = write!(out, ",{}", rational_string(q));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "d": self.ds,
            "f": self.fs,
            "entries": self.entries.iter()
                .map(|row| row.iter().map(rational_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JkEntry {
    pub k: u64,
    pub f: u64,
    pub alpha: u32,
    pub required: u32,
    /// `None` when the two binomials coincide.
    pub valuation: Option<u64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JkReport {
    pub p: u64,
    pub pass: bool,
    pub entries: Vec<JkEntry>,
}

/// `binom(pkf, pk) ≡ binom(kf, k) (mod p^(3(α+1)))` with `α = ord_p(k)`, for all
/// `1 ≤ k ≤ k_max`, `1 ≤ f ≤ f_max`.
pub fn jk_check(p: u64, k_max: u64, f_max: u64) -> Result<JkReport> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p <= 3 {
        return Err(Error::SmallPrime(p));
    }
    let pairs: Vec<(u64, u64)> = (1..=k_max).flat_map(|k| (1..=f_max).map(move |f| (k, f))).collect();
    let entries: Vec<JkEntry> = pairs
        .par_iter()
        .map(|&(k, f)| {
            let alpha = arith::ord_p(k, p);
            let required = 3 * (alpha + 1);
            let diff = arith::to_signed(arith::binomial(p * k * f, p * k)) - arith::to_signed(arith::binomial(k * f, k));
            let valuation = arith::val_p(&diff, p);
            let pass = valuation.is_none_or(|v| v >= required as u64);
            JkEntry { k, f, alpha, required, valuation, pass }
        })
        .collect();
    let pass = entries.iter().all(|e| e.pass);
    Ok(JkReport { p, pass, entries })
}

/// Parses a coefficient map `{"i": "c_i", …}` or a list `["c_0", "c_1", …]`.
pub fn parse_cyclotomic_coeffs(v: &serde_json::Value) -> Result<BTreeMap<u64, Rational>> {
    let parse_q = |s: &serde_json::Value| -> Result<Rational> {
        match s {
            serde_json::Value::String(s) => crate::json::parse_rational(s),
            serde_json::Value::Number(n) => crate::json::parse_rational(&n.to_string()),
            _ => Err(Error::Parse("expected a rational".into())),
        }
    };
    let mut out = BTreeMap::new();
    match v {
        serde_json::Value::Object(m) => {
            for (k, c) in m {
                let i = k.parse::<u64>().map_err(|_| Error::Parse(format!("bad index {k:?}")))?;
                let q = parse_q(c)?;
                if !q.is_zero() {
                    out.insert(i, q);
                }
            }
        }
        serde_json::Value::Array(a) => {
            for (i, c) in a.iter().enumerate() {
                let q = parse_q(c)?;
                if !q.is_zero() {
                    out.insert(i as u64, q);
                }
            }
        }
        _ => return Err(Error::Parse("coefficients must be an object or an array".into())),
    }
    Ok(out)
}
