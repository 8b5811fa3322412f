//! Truncated power series in one variable over a number field.
//!
//! A [`Series`] of order `N` knows its coefficients at `z^0 … z^N` exactly and
//! nothing beyond. Binary operations truncate to the smaller order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numfield::{FieldElem, NumberField, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    field: Arc<NumberField>,
    // coefficient of z^k at index k, k = 0..=order
    coeffs: Vec<FieldElem>,
}

impl Series {
    pub fn zero(field: &Arc<NumberField>, order: usize) -> Self {
        Series { field: field.clone(), coeffs: vec![FieldElem::zero(field); order + 1] }
    }

    pub fn one(field: &Arc<NumberField>, order: usize) -> Self {
        Self::constant(FieldElem::one(field), order)
    }

    pub fn constant(c: FieldElem, order: usize) -> Self {
        let mut s = Self::zero(c.field(), order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`.
    pub fn var(field: &Arc<NumberField>, order: usize) -> Self {
        Self::monomial(FieldElem::one(field), 1, order)
    }

    pub fn monomial(c: FieldElem, k: usize, order: usize) -> Self {
        let mut s = Self::zero(c.field(), order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds a series from the coefficients of `z^1 … z^N` and a constant term.
    pub fn new(constant: FieldElem, coeffs: Vec<FieldElem>) -> Result<Self> {
        let field = constant.field().clone();
        if coeffs.iter().any(|c| !c.same_field(&constant)) {
            return Err(Error::FieldMismatch);
        }
        let mut all = Vec::with_capacity(coeffs.len() + 1);
        all.push(constant);
        all.extend(coeffs);
        Ok(Series { field, coeffs: all })
    }

    /// Series without constant term from the coefficients of `z^1 … z^N`.
    pub fn from_coeffs(field: &Arc<NumberField>, coeffs: Vec<FieldElem>) -> Result<Self> {
        Self::new(FieldElem::zero(field), coeffs)
    }

    /// Series whose `z^k` coefficient is `f(k)` for `1 ≤ k ≤ order`, zero constant term.
    pub fn from_fn(field: &Arc<NumberField>, order: usize, mut f: impl FnMut(usize) -> FieldElem) -> Self {
        let mut s = Self::zero(field, order);
        for k in 1..=order {
            s.coeffs[k] = f(k);
        }
        s
    }

    /// Rational-coefficient series from `f(k)`, `1 ≤ k ≤ order`.
    pub fn from_rational_fn(field: &Arc<NumberField>, order: usize, mut f: impl FnMut(usize) -> Rational) -> Self {
        Self::from_fn(field, order, |k| FieldElem::from_rational(field, &f(k)))
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k`; zero past the truncation order is not meaningful and panics.
    pub fn coeff(&self, k: usize) -> &FieldElem {
        &self.coeffs[k]
    }

    pub fn const_term(&self) -> &FieldElem {
        &self.coeffs[0]
    }

    /// Coefficients of `z^1 … z^N`.
    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs[1..]
    }

    pub fn set_coeff(&mut self, k: usize, c: FieldElem) {
        assert!(c.same_field(&self.coeffs[0]), "field mismatch");
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Series {
        let order = order.min(self.order());
        Series { field: self.field.clone(), coeffs: self.coeffs[..=order].to_vec() }
    }

    fn check(&self, other: &Series) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series> {
        self.check(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        Ok(Series { field: self.field.clone(), coeffs })
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series> {
        self.check(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect();
        Ok(Series { field: self.field.clone(), coeffs })
    }

    pub fn checked_mul(&self, other: &Series) -> Result<Series> {
        self.check(other)?;
        let n = self.order().min(other.order());
        let lhs: Vec<(usize, &FieldElem)> =
            self.coeffs[..=n].iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let rhs: Vec<(usize, &FieldElem)> =
            other.coeffs[..=n].iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let mut out = vec![FieldElem::zero(&self.field); n + 1];
        for &(i, a) in &lhs {
            for &(j, b) in &rhs {
                if i + j > n {
                    break;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Ok(Series { field: self.field.clone(), coeffs: out })
    }

    pub fn scale(&self, c: &FieldElem) -> Series {
        self.map(|a| a * c)
    }

    pub fn scale_rational(&self, q: &Rational) -> Series {
        self.map(|a| a.scale(q))
    }

    pub fn map(&self, mut f: impl FnMut(&FieldElem) -> FieldElem) -> Series {
        Series { field: self.field.clone(), coeffs: self.coeffs.iter().map(&mut f).collect() }
    }

    fn map_indexed(&self, mut f: impl FnMut(usize, &FieldElem) -> FieldElem) -> Series {
        let coeffs = self.coeffs.iter().enumerate().map(|(k, c)| f(k, c)).collect();
        Series { field: self.field.clone(), coeffs }
    }

    /// `z·d/dz`.
    pub fn delta(&self) -> Series {
        self.map_indexed(|k, c| c.scale_int(&BigInt::from(k)))
    }

    /// Inverse of [`Series::delta`] on series without constant term.
    pub fn dint(&self) -> Result<Series> {
        if !self.const_term().is_zero() {
            return Err(Error::NonzeroConstant);
        }
        Ok(self.map_indexed(|k, c| if k == 0 { c.clone() } else { c.div_int(&BigInt::from(k)) }))
    }

    /// `exp(v)` via `k·y_k = Σ_{j=1}^{k} j·v_j·y_{k-j}`.
    pub fn exp(&self) -> Result<Series> {
        if !self.const_term().is_zero() {
            return Err(Error::BadConstantTerm("exp needs zero constant term"));
        }
        let n = self.order();
        let dv = self.delta();
        let nonzero: Vec<usize> = (1..=n).filter(|&j| !dv.coeffs[j].is_zero()).collect();
        let mut y = vec![FieldElem::one(&self.field)];
        for k in 1..=n {
            let mut acc = FieldElem::zero(&self.field);
            for &j in nonzero.iter().take_while(|&&j| j <= k) {
                if !y[k - j].is_zero() {
                    acc = &acc + &(&dv.coeffs[j] * &y[k - j]);
                }
            }
            y.push(acc.div_int(&BigInt::from(k)));
        }
        Ok(Series { field: self.field.clone(), coeffs: y })
    }

    /// `log(y)` for `y(0) = 1`.
    pub fn log(&self) -> Result<Series> {
        if !self.const_term().is_one() {
            return Err(Error::BadConstantTerm("log needs constant term 1"));
        }
        let n = self.order();
        // dv_k = k·v_k = k·y_k - Σ_{j=1}^{k-1} dv_j·y_{k-j}
        let mut dv: Vec<FieldElem> = vec![FieldElem::zero(&self.field)];
        for k in 1..=n {
            let mut acc = self.coeffs[k].scale_int(&BigInt::from(k));
            for j in 1..k {
                if !dv[j].is_zero() && !self.coeffs[k - j].is_zero() {
                    acc = &acc - &(&dv[j] * &self.coeffs[k - j]);
                }
            }
            dv.push(acc);
        }
        let coeffs = dv
            .into_iter()
            .enumerate()
            .map(|(k, c)| if k == 0 { c } else { c.div_int(&BigInt::from(k)) })
            .collect();
        Ok(Series { field: self.field.clone(), coeffs })
    }

    /// `y^e` for `y(0) = 1` and any rational exponent, by the recurrence
    /// `k·b_k = Σ_{j=1}^{k} ((e+1)·j - k)·a_j·b_{k-j}`, computed up to `z^upto`.
    fn unit_power_upto(&self, e: &Rational, upto: usize) -> Vec<FieldElem> {
        debug_assert!(self.const_term().is_one());
        let upto = upto.min(self.order());
        let e1 = e + Rational::one();
        let nonzero: Vec<usize> = (1..=upto).filter(|&j| !self.coeffs[j].is_zero()).collect();
        let mut b = vec![FieldElem::one(&self.field)];
        for k in 1..=upto {
            let mut acc = FieldElem::zero(&self.field);
            let kq = Rational::from_integer(BigInt::from(k));
            for &j in nonzero.iter().take_while(|&&j| j <= k) {
                if b[k - j].is_zero() {
                    continue;
                }
                let w = &e1 * Rational::from_integer(BigInt::from(j)) - &kq;
                if w.is_zero() {
                    continue;
                }
                acc = &acc + &(&self.coeffs[j] * &b[k - j]).scale(&w);
            }
            b.push(acc.div_int(&BigInt::from(k)));
        }
        b
    }

    /// `y^e`; negative exponents need an invertible constant term.
    pub fn power(&self, e: i64) -> Result<Series> {
        let n = self.order();
        let c0 = self.const_term();
        if e == 0 {
            return Ok(Series::one(&self.field, n));
        }
        if c0.is_one() {
            let coeffs = self.unit_power_upto(&Rational::from_integer(e.into()), n);
            return Ok(Series { field: self.field.clone(), coeffs });
        }
        if e > 0 && (c0.is_zero() || c0.invert().is_err()) {
            let mut base = self.clone();
            let mut acc = Series::one(&self.field, n);
            let mut k = e as u64;
            while k > 0 {
                if k & 1 == 1 {
                    acc = &acc * &base;
                }
                k >>= 1;
                if k > 0 {
                    base = &base * &base;
                }
            }
            return Ok(acc);
        }
        let inv = c0.invert().map_err(|_| Error::NonUnitConstant)?;
        let unit = self.scale(&inv);
        let coeffs = unit.unit_power_upto(&Rational::from_integer(e.into()), n);
        let scale = if e > 0 { c0.pow(e as u64) } else { inv.pow(e.unsigned_abs()) };
        Ok(Series { field: self.field.clone(), coeffs }.scale(&scale))
    }

    /// `[z^k] y^e` for `y(0) = 1`, touching only coefficients up to `z^k`.
    pub fn power_coeff(&self, e: i64, k: usize) -> Result<FieldElem> {
        if !self.const_term().is_one() {
            return Err(Error::NonUnitConstant);
        }
        assert!(k <= self.order(), "coefficient beyond truncation order");
        Ok(self.unit_power_upto(&Rational::from_integer(e.into()), k).pop().unwrap())
    }

    /// `v(z^l)`; coefficients pushed past the order are dropped.
    pub fn shift(&self, l: usize) -> Result<Series> {
        if l == 0 {
            return Err(Error::InvalidArgument("shift factor must be positive".into()));
        }
        let n = self.order();
        let mut out = Series::zero(&self.field, n);
        for k in 0..=n / l {
            out.coeffs[k * l] = self.coeffs[k].clone();
        }
        Ok(out)
    }

    /// `outer(inner(z))`, truncated to the smaller order.
    pub fn compose(&self, inner: &Series) -> Result<Series> {
        self.check(inner)?;
        if !inner.const_term().is_zero() {
            return Err(Error::InnerHasConstant);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut out = Series::constant(self.coeffs[0].clone(), n);
        let mut pw = Series::one(&self.field, n);
        for k in 1..=n {
            pw = &pw * &inner;
            let a = &self.coeffs[k];
            if a.is_zero() {
                continue;
            }
            for j in k..=n {
                if !pw.coeffs[j].is_zero() {
                    out.coeffs[j] = &out.coeffs[j] + &(a * &pw.coeffs[j]);
                }
            }
        }
        Ok(out)
    }

    /// Compositional inverse by Lagrange inversion:
    /// `[w^k] g = (1/k)·[z^(k-1)] (z/f)^k`.
    pub fn revert(&self) -> Result<Series> {
        if !self.const_term().is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let a1 = &self.coeffs[1];
        let inv = a1.invert().map_err(|_| Error::NonUnitLinearTerm)?;
        // t = f/(a1·z), order n-1, t(0) = 1
        let mut t = Series::zero(&self.field, n - 1);
        for k in 0..n {
            t.coeffs[k] = &self.coeffs[k + 1] * &inv;
        }
        let mut out = Series::zero(&self.field, n);
        let mut inv_pow = FieldElem::one(&self.field);
        for k in 1..=n {
            inv_pow = &inv_pow * &inv;
            let c = t.power_coeff(-(k as i64), k - 1)?;
            out.coeffs[k] = (&c * &inv_pow).div_int(&BigInt::from(k));
        }
        Ok(out)
    }
}

pub fn delta(v: &Series) -> Series {
    v.delta()
}

pub fn dint(v: &Series) -> Result<Series> {
    v.dint()
}

pub fn exp_series(v: &Series) -> Result<Series> {
    v.exp()
}

pub fn log_series(y: &Series) -> Result<Series> {
    y.log()
}

pub fn compose(outer: &Series, inner: &Series) -> Result<Series> {
    outer.compose(inner)
}

pub fn revert(f: &Series) -> Result<Series> {
    f.revert()
}

pub fn power(y: &Series, e: i64) -> Result<Series> {
    y.power(e)
}

pub fn shift_sh(v: &Series, l: usize) -> Result<Series> {
    v.shift(l)
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*z^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Series> for &Series {
            type Output = Series;
            fn $method(self, rhs: &Series) -> Series {
                self.$checked(rhs).expect("field mismatch")
            }
        }
        impl $tr<Series> for Series {
            type Output = Series;
            fn $method(self, rhs: Series) -> Series {
                (&self).$checked(&rhs).expect("field mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.map(|c| -c)
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}
