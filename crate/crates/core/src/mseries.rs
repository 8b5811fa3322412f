//! Truncated power series in several variables, truncated by total degree.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numfield::{FieldElem, NumberField, Rational};

pub type Exponent = Vec<u32>;

fn degree(e: &[u32]) -> usize {
    e.iter().map(|&k| k as usize).sum()
}

fn add_exp(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// A series in `nvars` variables known up to total degree `order`.
/// Only nonzero coefficients are stored; keys iterate in lexicographic order.
#[derive(Clone, PartialEq, Eq)]
pub struct MSeries {
    field: Arc<NumberField>,
    nvars: usize,
    order: usize,
    terms: BTreeMap<Exponent, FieldElem>,
}

impl MSeries {
    pub fn zero(field: &Arc<NumberField>, nvars: usize, order: usize) -> Self {
        MSeries { field: field.clone(), nvars, order, terms: BTreeMap::new() }
    }

    pub fn constant(c: FieldElem, nvars: usize, order: usize) -> Self {
        let mut s = Self::zero(c.field(), nvars, order);
        s.insert(vec![0; nvars], c);
        s
    }

    pub fn one(field: &Arc<NumberField>, nvars: usize, order: usize) -> Self {
        Self::constant(FieldElem::one(field), nvars, order)
    }

    /// The coordinate `z^i` (0-based).
    pub fn var(field: &Arc<NumberField>, nvars: usize, i: usize, order: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(FieldElem::one(field), e, order)
    }

    pub fn monomial(c: FieldElem, exp: Exponent, order: usize) -> Self {
        let mut s = Self::zero(c.field(), exp.len(), order);
        s.insert(exp, c);
        s
    }

    /// Builds a series from explicit terms. Terms past the truncation order are dropped.
    pub fn from_terms(
        field: &Arc<NumberField>,
        nvars: usize,
        order: usize,
        terms: impl IntoIterator<Item = (Exponent, FieldElem)>,
    ) -> Result<Self> {
        let mut s = Self::zero(field, nvars, order);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::VariableMismatch(e.len(), nvars));
            }
            if !c.same_field_as(field) {
                return Err(Error::FieldMismatch);
            }
            let prev = s.get(&e);
            s.insert(e, &prev + &c);
        }
        Ok(s)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, FieldElem> {
        &self.terms
    }

    pub fn get(&self, e: &[u32]) -> FieldElem {
        self.terms.get(e).cloned().unwrap_or_else(|| FieldElem::zero(&self.field))
    }

    pub fn const_term(&self) -> FieldElem {
        self.get(&vec![0; self.nvars])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sets a coefficient; zero removes the entry and anything past the order is ignored.
    pub fn insert(&mut self, e: Exponent, c: FieldElem) {
        assert_eq!(e.len(), self.nvars, "exponent length");
        if degree(&e) > self.order {
            return;
        }
        if c.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
    }

    fn accumulate(&mut self, e: Exponent, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn truncate(&self, order: usize) -> MSeries {
        let order = order.min(self.order);
        let terms = self.terms.iter().filter(|(e, _)| degree(e) <= order).map(|(e, c)| (e.clone(), c.clone())).collect();
        MSeries { field: self.field.clone(), nvars: self.nvars, order, terms }
    }

    fn check(&self, other: &MSeries) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch(self.nvars, other.nvars));
        }
        if !(Arc::ptr_eq(&self.field, &other.field) || self.field == other.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MSeries) -> Result<MSeries> {
        self.check(other)?;
        let mut out = self.truncate(other.order);
        for (e, c) in &other.terms {
            if degree(e) <= out.order {
                out.accumulate(e.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MSeries) -> Result<MSeries> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &MSeries) -> Result<MSeries> {
        self.check(other)?;
        let order = self.order.min(other.order);
        let mut rhs: Vec<(usize, &Exponent, &FieldElem)> =
            other.terms.iter().map(|(e, c)| (degree(e), e, c)).collect();
        rhs.sort_by_key(|t| t.0);
        let mut out = MSeries::zero(&self.field, self.nvars, order);
        for (ea, ca) in &self.terms {
            let da = degree(ea);
            if da > order {
                continue;
            }
            for &(db, eb, cb) in &rhs {
                if da + db > order {
                    break;
                }
                out.accumulate(add_exp(ea, eb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElem) -> MSeries {
        let mut out = MSeries::zero(&self.field, self.nvars, self.order);
        for (e, a) in &self.terms {
            out.insert(e.clone(), a * c);
        }
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> MSeries {
        self.scale(&FieldElem::from_rational(&self.field, q))
    }

    /// `z^i·∂/∂z^i`.
    pub fn delta_i(&self, i: usize) -> MSeries {
        let mut out = MSeries::zero(&self.field, self.nvars, self.order);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                out.insert(e.clone(), c.scale_int(&BigInt::from(e[i])));
            }
        }
        out
    }

    /// Multiplies by the monomial `z^i`, dropping whatever crosses the order.
    pub fn mul_var(&self, i: usize) -> MSeries {
        let mut out = MSeries::zero(&self.field, self.nvars, self.order);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[i] += 1;
            out.insert(e, c.clone());
        }
        out
    }

    /// Homogeneous components indexed by total degree.
    fn graded(&self) -> Vec<Vec<(Exponent, FieldElem)>> {
        let mut g = vec![Vec::new(); self.order + 1];
        for (e, c) in &self.terms {
            g[degree(e)].push((e.clone(), c.clone()));
        }
        g
    }

    fn from_graded(field: &Arc<NumberField>, nvars: usize, order: usize, g: Vec<BTreeMap<Exponent, FieldElem>>) -> MSeries {
        let mut out = MSeries::zero(field, nvars, order);
        for comp in g {
            for (e, c) in comp {
                out.insert(e, c);
            }
        }
        out
    }

    /// `exp(v)` by the Euler-operator recurrence `d·Y_d = Σ_{j=1}^{d} j·V_j·Y_{d-j}`.
    pub fn exp(&self) -> Result<MSeries> {
        if !self.const_term().is_zero() {
            return Err(Error::BadConstantTerm("exp needs zero constant term"));
        }
        let t = self.order;
        let v = self.graded();
        let mut y: Vec<BTreeMap<Exponent, FieldElem>> = vec![BTreeMap::new(); t + 1];
        y[0].insert(vec![0; self.nvars], FieldElem::one(&self.field));
        for d in 1..=t {
            let mut acc: BTreeMap<Exponent, FieldElem> = BTreeMap::new();
            for j in 1..=d {
                let jj = BigInt::from(j);
                for (ev, cv) in &v[j] {
                    let cvj = cv.scale_int(&jj);
                    for (ey, cy) in &y[d - j] {
                        let e = add_exp(ev, ey);
                        let term = &cvj * cy;
                        let entry = acc.entry(e).or_insert_with(|| FieldElem::zero(&self.field));
                        *entry = &*entry + &term;
                    }
                }
            }
            let dd = BigInt::from(d);
            y[d] = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e, c.div_int(&dd))).collect();
        }
        Ok(Self::from_graded(&self.field, self.nvars, t, y))
    }

    /// `log(y)` for constant term 1, by `d·V_d = d·Y_d - Σ_{j=1}^{d-1} j·V_j·Y_{d-j}`.
    pub fn log(&self) -> Result<MSeries> {
        if !self.const_term().is_one() {
            return Err(Error::BadConstantTerm("log needs constant term 1"));
        }
        let t = self.order;
        let y = self.graded();
        // dv[d] holds d·V_d
        let mut dv: Vec<BTreeMap<Exponent, FieldElem>> = vec![BTreeMap::new(); t + 1];
        for d in 1..=t {
            let dd = BigInt::from(d);
            let mut acc: BTreeMap<Exponent, FieldElem> =
                y[d].iter().map(|(e, c)| (e.clone(), c.scale_int(&dd))).collect();
            for j in 1..d {
                for (ev, cv) in &dv[j] {
                    for (ey, cy) in &y[d - j] {
                        let e = add_exp(ev, ey);
                        let term = cv * cy;
                        let entry = acc.entry(e).or_insert_with(|| FieldElem::zero(&self.field));
                        *entry = &*entry - &term;
                    }
                }
            }
            dv[d] = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
        let v = dv
            .into_iter()
            .enumerate()
            .map(|(d, comp)| {
                if d == 0 {
                    comp
                } else {
                    let dd = BigInt::from(d);
                    comp.into_iter().map(|(e, c)| (e, c.div_int(&dd))).collect()
                }
            })
            .collect();
        Ok(Self::from_graded(&self.field, self.nvars, t, v))
    }

    /// `self(inner_1, …, inner_m)` where `m = self.nvars`; each inner series has zero constant term.
    pub fn compose(&self, inners: &[MSeries]) -> Result<MSeries> {
        if inners.len() != self.nvars {
            return Err(Error::VariableMismatch(inners.len(), self.nvars));
        }
        let Some(first) = inners.first() else {
            return Ok(self.clone());
        };
        let n = first.nvars;
        let mut order = self.order;
        for s in inners {
            if s.nvars != n {
                return Err(Error::VariableMismatch(s.nvars, n));
            }
            if !(Arc::ptr_eq(&self.field, &s.field) || self.field == s.field) {
                return Err(Error::FieldMismatch);
            }
            if !s.const_term().is_zero() {
                return Err(Error::InnerHasConstant);
            }
            order = order.min(s.order);
        }
        let inners: Vec<MSeries> = inners.iter().map(|s| s.truncate(order)).collect();
        // powers[i][k] = inners[i]^k
        let mut max_exp = vec![0u32; self.nvars];
        for e in self.terms.keys() {
            for (m, &k) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(k);
            }
        }
        let powers: Vec<Vec<MSeries>> = inners
            .iter()
            .zip(&max_exp)
            .map(|(s, &m)| {
                let mut v = vec![MSeries::one(&self.field, n, order)];
                for k in 1..=m.min(order as u32) {
                    let next = &v[k as usize - 1] * s;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = MSeries::zero(&self.field, n, order);
        for (e, c) in &self.terms {
            if degree(e) > order {
                continue;
            }
            let mut prod: Option<MSeries> = None;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = &powers[i][k as usize];
                prod = Some(match prod {
                    None => p.clone(),
                    Some(acc) => &acc * p,
                });
            }
            match prod {
                None => out.accumulate(vec![0; n], c.clone()),
                Some(p) => {
                    for (pe, pc) in p.terms {
                        out.accumulate(pe, c * &pc);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Restricts a one-variable series to a univariate [`crate::series::Series`].
    pub fn to_series(&self) -> Result<crate::series::Series> {
        if self.nvars != 1 {
            return Err(Error::VariableMismatch(self.nvars, 1));
        }
        let mut coeffs = vec![FieldElem::zero(&self.field); self.order];
        for (e, c) in &self.terms {
            if e[0] > 0 {
                coeffs[e[0] as usize - 1] = c.clone();
            }
        }
        crate::series::Series::new(self.const_term(), coeffs)
    }

    pub fn from_series(v: &crate::series::Series) -> MSeries {
        let mut out = MSeries::zero(v.field(), 1, v.order());
        for k in 0..=v.order() {
            out.insert(vec![k as u32], v.coeff(k).clone());
        }
        out
    }
}

/// Inverts a coordinate change `z ↦ (σ_i·z^i + higher)` with `σ_i = ±1`.
///
/// Pass `t` solves `z^i = σ_i·(w^i - h_i(z(w)))` to total degree `t + 1`, where `h_i`
/// collects the nonlinear terms of component `i`.
pub fn invert_map(zmap: &[MSeries]) -> Result<Vec<MSeries>> {
    let n = zmap.len();
    let Some(first) = zmap.first() else {
        return Ok(Vec::new());
    };
    let field = first.field.clone();
    let mut order = usize::MAX;
    let mut signs = Vec::with_capacity(n);
    let mut nonlinear = Vec::with_capacity(n);
    for (i, m) in zmap.iter().enumerate() {
        if m.nvars != n {
            return Err(Error::VariableMismatch(m.nvars, n));
        }
        if !m.const_term().is_zero() {
            return Err(Error::BadLinearPart);
        }
        order = order.min(m.order);
        let mut sign = None;
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            let c = m.get(&e);
            if j == i {
                if c.is_one() {
                    sign = Some(FieldElem::one(&field));
                } else if (-&c).is_one() {
                    sign = Some(-FieldElem::one(&field));
                } else {
                    return Err(Error::BadLinearPart);
                }
            } else if !c.is_zero() {
                return Err(Error::BadLinearPart);
            }
        }
        let sign = sign.ok_or(Error::BadLinearPart)?;
        let mut h = m.clone();
        let mut ei = vec![0; n];
        ei[i] = 1;
        h.insert(ei, FieldElem::zero(&field));
        signs.push(sign);
        nonlinear.push(h);
    }
    if order == 0 {
        return Ok((0..n).map(|_| MSeries::zero(&field, n, 0)).collect());
    }
    let vars: Vec<MSeries> = (0..n).map(|i| MSeries::var(&field, n, i, order)).collect();
    let mut z: Vec<MSeries> = (0..n).map(|i| vars[i].scale(&signs[i]).truncate(1)).collect();
    for t in 1..order {
        let lifted: Vec<MSeries> = z.iter().map(|s| MSeries { order: t + 1, ..s.clone() }).collect();
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let h = nonlinear[i].truncate(t + 1).compose(&lifted)?;
            next.push((&vars[i].truncate(t + 1) - &h).scale(&signs[i]));
        }
        z = next;
    }
    Ok(z)
}

impl fmt::Debug for MSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*z^{e:?}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(deg {})", self.order + 1)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&MSeries> for &MSeries {
            type Output = MSeries;
            fn $method(self, rhs: &MSeries) -> MSeries {
                self.$checked(rhs).expect("incompatible series")
            }
        }
        impl $tr<MSeries> for MSeries {
            type Output = MSeries;
            fn $method(self, rhs: MSeries) -> MSeries {
                (&self).$checked(&rhs).expect("incompatible series")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &MSeries {
    type Output = MSeries;
    fn neg(self) -> MSeries {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        MSeries { field: self.field.clone(), nvars: self.nvars, order: self.order, terms }
    }
}

impl Neg for MSeries {
    type Output = MSeries;
    fn neg(self) -> MSeries {
        -&self
    }
}
