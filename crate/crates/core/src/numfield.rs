//! Exact arithmetic in `K = ℚ[x]/(P)` for a monic integer polynomial `P`.
//!
//! Elements are stored as an integer coordinate vector over a single positive
//! common denominator, in the power basis `1, x, …, x^(d-1)`. Every value is
//! kept normalized (`gcd(den, num_0, …, num_{d-1}) = 1`), so structural
//! equality is field equality.
//!
//! `P` is required to be squarefree but not irreducible; for reducible `P` the
//! quotient is a product of fields and [`FieldElem::invert`] may report a zero
//! divisor. The discriminant of `P` stands in for the field discriminant: every
//! prime dividing it is treated as bad.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::linalg;

pub type Rational = BigRational;

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    minpoly: Vec<BigInt>,
    discriminant: BigInt,
    // x^(d+j) in the power basis, j = 0..d-1
    reduction: Vec<Vec<BigInt>>,
}

/// Builds `ℚ[x]/(P)` from the coefficients of `P`, lowest degree first.
pub fn make_field(minpoly: &[BigInt]) -> Result<Arc<NumberField>> {
    if minpoly.len() < 2 {
        return Err(Error::DegreeZero);
    }
    let lead = minpoly.last().unwrap();
    if !lead.is_one() {
        return Err(Error::NotMonic(lead.clone()));
    }
    let discriminant = poly_discriminant(minpoly);
    if discriminant.is_zero() {
        return Err(Error::NotSquarefree);
    }
    let d = minpoly.len() - 1;
    let mut reduction = Vec::with_capacity(d);
    // x^d = -(c_0 + … + c_{d-1} x^{d-1})
    let mut cur: Vec<BigInt> = minpoly[..d].iter().map(|c| -c).collect();
    for _ in 0..d {
        reduction.push(cur.clone());
        // multiply by x
        let top = cur[d - 1].clone();
        for i in (1..d).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = BigInt::zero();
        if !top.is_zero() {
            for i in 0..d {
                cur[i] -= &top * &minpoly[i];
            }
        }
    }
    Ok(Arc::new(NumberField {
        minpoly: minpoly.to_vec(),
        discriminant,
        reduction,
    }))
}

/// `ℚ` presented as `ℚ[x]/(x)`.
pub fn rationals() -> Arc<NumberField> {
    make_field(&[BigInt::zero(), BigInt::one()]).expect("x is monic and squarefree")
}

/// Discriminant of a monic polynomial: `(-1)^(d(d-1)/2) · Res(P, P')`.
pub fn poly_discriminant(p: &[BigInt]) -> BigInt {
    let d = p.len() - 1;
    let deriv: Vec<BigInt> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let res = resultant(p, &deriv);
    if (d * (d - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// Resultant via the Sylvester determinant; coefficients lowest degree first.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (i, c) in f.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (i, c) in g.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    linalg::det_bareiss(rows)
}

impl NumberField {
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    /// A prime is good when it does not divide `disc(P)`.
    pub fn is_good_prime(&self, p: u64) -> bool {
        !(&self.discriminant % BigInt::from(p)).is_zero()
    }

    pub fn is_good_prime_big(&self, p: &BigUint) -> bool {
        !(&self.discriminant % arith::to_signed(p.clone())).is_zero()
    }

    /// Whether `k` shares no factor with the discriminant.
    pub fn coprime_to_discriminant(&self, k: u64) -> bool {
        self.discriminant.gcd(&BigInt::from(k)).is_one()
    }

    /// Reduces an integer polynomial of degree `< 2d - 1` into the power basis.
    pub(crate) fn reduce_poly(&self, mut prod: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        if prod.len() <= d {
            prod.resize(d, BigInt::zero());
            return prod;
        }
        let high = prod.split_off(d);
        for (c, row) in high.iter().zip(&self.reduction) {
            if c.is_zero() {
                continue;
            }
            for (acc, r) in prod.iter_mut().zip(row) {
                if !r.is_zero() {
                    *acc += c * r;
                }
            }
        }
        prod
    }

    pub(crate) fn mul_coords(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let d = self.degree();
        if d == 1 {
            return vec![&a[0] * &b[0]];
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    prod[i + j] += ai * bj;
                }
            }
        }
        self.reduce_poly(prod)
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[x]/({})", format_poly(&self.minpoly, "x"))
    }
}

fn format_poly(coeffs: &[BigInt], var: &str) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mono.is_empty() || !mag.is_one() {
            out.push_str(&mag.to_string());
            if !mono.is_empty() {
                out.push('*');
            }
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// An element of a [`NumberField`].
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<NumberField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl FieldElem {
    fn normalized(field: Arc<NumberField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert_eq!(num.len(), field.degree());
        if num.iter().all(Zero::is_zero) {
            return FieldElem { field, num, den: BigInt::one() };
        }
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                num.iter_mut().for_each(|c| *c /= &g);
                den /= &g;
            }
        }
        FieldElem { field, num, den }
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        FieldElem {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, BigInt::one())
    }

    pub fn from_int(field: &Arc<NumberField>, n: impl Into<BigInt>) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = n.into();
        FieldElem { field: field.clone(), num, den: BigInt::one() }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: &Rational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = q.numer().clone();
        Self::normalized(field.clone(), num, q.denom().clone())
    }

    /// The class of `x`.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        let d = field.degree();
        if d == 1 {
            return Self::from_int(field, -field.minpoly[0].clone());
        }
        let mut num = vec![BigInt::zero(); d];
        num[1] = BigInt::one();
        FieldElem { field: field.clone(), num, den: BigInt::one() }
    }

    /// Integer coordinates over a common denominator.
    pub fn from_integer_coords(field: &Arc<NumberField>, num: Vec<BigInt>, den: BigInt) -> Result<Self> {
        if num.len() != field.degree() {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                field.degree(),
                num.len()
            )));
        }
        if den.is_zero() {
            return Err(Error::Zero);
        }
        Ok(Self::normalized(field.clone(), num, den))
    }

    pub fn from_coords(field: &Arc<NumberField>, coords: &[Rational]) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::Parse(format!(
                "expected {} coordinates, got {}",
                field.degree(),
                coords.len()
            )));
        }
        let den = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coords.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Self::normalized(field.clone(), num, den))
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn same_field(&self, other: &FieldElem) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || self.field == other.field
    }

    pub fn coords(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|n| Rational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn coord(&self, i: usize) -> Rational {
        Rational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `ℚ`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(self.coord(0))
        } else {
            None
        }
    }

    /// Integral over `ℤ[x]/(P)`, i.e. trivial denominator.
    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn checked_add(&self, other: &FieldElem) -> Result<FieldElem> {
        if !self.same_field(other) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.add_unchecked(other, false))
    }

    fn add_unchecked(&self, other: &FieldElem, negate: bool) -> FieldElem {
        if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect();
            return Self::normalized(self.field.clone(), num, self.den.clone());
        }
        let g = self.den.gcd(&other.den);
        let sa = &other.den / &g;
        let sb = &self.den / &g;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| {
                let (x, y) = (a * &sa, b * &sb);
                if negate {
                    x - y
                } else {
                    x + y
                }
            })
            .collect();
        Self::normalized(self.field.clone(), num, &self.den * sa)
    }

    pub fn checked_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        if !self.same_field(other) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.add_unchecked(other, true))
    }

    pub fn checked_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        if !self.same_field(other) {
            return Err(Error::FieldMismatch);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let num = self.field.mul_coords(&self.num, &other.num);
        Ok(Self::normalized(self.field.clone(), num, &self.den * &other.den))
    }

    pub fn scale(&self, q: &Rational) -> FieldElem {
        if q.is_zero() {
            return Self::zero(&self.field);
        }
        let num = self.num.iter().map(|c| c * q.numer()).collect();
        Self::normalized(self.field.clone(), num, &self.den * q.denom())
    }

    pub fn scale_int(&self, n: &BigInt) -> FieldElem {
        let num = self.num.iter().map(|c| c * n).collect();
        Self::normalized(self.field.clone(), num, self.den.clone())
    }

    pub fn div_int(&self, n: &BigInt) -> FieldElem {
        assert!(!n.is_zero(), "division by zero");
        Self::normalized(self.field.clone(), self.num.clone(), &self.den * n)
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse, by solving `a·b = 1` in the power basis.
    pub fn invert(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::Zero);
        }
        let d = self.field.degree();
        let mut cols = Vec::with_capacity(d);
        let mut basis = vec![BigInt::zero(); d];
        for j in 0..d {
            basis.iter_mut().for_each(|c| c.set_zero());
            basis[j] = BigInt::one();
            cols.push(self.field.mul_coords(&self.num, &basis));
        }
        let matrix: Vec<Vec<Rational>> = (0..d)
            .map(|i| cols.iter().map(|c| Rational::from_integer(c[i].clone())).collect())
            .collect();
        let mut rhs = vec![Rational::zero(); d];
        rhs[0] = Rational::from_integer(self.den.clone());
        match linalg::solve(&matrix, &rhs) {
            Ok(sol) => FieldElem::from_coords(&self.field, &sol),
            Err(_) => Err(Error::ZeroDivisor),
        }
    }

    /// Rational primes dividing some coordinate denominator.
    pub fn denominator_support(&self) -> BTreeSet<BigUint> {
        arith::prime_factors_big(self.den.magnitude()).into_iter().collect()
    }

    /// Evaluates a polynomial with coefficients in `K` (lowest degree first) at `self`.
    pub fn eval_poly(&self, coeffs: &[FieldElem]) -> FieldElem {
        let mut acc = FieldElem::zero(&self.field);
        for c in coeffs.iter().rev() {
            acc = &(&acc * self) + c;
        }
        acc
    }
}

pub fn multiply(a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
    a.checked_mul(b)
}

pub fn invert(a: &FieldElem) -> Result<FieldElem> {
    a.invert()
}

pub fn denominator_support(a: &FieldElem) -> BTreeSet<BigUint> {
    a.denominator_support()
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.den == other.den && self.num == other.num
    }
}

impl Eq for FieldElem {}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = format_poly(&self.num, "x");
        if self.den.is_one() {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

// Operators panic on mismatched fields; the checked_* methods report it instead.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$checked(rhs).expect("field mismatch")
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$checked(&rhs).expect("field mismatch")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}
