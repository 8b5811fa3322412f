//! Truncated `p`-adic residue rings `(ℤ/p^n)[x]/(P)` at good primes and the
//! canonical lift of Frobenius.
//!
//! The ring is never factored into local components. For `p ∤ disc(P)` it is
//! the finite-precision image of `O_p`, and `x ↦ x^p (mod p)` has a unique
//! lift to an endomorphism, obtained by Newton iteration on `P`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::numfield::{FieldElem, NumberField};

/// `p`-adic valuation, with `+∞` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// `min(self, cap)` as an integer.
    pub fn capped(self, cap: i64) -> i64 {
        match self {
            Valuation::Finite(v) => v.min(cap),
            Valuation::Infinite => cap,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct ResidueRing {
    field: Arc<NumberField>,
    p: u64,
    n: u32,
    modulus: BigInt,
    minpoly_mod: Vec<BigInt>,
}

pub fn make_residue_ring(field: &Arc<NumberField>, p: u64, n: u32) -> Result<Arc<ResidueRing>> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !field.is_good_prime(p) {
        return Err(Error::BadPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("precision exponent must be at least 1".into()));
    }
    Ok(Arc::new(ResidueRing::unchecked(field, p, n)))
}

impl ResidueRing {
    fn unchecked(field: &Arc<NumberField>, p: u64, n: u32) -> Self {
        let modulus = arith::pow_u64(p, n);
        let minpoly_mod = field.minpoly().iter().map(|c| c.mod_floor(&modulus)).collect();
        ResidueRing { field: field.clone(), p, n, modulus, minpoly_mod }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn minpoly_mod(&self) -> &[BigInt] {
        &self.minpoly_mod
    }

    fn same(&self, other: &ResidueRing) -> bool {
        self.p == other.p && self.n == other.n && self.field == other.field
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ResidueElem {
    ring: Arc<ResidueRing>,
    coords: Vec<BigInt>,
}

impl fmt::Debug for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}^{}", self.coords, self.ring.p, self.ring.n)
    }
}

impl ResidueElem {
    pub fn from_coords(ring: &Arc<ResidueRing>, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != ring.field.degree() {
            return Err(Error::InvalidArgument("wrong number of coordinates".into()));
        }
        let coords = coords.iter().map(|c| c.mod_floor(&ring.modulus)).collect();
        Ok(ResidueElem { ring: ring.clone(), coords })
    }

    fn raw(ring: &Arc<ResidueRing>, coords: Vec<BigInt>) -> Self {
        let coords = coords.into_iter().map(|c| c.mod_floor(&ring.modulus)).collect();
        ResidueElem { ring: ring.clone(), coords }
    }

    pub fn zero(ring: &Arc<ResidueRing>) -> Self {
        ResidueElem { ring: ring.clone(), coords: vec![BigInt::zero(); ring.field.degree()] }
    }

    pub fn from_int(ring: &Arc<ResidueRing>, n: impl Into<BigInt>) -> Self {
        let mut coords = vec![BigInt::zero(); ring.field.degree()];
        coords[0] = n.into();
        Self::raw(ring, coords)
    }

    pub fn generator(ring: &Arc<ResidueRing>) -> Self {
        let x = FieldElem::generator(&ring.field);
        reduce(&x, ring).expect("generator is integral")
    }

    pub fn ring(&self) -> &Arc<ResidueRing> {
        &self.ring
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check_ring(&self, other: &ResidueElem) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring.same(&other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &ResidueElem) -> Result<ResidueElem> {
        self.check_ring(other)?;
        let c = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Self::raw(&self.ring, c))
    }

    pub fn sub(&self, other: &ResidueElem) -> Result<ResidueElem> {
        self.check_ring(other)?;
        let c = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(Self::raw(&self.ring, c))
    }

    pub fn mul(&self, other: &ResidueElem) -> Result<ResidueElem> {
        self.check_ring(other)?;
        Ok(Self::raw(&self.ring, self.ring.field.mul_coords(&self.coords, &other.coords)))
    }

    pub fn scale(&self, n: &BigInt) -> ResidueElem {
        Self::raw(&self.ring, self.coords.iter().map(|c| c * n).collect())
    }

    pub fn pow(&self, mut e: u64) -> ResidueElem {
        let mut base = self.clone();
        let mut acc = Self::from_int(&self.ring, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).unwrap();
            }
        }
        acc
    }

    /// Largest `e ≤ n` with every coordinate divisible by `p^e`.
    pub fn valuation(&self) -> u32 {
        let mut v = self.ring.n;
        for c in &self.coords {
            if let Some(e) = arith::val_p(c, self.ring.p) {
                v = v.min(e as u32);
            }
        }
        v
    }

    /// Same coordinates in a ring of lower (or equal) precision over the same field and prime.
    pub fn reduce_to(&self, ring: &Arc<ResidueRing>) -> Result<ResidueElem> {
        if ring.p != self.ring.p || ring.n > self.ring.n || ring.field != self.ring.field {
            return Err(Error::RingMismatch);
        }
        Ok(Self::raw(ring, self.coords.clone()))
    }

    /// Inverse of a unit, by Gaussian elimination mod `p^n` with unit pivots.
    pub fn invert(&self) -> Result<ResidueElem> {
        let d = self.ring.field.degree();
        let m = &self.ring.modulus;
        let p = BigInt::from(self.ring.p);
        let mut basis = vec![BigInt::zero(); d];
        let cols: Vec<Vec<BigInt>> = (0..d)
            .map(|j| {
                basis.iter_mut().for_each(|c| c.set_zero());
                basis[j] = BigInt::one();
                self.ring.field.mul_coords(&self.coords, &basis)
            })
            .collect();
        let mut rows: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                let mut r: Vec<BigInt> = cols.iter().map(|c| c[i].mod_floor(m)).collect();
                r.push(if i == 0 { BigInt::one() } else { BigInt::zero() });
                r
            })
            .collect();
        for col in 0..d {
            let pr = (col..d)
                .find(|&r| !(&rows[r][col] % &p).is_zero())
                .ok_or(Error::ZeroDivisor)?;
            rows.swap(col, pr);
            let inv = arith::mod_inverse(&rows[col][col], m).ok_or(Error::ZeroDivisor)?;
            for e in rows[col].iter_mut() {
                *e = (&*e * &inv).mod_floor(m);
            }
            let pivot = rows[col].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (e, pv) in row.iter_mut().zip(&pivot) {
                    *e = (&*e - &f * pv).mod_floor(m);
                }
            }
        }
        Ok(Self::raw(&self.ring, rows.into_iter().map(|mut r| r.pop().unwrap()).collect()))
    }

    /// Evaluates an integer polynomial (lowest degree first) at this element.
    pub fn eval_int_poly(&self, coeffs: &[BigInt]) -> ResidueElem {
        let mut acc = Self::zero(&self.ring);
        for c in coeffs.iter().rev() {
            acc = acc.mul(self).unwrap();
            acc.coords[0] += c;
            acc = Self::raw(&self.ring, acc.coords);
        }
        acc
    }
}

/// Reduces an element of `K` into the residue ring; fails if a denominator is divisible by `p`.
pub fn reduce(a: &FieldElem, ring: &Arc<ResidueRing>) -> Result<ResidueElem> {
    if !a.same_field_as(&ring.field) {
        return Err(Error::FieldMismatch);
    }
    let inv = arith::mod_inverse(a.denominator(), &ring.modulus).ok_or(Error::NotPIntegral(ring.p))?;
    Ok(ResidueElem::raw(ring, a.numerators().iter().map(|c| c * &inv).collect()))
}

/// The canonical Frobenius endomorphism of a residue ring, determined by the image of `x`.
#[derive(Debug, Clone)]
pub struct FrobeniusMap {
    ring: Arc<ResidueRing>,
    xi: ResidueElem,
    // xi^j for j < d, as coordinate vectors
    powers: Vec<Vec<BigInt>>,
}

/// Lifts `x ↦ x^p (mod p)` to `p^n` by Newton iteration with doubling precision.
pub fn frobenius_lift(ring: &Arc<ResidueRing>) -> FrobeniusMap {
    let field = ring.field();
    let p = ring.p;
    let deriv: Vec<BigInt> = field
        .minpoly()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();

    let base = Arc::new(ResidueRing::unchecked(field, p, 1));
    let mut xi = ResidueElem::generator(&base).pow(p);
    let mut prec = 1;
    while prec < ring.n {
        prec = (2 * prec).min(ring.n);
        let r = Arc::new(ResidueRing::unchecked(field, p, prec));
        let cur = ResidueElem::raw(&r, xi.coords.clone());
        let value = cur.eval_int_poly(field.minpoly());
        let slope = cur.eval_int_poly(&deriv);
        let inv = slope
            .invert()
            .expect("P'(xi) is a unit at a good prime");
        xi = cur.sub(&value.mul(&inv).unwrap()).unwrap();
    }
    let xi = ResidueElem::raw(ring, xi.coords);
    debug_assert!(xi.eval_int_poly(field.minpoly()).is_zero());

    let d = field.degree();
    let mut powers = Vec::with_capacity(d);
    let mut acc = ResidueElem::from_int(ring, 1);
    for _ in 0..d {
        powers.push(acc.coords.clone());
        acc = acc.mul(&xi).unwrap();
    }
    FrobeniusMap { ring: ring.clone(), xi, powers }
}

impl FrobeniusMap {
    pub fn ring(&self) -> &Arc<ResidueRing> {
        &self.ring
    }

    pub fn xi(&self) -> &ResidueElem {
        &self.xi
    }

    /// `P(ξ) ≡ 0 (mod p^n)` and `ξ ≡ x^p (mod p)`.
    pub fn check_invariants(&self) -> bool {
        let root = self.xi.eval_int_poly(self.ring.field.minpoly()).is_zero();
        let base = Arc::new(ResidueRing::unchecked(&self.ring.field, self.ring.p, 1));
        let xp = ResidueElem::generator(&base).pow(self.ring.p);
        let xi_mod_p = ResidueElem::raw(&base, self.xi.coords.clone());
        root && xp == xi_mod_p
    }

    pub fn apply(&self, a: &ResidueElem) -> Result<ResidueElem> {
        self.xi.check_ring(a)?;
        Ok(self.apply_coords(&a.coords))
    }

    fn apply_coords(&self, coords: &[BigInt]) -> ResidueElem {
        let d = coords.len();
        let mut out = vec![BigInt::zero(); d];
        for (a, pw) in coords.iter().zip(&self.powers) {
            if a.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(pw) {
                *o += a * c;
            }
        }
        ResidueElem::raw(&self.ring, out)
    }
}

pub fn frobenius_apply(frob: &FrobeniusMap, a: &ResidueElem) -> Result<ResidueElem> {
    frob.apply(a)
}

/// `min_i (v_p(num_i) - v_p(den))`, or `+∞` for zero.
pub fn valuation(a: &FieldElem, p: u64, field: &Arc<NumberField>) -> Result<Valuation> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !field.is_good_prime(p) {
        return Err(Error::BadPrime(p));
    }
    if !a.same_field_as(field) {
        return Err(Error::FieldMismatch);
    }
    Ok(element_valuation(a, p))
}

/// Coordinate valuation without the good-prime check.
pub fn element_valuation(a: &FieldElem, p: u64) -> Valuation {
    let num = a
        .numerators()
        .iter()
        .filter_map(|c| arith::val_p(c, p))
        .min();
    match num {
        None => Valuation::Infinite,
        Some(v) => {
            let dv = arith::val_p(a.denominator(), p).unwrap_or(0);
            Valuation::Finite(v as i64 - dv as i64)
        }
    }
}

impl FieldElem {
    pub(crate) fn same_field_as(&self, field: &Arc<NumberField>) -> bool {
        Arc::ptr_eq(self.field(), field) || **self.field() == **field
    }
}
