//! The s-function verifier, Dwork factorization and the CRT generator.
//!
//! A series `V = Σ c_k z^k` is an s-function when the normalized coefficients
//! `a_k = k^s·c_k` are integral at every good prime and satisfy
//! `Frob_p(a_{k/p}) ≡ a_k (mod p^(s·ord_p k))` whenever `p | k`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::mseries::{Exponent, MSeries};
use crate::numfield::{FieldElem, NumberField};
use crate::padic::{element_valuation, frobenius_lift, make_residue_ring, reduce, FrobeniusMap, Valuation};
use crate::series::Series;

/// Where a check was made: a coefficient index or an exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum Index {
    Single(u64),
    Multi(Exponent),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    /// `Frob_p(a_{k/p}) - a_k` against `p^required`.
    Congruence,
    /// Plain `p`-integrality of a coefficient.
    Integrality,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub k: Index,
    pub p: u64,
    pub required: u32,
    /// Achieved valuation, capped at `required`. Negative when a coefficient has `p` in its denominator.
    pub valuation: i64,
    pub kind: CheckKind,
    #[serde(skip)]
    pub pass: bool,
}

pub type Violation = Check;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SReport {
    pub s: u32,
    pub order: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
    /// Bad primes at which some check would otherwise have been made.
    pub skipped_primes: Vec<u64>,
    /// Informational integrality data at bad primes (never affects `pass`).
    pub extra: Vec<Check>,
}

impl SReport {
    pub fn violations(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Violating `(index, prime)` pairs in report order.
    pub fn violation_sites(&self) -> Vec<(Index, u64)> {
        self.violations().map(|c| (c.k.clone(), c.p)).collect()
    }

    fn assemble(s: u32, order: usize, mut checks: Vec<Check>, skipped: BTreeSet<u64>, mut extra: Vec<Check>) -> Self {
        checks.sort_by(|a, b| (&a.k, a.p, a.kind).cmp(&(&b.k, b.p, b.kind)));
        extra.sort_by(|a, b| (&a.k, a.p, a.kind).cmp(&(&b.k, b.p, b.kind)));
        let pass = checks.iter().all(|c| c.pass);
        SReport { s, order, checks, pass, skipped_primes: skipped.into_iter().collect(), extra }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    /// Also report integrality at bad primes.
    pub primes_extra: bool,
}

/// Frobenius lifts shared between parallel checks.
struct FrobCache {
    field: Arc<NumberField>,
    maps: Mutex<HashMap<(u64, u32), Arc<FrobeniusMap>>>,
}

impl FrobCache {
    fn new(field: &Arc<NumberField>) -> Self {
        FrobCache { field: field.clone(), maps: Mutex::new(HashMap::new()) }
    }

    fn get(&self, p: u64, n: u32) -> Result<Arc<FrobeniusMap>> {
        if let Some(m) = self.maps.lock().unwrap().get(&(p, n)) {
            return Ok(m.clone());
        }
        let ring = make_residue_ring(&self.field, p, n)?;
        let map = Arc::new(frobenius_lift(&ring));
        Ok(self.maps.lock().unwrap().entry((p, n)).or_insert(map).clone())
    }

    /// `min(v_p(Frob_p(a) - b), e)`, computed in the residue ring at exactly the
    /// precision needed once denominators are cleared.
    fn congruence_valuation(&self, a: &FieldElem, b: &FieldElem, p: u64, e: u32) -> Result<i64> {
        let neg = |v: Valuation| match v {
            Valuation::Finite(x) if x < 0 => (-x) as u32,
            _ => 0,
        };
        let m = neg(element_valuation(a, p)).max(neg(element_valuation(b, p)));
        if e + m == 0 {
            return Ok(0);
        }
        let frob = self.get(p, e + m)?;
        let scale = arith::pow_u64(p, m);
        let ra = reduce(&a.scale_int(&scale), frob.ring())?;
        let rb = reduce(&b.scale_int(&scale), frob.ring())?;
        let diff = frob.apply(&ra)?.sub(&rb)?;
        Ok(diff.valuation() as i64 - m as i64)
    }
}

fn bad_primes_in(a: &FieldElem, field: &NumberField) -> Vec<u64> {
    a.denominator_support()
        .into_iter()
        .filter(|p| !field.is_good_prime_big(p))
        .map(|p| u64::try_from(p).expect("bad primes divide the discriminant"))
        .collect()
}

fn integrality_checks(a: &FieldElem, k: Index, field: &NumberField, skip: impl Fn(u64) -> bool) -> Vec<Check> {
    a.denominator_support()
        .into_iter()
        .filter(|p| field.is_good_prime_big(p))
        .filter_map(|p| {
            // primes beyond u64 saturate; they never divide an index
            let p64 = u64::try_from(&p).unwrap_or(u64::MAX);
            if skip(p64) {
                return None;
            }
            let v = element_valuation(a, p64).finite().unwrap_or(0);
            Some(Check { k: k.clone(), p: p64, required: 0, valuation: v, kind: CheckKind::Integrality, pass: false })
        })
        .collect()
}

fn bad_prime_extra(a: &FieldElem, k: Index, field: &NumberField, bad: &[u64]) -> Vec<Check> {
    bad.iter()
        .filter(|&&p| !a.is_zero() && !field.is_good_prime(p))
        .map(|&p| {
            let v = element_valuation(a, p).finite().unwrap_or(0).min(0);
            Check { k: k.clone(), p, required: 0, valuation: v, kind: CheckKind::Integrality, pass: v >= 0 }
        })
        .collect()
}

fn bad_primes_of(field: &NumberField) -> Vec<u64> {
    let d = field.discriminant().magnitude().clone();
    if d.is_zero() || d.is_one() {
        return Vec::new();
    }
    arith::prime_factors_big(&d).into_iter().filter_map(|p| u64::try_from(p).ok()).collect()
}

pub fn check_sfunction(v: &Series, s: u32) -> Result<SReport> {
    check_sfunction_with(v, s, CheckOptions::default())
}

pub fn check_sfunction_with(v: &Series, s: u32, opts: CheckOptions) -> Result<SReport> {
    if !v.const_term().is_zero() {
        return Err(Error::ConstantTermNonzero);
    }
    let field = v.field().clone();
    let n = v.order();
    let a: Vec<FieldElem> = (0..=n)
        .map(|k| v.coeff(k).scale_int(&BigInt::from(k).pow(s)))
        .collect();
    let cache = FrobCache::new(&field);
    let bad = bad_primes_of(&field);

    let per_k: Vec<(Vec<Check>, Vec<u64>, Vec<Check>)> = (1..=n as u64)
        .into_par_iter()
        .map(|k| -> Result<_> {
            let ak = &a[k as usize];
            let idx = Index::Single(k);
            let mut checks = Vec::new();
            let mut skipped = bad_primes_in(ak, &field);
            let primes = arith::prime_factors(k);
            checks.extend(integrality_checks(ak, idx.clone(), &field, |p| k % p == 0));
            for &p in &primes {
                if !field.is_good_prime(p) {
                    skipped.push(p);
                    continue;
                }
                let e = s * arith::ord_p(k, p);
                let prev = &a[(k / p) as usize];
                let val = cache.congruence_valuation(prev, ak, p, e)?;
                checks.push(Check {
                    k: idx.clone(),
                    p,
                    required: e,
                    valuation: val,
                    kind: CheckKind::Congruence,
                    pass: val >= e as i64,
                });
            }
            let extra = if opts.primes_extra { bad_prime_extra(ak, idx, &field, &bad) } else { Vec::new() };
            Ok((checks, skipped, extra))
        })
        .collect::<Result<_>>()?;

    let mut checks = Vec::new();
    let mut skipped = BTreeSet::new();
    let mut extra = Vec::new();
    for (c, sk, ex) in per_k {
        checks.extend(c);
        skipped.extend(sk);
        extra.extend(ex);
    }
    Ok(SReport::assemble(s, n, checks, skipped, extra))
}

/// Multivariate check: for `p` dividing every component of `k`, `Frob_p(c_{k/p}) - p^s·c_k`
/// must have valuation at least `s`; otherwise `c_k` must be `p`-integral.
pub fn check_msfunction(v: &MSeries, s: u32) -> Result<SReport> {
    check_msfunction_with(v, s, CheckOptions::default())
}

pub fn check_msfunction_with(v: &MSeries, s: u32, opts: CheckOptions) -> Result<SReport> {
    if !v.const_term().is_zero() {
        return Err(Error::ConstantTermNonzero);
    }
    let field = v.field().clone();
    let order = v.order();
    let cache = FrobCache::new(&field);
    let bad = bad_primes_of(&field);

    let degree = |e: &[u32]| e.iter().map(|&x| x as usize).sum::<usize>();
    let content = |e: &[u32]| e.iter().fold(0u64, |g, &x| arith::gcd_u64(g, x as u64));

    // every (k, p) with p | content(k): stored k, and p·e for stored e
    let mut sites: BTreeSet<(Exponent, u64)> = BTreeSet::new();
    for e in v.terms().keys() {
        for p in arith::prime_factors(content(e)) {
            sites.insert((e.clone(), p));
        }
        let d = degree(e);
        for p in arith::primes_up_to((order / d.max(1)) as u64) {
            let scaled: Exponent = e.iter().map(|&x| x * p as u32).collect();
            sites.insert((scaled, p));
        }
    }
    let sites: Vec<(Exponent, u64)> = sites.into_iter().collect();
    let mut skipped = BTreeSet::new();
    for (_, p) in &sites {
        if !field.is_good_prime(*p) {
            skipped.insert(*p);
        }
    }

    let mut checks: Vec<Check> = sites
        .par_iter()
        .filter(|(_, p)| field.is_good_prime(*p))
        .map(|(k, p)| -> Result<Check> {
            let ck = v.get(k);
            let prev: Exponent = k.iter().map(|&x| x / *p as u32).collect();
            let cprev = v.get(&prev);
            let target = ck.scale_int(&arith::pow_u64(*p, s));
            let val = cache.congruence_valuation(&cprev, &target, *p, s)?;
            Ok(Check {
                k: Index::Multi(k.clone()),
                p: *p,
                required: s,
                valuation: val,
                kind: CheckKind::Congruence,
                pass: val >= s as i64,
            })
        })
        .collect::<Result<_>>()?;

    let mut extra = Vec::new();
    for (k, c) in v.terms() {
        let g = content(k);
        skipped.extend(bad_primes_in(c, &field));
        checks.extend(integrality_checks(c, Index::Multi(k.clone()), &field, |p| g % p == 0));
        if opts.primes_extra {
            extra.extend(bad_prime_extra(c, Index::Multi(k.clone()), &field, &bad));
        }
    }
    Ok(SReport::assemble(s, order, checks, skipped, extra))
}

/// Solves `a_d/d = Σ_{k|d} b_{d/k}^k / k` for `b_1 … b_N`, with `a_d = d·c_d`.
/// The constant term is ignored.
pub fn dwork_factor(v: &Series) -> Vec<FieldElem> {
    let n = v.order();
    let mut b: Vec<FieldElem> = vec![FieldElem::zero(v.field())];
    for d in 1..=n {
        let mut bd = v.coeff(d).clone();
        for k in arith::divisors(d as u64).into_iter().skip(1) {
            let prev = &b[d / k as usize];
            if !prev.is_zero() {
                bd = &bd - &prev.pow(k).div_int(&BigInt::from(k));
            }
        }
        b.push(bd);
    }
    b.remove(0);
    b
}

/// `-Σ_d log(1 - b_d z^d)` truncated at `order`; `b[0]` is `b_1`.
pub fn dwork_assemble(field: &Arc<NumberField>, b: &[FieldElem], order: usize) -> Series {
    let mut out = Series::zero(field, order);
    for (i, bd) in b.iter().enumerate() {
        let d = i + 1;
        if bd.is_zero() || d > order {
            continue;
        }
        let mut pw = FieldElem::one(field);
        for m in 1..=order / d {
            pw = &pw * bd;
            let k = d * m;
            let c = out.coeff(k) + &pw.div_int(&BigInt::from(m));
            out.set_coeff(k, c);
        }
    }
    out
}

/// Builds `V = Σ a_k z^k/k^s` with `a_1 = x`. For `k > 1` coprime to the discriminant,
/// `a_k` solves `a_k ≡ Frob_p(a_{k/p}) (mod p^(s·ord_p k))` for all `p | k`, with every
/// coordinate reduced into `[0, M)`; other `a_k` are zero.
pub fn generate_crt(field: &Arc<NumberField>, x: &FieldElem, s: u32, order: usize) -> Result<Series> {
    if !x.same_field_as(field) {
        return Err(Error::FieldMismatch);
    }
    if !x.is_integral() {
        return Err(Error::NotIntegral);
    }
    let cache = FrobCache::new(field);
    let d = field.degree();
    let mut a: Vec<FieldElem> = vec![FieldElem::zero(field); order + 1];
    if order >= 1 {
        a[1] = x.clone();
    }
    for k in 2..=order as u64 {
        if !field.coprime_to_discriminant(k) {
            continue;
        }
        let mut systems: Vec<Vec<(BigInt, BigInt)>> = vec![Vec::new(); d];
        for p in arith::prime_factors(k) {
            let e = s * arith::ord_p(k, p);
            if e == 0 {
                continue;
            }
            let frob = cache.get(p, e)?;
            let prev = reduce(&a[(k / p) as usize], frob.ring())?;
            let img = frob.apply(&prev)?;
            for (sys, c) in systems.iter_mut().zip(img.coords()) {
                sys.push((c.clone(), frob.ring().modulus().clone()));
            }
        }
        let coords: Vec<BigInt> = systems.iter().map(|sys| arith::crt(sys).0).collect();
        a[k as usize] = FieldElem::from_integer_coords(field, coords, BigInt::one())?;
    }
    Ok(Series::from_fn(field, order, |k| a[k].div_int(&BigInt::from(k).pow(s))))
}
