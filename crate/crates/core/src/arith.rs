//! Rational-integer helpers: primality, factorization, valuations, Möbius inversion.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn is_prime(n: u64) -> bool {
    num_prime::nt_funcs::is_prime64(n)
}

pub fn primes_up_to(limit: u64) -> Vec<u64> {
    num_prime::nt_funcs::primes(limit + 1)
        .into_iter()
        .filter(|&p| p <= limit)
        .collect()
}

/// Distinct prime divisors of `n`, ascending. Empty for 0 and 1.
pub fn prime_factors(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    num_prime::nt_funcs::factorize64(n).into_keys().collect()
}

/// Distinct prime divisors of an arbitrary-size integer, ascending.
pub fn prime_factors_big(n: &BigUint) -> Vec<BigUint> {
    if n <= &BigUint::one() {
        return Vec::new();
    }
    if let Some(small) = n.to_u64() {
        return prime_factors(small).into_iter().map(BigUint::from).collect();
    }
    num_prime::nt_funcs::factorize(n.clone()).into_keys().collect()
}

/// Exponent of `p` in `n` (`n > 0`).
pub fn ord_p(mut n: u64, p: u64) -> u32 {
    debug_assert!(n > 0 && p > 1);
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// `p`-adic valuation of a big integer; `None` for zero.
pub fn val_p(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(e);
        }
        n = q;
        e += 1;
    }
}

pub fn pow_u64(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// Least non-negative residue of `a` modulo `m > 0`.
pub fn modulo(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(m);
    let ext = a.extended_gcd(m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(m))
}

/// Combine `x ≡ r_i (mod m_i)` for pairwise coprime moduli; returns the residue in `[0, Π m_i)`.
pub fn crt(residues: &[(BigInt, BigInt)]) -> (BigInt, BigInt) {
    let mut acc = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, m) in residues {
        // acc + modulus * t ≡ r (mod m)
        let inv = mod_inverse(&modulus, m).expect("CRT moduli must be coprime");
        let t = ((r - &acc) * inv).mod_floor(m);
        acc += &modulus * t;
        modulus *= m;
        acc = acc.mod_floor(&modulus);
    }
    (acc, modulus)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mobius(n: u64) -> i32 {
    if n == 1 {
        return 1;
    }
    let mut sign = 1;
    for p in prime_factors(n) {
        if ord_p(n, p) > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn to_signed(n: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n)
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
