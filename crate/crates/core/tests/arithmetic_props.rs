mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use sfunctions::arith;
use sfunctions::numfield::{denominator_support, invert, multiply, poly_discriminant, resultant};
use sfunctions::padic::{
    frobenius_lift, make_residue_ring, reduce, valuation, ResidueElem, Valuation,
};
use sfunctions::{Error, FieldElem};

/// `b²c² - 4c³ - 4b³d - 27d² + 18bcd` for `x³ + bx² + cx + d`.
fn cubic_disc(b: i64, c: i64, d: i64) -> BigInt {
    let (b, c, d) = (BigInt::from(b), BigInt::from(c), BigInt::from(d));
    &b * &b * &c * &c - 4 * &c * &c * &c - 4 * &b * &b * &b * &d - 27 * &d * &d + 18 * &b * &c * &d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadratic_and_cubic_discriminants(b in -20i64..=20, c in -20i64..=20, d in -20i64..=20) {
        prop_assert_eq!(poly_discriminant(&ints(&[c, b, 1])), BigInt::from(b * b - 4 * c));
        prop_assert_eq!(poly_discriminant(&ints(&[d, c, b, 1])), cubic_disc(b, c, d));
    }

    #[test]
    fn field_axioms(a in prop::collection::vec(-9i64..=9, 3), b in prop::collection::vec(-9i64..=9, 3),
                    c in prop::collection::vec(-9i64..=9, 3)) {
        let k = cubic7();
        let (a, b, c) = (elem(&k, &a), elem(&k, &b), elem(&k, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            let inv = invert(&a).unwrap();
            prop_assert!(multiply(&a, &inv).unwrap().is_one());
            // primes in the denominator of the inverse divide the norm Res(P, A)
            let norm = resultant(k.minpoly(), a.numerators());
            for p in denominator_support(&inv) {
                prop_assert!((&norm % arith::to_signed(p)).is_zero());
            }
        }
    }

    /// Frobenius is a ring endomorphism lifting `a ↦ a^p (mod p)`.
    #[test]
    fn frobenius_homomorphism(a in prop::collection::vec(-50i64..=50, 3), b in prop::collection::vec(-50i64..=50, 3),
                              p in prop::sample::select(vec![2u64, 3, 5, 11, 13, 17]), n in prop::sample::select(vec![1u32, 2, 4])) {
        let k = cubic7();
        let ring = make_residue_ring(&k, p, n).unwrap();
        let frob = frobenius_lift(&ring);
        prop_assert!(frob.check_invariants());
        let (a, b) = (reduce(&elem(&k, &a), &ring).unwrap(), reduce(&elem(&k, &b), &ring).unwrap());
        let fa = frob.apply(&a).unwrap();
        let fb = frob.apply(&b).unwrap();
        prop_assert_eq!(frob.apply(&a.mul(&b).unwrap()).unwrap(), fa.mul(&fb).unwrap());
        prop_assert_eq!(frob.apply(&a.add(&b).unwrap()).unwrap(), fa.add(&fb).unwrap());
        let base = make_residue_ring(&k, p, 1).unwrap();
        prop_assert_eq!(fa.reduce_to(&base).unwrap(), a.pow(p).reduce_to(&base).unwrap());
    }
}

#[test]
fn worked_examples() {
    let k = cubic7();
    assert_eq!(k.degree(), 3);
    assert_eq!(k.discriminant(), &BigInt::from(49));
    assert_eq!(sqrt_m3().discriminant(), &BigInt::from(-12));
    assert_eq!(sfunctions::make_field(&ints(&[5, 0, 2])).unwrap_err(), Error::NotMonic(2.into()));
    let x = FieldElem::generator(&k);
    assert_eq!(&x * &x.pow(2), elem(&k, &[1, 2, -1]));
    let y = FieldElem::generator(&sqrt_m3());
    assert_eq!(&y * &y, FieldElem::from_int(&sqrt_m3(), -3));
    let other = FieldElem::one(&sqrt_m3());
    assert_eq!(multiply(&x, &other), Err(Error::FieldMismatch));
}

#[test]
fn valuation_errors() {
    let k = sqrt_m3();
    let x = FieldElem::generator(&k);
    assert_eq!(valuation(&x, 4, &k), Err(Error::NotPrime(4)));
    assert_eq!(valuation(&x, 3, &k), Err(Error::BadPrime(3)));
    assert_eq!(valuation(&x.scale_int(&BigInt::from(25)), 5, &k), Ok(Valuation::Finite(2)));
    let ring = make_residue_ring(&k, 5, 2).unwrap();
    let fifth = x.div_int(&BigInt::from(5));
    assert_eq!(reduce(&fifth, &ring), Err(Error::NotPIntegral(5)));
}

/// `Frob_p(x) = ±x` on `ℚ(√-3)` according to `p mod 3`, for all good `p < 100`.
#[test]
fn sqrt_minus_three_sign_pattern() {
    let k = sqrt_m3();
    for p in arith::primes_up_to(100).into_iter().filter(|&p| p > 3) {
        for n in [1, 3] {
            let ring = make_residue_ring(&k, p, n).unwrap();
            let xi = frobenius_lift(&ring).xi().clone();
            let x = ResidueElem::generator(&ring);
            let expected = if p % 3 == 1 { x } else { x.scale(&BigInt::from(-1)) };
            assert_eq!(xi, expected, "p = {p}, n = {n}");
        }
    }
}

/// `x³ - 5`: at 7 the image of `x` is `4x` mod 7 (order 3 action), at 13 it is `x`.
#[test]
fn cube_root_of_five() {
    let k = field(&[-5, 0, 0, 1]);
    let ring7 = make_residue_ring(&k, 7, 1).unwrap();
    let frob = frobenius_lift(&ring7);
    assert_eq!(frob.xi(), &ResidueElem::generator(&ring7).scale(&BigInt::from(4)));
    let ring = make_residue_ring(&k, 7, 3).unwrap();
    let frob = frobenius_lift(&ring);
    let x = ResidueElem::generator(&ring);
    let f1 = frob.apply(&x).unwrap();
    let f2 = frob.apply(&f1).unwrap();
    let f3 = frob.apply(&f2).unwrap();
    assert_ne!(f1, x);
    assert_ne!(f2, x);
    assert_eq!(f3, x);
    for n in [1, 2, 5] {
        let ring = make_residue_ring(&k, 13, n).unwrap();
        assert_eq!(frobenius_lift(&ring).xi(), &ResidueElem::generator(&ring));
    }
}
