//! Exact arithmetic for s-functions: power series over number fields whose
//! coefficients satisfy Frobenius congruences `Frob_p(a_{k/p}) ≡ a_k (mod p^(s·ord_p k))`
//! at every good prime.
//!
//! The crate covers number-field and residue-ring arithmetic, truncated power
//! series in one or several variables, the s-function verifier, Dwork
//! factorization, the framing transforms, and a catalog of generators.

pub mod arith;
pub mod catalog;
pub mod error;
pub mod framing;
pub mod json;
pub mod linalg;
pub mod numfield;
pub mod padic;
pub mod mseries;
pub mod series;
pub mod sfunc;

pub use error::{Error, Result};
pub use numfield::{make_field, FieldElem, NumberField, Rational};
