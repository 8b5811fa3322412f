//! Framing transforms of 2-functions.
//!
//! With `Y = exp(-δW)`, the framed coordinate is `z_f = z·(-Y)^f` and the framed
//! series is `W_f = (W - (f/2)(δW)²)` rewritten in `z_f`. The elementary framing
//! `W̃ = -W_1` is an involution. Several variables are framed by a symmetric integer
//! matrix `κ`, with signs `σ_i = (-1)^κ_ii`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::mseries::{invert_map, MSeries};
use crate::numfield::{FieldElem, Rational};
use crate::series::Series;

/// A symmetric integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Kappa {
    entries: Vec<Vec<i64>>,
}

impl Kappa {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!("kappa must be square ({n} rows)")));
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(Kappa { entries })
    }

    pub fn zero(n: usize) -> Self {
        Kappa { entries: vec![vec![0; n]; n] }
    }

    /// `κ_ii = 1` and everything else zero.
    pub fn diagonal_unit(n: usize, i: usize) -> Self {
        let mut k = Self::zero(n);
        k.entries[i][i] = 1;
        k
    }

    /// `κ_ij = κ_ji = 1` and everything else zero.
    pub fn exchange(n: usize, i: usize, j: usize) -> Self {
        let mut k = Self::zero(n);
        k.entries[i][j] = 1;
        k.entries[j][i] = 1;
        k
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// `σ_i = (-1)^κ_ii`.
    pub fn sign(&self, i: usize) -> i64 {
        if self.entries[i][i].rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn checked_add(&self, other: &Kappa) -> Result<Kappa> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { kappa: other.n(), nvars: self.n() });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(Kappa { entries })
    }
}

impl FromStr for Kappa {
    type Err = Error;

    /// Rows separated by `;`, entries by `,`: `"1,0;0,1"`.
    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|e| e.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad kappa entry {e:?}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Kappa::new(rows)
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

fn require_zero_constant(w: &Series) -> Result<()> {
    if w.const_term().is_zero() {
        Ok(())
    } else {
        Err(Error::ConstantTermNonzero)
    }
}

/// `Y = exp(-δW)`.
fn framing_unit(w: &Series) -> Result<Series> {
    (-w.delta()).exp()
}

/// Elementary framing by Lagrange extraction: `ã_k = (-1)^(k-1)·[z^k] Y^(-k)`,
/// returned with raw coefficients `ã_k/k²`.
pub fn frame_elementary(w: &Series) -> Result<Series> {
    require_zero_constant(w)?;
    let y = framing_unit(w)?;
    let field = w.field();
    let mut out = Series::zero(field, w.order());
    for k in 1..=w.order() {
        let c = y.power_coeff(-(k as i64), k)?;
        let c = if k % 2 == 0 { -c } else { c };
        out.set_coeff(k, c.div_int(&BigInt::from(k * k)));
    }
    Ok(out)
}

/// Elementary framing by reversion of `z̃ = -z·Y`, then `W̃ = -∫d log Ỹ` with `Ỹ = 1/Y`.
pub fn frame_elementary_by_reversion(w: &Series) -> Result<Series> {
    require_zero_constant(w)?;
    let y = framing_unit(w)?;
    let z = Series::var(w.field(), w.order());
    let ztilde = -(&z * &y);
    let back = ztilde.revert()?;
    y.compose(&back)?.log()?.dint()
}

/// The framed coordinate `z_f = z·(-Y)^f`.
pub fn framed_coordinate(w: &Series, f: i64) -> Result<Series> {
    let y = framing_unit(w)?;
    let z = Series::var(w.field(), w.order());
    let mut zf = &z * &y.power(f)?;
    if f.rem_euclid(2) == 1 {
        zf = -zf;
    }
    Ok(zf)
}

/// `W_f = (W - (f/2)(δW)²)` expressed in `z_f`.
pub fn frame_f(w: &Series, f: i64) -> Result<Series> {
    require_zero_constant(w)?;
    if f == 0 {
        return Ok(w.clone());
    }
    let back = framed_coordinate(w, f)?.revert()?;
    let dw = w.delta();
    let half_f = Rational::new(f.into(), 2.into());
    let q = w - &(&dw * &dw).scale_rational(&half_f);
    q.compose(&back)
}

/// `κ`-framing of a series in `n` variables:
/// `z_κ^i = σ_i·z^i·exp(-Σ_k κ_ik δ_k W)` and `W_κ = (W - ½Σ κ_jk δ_jW δ_kW)` in `z_κ`.
pub fn frame_multi(w: &MSeries, kappa: &Kappa) -> Result<MSeries> {
    let n = w.nvars();
    if kappa.n() != n {
        return Err(Error::DimensionMismatch { kappa: kappa.n(), nvars: n });
    }
    if !w.const_term().is_zero() {
        return Err(Error::ConstantTermNonzero);
    }
    let field = w.field();
    let int = |k: i64| FieldElem::from_int(field, k);
    let deltas: Vec<MSeries> = (0..n).map(|i| w.delta_i(i)).collect();

    let mut zmap = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = MSeries::zero(field, n, w.order());
        for (k, dk) in deltas.iter().enumerate() {
            if kappa.get(i, k) != 0 {
                e = &e - &dk.scale(&int(kappa.get(i, k)));
            }
        }
        let zi = e.exp()?.mul_var(i).scale(&int(kappa.sign(i)));
        zmap.push(zi);
    }
    let back = invert_map(&zmap)?;

    let mut quad = MSeries::zero(field, n, w.order());
    for j in 0..n {
        for k in 0..n {
            if kappa.get(j, k) != 0 {
                quad = &quad + &(&deltas[j] * &deltas[k]).scale(&int(kappa.get(j, k)));
            }
        }
    }
    let q = w - &quad.scale_rational(&Rational::new(1.into(), 2.into()));
    q.compose(&back)
}
