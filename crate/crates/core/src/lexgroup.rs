//! The ordered group `Q^m` under lexicographic order.
//!
//! A [`LexVec`] is one value; a [`ValVec`] is the tuple of values of the
//! coordinates `x_1, ..., x_n` at a point, each of them non-negative.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_len, Error, Result};
use crate::rational::{clear_denominators, format_rational, rat, vec_as_strings, Rational};

/// An element of `Q^m` ordered lexicographically. The depth `m` is at least 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LexVec(Vec<Rational>);

impl LexVec {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("a value must have depth at least 1"));
        }
        Ok(LexVec(entries))
    }

    pub fn from_ints(entries: &[i64]) -> Result<Self> {
        Self::new(entries.iter().map(|&e| rat(e)).collect())
    }

    pub fn zero(depth: usize) -> Self {
        assert!(depth > 0, "depth must be positive");
        LexVec(vec![Rational::zero(); depth])
    }

    /// The vector with a single 1 at 0-based position `pos`.
    pub fn unit(depth: usize, pos: usize) -> Self {
        let mut v = Self::zero(depth);
        v.0[pos] = rat(1);
        v
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Sign of the first nonzero entry.
    pub fn signum(&self) -> Ordering {
        self.0.iter().find(|q| !q.is_zero()).map_or(Ordering::Equal, |q| {
            if q.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.signum() != Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    /// Keeps the first entry and zeroes the rest.
    pub fn truncated(&self) -> LexVec {
        let mut v = LexVec::zero(self.depth());
        v.0[0] = self.0[0].clone();
        v
    }

    pub(crate) fn cmp_same_depth(&self, other: &LexVec) -> Ordering {
        debug_assert_eq!(self.depth(), other.depth());
        self.0.cmp(&other.0)
    }

    pub(crate) fn add(&self, other: &LexVec) -> LexVec {
        debug_assert_eq!(self.depth(), other.depth());
        LexVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn sub(&self, other: &LexVec) -> LexVec {
        debug_assert_eq!(self.depth(), other.depth());
        LexVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + c * other`
    pub(crate) fn add_scaled(&self, c: &Rational, other: &LexVec) -> LexVec {
        debug_assert_eq!(self.depth(), other.depth());
        if c.is_zero() {
            return self.clone();
        }
        LexVec(self.0.iter().zip(&other.0).map(|(a, b)| a + c * b).collect())
    }

    pub fn checked_add(&self, other: &LexVec) -> Result<LexVec> {
        check_len(self.depth(), other.depth())?;
        Ok(self.add(other))
    }

    pub fn checked_sub(&self, other: &LexVec) -> Result<LexVec> {
        check_len(self.depth(), other.depth())?;
        Ok(self.sub(other))
    }
}

impl fmt::Debug for LexVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LexVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&format_rational(q))?;
        }
        f.write_str(")")
    }
}

impl Serialize for LexVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        vec_as_strings::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for LexVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = vec_as_strings::deserialize(d)?;
        LexVec::new(v).map_err(serde::de::Error::custom)
    }
}

/// Compares two values lexicographically.
pub fn lex_cmp(u: &LexVec, v: &LexVec) -> Result<Ordering> {
    check_len(u.depth(), v.depth())?;
    Ok(u.cmp_same_depth(v))
}

/// Exact `sum_i coeffs[i] * vecs[i]`.
pub fn lex_combine(coeffs: &[Rational], vecs: &[LexVec]) -> Result<LexVec> {
    check_len(coeffs.len(), vecs.len())?;
    let first = vecs.first().ok_or_else(|| Error::invalid("cannot combine an empty family of values"))?;
    let depth = first.depth();
    let mut acc = LexVec::zero(depth);
    for (c, v) in coeffs.iter().zip(vecs) {
        check_len(depth, v.depth())?;
        acc = acc.add_scaled(c, v);
    }
    Ok(acc)
}

/// Rank over `Q` of equal-length rational rows, by fraction-free elimination.
///
/// Every row is first scaled to integers; elimination then proceeds with
/// integer cross-multiplication, dividing each updated row by the gcd of its
/// entries.
pub fn rank_of_rows(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> =
        rows.iter().map(|r| clear_denominators(r)).filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        let pv = pivot_row[c].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &pv * &*x - &f * p;
            }
            let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && g != BigInt::from(1) {
                for x in row.iter_mut() {
                    *x /= &g;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// `dim_Q` of the span of `vecs`.
pub fn rat_rank(vecs: &[LexVec]) -> Result<usize> {
    let Some(first) = vecs.first() else {
        return Ok(0);
    };
    for v in vecs {
        check_len(first.depth(), v.depth())?;
    }
    let rows: Vec<Vec<Rational>> = vecs.iter().map(|v| v.0.clone()).collect();
    Ok(rank_of_rows(&rows))
}

/// The values `(a_1, ..., a_n)` of the coordinates at a point.
///
/// All entries share one depth and are non-negative.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ValVec(Vec<LexVec>);

impl ValVec {
    pub fn new(values: Vec<LexVec>) -> Result<Self> {
        let first = values.first().ok_or_else(|| Error::invalid("a value vector needs at least one coordinate"))?;
        let depth = first.depth();
        for (q, v) in values.iter().enumerate() {
            check_len(depth, v.depth())?;
            if !v.is_nonnegative() {
                return Err(Error::invalid(format!("value of x{} is negative: {v}", q + 1)));
            }
        }
        Ok(ValVec(values))
    }

    /// Rank-1 values (depth 1) from rationals.
    pub fn from_scalars(values: &[Rational]) -> Result<Self> {
        Self::new(values.iter().map(|q| LexVec(vec![q.clone()])).collect())
    }

    /// Convenience constructor from integer rows.
    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| LexVec::from_ints(r)).collect::<Result<_>>()?)
    }

    pub(crate) fn from_vec_unchecked(values: Vec<LexVec>) -> Self {
        ValVec(values)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn depth(&self) -> usize {
        self.0[0].depth()
    }

    pub fn values(&self) -> &[LexVec] {
        &self.0
    }

    pub fn get(&self, q: usize) -> &LexVec {
        &self.0[q]
    }

    pub fn rat_rank(&self) -> usize {
        let rows: Vec<Vec<Rational>> = self.0.iter().map(|v| v.0.clone()).collect();
        rank_of_rows(&rows)
    }
}

impl fmt::Debug for ValVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

impl Serialize for ValVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ValVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<LexVec>::deserialize(d)?;
        ValVec::new(v).map_err(serde::de::Error::custom)
    }
}

/// Replaces the zero value at 0-based coordinate `r` by the unit vector with
/// its 1 at 0-based lex position `s`.
///
/// Requires `1 <= r < n`, `s < m` and `a_r = ... = a_{n-1} = 0`, i.e. the
/// coordinates from `r` on are all zero before the bump.
pub fn rank_bump(a: &ValVec, r: usize, s: usize) -> Result<ValVec> {
    let n = a.nvars();
    if r == 0 || r >= n {
        return Err(Error::invalid(format!("rank_bump needs 1 <= r < n, got r = {r}, n = {n}")));
    }
    if s >= a.depth() {
        return Err(Error::invalid(format!("lex position {} exceeds depth {}", s + 1, a.depth())));
    }
    if let Some(q) = (r..n).find(|&q| !a.get(q).is_zero()) {
        return Err(Error::invalid(format!("x{} has nonzero value {}", q + 1, a.get(q))));
    }
    let mut values = a.0.clone();
    values[r] = LexVec::unit(a.depth(), s);
    Ok(ValVec(values))
}
