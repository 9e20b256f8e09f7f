//! Monomial points of the real spectrum.
//!
//! A monomial point is the semi-curvette `t -> (c_1 t^{a_1}, ..., c_n t^{a_n})`
//! with `a_i` in the value group and `t` a positive infinitesimal. Only the
//! signs of the `c_i` are kept. A polynomial is evaluated by grouping its
//! terms by value: the first group whose signed coefficients do not cancel
//! gives both the value and the sign.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::blowup::{transform_value, BlowupStep, Transform};
use crate::error::{check_len, Error, Result};
use crate::lexgroup::{LexVec, ValVec};
use crate::polynomial::{mono_value, ExponentVec, Poly, Term};
use crate::rational::{sign_of, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Pos => 1,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn pow(self, e: u32) -> Sign {
        if self == Sign::Neg && e % 2 == 1 {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = Error;

    fn try_from(v: i8) -> Result<Self> {
        match v {
            1 => Ok(Sign::Pos),
            -1 => Ok(Sign::Neg),
            _ => Err(Error::invalid(format!("a sign must be 1 or -1, got {v}"))),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.as_i8()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PointRepr", into = "PointRepr")]
pub struct MonomialPoint {
    a: ValVec,
    eps: Vec<Sign>,
    independent: bool,
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    a: ValVec,
    eps: Vec<Sign>,
    #[serde(default)]
    independent: bool,
}

impl TryFrom<PointRepr> for MonomialPoint {
    type Error = Error;

    fn try_from(r: PointRepr) -> Result<Self> {
        MonomialPoint::new(r.a, r.eps, r.independent)
    }
}

impl From<MonomialPoint> for PointRepr {
    fn from(p: MonomialPoint) -> Self {
        PointRepr { a: p.a, eps: p.eps, independent: p.independent }
    }
}

impl MonomialPoint {
    /// With `independent` set, the values must have rational rank `n`.
    pub fn new(a: ValVec, eps: Vec<Sign>, independent: bool) -> Result<Self> {
        check_len(a.nvars(), eps.len())?;
        if independent && a.rat_rank() != a.nvars() {
            return Err(Error::invalid(format!(
                "values have rational rank {} but {} was asserted",
                a.rat_rank(),
                a.nvars()
            )));
        }
        Ok(MonomialPoint { a, eps, independent })
    }

    /// All signs positive; independence detected from the values.
    pub fn positive(a: ValVec) -> Self {
        let independent = a.rat_rank() == a.nvars();
        let eps = vec![Sign::Pos; a.nvars()];
        MonomialPoint { a, eps, independent }
    }

    pub fn values(&self) -> &ValVec {
        &self.a
    }

    pub fn signs(&self) -> &[Sign] {
        &self.eps
    }

    pub fn is_independent(&self) -> bool {
        self.independent
    }

    pub fn nvars(&self) -> usize {
        self.a.nvars()
    }

    /// Sign of `x^exp` along the curvette.
    pub fn monomial_sign(&self, exp: &ExponentVec) -> Sign {
        exp.0.iter().zip(&self.eps).fold(Sign::Pos, |acc, (&e, &s)| acc.times(s.pow(e)))
    }

    /// Sign of `c * x^exp` along the curvette.
    pub fn term_sign(&self, t: &Term) -> Sign {
        let s = self.monomial_sign(&t.exp);
        if t.coeff.is_negative() {
            s.times(Sign::Neg)
        } else {
            s
        }
    }
}

impl Transform for MonomialPoint {
    /// Values move by the value rule; `x'_q = x_q / x_j` has sign
    /// `eps_q * eps_j` on `J \ {j}`.
    fn transform(&self, step: &BlowupStep) -> Result<Self> {
        let a = transform_value(step, &self.a)?;
        let mut eps = self.eps.clone();
        for q in step.moved() {
            eps[q] = self.eps[q].times(self.eps[step.chart()]);
        }
        Ok(MonomialPoint { a, eps, independent: self.independent })
    }
}

/// Value of a polynomial; the zero function has infinite value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolyValue {
    Finite(LexVec),
    Infinite,
}

/// Terms of one value, with the sum of their signed coefficients.
#[derive(Clone, Debug)]
pub struct ValueGroup<'a> {
    pub value: LexVec,
    pub terms: Vec<&'a Term>,
    /// `sum coeff * prod eps_q^{e_q}` over the group.
    pub leading: Rational,
}

/// Groups the terms of `f` by value, ascending.
pub fn value_groups<'a>(f: &'a Poly, p: &MonomialPoint) -> Result<Vec<ValueGroup<'a>>> {
    if f.is_zero() {
        return Ok(Vec::new());
    }
    check_len(p.nvars(), f.nvars())?;
    let mut valued: Vec<(LexVec, &Term)> =
        f.terms().iter().map(|t| Ok((mono_value(&t.exp, &p.a)?, t))).collect::<Result<_>>()?;
    valued.sort_by(|x, y| x.0.cmp_same_depth(&y.0));
    let mut groups: Vec<ValueGroup> = Vec::new();
    for (v, t) in valued {
        let signed = match p.monomial_sign(&t.exp) {
            Sign::Pos => t.coeff.clone(),
            Sign::Neg => -t.coeff.clone(),
        };
        match groups.last_mut() {
            Some(g) if g.value == v => {
                g.terms.push(t);
                g.leading += signed;
            }
            _ => groups.push(ValueGroup { value: v, terms: vec![t], leading: signed }),
        }
    }
    Ok(groups)
}

pub fn poly_value(f: &Poly, p: &MonomialPoint) -> Result<PolyValue> {
    Ok(value_groups(f, p)?
        .into_iter()
        .find(|g| !g.leading.is_zero())
        .map_or(PolyValue::Infinite, |g| PolyValue::Finite(g.value)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominant {
    Unique(Term),
    Ambiguous,
}

/// The term of strictly smallest value, if there is exactly one.
pub fn dominant_term(f: &Poly, p: &MonomialPoint) -> Result<Dominant> {
    if f.is_zero() {
        return Err(Error::invalid("the zero polynomial has no dominant term"));
    }
    let groups = value_groups(f, p)?;
    let first = &groups[0];
    Ok(if first.terms.len() == 1 { Dominant::Unique(first.terms[0].clone()) } else { Dominant::Ambiguous })
}

/// Sign of `f` at `p`: -1, 0 or 1. Zero means `f` vanishes on the curvette.
pub fn sign_at(f: &Poly, p: &MonomialPoint) -> Result<i8> {
    Ok(value_groups(f, p)?.iter().find(|g| !g.leading.is_zero()).map_or(0, |g| sign_of(&g.leading)))
}

/// Comparison of two magnitudes at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbsOrdering {
    Less,
    Equal,
    Greater,
    /// Equal values but different monomials: not decided by value data.
    Incomparable,
}

impl From<Ordering> for AbsOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => AbsOrdering::Less,
            Ordering::Equal => AbsOrdering::Equal,
            Ordering::Greater => AbsOrdering::Greater,
        }
    }
}

/// Compares `|t1|` with `|t2|` at `p`. A smaller value means an infinitely
/// larger magnitude.
pub fn cmp_abs(t1: &Term, t2: &Term, p: &MonomialPoint) -> Result<AbsOrdering> {
    let v1 = mono_value(&t1.exp, &p.a)?;
    let v2 = mono_value(&t2.exp, &p.a)?;
    Ok(match v1.cmp_same_depth(&v2) {
        Ordering::Less => AbsOrdering::Greater,
        Ordering::Greater => AbsOrdering::Less,
        Ordering::Equal if t1.exp == t2.exp => t1.coeff.abs().cmp(&t2.coeff.abs()).into(),
        Ordering::Equal => AbsOrdering::Incomparable,
    })
}
