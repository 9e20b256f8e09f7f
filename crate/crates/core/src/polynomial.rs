//! Sparse multivariate polynomials over `Q`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_len, Error, Result};
use crate::lexgroup::{LexVec, ValVec};
use crate::rational::{as_string, format_rational, parse_rational, Rational};

/// Exponent vector of a monomial `x^e`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVec(pub Vec<u32>);

impl ExponentVec {
    pub fn zero(n: usize) -> Self {
        ExponentVec(vec![0; n])
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// 0-based indices with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(q, _)| q)
    }

    pub fn checked_add(&self, other: &ExponentVec) -> Result<ExponentVec> {
        check_len(self.nvars(), other.nvars())?;
        Ok(ExponentVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    /// Graded lexicographic comparison: total degree first, then lex.
    pub fn grlex_cmp(&self, other: &ExponentVec) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl From<Vec<u32>> for ExponentVec {
    fn from(v: Vec<u32>) -> Self {
        ExponentVec(v)
    }
}

impl fmt::Debug for ExponentVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    #[serde(rename = "c", with = "as_string")]
    pub coeff: Rational,
    #[serde(rename = "e")]
    pub exp: ExponentVec,
}

impl Term {
    pub fn new(coeff: Rational, exp: impl Into<ExponentVec>) -> Self {
        Term { coeff, exp: exp.into() }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*x^{:?}", format_rational(&self.coeff), self.exp)
    }
}

/// A polynomial in canonical form: distinct exponents, no zero coefficients,
/// terms ascending in graded lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: Vec<Term>,
}

/// Merges duplicate exponents, drops zero coefficients and sorts.
pub fn poly_normalize(nvars: usize, raw: impl IntoIterator<Item = (Rational, ExponentVec)>) -> Result<Poly> {
    let mut merged: BTreeMap<ExponentVec, Rational> = BTreeMap::new();
    for (c, e) in raw {
        check_len(nvars, e.nvars())?;
        *merged.entry(e).or_insert_with(Rational::zero) += c;
    }
    let mut terms: Vec<Term> =
        merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|(exp, coeff)| Term { coeff, exp }).collect();
    terms.sort_by(|a, b| a.exp.grlex_cmp(&b.exp));
    Ok(Poly { nvars, terms })
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: Vec::new() }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        poly_normalize(nvars, terms.into_iter().map(|t| (t.coeff, t.exp)))
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        poly_normalize(nvars, [(c, ExponentVec::zero(nvars))]).expect("lengths agree")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parses expressions such as `"3*x1^2*x2 - 1/2*x3"`.
    ///
    /// Variables are `x1`, `x2`, ... (1-based). When `nvars` is `None` the
    /// largest index that occurs is used.
    pub fn parse(s: &str, nvars: Option<usize>) -> Result<Poly> {
        let raw = parse_terms(s)?;
        let used = raw.iter().flat_map(|(_, e)| e.keys().copied()).max().map_or(0, |q| q + 1);
        let n = match nvars {
            Some(n) if n < used => {
                return Err(Error::Parse(format!("x{used} used in a polynomial over {n} variables")))
            }
            Some(n) => n,
            None => used,
        };
        poly_normalize(
            n,
            raw.into_iter().map(|(c, e)| {
                let mut exp = vec![0u32; n];
                for (q, k) in e {
                    exp[q] += k;
                }
                (c, ExponentVec(exp))
            }),
        )
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let c = t.coeff.abs();
            let mut factors = Vec::new();
            if !c.is_one() || t.exp.is_zero() {
                factors.push(format_rational(&c));
            }
            for (q, &e) in t.exp.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{}", q + 1)),
                    _ => factors.push(format!("x{}^{e}", q + 1)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms.serialize(s)
    }
}

/// Accepts either a list of `{"c": "p/q", "e": [..]}` terms or a string in
/// the human-readable syntax.
impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Terms(Vec<Term>),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Terms(terms) => {
                let n = terms.first().map_or(0, |t| t.exp.nvars());
                Poly::from_terms(n, terms).map_err(serde::de::Error::custom)
            }
            Repr::Text(s) => Poly::parse(&s, None).map_err(serde::de::Error::custom),
        }
    }
}

type RawTerm = (Rational, BTreeMap<usize, u32>);

fn parse_terms(s: &str) -> Result<Vec<RawTerm>> {
    let src: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < src.len() {
        let mut sign = Rational::one();
        if src[i] == '+' || src[i] == '-' {
            if src[i] == '-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(Error::Parse(format!("expected '+' or '-' at offset {i}")));
        }
        let (term, next) = parse_term(&src, i)?;
        out.push((sign * term.0, term.1));
        i = next;
    }
    Ok(out)
}

fn parse_term(src: &[char], mut i: usize) -> Result<(RawTerm, usize)> {
    let mut coeff = Rational::one();
    let mut exps: BTreeMap<usize, u32> = BTreeMap::new();
    loop {
        match src.get(i) {
            Some('x') => {
                let (idx, next) = read_digits(src, i + 1)?;
                let q: usize = idx.parse().map_err(|_| Error::Parse(format!("bad variable index {idx:?}")))?;
                if q == 0 {
                    return Err(Error::Parse("variables are numbered from x1".into()));
                }
                i = next;
                let mut e = 1u32;
                if src.get(i) == Some(&'^') {
                    let (digits, next) = read_digits(src, i + 1)?;
                    e = digits.parse().map_err(|_| Error::Parse(format!("bad exponent {digits:?}")))?;
                    i = next;
                }
                *exps.entry(q - 1).or_insert(0) += e;
            }
            Some(c) if c.is_ascii_digit() => {
                let (mut num, next) = read_digits(src, i)?;
                i = next;
                if src.get(i) == Some(&'/') {
                    let (den, next) = read_digits(src, i + 1)?;
                    num = format!("{num}/{den}");
                    i = next;
                }
                coeff *= parse_rational(&num)?;
            }
            other => return Err(Error::Parse(format!("unexpected {other:?} at offset {i}"))),
        }
        match src.get(i) {
            Some('*') => i += 1,
            Some('+') | Some('-') | None => return Ok(((coeff, exps), i)),
            Some(c) => return Err(Error::Parse(format!("unexpected {c:?} at offset {i}"))),
        }
    }
}

fn read_digits(src: &[char], start: usize) -> Result<(String, usize)> {
    let end = (start..src.len()).find(|&k| !src[k].is_ascii_digit()).unwrap_or(src.len());
    if end == start {
        return Err(Error::Parse(format!("expected digits at offset {start}")));
    }
    Ok((src[start..end].iter().collect(), end))
}

/// The value `sum_q exp_q * a_q` of the monomial `x^exp`.
pub fn mono_value(exp: &ExponentVec, a: &ValVec) -> Result<LexVec> {
    check_len(a.nvars(), exp.nvars())?;
    let mut acc = LexVec::zero(a.depth());
    for (&e, v) in exp.0.iter().zip(a.values()) {
        if e != 0 {
            acc = acc.add_scaled(&Rational::from_integer(e.into()), v);
        }
    }
    Ok(acc)
}

/// `Some(gamma - alpha)` when `x^alpha` divides `x^gamma`.
pub fn divides(alpha: &ExponentVec, gamma: &ExponentVec) -> Option<ExponentVec> {
    if alpha.nvars() != gamma.nvars() {
        return None;
    }
    alpha.0.iter().zip(&gamma.0).map(|(&a, &g)| g.checked_sub(a)).collect::<Option<Vec<_>>>().map(ExponentVec)
}
