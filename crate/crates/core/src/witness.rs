//! Certificates: witness systems for sign constancy, cone systems,
//! segments and staircases between two cone points.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::lexgroup::{LexVec, ValVec};
use crate::polynomial::{ExponentVec, Poly, Term};
use crate::rational::{denominator_lcm, matrix_as_strings, rat, vec_as_strings, Rational};
use crate::sper::{cmp_abs, dominant_term, sign_at, AbsOrdering, Dominant, MonomialPoint, Sign};

pub const SCHEMA_VERSION: u32 = 1;

/// `|lhs| >= |rhs|`, or `>` when `strict`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialInequality {
    pub lhs: Term,
    pub rhs: Term,
    pub strict: bool,
}

impl MonomialInequality {
    /// Builds `|d x^lambda| >= |e x^theta|` with non-negative rational
    /// exponents by raising both sides to the lcm `L` of the exponent
    /// denominators: the stored inequality is `|d^L x^{L lambda}| >= |e^L x^{L theta}|`.
    pub fn from_rational_exponents(
        lhs_coeff: &Rational,
        lhs_exp: &[Rational],
        rhs_coeff: &Rational,
        rhs_exp: &[Rational],
        strict: bool,
    ) -> Result<Self> {
        check_len(lhs_exp.len(), rhs_exp.len())?;
        if lhs_coeff.is_zero() || rhs_coeff.is_zero() {
            return Err(Error::invalid("inequality coefficients must be nonzero"));
        }
        if lhs_exp.iter().chain(rhs_exp).any(Signed::is_negative) {
            return Err(Error::invalid("inequality exponents must be non-negative"));
        }
        let l = denominator_lcm(lhs_exp.iter().chain(rhs_exp));
        let power = l.to_u32().ok_or_else(|| Error::invalid("exponent denominators too large"))?;
        let lq = Rational::from_integer(l);
        let scale = |exp: &[Rational]| -> Result<ExponentVec> {
            exp.iter()
                .map(|e| (e * &lq).to_integer().to_u32().ok_or_else(|| Error::invalid("exponent too large")))
                .collect::<Result<Vec<_>>>()
                .map(ExponentVec)
        };
        let pow = |c: &Rational| num_traits::pow(c.abs(), power as usize);
        Ok(MonomialInequality {
            lhs: Term::new(pow(lhs_coeff), scale(lhs_exp)?),
            rhs: Term::new(pow(rhs_coeff), scale(rhs_exp)?),
            strict,
        })
    }

    /// Whether the inequality holds at `p`; `None` when value data cannot
    /// decide it.
    pub fn holds_at(&self, p: &MonomialPoint) -> Result<Option<bool>> {
        Ok(match cmp_abs(&self.lhs, &self.rhs, p)? {
            AbsOrdering::Greater => Some(true),
            AbsOrdering::Less => Some(false),
            AbsOrdering::Equal => Some(!self.strict),
            AbsOrdering::Incomparable if self.strict => Some(false),
            AbsOrdering::Incomparable => None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FixedSign {
    #[serde(with = "crate::indices::one_based")]
    pub var: usize,
    pub sign: Sign,
}

/// Sign conditions on a set `L` of coordinates plus magnitude inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessSystem {
    pub schema_version: u32,
    pub n: usize,
    pub fixed_signs: Vec<FixedSign>,
    pub inequalities: Vec<MonomialInequality>,
}

impl WitnessSystem {
    fn fixed_map(&self) -> BTreeMap<usize, Sign> {
        self.fixed_signs.iter().map(|f| (f.var, f.sign)).collect()
    }

    /// Every variable without a fixed sign occurs only on right-hand sides.
    pub fn check_occurrences(&self) -> Result<()> {
        let fixed = self.fixed_map();
        for (k, ineq) in self.inequalities.iter().enumerate() {
            if let Some(q) = ineq.lhs.exp.support().find(|q| !fixed.contains_key(q)) {
                return Err(Error::invalid(format!(
                    "x{} has no fixed sign but occurs on the left of inequality {}",
                    q + 1,
                    k + 1
                )));
            }
        }
        Ok(())
    }
}

/// Builds the witness system of `polys` at `p`: for each polynomial with
/// dominant term `c x^g` and `N` other terms `c_k x^{g_k}`, the inequalities
/// `|c x^g| >= |N c_k x^{g_k}|`, together with the signs of `p` on `fixed`.
pub fn build_witness(p: &MonomialPoint, polys: &[Poly], fixed: &[usize]) -> Result<WitnessSystem> {
    let n = p.nvars();
    let mut fixed_sorted: Vec<usize> = fixed.to_vec();
    fixed_sorted.sort_unstable();
    fixed_sorted.dedup();
    if let Some(&q) = fixed_sorted.iter().find(|&&q| q >= n) {
        return Err(Error::invalid(format!("x{} is not a variable", q + 1)));
    }
    let mut inequalities = Vec::new();
    for (i, g) in polys.iter().enumerate() {
        if sign_at(g, p)? == 0 {
            return Err(Error::invalid(format!("polynomial {} vanishes at the base point", i + 1)));
        }
        let Dominant::Unique(dom) = dominant_term(g, p)? else {
            return Err(Error::Ambiguous);
        };
        if let Some(var) = dom.exp.support().find(|q| fixed_sorted.binary_search(q).is_err()) {
            return Err(Error::WitnessImpossible { poly: i, var });
        }
        let others: Vec<&Term> = g.terms().iter().filter(|t| t.exp != dom.exp).collect();
        let count = rat(others.len() as i64);
        for t in others {
            inequalities.push(MonomialInequality {
                lhs: dom.clone(),
                rhs: Term::new(&count * &t.coeff, t.exp.clone()),
                strict: false,
            });
        }
    }
    let w = WitnessSystem {
        schema_version: SCHEMA_VERSION,
        n,
        fixed_signs: fixed_sorted.into_iter().map(|var| FixedSign { var, sign: p.signs()[var] }).collect(),
        inequalities,
    };
    w.check_occurrences()?;
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Inside,
    Outside,
    /// No condition fails, but some tie cannot be decided from values.
    Undecidable,
}

pub fn witness_contains(w: &WitnessSystem, p: &MonomialPoint) -> Result<Membership> {
    check_len(w.n, p.nvars())?;
    if w.fixed_signs.iter().any(|f| p.signs()[f.var] != f.sign) {
        return Ok(Membership::Outside);
    }
    let mut undecided = false;
    for ineq in &w.inequalities {
        match ineq.holds_at(p)? {
            Some(true) => {}
            Some(false) => return Ok(Membership::Outside),
            None => undecided = true,
        }
    }
    Ok(if undecided { Membership::Undecidable } else { Membership::Inside })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignViolation {
    pub sample: usize,
    pub poly: usize,
    pub expected: i8,
    pub found: i8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignConstancyReport {
    /// Samples inside the witness set whose signs were compared.
    pub verified: Vec<usize>,
    /// Samples outside (or undecided), not compared.
    pub skipped: Vec<usize>,
    pub violations: Vec<SignViolation>,
}

/// Checks that every sample inside `w` gives each polynomial the sign it has
/// at `base`.
pub fn witness_sign_constancy(
    w: &WitnessSystem,
    polys: &[Poly],
    base: &MonomialPoint,
    samples: &[MonomialPoint],
) -> Result<SignConstancyReport> {
    if witness_contains(w, base)? != Membership::Inside {
        return Err(Error::invalid("the base point is not inside the witness set"));
    }
    let expected: Vec<i8> = polys.iter().map(|g| sign_at(g, base)).collect::<Result<_>>()?;
    let mut report = SignConstancyReport::default();
    for (k, s) in samples.iter().enumerate() {
        if witness_contains(w, s)? != Membership::Inside {
            report.skipped.push(k);
            continue;
        }
        for (i, g) in polys.iter().enumerate() {
            let found = sign_at(g, s)?;
            if found != expected[i] {
                report.violations.push(SignViolation { sample: k, poly: i, expected: expected[i], found });
            }
        }
        report.verified.push(k);
    }
    Ok(report)
}

/// Strict rows `sum_i omega_ji a_i > 0` and equality rows
/// `sum_i theta_li a_i = 0` on value vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConeRepr", into = "ConeRepr")]
pub struct ConeSystem {
    n: usize,
    omega: Vec<Vec<Rational>>,
    theta: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct ConeRepr {
    #[serde(default = "schema_version")]
    schema_version: u32,
    n: usize,
    #[serde(with = "matrix_as_strings", default)]
    omega: Vec<Vec<Rational>>,
    #[serde(with = "matrix_as_strings", default)]
    theta: Vec<Vec<Rational>>,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

impl TryFrom<ConeRepr> for ConeSystem {
    type Error = Error;

    fn try_from(r: ConeRepr) -> Result<Self> {
        ConeSystem::new(r.n, r.omega, r.theta)
    }
}

impl From<ConeSystem> for ConeRepr {
    fn from(c: ConeSystem) -> Self {
        ConeRepr { schema_version: SCHEMA_VERSION, n: c.n, omega: c.omega, theta: c.theta }
    }
}

fn combine(row: &[Rational], a: &ValVec) -> LexVec {
    row.iter().zip(a.values()).fold(LexVec::zero(a.depth()), |acc, (w, v)| acc.add_scaled(w, v))
}

impl ConeSystem {
    pub fn new(n: usize, omega: Vec<Vec<Rational>>, theta: Vec<Vec<Rational>>) -> Result<Self> {
        for r in omega.iter().chain(&theta) {
            check_len(n, r.len())?;
        }
        Ok(ConeSystem { n, omega, theta })
    }

    pub fn strict_only(omega: Vec<Vec<Rational>>) -> Result<Self> {
        let n = omega.first().map_or(0, Vec::len);
        Self::new(n, omega, Vec::new())
    }

    pub fn omega(&self) -> &[Vec<Rational>] {
        &self.omega
    }

    pub fn theta(&self) -> &[Vec<Rational>] {
        &self.theta
    }
}

/// Whether `a` satisfies every strict and every equality row of `cone`.
pub fn cone_member(cone: &ConeSystem, a: &ValVec) -> Result<bool> {
    check_len(cone.n, a.nvars())?;
    Ok(cone.omega.iter().all(|r| combine(r, a).is_positive()) && cone.theta.iter().all(|r| combine(r, a).is_zero()))
}

/// Keeps the first lex entry of every value.
pub fn truncate(a: &ValVec) -> ValVec {
    ValVec::from_vec_unchecked(a.values().iter().map(LexVec::truncated).collect())
}

/// The set of value vectors agreeing with `c` on all but the last coordinate
/// and with last coordinate between `c_n` and `d_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SegmentRepr", into = "SegmentRepr")]
pub struct Segment {
    c: ValVec,
    d: ValVec,
}

#[derive(Serialize, Deserialize)]
struct SegmentRepr {
    c: ValVec,
    d: ValVec,
}

impl TryFrom<SegmentRepr> for Segment {
    type Error = Error;

    fn try_from(r: SegmentRepr) -> Result<Self> {
        Segment::new(r.c, r.d)
    }
}

impl From<Segment> for SegmentRepr {
    fn from(s: Segment) -> Self {
        SegmentRepr { c: s.c, d: s.d }
    }
}

impl Segment {
    pub fn new(c: ValVec, d: ValVec) -> Result<Self> {
        check_len(c.nvars(), d.nvars())?;
        check_len(c.depth(), d.depth())?;
        let last = c.nvars() - 1;
        if let Some(q) = (0..last).find(|&q| c.get(q) != d.get(q)) {
            return Err(Error::invalid(format!("segment endpoints differ at x{}", q + 1)));
        }
        if c.get(last).cmp_same_depth(d.get(last)).is_gt() {
            return Err(Error::invalid("segment endpoints are out of order"));
        }
        Ok(Segment { c, d })
    }

    pub fn start(&self) -> &ValVec {
        &self.c
    }

    pub fn end(&self) -> &ValVec {
        &self.d
    }
}

pub fn segment_member(s: &Segment, e: &ValVec) -> Result<bool> {
    check_len(s.c.nvars(), e.nvars())?;
    check_len(s.c.depth(), e.depth())?;
    let last = e.nvars() - 1;
    if (0..last).any(|q| e.get(q) != s.c.get(q)) {
        return Ok(false);
    }
    let v = e.get(last);
    Ok(s.c.get(last).cmp_same_depth(v).is_le() && v.cmp_same_depth(s.d.get(last)).is_le())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircasePoint {
    /// Step index `i` in `0..N`.
    pub i: usize,
    /// Number of leading coordinates interpolated at `i/N`; the rest use `(i+1)/N`.
    pub j: usize,
    pub value: ValVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaircaseCertificate {
    pub schema_version: u32,
    #[serde(with = "matrix_as_strings")]
    pub omega: Vec<Vec<Rational>>,
    #[serde(with = "vec_as_strings")]
    pub a: Vec<Rational>,
    #[serde(with = "vec_as_strings")]
    pub b: Vec<Rational>,
    /// Smallest number of steps for which every point lies in the cone.
    pub steps: usize,
    /// Set when `steps > 1` and `steps - 1` was checked to fail.
    pub previous_fails: bool,
    pub points: Vec<StaircasePoint>,
}

fn row_value(row: &[Rational], c: &[Rational]) -> Rational {
    row.iter().zip(c).map(|(w, x)| w * x).sum()
}

/// First-coordinate values of the staircase point `(i, j)` for `n_steps`.
fn stair_values(a: &[Rational], b: &[Rational], n_steps: usize, i: usize, j: usize) -> Vec<Rational> {
    let big_n = rat(n_steps as i64);
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(c, (ac, bc))| {
            let lam = rat(if c < j { i as i64 } else { i as i64 + 1 }) / &big_n;
            &lam * ac + (rat(1) - &lam) * bc
        })
        .collect()
}

fn staircase_holds(omega: &[Vec<Rational>], a: &[Rational], b: &[Rational], n_steps: usize) -> bool {
    (0..n_steps).all(|i| {
        (0..a.len()).all(|j| {
            let c = stair_values(a, b, n_steps, i, j);
            omega.iter().all(|row| row_value(row, &c).is_positive())
        })
    })
}

/// Finds the smallest `N` such that every interpolated point between
/// `a_col` and `b_col` satisfies the strict rows of `omega`, and lists the
/// `n * N` points as values of depth `depth` (first entry only).
pub fn staircase(
    a_col: &[Rational],
    b_col: &[Rational],
    omega: &[Vec<Rational>],
    depth: usize,
) -> Result<StaircaseCertificate> {
    let n = a_col.len();
    check_len(n, b_col.len())?;
    if n == 0 || depth == 0 {
        return Err(Error::invalid("staircase needs at least one coordinate and depth 1"));
    }
    for r in omega {
        check_len(n, r.len())?;
    }
    if a_col.iter().chain(b_col).any(Signed::is_negative) {
        return Err(Error::invalid("staircase endpoints must be non-negative"));
    }
    let mut bound = 1usize;
    for row in omega {
        let (la, lb) = (row_value(row, a_col), row_value(row, b_col));
        if !la.is_positive() || !lb.is_positive() {
            return Err(Error::invalid("both endpoints must satisfy every strict row"));
        }
        let m = la.min(lb);
        for j in 0..n {
            let shift: Rational = (j..n).map(|c| &row[c] * (&a_col[c] - &b_col[c])).sum();
            if shift.is_negative() {
                let need: num_bigint::BigInt = (-shift / &m).floor().to_integer() + 1;
                let need = need.to_usize().ok_or_else(|| Error::invalid("staircase too fine"))?;
                bound = bound.max(need);
            }
        }
    }
    let steps = (1..=bound)
        .find(|&big_n| staircase_holds(omega, a_col, b_col, big_n))
        .ok_or_else(|| Error::Internal("staircase bound does not hold".into()))?;
    let previous_fails = steps > 1 && !staircase_holds(omega, a_col, b_col, steps - 1);
    let mut points = Vec::with_capacity(n * steps);
    for i in 0..steps {
        for j in 0..n {
            let vals = stair_values(a_col, b_col, steps, i, j);
            let value = ValVec::new(
                vals.into_iter()
                    .map(|x| {
                        let mut e = vec![Rational::zero(); depth];
                        e[0] = x;
                        LexVec::new(e)
                    })
                    .collect::<Result<_>>()?,
            )?;
            points.push(StaircasePoint { i, j, value });
        }
    }
    Ok(StaircaseCertificate {
        schema_version: SCHEMA_VERSION,
        omega: omega.to_vec(),
        a: a_col.to_vec(),
        b: b_col.to_vec(),
        steps,
        previous_fails,
        points,
    })
}
