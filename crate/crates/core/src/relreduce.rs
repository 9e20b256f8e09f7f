//! Reduction of a system of rational relations among coordinate values.
//!
//! Given relations `sum_i theta_li a_i = 0` of rank `u`, the binomial of the
//! first relation is resolved; in every leaf chart the quotient monomial has
//! value zero, which forces the value of each coordinate in its support to
//! be zero. The remaining relations are carried to the chart, restricted to
//! the coordinates not yet forced to zero, and the procedure recurses.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::blowup::{apply_sequence, BlowupSeq, Relation};
use crate::error::{check_len, Error, Result};
use crate::indices::one_based_vec;
use crate::lexgroup::{rank_of_rows, LexVec, ValVec};
use crate::polynomial::ExponentVec;
use crate::rational::{clear_denominators, matrix_as_strings, Rational};
use crate::resolve::resolve_binomial;

/// `u` relations on `n` values, of full rank `u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemRepr", into = "SystemRepr")]
pub struct RelationSystem {
    nvars: usize,
    rows: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    n: usize,
    #[serde(with = "matrix_as_strings")]
    theta: Vec<Vec<Rational>>,
}

impl TryFrom<SystemRepr> for RelationSystem {
    type Error = Error;

    fn try_from(r: SystemRepr) -> Result<Self> {
        RelationSystem::new(r.n, r.theta)
    }
}

impl From<RelationSystem> for SystemRepr {
    fn from(s: RelationSystem) -> Self {
        SystemRepr { n: s.nvars, theta: s.rows }
    }
}

impl RelationSystem {
    pub fn new(nvars: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        for r in &rows {
            check_len(nvars, r.len())?;
        }
        if rows.len() > nvars {
            return Err(Error::invalid(format!("{} relations on {nvars} values", rows.len())));
        }
        let rank = rank_of_rows(&rows);
        if rank != rows.len() {
            return Err(Error::invalid(format!("relations have rank {rank}, expected {}", rows.len())));
        }
        Ok(RelationSystem { nvars, rows })
    }

    pub fn empty(nvars: usize) -> Self {
        RelationSystem { nvars, rows: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Whether every relation vanishes on `a`.
    pub fn is_satisfied_by(&self, a: &ValVec) -> Result<bool> {
        check_len(self.nvars, a.nvars())?;
        let zero = LexVec::zero(a.depth());
        Ok(self
            .rows
            .iter()
            .all(|row| row.iter().zip(a.values()).fold(zero.clone(), |acc, (t, v)| acc.add_scaled(t, v)).is_zero()))
    }

    /// Coordinates whose column is zero in every relation.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&q| self.rows.iter().all(|r| r[q].is_zero())).collect()
    }
}

/// One chart produced by [`reduce_relations`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedChart {
    pub seq: BlowupSeq,
    /// Coordinates whose value is forced to zero in this chart.
    #[serde(with = "one_based_vec")]
    pub zero_set: Vec<usize>,
    pub residual: RelationSystem,
}

/// Turns a relation into the exponent pair `(alpha, gamma)` of the binomial
/// `x^alpha - x^gamma`, after clearing denominators and dividing out the gcd.
pub fn split_relation(row: &[Rational]) -> Result<(ExponentVec, ExponentVec)> {
    let ints = clear_denominators(row);
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(Error::invalid("zero relation"));
    }
    let to_u32 = |x: BigInt| x.to_u32().ok_or_else(|| Error::invalid("relation coefficient too large"));
    let mut alpha = Vec::with_capacity(row.len());
    let mut gamma = Vec::with_capacity(row.len());
    for x in ints {
        let x = x / &g;
        if x.is_positive() {
            alpha.push(to_u32(x)?);
            gamma.push(0);
        } else {
            alpha.push(0);
            gamma.push(to_u32(-x)?);
        }
    }
    Ok((ExponentVec(alpha), ExponentVec(gamma)))
}

/// Keeps, in order, each row that is independent of the rows kept before it.
fn independent_rows(rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut kept: Vec<Vec<Rational>> = Vec::new();
    for r in rows {
        kept.push(r);
        if rank_of_rows(&kept) < kept.len() {
            kept.pop();
        }
    }
    kept
}

/// Produces charts covering every valuation that satisfies `sys`.
///
/// `node_cap` bounds each intermediate resolution tree.
pub fn reduce_relations(sys: &RelationSystem, node_cap: usize) -> Result<Vec<ReducedChart>> {
    let mut out = Vec::new();
    reduce_rec(sys.nvars, sys.rows.clone(), BlowupSeq::default(), BTreeSet::new(), node_cap, &mut out)?;
    Ok(out)
}

fn reduce_rec(
    n: usize,
    rows: Vec<Vec<Rational>>,
    seq: BlowupSeq,
    zero: BTreeSet<usize>,
    node_cap: usize,
    out: &mut Vec<ReducedChart>,
) -> Result<()> {
    let Some((first, rest)) = rows.split_first() else {
        out.push(ReducedChart { seq, zero_set: zero.into_iter().collect(), residual: RelationSystem::empty(n) });
        return Ok(());
    };
    let (alpha, gamma) = split_relation(first)?;
    let tree = resolve_binomial(&alpha, &gamma, node_cap)?;
    for leaf in tree.leaf_paths() {
        let diff: Vec<i64> =
            leaf.gamma.0.iter().zip(&leaf.alpha.0).map(|(&g, &a)| i64::from(g) - i64::from(a)).collect();
        let one_signed = diff.iter().all(|&d| d >= 0) || diff.iter().all(|&d| d <= 0);
        if !one_signed || diff.iter().all(|&d| d == 0) {
            return Err(Error::Internal(format!("leaf quotient {diff:?} is not a nonzero monomial")));
        }
        let mut zero = zero.clone();
        zero.extend(diff.iter().enumerate().filter(|(_, &d)| d != 0).map(|(q, _)| q));
        let mut carried = Vec::with_capacity(rest.len());
        for r in rest {
            let mut t = apply_sequence(&leaf.seq, &Relation(r.clone()))?.0;
            for &q in &zero {
                t[q] = Rational::zero();
            }
            if t.iter().any(|x| !x.is_zero()) {
                carried.push(t);
            }
        }
        reduce_rec(n, independent_rows(carried), seq.then(&leaf.seq), zero, node_cap, out)?;
    }
    Ok(())
}

/// A chart admissible for a given value vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectedChart {
    pub index: usize,
    pub chart: ReducedChart,
    pub value: ValVec,
    /// Rational rank of the transformed values outside the zero set.
    pub rank_outside_zero_set: usize,
}

/// Finds the first chart whose every step is a blowing up with respect to
/// `a`, and transforms `a` into it.
///
/// `a` must satisfy the relations the charts were built from; the forced
/// zeros are verified on the result.
pub fn select_reduced_chart(charts: &[ReducedChart], a: &ValVec) -> Result<SelectedChart> {
    for (index, chart) in charts.iter().enumerate() {
        check_len(chart.residual.nvars, a.nvars())?;
        let value = match apply_sequence(&chart.seq, a) {
            Ok(v) => v,
            Err(Error::NotWithRespect { .. }) => continue,
            Err(e) => return Err(e),
        };
        if let Some(&q) = chart.zero_set.iter().find(|&&q| !value.get(q).is_zero()) {
            return Err(Error::Internal(format!("x{} should have value zero in chart {index}", q + 1)));
        }
        let outside: Vec<Vec<Rational>> =
            (0..a.nvars()).filter(|q| !chart.zero_set.contains(q)).map(|q| value.get(q).entries().to_vec()).collect();
        let rank_outside_zero_set = rank_of_rows(&outside);
        return Ok(SelectedChart { index, chart: chart.clone(), value, rank_outside_zero_set });
    }
    Err(Error::Internal("no chart is admissible for the given values".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn row(r: &[i64]) -> Vec<Rational> {
        r.iter().map(|&x| rat(x)).collect()
    }

    fn ev(e: &[u32]) -> ExponentVec {
        ExponentVec(e.to_vec())
    }

    #[test]
    fn split_relation_examples() {
        assert_eq!(split_relation(&row(&[3, -2])).unwrap(), (ev(&[3, 0]), ev(&[0, 2])));
        assert_eq!(split_relation(&[ratio(1, 2), ratio(-1, 3)]).unwrap(), (ev(&[3, 0]), ev(&[0, 2])));
        assert_eq!(split_relation(&row(&[2, 0, -2])).unwrap(), (ev(&[1, 0, 0]), ev(&[0, 0, 1])));
        assert!(matches!(split_relation(&row(&[0, 0])), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn system_validation() {
        assert!(RelationSystem::new(2, vec![row(&[1, -1]), row(&[2, -2])]).is_err());
        assert!(RelationSystem::new(2, vec![row(&[1, -1, 0])]).is_err());
        let s = RelationSystem::new(3, vec![row(&[1, -1, 0])]).unwrap();
        assert_eq!(s.free_columns(), vec![2]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"n":3,"theta":[["1","-1","0"]]}"#);
        assert_eq!(serde_json::from_str::<RelationSystem>(&json).unwrap(), s);
    }

    #[test]
    fn reduce_three_minus_two() {
        let sys = RelationSystem::new(2, vec![row(&[3, -2])]).unwrap();
        let charts = reduce_relations(&sys, 1000).unwrap();
        assert!(charts.len() > 1);
        for c in &charts {
            assert!(!c.zero_set.is_empty());
            assert_eq!(c.residual.rank(), 0);
        }
        let a = ValVec::from_int_rows(&[&[2], &[3]]).unwrap();
        assert!(sys.is_satisfied_by(&a).unwrap());
        let sel = select_reduced_chart(&charts, &a).unwrap();
        assert_eq!(sel.chart.zero_set.len(), 1);
        let z = sel.chart.zero_set[0];
        assert!(sel.value.get(z).is_zero());
        assert!(!sel.value.get(1 - z).is_zero());
        assert_eq!(sel.rank_outside_zero_set, 1);
    }

    #[test]
    fn reduce_x_minus_y() {
        let sys = RelationSystem::new(2, vec![row(&[1, -1])]).unwrap();
        let charts = reduce_relations(&sys, 1000).unwrap();
        assert_eq!(charts.len(), 2);
        let a = ValVec::from_int_rows(&[&[1], &[1]]).unwrap();
        let sel = select_reduced_chart(&charts, &a).unwrap();
        assert!(sel.value.values().iter().any(LexVec::is_zero));
        assert_eq!(sel.rank_outside_zero_set, 1);
    }

    #[test]
    fn rank_zero_system_gives_identity_chart() {
        let charts = reduce_relations(&RelationSystem::empty(3), 10).unwrap();
        assert_eq!(charts.len(), 1);
        assert!(charts[0].seq.is_empty() && charts[0].zero_set.is_empty());
        let a = ValVec::from_int_rows(&[&[1], &[2], &[3]]).unwrap();
        assert_eq!(select_reduced_chart(&charts, &a).unwrap().value, a);
    }

    #[test]
    fn free_columns_are_never_blown_up() {
        let sys = RelationSystem::new(4, vec![row(&[2, 0, -3, 0]), row(&[1, 0, 1, -2])]).unwrap();
        let charts = reduce_relations(&sys, 10_000).unwrap();
        assert!(charts.iter().all(|c| c.seq.is_independent_of(1)));
        assert!(charts.iter().all(|c| c.zero_set.len() >= 2));
    }
}
