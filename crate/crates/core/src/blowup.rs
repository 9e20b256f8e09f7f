//! Affine monomial blowings up.
//!
//! A step is a center `J` (a set of coordinates) and a chart `j in J`. The
//! chart coordinates are `x'_q = x_q / x_j` for `q in J \ {j}` and
//! `x'_q = x_q` otherwise, so `x_q = x'_q * x'_j` on `J \ {j}`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lexgroup::ValVec;
use crate::polynomial::ExponentVec;
use crate::rational::{vec_as_strings, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BlowupStep {
    center: Vec<usize>,
    chart: usize,
}

impl BlowupStep {
    /// Builds a step from a 0-based center and chart. A singleton center is
    /// allowed and acts as the identity.
    pub fn new(center: impl IntoIterator<Item = usize>, chart: usize) -> Result<Self> {
        let mut center: Vec<usize> = center.into_iter().collect();
        center.sort_unstable();
        center.dedup();
        if !center.contains(&chart) {
            return Err(Error::invalid(format!("chart x{} is not in the center", chart + 1)));
        }
        Ok(BlowupStep { center, chart })
    }

    pub fn center(&self) -> &[usize] {
        &self.center
    }

    pub fn chart(&self) -> usize {
        self.chart
    }

    pub fn contains(&self, q: usize) -> bool {
        self.center.binary_search(&q).is_ok()
    }

    pub(crate) fn check_range(&self, n: usize) -> Result<()> {
        match self.center.last() {
            Some(&q) if q >= n => Err(Error::invalid(format!("center index x{} exceeds {n} variables", q + 1))),
            _ => Ok(()),
        }
    }

    /// Coordinates that change: `J \ {j}`.
    pub(crate) fn moved(&self) -> impl Iterator<Item = usize> + '_ {
        self.center.iter().copied().filter(move |&q| q != self.chart)
    }
}

#[derive(Serialize, Deserialize)]
struct StepRepr {
    #[serde(rename = "J")]
    center: Vec<usize>,
    j: usize,
}

impl Serialize for BlowupStep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StepRepr { center: self.center.iter().map(|q| q + 1).collect(), j: self.chart + 1 }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BlowupStep {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = StepRepr::deserialize(d)?;
        if r.j == 0 || r.center.contains(&0) {
            return Err(serde::de::Error::custom("variable indices are 1-based"));
        }
        BlowupStep::new(r.center.into_iter().map(|q| q - 1), r.j - 1).map_err(serde::de::Error::custom)
    }
}

/// A finite composition of steps, applied left to right.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlowupSeq {
    pub steps: Vec<BlowupStep>,
}

impl BlowupSeq {
    pub fn new(steps: Vec<BlowupStep>) -> Self {
        BlowupSeq { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn then(&self, other: &BlowupSeq) -> BlowupSeq {
        BlowupSeq { steps: self.steps.iter().chain(&other.steps).cloned().collect() }
    }

    /// True iff no step has `q` in its center.
    pub fn is_independent_of(&self, q: usize) -> bool {
        self.steps.iter().all(|s| !s.contains(q))
    }
}

/// A rational relation `sum_i theta_i a_i = 0` on the coordinate values.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Relation(#[serde(with = "vec_as_strings")] pub Vec<Rational>);

/// Anything that can be carried through a chart.
pub trait Transform: Sized {
    fn transform(&self, step: &BlowupStep) -> Result<Self>;
}

/// `gamma'_j = sum_{q in J} gamma_q`, every other entry unchanged.
pub fn transform_exponent(step: &BlowupStep, gamma: &ExponentVec) -> Result<ExponentVec> {
    step.check_range(gamma.nvars())?;
    let mut out = gamma.clone();
    out.0[step.chart] = step.center.iter().map(|&q| gamma.0[q]).sum();
    Ok(out)
}

/// `a'_q = a_q - a_j` for `q in J \ {j}`, every other entry unchanged.
///
/// Fails with [`Error::NotWithRespect`] when some `a'_q` would be negative.
pub fn transform_value(step: &BlowupStep, a: &ValVec) -> Result<ValVec> {
    step.check_range(a.nvars())?;
    let aj = a.get(step.chart);
    let mut values = a.values().to_vec();
    for q in step.moved() {
        let v = a.get(q).sub(aj);
        if !v.is_nonnegative() {
            return Err(Error::NotWithRespect { step: None, component: q });
        }
        values[q] = v;
    }
    Ok(ValVec::from_vec_unchecked(values))
}

/// Whether `a_j` is the minimum of `{a_q : q in J}`.
pub fn is_wrt(step: &BlowupStep, a: &ValVec) -> Result<bool> {
    step.check_range(a.nvars())?;
    let aj = a.get(step.chart);
    Ok(step.center.iter().all(|&q| aj.cmp_same_depth(a.get(q)).is_le()))
}

/// `theta'_j = sum_{q in J} theta_q`, every other entry unchanged.
pub fn transform_relation(step: &BlowupStep, theta: &Relation) -> Result<Relation> {
    step.check_range(theta.0.len())?;
    let mut out = theta.0.clone();
    out[step.chart] = step.center.iter().map(|&q| &theta.0[q]).sum();
    Ok(Relation(out))
}

impl Transform for ExponentVec {
    fn transform(&self, step: &BlowupStep) -> Result<Self> {
        transform_exponent(step, self)
    }
}

impl Transform for ValVec {
    fn transform(&self, step: &BlowupStep) -> Result<Self> {
        transform_value(step, self)
    }
}

impl Transform for Relation {
    fn transform(&self, step: &BlowupStep) -> Result<Self> {
        transform_relation(step, self)
    }
}

/// Applies every step of `seq` in order. A failing step is reported with
/// its 0-based position in the sequence.
pub fn apply_sequence<T: Transform + Clone>(seq: &BlowupSeq, payload: &T) -> Result<T> {
    let mut cur = payload.clone();
    for (i, step) in seq.steps.iter().enumerate() {
        cur = cur.transform(step).map_err(|e| match e {
            Error::NotWithRespect { step: None, component } => Error::NotWithRespect { step: Some(i), component },
            other => other,
        })?;
    }
    Ok(cur)
}
