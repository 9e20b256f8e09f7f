//! Self-describing JSON jobs and their result documents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, ErrorClass, Result};
use crate::lexgroup::ValVec;
use crate::polynomial::{Poly, Term};
use crate::rational::{matrix_as_strings, vec_as_strings, Rational};
use crate::relreduce::{reduce_relations, select_reduced_chart, ReducedChart, RelationSystem, SelectedChart};
use crate::resolve::{resolve_binomial, select_chart, ChartSelection, ResolutionTree, DEFAULT_NODE_CAP};
use crate::sper::{dominant_term, poly_value, sign_at, Dominant, MonomialPoint, PolyValue};
use crate::witness::{
    build_witness, cone_member, segment_member, staircase, witness_contains, witness_sign_constancy, ConeSystem,
    Membership, Segment, SignConstancyReport, StaircaseCertificate, WitnessSystem, SCHEMA_VERSION,
};
use crate::ExponentVec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Job {
    Resolve(ResolveJob),
    Reduce(ReduceJob),
    Sign(SignJob),
    Witness(WitnessJob),
    Cone(ConeJob),
    Staircase(StaircaseJob),
    Segment(SegmentJob),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolveJob {
    pub alpha: ExponentVec,
    pub gamma: ExponentVec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub select: Option<ValVec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReduceJob {
    pub system: RelationSystem,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub select: Option<ValVec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignJob {
    pub poly: Poly,
    pub point: MonomialPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJob {
    pub point: MonomialPoint,
    pub polys: Vec<Poly>,
    /// Variables with fixed signs; all variables when absent.
    #[serde(default, with = "crate::indices::one_based_opt_vec", skip_serializing_if = "Option::is_none")]
    pub fixed: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<MonomialPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeJob {
    pub cone: ConeSystem,
    pub member: ValVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaircaseJob {
    #[serde(with = "matrix_as_strings")]
    pub omega: Vec<Vec<Rational>>,
    #[serde(with = "vec_as_strings")]
    pub a: Vec<Rational>,
    #[serde(with = "vec_as_strings")]
    pub b: Vec<Rational>,
    #[serde(default = "one")]
    pub depth: usize,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentJob {
    pub segment: Segment,
    pub member: ValVec,
}

/// Result of one job, tagged with its kind and the schema version.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub schema_version: u32,
    #[serde(flatten)]
    pub result: JobResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JobResult {
    Resolve {
        leaves: usize,
        tree: ResolutionTree,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        selection: Option<ChartSelection>,
    },
    Reduce {
        charts: Vec<ReducedChart>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        selection: Option<SelectedChart>,
    },
    Sign {
        sign: i8,
        value: PolyValue,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dominant: Option<Term>,
    },
    Witness {
        witness: WitnessSystem,
        base: Membership,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        report: Option<SignConstancyReport>,
    },
    Cone {
        member: bool,
    },
    Staircase {
        certificate: StaircaseCertificate,
    },
    Segment {
        member: bool,
    },
}

impl Document {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// DOT rendering of the resolution tree, for resolve documents.
    pub fn dot(&self) -> Option<String> {
        match &self.result {
            JobResult::Resolve { tree, .. } => Some(tree.to_dot()),
            _ => None,
        }
    }
}

impl Job {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn run_job(job: &Job) -> Result<Document> {
    let result = match job {
        Job::Resolve(j) => {
            let tree = resolve_binomial(&j.alpha, &j.gamma, j.node_cap.unwrap_or(DEFAULT_NODE_CAP))?;
            let selection = j.select.as_ref().map(|a| select_chart(&tree, a)).transpose()?;
            JobResult::Resolve { leaves: tree.leaf_count(), tree, selection }
        }
        Job::Reduce(j) => {
            let charts = reduce_relations(&j.system, j.node_cap.unwrap_or(DEFAULT_NODE_CAP))?;
            let selection = match &j.select {
                Some(a) => {
                    if !j.system.is_satisfied_by(a)? {
                        return Err(Error::invalid("the selection point does not satisfy the relations"));
                    }
                    Some(select_reduced_chart(&charts, a)?)
                }
                None => None,
            };
            JobResult::Reduce { charts, selection }
        }
        Job::Sign(j) => JobResult::Sign {
            sign: sign_at(&j.poly, &j.point)?,
            value: poly_value(&j.poly, &j.point)?,
            dominant: match j.poly.is_zero() {
                true => None,
                false => match dominant_term(&j.poly, &j.point)? {
                    Dominant::Unique(t) => Some(t),
                    Dominant::Ambiguous => None,
                },
            },
        },
        Job::Witness(j) => {
            let fixed = j.fixed.clone().unwrap_or_else(|| (0..j.point.nvars()).collect());
            let witness = build_witness(&j.point, &j.polys, &fixed)?;
            let base = witness_contains(&witness, &j.point)?;
            let report = match j.samples.is_empty() {
                true => None,
                false => Some(witness_sign_constancy(&witness, &j.polys, &j.point, &j.samples)?),
            };
            if report.as_ref().is_some_and(|r| !r.violations.is_empty()) {
                return Err(Error::Internal("sign changed inside the witness set".into()));
            }
            JobResult::Witness { witness, base, report }
        }
        Job::Cone(j) => JobResult::Cone { member: cone_member(&j.cone, &j.member)? },
        Job::Staircase(j) => JobResult::Staircase { certificate: staircase(&j.a, &j.b, &j.omega, j.depth)? },
        Job::Segment(j) => JobResult::Segment { member: segment_member(&j.segment, &j.member)? },
    };
    Ok(Document { schema_version: SCHEMA_VERSION, result })
}

/// Process exit status for an error; 1 is left for I/O failures.
pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Schema => 2,
        ErrorClass::Precondition => 3,
        ErrorClass::Resource => 4,
        ErrorClass::Internal => 5,
    }
}
