//! Exact computational tools for monomial points of the real spectrum of
//! `R[x_1, ..., x_n]`.
//!
//! The crate is organized bottom-up:
//!
//! * [`lexgroup`]: the value group of lexicographically ordered tuples of
//!   rationals, together with rational rank.
//! * [`polynomial`]: sparse polynomials with rational coefficients.
//! * [`blowup`]: affine monomial blowings up acting on exponents, values,
//!   linear relations and sign data.
//! * [`resolve`]: the binomial desingularization tree.
//! * [`relreduce`]: iterated resolution of a system of rational relations.
//! * [`sper`]: valuation, dominant terms and signs at monomial points.
//! * [`witness`]: witness systems, cone systems, segments and staircases.
//! * [`job`]: the JSON job format shared by the CLI and the Python bindings.
//!
//! Variable indices are 0-based in the Rust API and 1-based in every JSON
//! document and in the CLI.

pub mod blowup;
pub mod error;
mod indices;
pub mod job;
pub mod lexgroup;
pub mod polynomial;
pub mod rational;
pub mod relreduce;
pub mod resolve;
pub mod sper;
pub mod witness;

pub use blowup::{apply_sequence, BlowupSeq, BlowupStep, Relation, Transform};
pub use error::{Error, Result};
pub use job::{run_job, Document, Job};
pub use lexgroup::{lex_cmp, lex_combine, rank_bump, rat_rank, LexVec, ValVec};
pub use polynomial::{divides, mono_value, poly_normalize, ExponentVec, Poly, Term};
pub use rational::Rational;
pub use relreduce::{reduce_relations, select_reduced_chart, split_relation, ReducedChart, RelationSystem};
pub use resolve::{
    choose_center, reduce_pair, resolve_binomial, select_chart, select_path, ReductionState, ResolutionTree,
};
pub use sper::{cmp_abs, dominant_term, poly_value, sign_at, MonomialPoint, Sign};
pub use witness::{
    build_witness, cone_member, segment_member, staircase, truncate, witness_contains, witness_sign_constancy,
    ConeSystem, Segment, WitnessSystem,
};
