//! Independent oracles and random instance generators shared by the
//! integration test targets.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use sperkit_core::polynomial::Poly;
use sperkit_core::rational::{rat, ratio, Rational};
use sperkit_core::{lex_cmp, BlowupSeq, BlowupStep, ExponentVec, LexVec, MonomialPoint, Sign, Term, ValVec};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- oracles

/// Gauss-Jordan over the rationals; returns the reduced rows and pivot columns.
pub fn rref(rows: &[Vec<Rational>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of `{x : rows * x = 0}`.
pub fn kernel(rows: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let (m, pivots) = rref(rows);
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Whether the vectors are linearly independent: the homogeneous system
/// `sum c_i v_i = 0` has only the trivial solution.
fn independent(vecs: &[&Vec<Rational>]) -> bool {
    if vecs.is_empty() {
        return true;
    }
    let m = vecs[0].len();
    let system: Vec<Vec<Rational>> = (0..m).map(|k| vecs.iter().map(|v| v[k].clone()).collect()).collect();
    kernel(&system, vecs.len()).is_empty()
}

/// Rank as the size of the largest independent subset (exhaustive).
pub fn naive_rank(vecs: &[Vec<Rational>]) -> usize {
    let k = vecs.len();
    assert!(k <= 12, "subset enumeration is exponential");
    (0u32..1 << k)
        .filter_map(|mask| {
            let sub: Vec<&Vec<Rational>> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &vecs[i]).collect();
            independent(&sub).then_some(sub.len())
        })
        .max()
        .unwrap_or(0)
}

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .filter(|&c| m[0][c] != 0)
            .map(|c| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &x)| x).collect())
                    .collect();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * m[0][c] * det(&minor)
            })
            .sum(),
    }
}

type Monomial = BTreeMap<usize, u32>;

/// Expresses every original variable as a monomial in the leaf variables by
/// substituting `x_q -> x_q * x_j` (q in J minus j) step by step, then
/// expands `x^e`.
pub fn substitute(seq: &BlowupSeq, e: &ExponentVec) -> ExponentVec {
    let n = e.nvars();
    let mut subs: Vec<Monomial> = (0..n).map(|q| Monomial::from([(q, 1)])).collect();
    for step in &seq.steps {
        let j = step.chart();
        for m in subs.iter_mut() {
            let mut out = Monomial::new();
            for (&v, &p) in m.iter() {
                *out.entry(v).or_default() += p;
                if v != j && step.contains(v) {
                    *out.entry(j).or_default() += p;
                }
            }
            *m = out;
        }
    }
    let mut total = vec![0u32; n];
    for (q, &power) in e.0.iter().enumerate() {
        for (&v, &p) in &subs[q] {
            total[v] += p * power;
        }
    }
    ExponentVec(total)
}

/// Sign of `f(eps_1 t^{a_1}, ..., eps_n t^{a_n})` for `t = 2^-k`, computed
/// exactly after clearing denominators of the exponents and coefficients.
pub fn series_sign_at(f: &Poly, a: &[Rational], eps: &[i8], k: u32) -> i8 {
    let d = a.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let cd = f.terms().iter().fold(BigInt::one(), |acc, t| acc.lcm(t.coeff.denom()));
    let scaled: Vec<(BigInt, BigInt)> = f
        .terms()
        .iter()
        .map(|t| {
            let e: Rational = t.exp.0.iter().zip(a).map(|(&p, x)| Rational::from_integer(p.into()) * x).sum();
            let e = (e * Rational::from_integer(d.clone())).to_integer();
            let sign: i64 = t.exp.0.iter().zip(eps).map(|(&p, &s)| if s < 0 && p % 2 == 1 { -1 } else { 1 }).product();
            let c = (&t.coeff * Rational::from_integer(cd.clone())).to_integer() * sign;
            (c, e)
        })
        .collect();
    let Some(emax) = scaled.iter().map(|(_, e)| e.clone()).max() else { return 0 };
    // 2^{k emax} f(2^-k) = sum c 2^{k (emax - e)}
    let total: BigInt = scaled
        .iter()
        .map(|(c, e)| {
            let shift: usize = ((&emax - e) * BigInt::from(k)).try_into().expect("small exponent");
            c << shift
        })
        .sum();
    match total.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

/// Series sign for large `k`, asserting that it has stabilized.
pub fn stable_series_sign(f: &Poly, a: &[Rational], eps: &[i8]) -> Result<i8, String> {
    let signs: Vec<i8> = (48..=64).map(|k| series_sign_at(f, a, eps, k)).collect();
    if signs.windows(2).all(|w| w[0] == w[1]) {
        Ok(signs[0])
    } else {
        Err(format!("series sign did not stabilize: {signs:?}"))
    }
}

/// First-coordinate staircase check by direct evaluation.
pub fn staircase_ok(omega: &[Vec<Rational>], a: &[Rational], b: &[Rational], n_steps: usize) -> bool {
    let n = a.len();
    let nn = rat(n_steps as i64);
    for i in 0..n_steps {
        for j in 0..n {
            let point: Vec<Rational> = (0..n)
                .map(|c| {
                    let lam = if c < j { rat(i as i64) / &nn } else { rat(i as i64 + 1) / &nn };
                    &lam * &a[c] + (rat(1) - &lam) * &b[c]
                })
                .collect();
            for row in omega {
                let s: Rational = row.iter().zip(&point).map(|(w, x)| w * x).sum();
                if !s.is_positive() {
                    return false;
                }
            }
        }
    }
    true
}

pub fn brute_force_staircase(omega: &[Vec<Rational>], a: &[Rational], b: &[Rational], limit: usize) -> Option<usize> {
    (1..=limit).find(|&n| staircase_ok(omega, a, b, n))
}

// ------------------------------------------------------------- generators

pub fn small_rational(r: &mut StdRng, lo: i64, hi: i64, max_den: i64) -> Rational {
    ratio(r.gen_range(lo..=hi), r.gen_range(1..=max_den))
}

pub fn exponents(r: &mut StdRng, n: usize, max: u32) -> ExponentVec {
    ExponentVec((0..n).map(|_| r.gen_range(0..=max)).collect())
}

/// Lex-nonnegative vector of the given depth.
pub fn nonneg_lexvec(r: &mut StdRng, depth: usize) -> LexVec {
    let mut e: Vec<Rational> =
        (0..depth).map(|_| if r.gen_bool(0.25) { Rational::zero() } else { small_rational(r, -4, 4, 3) }).collect();
    if let Some(first) = e.iter_mut().find(|x| !x.is_zero()) {
        *first = first.abs();
    }
    LexVec::new(e).unwrap()
}

pub fn valvec(r: &mut StdRng, n: usize, depth: usize) -> ValVec {
    ValVec::new((0..n).map(|_| nonneg_lexvec(r, depth)).collect()).unwrap()
}

pub fn valvec_upto(r: &mut StdRng, n: usize, max_depth: usize) -> ValVec {
    let depth = r.gen_range(1..=max_depth);
    valvec(r, n, depth)
}

/// Positive rank-1 values.
pub fn positive_scalars(r: &mut StdRng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| small_rational(r, 1, 9, 4)).collect()
}

pub fn scalars_valvec(v: &[Rational]) -> ValVec {
    ValVec::from_scalars(v).unwrap()
}

/// Random step: a center of size at least two and a chart in it.
pub fn step(r: &mut StdRng, n: usize) -> BlowupStep {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(r);
    let size = r.gen_range(2..=n);
    let center = idx[..size].to_vec();
    let chart = center[r.gen_range(0..size)];
    BlowupStep::new(center, chart).unwrap()
}

/// Step whose chart has the smallest value in the center.
pub fn step_wrt(r: &mut StdRng, a: &ValVec) -> BlowupStep {
    let s = step(r, a.nvars());
    let chart = *s.center().iter().min_by(|&&p, &&q| lex_cmp(a.get(p), a.get(q)).unwrap().then(p.cmp(&q))).unwrap();
    BlowupStep::new(s.center().to_vec(), chart).unwrap()
}

pub fn poly(r: &mut StdRng, n: usize, max_terms: usize, max_exp: u32) -> Poly {
    loop {
        let terms: Vec<Term> = (0..r.gen_range(1..=max_terms))
            .map(|_| {
                let mut c = small_rational(r, -6, 6, 3);
                if c.is_zero() {
                    c = rat(1);
                }
                Term::new(c, exponents(r, n, max_exp))
            })
            .collect();
        let f = Poly::from_terms(n, terms).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn signs(r: &mut StdRng, n: usize) -> Vec<Sign> {
    (0..n).map(|_| if r.gen_bool(0.5) { Sign::Pos } else { Sign::Neg }).collect()
}

pub fn signs_i8(s: &[Sign]) -> Vec<i8> {
    s.iter().map(|x| x.as_i8()).collect()
}

/// Point of depth `n` whose values are linearly independent.
pub fn independent_point(r: &mut StdRng, n: usize) -> MonomialPoint {
    loop {
        let rows: Vec<LexVec> = (0..n)
            .map(|_| {
                let mut e = vec![small_rational(r, 1, 6, 3)];
                e.extend((1..n).map(|_| small_rational(r, -3, 3, 2)));
                LexVec::new(e).unwrap()
            })
            .collect();
        let a = ValVec::new(rows).unwrap();
        if a.rat_rank() == n {
            return MonomialPoint::new(a, signs(r, n), true).unwrap();
        }
    }
}

pub fn matrix(r: &mut StdRng, rows: usize, cols: usize, lo: i64, hi: i64) -> Vec<Vec<Rational>> {
    (0..rows).map(|_| (0..cols).map(|_| rat(r.gen_range(lo..=hi))).collect()).collect()
}

pub fn entries(a: &ValVec) -> Vec<Vec<Rational>> {
    a.values().iter().map(|v| v.entries().to_vec()).collect()
}
