//! Desingularization of a binomial pair `x^alpha`, `x^gamma` by affine
//! monomial blowings up.
//!
//! At every node the pair is reduced by its common part `delta = min(alpha,
//! gamma)`, a center `J` is chosen from the reduced parts, and the node
//! branches over every chart `j in J`. The numerical character
//! `tau = (|alpha~|, |gamma~|)` drops lexicographically along every edge, so
//! the tree is finite; in each leaf one monomial divides the other.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::blowup::{transform_exponent, transform_value, BlowupSeq, BlowupStep};
use crate::error::{check_len, Error, Result};
use crate::indices::{one_based, one_based_opt_vec, one_based_vec};
use crate::lexgroup::ValVec;
use crate::polynomial::{divides, ExponentVec};

pub const DEFAULT_NODE_CAP: usize = 100_000;

/// Which monomial divides the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Divisibility {
    AlphaDividesGamma,
    GammaDividesAlpha,
    /// The monomials are equal.
    Both,
}

impl Divisibility {
    pub fn alpha_divides_gamma(self) -> bool {
        matches!(self, Divisibility::AlphaDividesGamma | Divisibility::Both)
    }

    pub fn gamma_divides_alpha(self) -> bool {
        matches!(self, Divisibility::GammaDividesAlpha | Divisibility::Both)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReductionState {
    pub alpha: ExponentVec,
    pub gamma: ExponentVec,
    /// Componentwise minimum of `alpha` and `gamma`.
    pub delta: ExponentVec,
    /// The reduced part with the smaller coordinate sum.
    pub alpha_red: ExponentVec,
    pub gamma_red: ExponentVec,
    /// Whether `alpha_red` came from `gamma` rather than `alpha`.
    pub swapped: bool,
    pub tau: (u64, u64),
}

impl ReductionState {
    pub fn divisibility(&self) -> Option<Divisibility> {
        let (a_zero, g_zero) = if self.swapped {
            (self.gamma_red.is_zero(), self.alpha_red.is_zero())
        } else {
            (self.alpha_red.is_zero(), self.gamma_red.is_zero())
        };
        match (a_zero, g_zero) {
            (true, true) => Some(Divisibility::Both),
            (true, false) => Some(Divisibility::AlphaDividesGamma),
            (false, true) => Some(Divisibility::GammaDividesAlpha),
            (false, false) => None,
        }
    }
}

/// Splits off the common factor of `x^alpha` and `x^gamma`.
pub fn reduce_pair(alpha: &ExponentVec, gamma: &ExponentVec) -> Result<ReductionState> {
    check_len(alpha.nvars(), gamma.nvars())?;
    let delta = ExponentVec(alpha.0.iter().zip(&gamma.0).map(|(&a, &g)| a.min(g)).collect());
    let sub = |v: &ExponentVec| ExponentVec(v.0.iter().zip(&delta.0).map(|(x, d)| x - d).collect());
    let (mut a_red, mut g_red) = (sub(alpha), sub(gamma));
    let swapped = a_red.degree() > g_red.degree();
    if swapped {
        std::mem::swap(&mut a_red, &mut g_red);
    }
    let tau = (a_red.degree(), g_red.degree());
    Ok(ReductionState {
        alpha: alpha.clone(),
        gamma: gamma.clone(),
        delta,
        alpha_red: a_red,
        gamma_red: g_red,
        swapped,
        tau,
    })
}

fn check_not_divisible(state: &ReductionState) -> Result<()> {
    if state.divisibility().is_some() {
        return Err(Error::InvalidState("one monomial already divides the other".into()));
    }
    Ok(())
}

/// The center `J = supp(alpha~) + K`, with `K` an inclusion-minimal subset of
/// `supp(gamma~)` whose `gamma~`-sum reaches `|alpha~|`.
///
/// `K` is built greedily by decreasing `gamma~_q` (smaller index first on
/// ties), then pruned by dropping any element that is not needed, scanning
/// by increasing index. The result is sorted.
pub fn choose_center(state: &ReductionState) -> Result<Vec<usize>> {
    check_not_divisible(state)?;
    let need = state.alpha_red.degree();
    let g = &state.gamma_red.0;
    let mut order: Vec<usize> = state.gamma_red.support().collect();
    order.sort_by(|&p, &q| g[q].cmp(&g[p]).then(p.cmp(&q)));
    let mut k = Vec::new();
    let mut sum = 0u64;
    for q in order {
        if sum >= need {
            break;
        }
        k.push(q);
        sum += u64::from(g[q]);
    }
    if sum < need {
        return Err(Error::Internal("reduced parts out of order".into()));
    }
    k.sort_unstable();
    let mut i = 0;
    while i < k.len() {
        let w = u64::from(g[k[i]]);
        if sum - w >= need {
            sum -= w;
            k.remove(i);
        } else {
            i += 1;
        }
    }
    let mut center: Vec<usize> = state.alpha_red.support().chain(k).collect();
    center.sort_unstable();
    Ok(center)
}

/// Every inclusion-minimal center, sorted. Used to cross-check
/// [`choose_center`].
pub fn all_minimal_centers(state: &ReductionState) -> Result<Vec<Vec<usize>>> {
    check_not_divisible(state)?;
    let need = state.alpha_red.degree();
    let g = &state.gamma_red.0;
    let supp: Vec<usize> = state.gamma_red.support().collect();
    if supp.len() > 20 {
        return Err(Error::invalid("too many coordinates for exhaustive center enumeration"));
    }
    let weight = |mask: u32| -> u64 {
        supp.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &q)| u64::from(g[q])).sum()
    };
    let mut out = Vec::new();
    for mask in 1u32..(1 << supp.len()) {
        let w = weight(mask);
        if w < need {
            continue;
        }
        let minimal = (0..supp.len()).filter(|b| mask >> b & 1 == 1).all(|b| w - u64::from(g[supp[b]]) < need);
        if minimal {
            let mut center: Vec<usize> = state.alpha_red.support().collect();
            center.extend(supp.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &q)| q));
            center.sort_unstable();
            out.push(center);
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildEdge {
    #[serde(rename = "j", with = "one_based")]
    pub chart: usize,
    pub node: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: usize,
    pub parent: Option<usize>,
    /// The step leading into this node; `None` at the root.
    pub step: Option<BlowupStep>,
    pub state: ReductionState,
    #[serde(with = "one_based_opt_vec")]
    pub center: Option<Vec<usize>>,
    pub children: Vec<ChildEdge>,
    pub leaf: Option<Divisibility>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionTree {
    pub alpha: ExponentVec,
    pub gamma: ExponentVec,
    pub nodes: Vec<TreeNode>,
}

/// A root-to-leaf path of a [`ResolutionTree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafPath {
    pub node: usize,
    pub seq: BlowupSeq,
    pub alpha: ExponentVec,
    pub gamma: ExponentVec,
    pub divisibility: Divisibility,
}

/// Builds the full tree for `x^alpha`, `x^gamma`, branching over every chart.
pub fn resolve_binomial(alpha: &ExponentVec, gamma: &ExponentVec, node_cap: usize) -> Result<ResolutionTree> {
    if node_cap == 0 {
        return Err(Error::invalid("node cap must be positive"));
    }
    let root = reduce_pair(alpha, gamma)?;
    let mut nodes =
        vec![TreeNode { id: 0, parent: None, step: None, state: root, center: None, children: vec![], leaf: None }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        if let Some(d) = nodes[id].state.divisibility() {
            nodes[id].leaf = Some(d);
            continue;
        }
        let center = choose_center(&nodes[id].state)?;
        let mut children = Vec::with_capacity(center.len());
        for &j in &center {
            let step = BlowupStep::new(center.iter().copied(), j)?;
            let st = &nodes[id].state;
            let child = reduce_pair(&transform_exponent(&step, &st.alpha)?, &transform_exponent(&step, &st.gamma)?)?;
            debug_assert!(child.tau < st.tau, "tau must drop along every edge");
            if nodes.len() >= node_cap {
                return Err(Error::NodeCap { cap: node_cap });
            }
            let cid = nodes.len();
            nodes.push(TreeNode {
                id: cid,
                parent: Some(id),
                step: Some(step),
                state: child,
                center: None,
                children: vec![],
                leaf: None,
            });
            children.push(ChildEdge { chart: j, node: cid });
            queue.push_back(cid);
        }
        nodes[id].center = Some(center);
        nodes[id].children = children;
    }
    Ok(ResolutionTree { alpha: alpha.clone(), gamma: gamma.clone(), nodes })
}

impl ResolutionTree {
    pub fn nvars(&self) -> usize {
        self.alpha.nvars()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.leaf.is_some()).count()
    }

    /// The steps from the root to `node`.
    pub fn path_to(&self, node: usize) -> BlowupSeq {
        let mut steps = Vec::new();
        let mut cur = node;
        while let Some(p) = self.nodes[cur].parent {
            steps.push(self.nodes[cur].step.clone().expect("non-root nodes carry a step"));
            cur = p;
        }
        steps.reverse();
        BlowupSeq::new(steps)
    }

    pub fn leaf_paths(&self) -> Vec<LeafPath> {
        self.nodes
            .iter()
            .filter_map(|n| {
                n.leaf.map(|d| LeafPath {
                    node: n.id,
                    seq: self.path_to(n.id),
                    alpha: n.state.alpha.clone(),
                    gamma: n.state.gamma.clone(),
                    divisibility: d,
                })
            })
            .collect()
    }

    /// Graphviz rendering: one node per chart, leaves colored by which
    /// monomial divides the other.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph resolution {\n  node [shape=box, fontname=\"monospace\"];\n");
        for n in &self.nodes {
            let s = &n.state;
            let label = format!("alpha={:?}\\ngamma={:?}\\ntau=({},{})", s.alpha.0, s.gamma.0, s.tau.0, s.tau.1);
            let style = match n.leaf {
                Some(Divisibility::AlphaDividesGamma) => ", style=filled, fillcolor=lightblue",
                Some(Divisibility::GammaDividesAlpha) => ", style=filled, fillcolor=lightsalmon",
                Some(Divisibility::Both) => ", style=filled, fillcolor=lightgrey",
                None => "",
            };
            let _ = writeln!(out, "  n{} [label=\"{}\"{}];", n.id, label, style);
        }
        for n in &self.nodes {
            for e in &n.children {
                let _ = writeln!(out, "  n{} -> n{} [label=\"j={}\"];", n.id, e.node, e.chart + 1);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Result of walking a tree along the charts chosen by a valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSelection {
    #[serde(with = "one_based_vec")]
    pub path: Vec<usize>,
    pub seq: BlowupSeq,
    pub value: ValVec,
    /// Leaf node id, when selected from a built tree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<usize>,
    pub alpha: ExponentVec,
    pub gamma: ExponentVec,
    pub leaf: Divisibility,
}

/// Descends from the root, picking at each node the chart `j in J` with the
/// smallest current value (smallest index on ties), and transforms `a`
/// along the way.
pub fn select_chart(tree: &ResolutionTree, a: &ValVec) -> Result<ChartSelection> {
    check_len(tree.nvars(), a.nvars())?;
    let mut cur = 0usize;
    let mut value = a.clone();
    let mut path = Vec::new();
    let mut steps = Vec::new();
    loop {
        let node = &tree.nodes[cur];
        if let Some(leaf) = node.leaf {
            return Ok(ChartSelection {
                path,
                seq: BlowupSeq::new(steps),
                value,
                node: Some(cur),
                alpha: node.state.alpha.clone(),
                gamma: node.state.gamma.clone(),
                leaf,
            });
        }
        let center = node.center.as_ref().ok_or_else(|| Error::Internal(format!("node {cur} has no center")))?;
        let j = min_chart(center, &value);
        let edge = node
            .children
            .iter()
            .find(|e| e.chart == j)
            .ok_or_else(|| Error::Internal(format!("node {cur} has no chart x{}", j + 1)))?;
        let step = tree.nodes[edge.node].step.clone().expect("child nodes carry a step");
        value = transform_value(&step, &value)?;
        path.push(j);
        steps.push(step);
        cur = edge.node;
    }
}

fn min_chart(center: &[usize], value: &ValVec) -> usize {
    let mut j = center[0];
    for &q in &center[1..] {
        if value.get(q).cmp_same_depth(value.get(j)).is_lt() {
            j = q;
        }
    }
    j
}

/// Same walk as [`select_chart`], expanding only the chosen charts instead
/// of building the whole tree first.
pub fn select_path(alpha: &ExponentVec, gamma: &ExponentVec, a: &ValVec) -> Result<ChartSelection> {
    check_len(alpha.nvars(), a.nvars())?;
    let mut state = reduce_pair(alpha, gamma)?;
    let mut value = a.clone();
    let mut path = Vec::new();
    let mut steps = Vec::new();
    loop {
        if let Some(leaf) = state.divisibility() {
            return Ok(ChartSelection {
                path,
                seq: BlowupSeq::new(steps),
                value,
                node: None,
                alpha: state.alpha,
                gamma: state.gamma,
                leaf,
            });
        }
        let center = choose_center(&state)?;
        let j = min_chart(&center, &value);
        let step = BlowupStep::new(center, j)?;
        value = transform_value(&step, &value)?;
        state = reduce_pair(&transform_exponent(&step, &state.alpha)?, &transform_exponent(&step, &state.gamma)?)?;
        path.push(j);
        steps.push(step);
    }
}

/// Whether the leaf pair of `sel` divides in the direction `dir`.
pub fn leaf_divides(sel: &ChartSelection, dir: Divisibility) -> bool {
    match dir {
        Divisibility::AlphaDividesGamma => divides(&sel.alpha, &sel.gamma).is_some(),
        Divisibility::GammaDividesAlpha => divides(&sel.gamma, &sel.alpha).is_some(),
        Divisibility::Both => sel.alpha == sel.gamma,
    }
}
