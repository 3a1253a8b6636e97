//! Net-worth pruning: the double dynamic program that cuts a grown forest
//! into the best k components.
//!
//! For a subforest F of a tree family with spanned set V(F), the net worth
//! `nw(F) = 2·pi(V(F)) - w(F)` and the factor-2 prize-collecting value
//! `w(F) + 2·pi(V \ V(F))` sum to the constant `2·pi(V)`, so maximizing net
//! worth minimizes the prize-collecting value. The DP computes, bottom-up
//! over a rooted tree, the best subforest of each subtree with a prescribed
//! number of components; per-node child allocations are themselves resolved
//! by embedded prefix DPs, one for the node-absent case and one for the
//! node-present case.

use std::collections::HashMap;

use crate::instance::{Forest, Instance, VertexId};
use crate::moat::Growth;
use crate::num::Num;

#[derive(Debug, thiserror::Error)]
pub enum PruneError {
    #[error("edge ({u},{v}) is not an instance edge")]
    UnknownEdge { u: VertexId, v: VertexId },
    #[error("vertex {v} is outside the tree")]
    UnknownVertex { v: VertexId },
    #[error("edge set is not a tree over the given vertices")]
    NotATree,
    #[error("root {root} is not a tree vertex")]
    RootNotInTree { root: VertexId },
    #[error("k={k} is out of range {min}..={max}")]
    KOutOfRange { k: usize, min: usize, max: usize },
    #[error("sub-forest is not contained in the scope forest")]
    NotContained,
    #[error("empty instance")]
    Empty,
}

/// A tree with a designated root, vertex penalties, and weights on the edge
/// toward the parent. Children are ordered by ascending vertex id so the
/// prefix DPs are deterministic. The dummy root of an auxiliary tree carries
/// no instance vertex.
#[derive(Debug, Clone)]
pub struct RootedTree {
    labels: Vec<Option<VertexId>>,
    penalty: Vec<Num>,
    parent: Vec<Option<usize>>,
    weight_up: Vec<Num>,
    children: Vec<Vec<usize>>,
    subtree_size: Vec<usize>,
    post_order: Vec<usize>,
    local_of: HashMap<VertexId, usize>,
}

impl RootedTree {
    /// Builds a rooted tree over `vertices` of `instance` connected by
    /// `edges` (which must be instance edges), rooted at `root`.
    pub fn from_component(
        instance: &Instance,
        vertices: &[VertexId],
        edges: &[(VertexId, VertexId)],
        root: VertexId,
    ) -> Result<Self, PruneError> {
        let mut verts: Vec<VertexId> = vertices.to_vec();
        verts.sort_unstable();
        verts.dedup();
        if verts.len() != edges.len() + 1 {
            return Err(PruneError::NotATree);
        }
        let local: HashMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        if !local.contains_key(&root) {
            return Err(PruneError::RootNotInTree { root });
        }
        let mut adj: Vec<Vec<(usize, Num)>> = vec![Vec::new(); verts.len()];
        for &(u, v) in edges {
            let e = instance
                .edge_between(u, v)
                .ok_or(PruneError::UnknownEdge { u, v })?;
            let (lu, lv) = match (local.get(&u), local.get(&v)) {
                (Some(&lu), Some(&lv)) => (lu, lv),
                _ => {
                    return Err(PruneError::UnknownVertex {
                        v: if local.contains_key(&u) { v } else { u },
                    })
                }
            };
            adj[lu].push((lv, instance.weight(e).clone()));
            adj[lv].push((lu, instance.weight(e).clone()));
        }
        Self::assemble(
            verts.iter().map(|&v| Some(v)).collect(),
            verts.iter().map(|&v| instance.penalty(v).clone()).collect(),
            adj,
            local[&root],
            local,
        )
    }

    /// Treats the whole instance as a tree (used by standalone tree
    /// documents).
    pub fn from_instance_tree(
        instance: &Instance,
        edges: &[(VertexId, VertexId)],
        root: VertexId,
    ) -> Result<Self, PruneError> {
        let vertices: Vec<VertexId> = (0..instance.n()).collect();
        Self::from_component(instance, &vertices, edges, root)
    }

    fn assemble(
        labels: Vec<Option<VertexId>>,
        penalty: Vec<Num>,
        adj: Vec<Vec<(usize, Num)>>,
        root: usize,
        local_of: HashMap<VertexId, usize>,
    ) -> Result<Self, PruneError> {
        let n = labels.len();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut weight_up: Vec<Num> = vec![Num::zero(); n];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(w, ref wt) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    weight_up[w] = wt.clone();
                    children[v].push(w);
                    stack.push(w);
                }
            }
        }
        if order.len() != n {
            return Err(PruneError::NotATree);
        }
        for ch in &mut children {
            ch.sort_unstable();
        }
        let mut subtree_size = vec![1usize; n];
        let mut post_order = order;
        post_order.reverse();
        for &v in &post_order {
            if let Some(p) = parent[v] {
                subtree_size[p] += subtree_size[v];
            }
        }
        Ok(RootedTree {
            labels,
            penalty,
            parent,
            weight_up,
            children,
            subtree_size,
            post_order,
            local_of,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn root(&self) -> usize {
        self.post_order[self.post_order.len() - 1]
    }

    pub fn children(&self, u: usize) -> &[usize] {
        &self.children[u]
    }

    pub fn parent(&self, u: usize) -> Option<usize> {
        self.parent[u]
    }

    pub fn penalty(&self, u: usize) -> &Num {
        &self.penalty[u]
    }

    pub fn weight_to_parent(&self, u: usize) -> &Num {
        &self.weight_up[u]
    }

    /// Instance vertex behind a local index (`None` for a dummy root).
    pub fn label(&self, u: usize) -> Option<VertexId> {
        self.labels[u]
    }

    pub fn local_of(&self, v: VertexId) -> Option<usize> {
        self.local_of.get(&v).copied()
    }

    pub fn has_dummy_root(&self) -> bool {
        self.labels[self.root()].is_none()
    }

    /// Net worth of a subforest given in instance-vertex space:
    /// `2·pi(V(F)) - w(F)` evaluated with this tree's penalties and weights.
    pub fn net_worth_of(&self, forest: &Forest) -> Result<Num, PruneError> {
        let two = Num::from_int(2);
        let mut total = Num::zero();
        for &v in forest.spanned() {
            let l = self.local_of(v).ok_or(PruneError::UnknownVertex { v })?;
            total += &(&two * &self.penalty[l]);
        }
        for &(u, v) in forest.edges() {
            let (lu, lv) = (
                self.local_of(u).ok_or(PruneError::UnknownVertex { v: u })?,
                self.local_of(v).ok_or(PruneError::UnknownVertex { v })?,
            );
            let (child, par) = if self.parent[lu] == Some(lv) {
                (lu, lv)
            } else if self.parent[lv] == Some(lu) {
                (lv, lu)
            } else {
                return Err(PruneError::UnknownEdge { u, v });
            };
            let _ = par;
            total -= &self.weight_up[child];
        }
        Ok(total)
    }
}

/// Dummy-rooted tree stitching all grown components together: a fresh root
/// with penalty 0 joined by weight-0 edges to the minimum-id vertex of each
/// component. Extraction at `p = 0` never touches the dummy parameters, and
/// zeros make any accidental contribution visible.
pub fn build_aux_tree(instance: &Instance, growth: &Growth) -> Result<RootedTree, PruneError> {
    if instance.n() == 0 {
        return Err(PruneError::Empty);
    }
    let n = instance.n();
    // local 0 = dummy root, local v+1 = instance vertex v.
    let mut labels: Vec<Option<VertexId>> = vec![None];
    labels.extend((0..n).map(Some));
    let mut penalty: Vec<Num> = vec![Num::zero()];
    penalty.extend((0..n).map(|v| instance.penalty(v).clone()));
    let mut adj: Vec<Vec<(usize, Num)>> = vec![Vec::new(); n + 1];
    for &c in growth.final_components() {
        let r = growth.min_vertex(c);
        adj[0].push((r + 1, Num::zero()));
        adj[r + 1].push((0, Num::zero()));
        for e in growth.comp_tree_edges(c) {
            let edge = &instance.edges()[e];
            adj[edge.u + 1].push((edge.v + 1, edge.weight.clone()));
            adj[edge.v + 1].push((edge.u + 1, edge.weight.clone()));
        }
    }
    let local_of: HashMap<VertexId, usize> = (0..n).map(|v| (v, v + 1)).collect();
    RootedTree::assemble(labels, penalty, adj, 0, local_of)
}

// ---------------------------------------------------------------------------
// The double dynamic program
// ---------------------------------------------------------------------------

/// A DP cell value: infeasible is a distinct sentinel, never a large
/// negative number (exact arithmetic has no safe "-inf").
#[derive(Debug, Clone, PartialEq)]
enum Val {
    Infeasible,
    Fin(Num),
}

impl Val {
    fn plus(&self, rhs: &Val) -> Val {
        match (self, rhs) {
            (Val::Fin(a), Val::Fin(b)) => Val::Fin(a + b),
            _ => Val::Infeasible,
        }
    }

    fn beats(&self, rhs: &Val) -> bool {
        match (self, rhs) {
            (Val::Infeasible, _) => false,
            (Val::Fin(_), Val::Infeasible) => true,
            (Val::Fin(a), Val::Fin(b)) => a > b,
        }
    }

    fn finite(&self) -> Option<&Num> {
        match self {
            Val::Fin(v) => Some(v),
            Val::Infeasible => None,
        }
    }
}

/// How a child subtree participates in its parent's prefix DP step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ChildUse {
    /// Child absent from the forest (its subtree may still contribute).
    Absent,
    /// Child present as the root of its own component.
    Root,
    /// Child present and linked to the parent (parent-present case only).
    Linked,
}

type PrefixBp = Option<(usize, ChildUse)>;
type PrefixBp2 = Option<(usize, usize, ChildUse)>;

/// The four-index table `f(u, p, t, k)` with backpointers, stored as the two
/// independent slices `f(u,0,0,·)` and `f(u,1,0,·)`; `f(u,1,1,k)` equals
/// `f(u,1,0,k-1)` (the node's own root flag just consumes one unit of the
/// budget) and `f(u,0,1,·)` is infeasible.
pub struct DpTable<'t> {
    tree: &'t RootedTree,
    k_max: usize,
    absent: Vec<Vec<Val>>,
    present: Vec<Vec<Val>>,
    // Per node, per child position, per budget: the chosen child allocation.
    bp_absent: Vec<Vec<Vec<PrefixBp>>>,
    // Per node, per child position, per link flag q, per budget.
    bp_present: Vec<Vec<[Vec<PrefixBp2>; 2]>>,
    // Chosen q at the last child for each present-case budget.
    bp_present_q: Vec<Vec<Option<usize>>>,
}

/// Builds the DP over `tree` for all budgets `0..=k_max` in one pass.
pub fn build_dp(tree: &RootedTree, k_max: usize) -> DpTable<'_> {
    let n = tree.len();
    let k_max = k_max.min(n);
    let cap = |u: usize| k_max.min(tree.subtree_size[u]);
    let two = Num::from_int(2);

    let mut absent: Vec<Vec<Val>> = vec![Vec::new(); n];
    let mut present: Vec<Vec<Val>> = vec![Vec::new(); n];
    let mut bp_absent: Vec<Vec<Vec<PrefixBp>>> = vec![Vec::new(); n];
    let mut bp_present: Vec<Vec<[Vec<PrefixBp2>; 2]>> = vec![Vec::new(); n];
    let mut bp_present_q: Vec<Vec<Option<usize>>> = vec![Vec::new(); n];

    // Value of child v entering its parent's prefix DP with budget kv.
    let child_val = |absent: &Vec<Vec<Val>>,
                     present: &Vec<Vec<Val>>,
                     v: usize,
                     kv: usize,
                     usage: ChildUse,
                     link_weight: &Num| match usage {
        ChildUse::Absent => absent[v][kv].clone(),
        ChildUse::Root => {
            if kv >= 1 {
                present[v][kv - 1].clone()
            } else {
                Val::Infeasible
            }
        }
        ChildUse::Linked => match &present[v][kv] {
            Val::Fin(x) => Val::Fin(x - link_weight),
            Val::Infeasible => Val::Infeasible,
        },
    };

    for &u in &tree.post_order {
        let cu = cap(u);
        let kids = tree.children(u);

        // Case p_u = 0: children either absent or roots of their own
        // components; budgets convolve across the child prefix.
        let mut prev: Vec<Val> = vec![Val::Infeasible; cu + 1];
        prev[0] = Val::Fin(Num::zero());
        let mut rows: Vec<Vec<PrefixBp>> = Vec::with_capacity(kids.len());
        let mut prefix_cap = 0usize;
        for &v in kids {
            prefix_cap = (prefix_cap + tree.subtree_size[v]).min(cu);
            let mut cur: Vec<Val> = vec![Val::Infeasible; cu + 1];
            let mut row: Vec<PrefixBp> = vec![None; cu + 1];
            let cv = cap(v);
            for j in 0..=prefix_cap {
                for kv in 0..=j.min(cv) {
                    if let Val::Infeasible = prev[j - kv] {
                        continue;
                    }
                    for usage in [ChildUse::Absent, ChildUse::Root] {
                        let cand = prev[j - kv].plus(&child_val(
                            &absent,
                            &present,
                            v,
                            kv,
                            usage,
                            &Num::zero(),
                        ));
                        if cand.beats(&cur[j]) {
                            cur[j] = cand;
                            row[j] = Some((kv, usage));
                        }
                    }
                }
            }
            prev = cur;
            rows.push(row);
        }
        absent[u] = prev;
        bp_absent[u] = rows;

        // Case p_u = 1 (t_u = 0): children may additionally be linked to u,
        // paying the edge weight; the prefix carries the link flag of the
        // latest child so ties resolve toward unlinked choices.
        let budget_cap = cu.min(tree.subtree_size[u].saturating_sub(1)).min(k_max);
        let mut prev2: [Vec<Val>; 2] = [
            vec![Val::Infeasible; budget_cap + 1],
            vec![Val::Infeasible; budget_cap + 1],
        ];
        prev2[0][0] = Val::Fin(Num::zero());
        let mut rows2: Vec<[Vec<PrefixBp2>; 2]> = Vec::with_capacity(kids.len());
        let mut prefix_cap = 0usize;
        for &v in kids {
            prefix_cap = (prefix_cap + tree.subtree_size[v]).min(budget_cap);
            let mut cur2: [Vec<Val>; 2] = [
                vec![Val::Infeasible; budget_cap + 1],
                vec![Val::Infeasible; budget_cap + 1],
            ];
            let mut row2: [Vec<PrefixBp2>; 2] =
                [vec![None; budget_cap + 1], vec![None; budget_cap + 1]];
            let cv = cap(v);
            let link_w = tree.weight_to_parent(v);
            for j in 0..=prefix_cap {
                for kv in 0..=j.min(cv) {
                    for prev_q in 0..2 {
                        if let Val::Infeasible = prev2[prev_q][j - kv] {
                            continue;
                        }
                        for (q, usage) in [
                            (0, ChildUse::Absent),
                            (0, ChildUse::Root),
                            (1, ChildUse::Linked),
                        ] {
                            let cand = prev2[prev_q][j - kv]
                                .plus(&child_val(&absent, &present, v, kv, usage, link_w));
                            if cand.beats(&cur2[q][j]) {
                                cur2[q][j] = cand;
                                row2[q][j] = Some((kv, prev_q, usage));
                            }
                        }
                    }
                }
            }
            prev2 = cur2;
            rows2.push(row2);
        }
        let base = Val::Fin(&two * tree.penalty(u));
        let mut pres: Vec<Val> = vec![Val::Infeasible; cu + 1];
        let mut pres_q: Vec<Option<usize>> = vec![None; cu + 1];
        for j in 0..=budget_cap {
            for q in 0..2 {
                let cand = base.plus(&prev2[q][j]);
                if cand.beats(&pres[j]) {
                    pres[j] = cand;
                    pres_q[j] = Some(q);
                }
            }
        }
        present[u] = pres;
        present_pad(&mut present[u], cu + 1);
        bp_present[u] = rows2;
        bp_present_q[u] = pres_q;
    }

    DpTable {
        tree,
        k_max,
        absent,
        present,
        bp_absent,
        bp_present,
        bp_present_q,
    }
}

fn present_pad(v: &mut Vec<Val>, len: usize) {
    while v.len() < len {
        v.push(Val::Infeasible);
    }
}

impl DpTable<'_> {
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// `f(root, p, t, k)`; `None` means infeasible. `(p,t) = (0,1)` is
    /// infeasible for every budget by definition.
    pub fn root_value(&self, p: bool, t: bool, k: usize) -> Option<Num> {
        let r = self.tree.root();
        self.value_at(r, p, t, k)
    }

    fn value_at(&self, u: usize, p: bool, t: bool, k: usize) -> Option<Num> {
        if k > self.k_max {
            return None;
        }
        match (p, t) {
            (false, true) => None,
            (false, false) => self.absent[u].get(k).and_then(|v| v.finite().cloned()),
            (true, false) => self.present[u].get(k).and_then(|v| v.finite().cloned()),
            (true, true) => {
                if k == 0 {
                    None
                } else {
                    self.present[u].get(k - 1).and_then(|v| v.finite().cloned())
                }
            }
        }
    }

    /// Reconstructs the maximizing forest for `f(root, p, t, k)` in
    /// instance-vertex space. Components equal the budget `k` exactly.
    pub fn extract(&self, p: bool, t: bool, k: usize) -> Option<(Forest, Num)> {
        let value = self.root_value(p, t, k)?;
        let mut spanned: Vec<VertexId> = Vec::new();
        let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
        // (node, present, counts_self_as_root, budget)
        let mut stack: Vec<(usize, bool, bool, usize)> = vec![(self.tree.root(), p, t, k)];
        while let Some((u, pu, tu, ku)) = stack.pop() {
            if pu {
                if let Some(v) = self.tree.label(u) {
                    spanned.push(v);
                }
                let mut j = ku - tu as usize;
                let kids = self.tree.children(u);
                if kids.is_empty() {
                    continue;
                }
                let mut q = self.bp_present_q[u][j].expect("finite cell has a chosen q");
                for i in (0..kids.len()).rev() {
                    let (kv, prev_q, usage) =
                        self.bp_present[u][i][q][j].expect("finite cell has a backpointer");
                    let v = kids[i];
                    match usage {
                        ChildUse::Absent => stack.push((v, false, false, kv)),
                        ChildUse::Root => stack.push((v, true, true, kv)),
                        ChildUse::Linked => {
                            let (a, b) = (
                                self.tree.label(u).expect("dummy is never linked"),
                                self.tree.label(v).expect("dummy is never linked"),
                            );
                            edges.push((a, b));
                            stack.push((v, true, false, kv));
                        }
                    }
                    j -= kv;
                    q = prev_q;
                }
            } else {
                let mut j = ku;
                let kids = self.tree.children(u);
                for i in (0..kids.len()).rev() {
                    let (kv, usage) =
                        self.bp_absent[u][i][j].expect("finite cell has a backpointer");
                    let v = kids[i];
                    match usage {
                        ChildUse::Absent => stack.push((v, false, false, kv)),
                        ChildUse::Root => stack.push((v, true, true, kv)),
                        ChildUse::Linked => unreachable!("absent parent cannot link"),
                    }
                    j -= kv;
                }
            }
        }
        let forest = Forest::new(spanned, edges).expect("DP forests are acyclic");
        Some((forest, value))
    }

    /// Best value over the feasible root states for a k-component forest:
    /// the root is either absent or the root of its own component. Ties
    /// prefer the root-absent state.
    pub fn best(&self, k: usize) -> Option<(Forest, Num)> {
        let skip = self.root_value(false, false, k);
        let take = self.root_value(true, true, k);
        match (skip, take) {
            (None, None) => None,
            (Some(_), None) => self.extract(false, false, k),
            (None, Some(_)) => self.extract(true, true, k),
            (Some(a), Some(b)) => {
                if b > a {
                    self.extract(true, true, k)
                } else {
                    self.extract(false, false, k)
                }
            }
        }
    }
}

/// Result of pruning: the forest (in instance-vertex space) and its net
/// worth with respect to the tree.
#[derive(Debug, Clone)]
pub struct PruneResult {
    pub forest: Forest,
    pub value: Num,
}

/// NW-maximum k-forest of `tree`: exactly `k` disjoint subtrees (possibly
/// singletons) maximizing net worth. `k = 0` yields the empty forest.
pub fn rootless_prune(tree: &RootedTree, k: usize) -> Result<PruneResult, PruneError> {
    if k > tree.len() {
        return Err(PruneError::KOutOfRange {
            k,
            min: 0,
            max: tree.len(),
        });
    }
    let dp = build_dp(tree, k);
    let (forest, value) = dp.best(k).ok_or(PruneError::KOutOfRange {
        k,
        min: 0,
        max: tree.len(),
    })?;
    Ok(PruneResult { forest, value })
}

/// `nw(sub) = 2·pi(V(sub)) - w(sub)` with respect to `scope`; errors if
/// `sub` is not contained in `scope`.
pub fn net_worth(instance: &Instance, scope: &Forest, sub: &Forest) -> Result<Num, PruneError> {
    if !sub.spanned().iter().all(|v| scope.contains(*v))
        || !sub.edges().iter().all(|e| scope.edges().contains(e))
    {
        return Err(PruneError::NotContained);
    }
    let two = Num::from_int(2);
    let pi: Num = sub
        .spanned()
        .iter()
        .map(|&v| instance.penalty(v).clone())
        .sum();
    Ok(&two * &pi - sub.weight_in(instance))
}

/// The unrooted solver: grow, stitch the components under a dummy root, and
/// read the pruned forest at `f(r', 0, 0, K)`.
#[derive(Debug, Clone)]
pub struct UrpcfSolution {
    pub forest: Forest,
    /// Cost-plus-penalty value of the forest.
    pub value: Num,
    pub growth: Growth,
}

pub fn solve_urpcf(instance: &Instance, k: usize) -> Result<UrpcfSolution, PruneError> {
    if k == 0 || k > instance.n() {
        return Err(PruneError::KOutOfRange {
            k,
            min: 1,
            max: instance.n(),
        });
    }
    let growth = crate::moat::rootless_grow(instance).map_err(|_| PruneError::Empty)?;
    let aux = build_aux_tree(instance, &growth)?;
    let dp = build_dp(&aux, k);
    let (forest, _nw) = dp.extract(false, false, k).ok_or(PruneError::KOutOfRange {
        k,
        min: 1,
        max: instance.n(),
    })?;
    let value =
        crate::instance::cost_plus_penalty(instance, &forest).expect("extracted forest is valid");
    Ok(UrpcfSolution {
        forest,
        value,
        growth,
    })
}
