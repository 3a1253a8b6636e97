//! Rooted pruning: the K-forest step and reverse deletion that turn a grown
//! forest into a rooted solution with exactly one root per component.
//!
//! This solver exists in its own right and as the analysis bridge for the
//! unrooted solver: the unrooted prune is never worse than this pipeline run
//! with roots taken from an optimal solution.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::instance::{EdgeId, Forest, Instance, VertexId};
use crate::moat::{rootless_grow, Event, Growth};
use crate::num::Num;

#[derive(Debug, thiserror::Error)]
pub enum RootedError {
    #[error("root {0} is not an instance vertex")]
    UnknownRoot(VertexId),
    #[error("root set is empty")]
    NoRoots,
    #[error("growth does not match the instance: {0}")]
    Mismatched(String),
}

/// Intermediate state of the rooted pipeline: which roots were requested and
/// which edges the K-forest step removed (in removal order).
#[derive(Debug, Clone)]
pub struct RootedContext {
    pub roots: BTreeSet<VertexId>,
    pub removed_edges: Vec<(VertexId, VertexId)>,
}

fn check_roots(instance: &Instance, roots: &BTreeSet<VertexId>) -> Result<(), RootedError> {
    if roots.is_empty() {
        return Err(RootedError::NoRoots);
    }
    if let Some(&r) = roots.iter().find(|&&r| r >= instance.n()) {
        return Err(RootedError::UnknownRoot(r));
    }
    Ok(())
}

/// Mutable tree-set over a fixed vertex universe, tracking adjacency with
/// event indices so paths and "latest added edge" queries are direct.
struct EdgeSet {
    adj: Vec<Vec<(VertexId, usize)>>,
    present: HashSet<(VertexId, VertexId)>,
}

impl EdgeSet {
    fn new(n: usize) -> Self {
        EdgeSet {
            adj: vec![Vec::new(); n],
            present: HashSet::new(),
        }
    }

    fn insert(&mut self, u: VertexId, v: VertexId, event: usize) {
        self.adj[u].push((v, event));
        self.adj[v].push((u, event));
        self.present.insert((u.min(v), u.max(v)));
    }

    fn remove(&mut self, u: VertexId, v: VertexId) {
        self.adj[u].retain(|&(w, _)| w != v);
        self.adj[v].retain(|&(w, _)| w != u);
        self.present.remove(&(u.min(v), u.max(v)));
    }

    /// Path from `a` to `b` as (edge endpoints, event index) triples, if the
    /// two are connected.
    fn path(&self, a: VertexId, b: VertexId) -> Option<Vec<(VertexId, VertexId, usize)>> {
        let mut pred: HashMap<VertexId, (VertexId, usize)> = HashMap::new();
        let mut stack = vec![a];
        let mut seen = HashSet::from([a]);
        while let Some(v) = stack.pop() {
            if v == b {
                break;
            }
            for &(w, ev) in &self.adj[v] {
                if seen.insert(w) {
                    pred.insert(w, (v, ev));
                    stack.push(w);
                }
            }
        }
        if !seen.contains(&b) {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = b;
        while cur != a {
            let (prev, ev) = pred[&cur];
            path.push((prev, cur, ev));
            cur = prev;
        }
        path.reverse();
        Some(path)
    }
}

/// The K-forest step: keep only grown components containing roots, then
/// repeatedly split any component holding several roots by deleting, on a
/// root-to-root path with no intermediate root, the edge added last.
/// Deterministic choice: the lexicographically smallest such root pair.
pub fn k_forest_step(
    instance: &Instance,
    growth: &Growth,
    roots: &BTreeSet<VertexId>,
) -> Result<(Forest, RootedContext), RootedError> {
    check_roots(instance, roots)?;
    if growth.n() != instance.n() {
        return Err(RootedError::Mismatched(format!(
            "instance has {} vertices, growth has {}",
            instance.n(),
            growth.n()
        )));
    }

    // Components of the grown forest that contain at least one root.
    let retained: Vec<_> = growth
        .final_components()
        .iter()
        .copied()
        .filter(|&c| {
            let verts = growth.comp_vertices(c);
            roots.iter().any(|r| verts.binary_search(r).is_ok())
        })
        .collect();

    let mut vertices: BTreeSet<VertexId> = BTreeSet::new();
    let mut edges = EdgeSet::new(instance.n());
    for &c in &retained {
        vertices.extend(growth.comp_vertices(c));
        for e in growth.comp_tree_edges(c) {
            let edge = &instance.edges()[e];
            edges.insert(
                edge.u,
                edge.v,
                growth.edge_event_index(e).expect("added edge"),
            );
        }
    }

    let mut removed: Vec<(VertexId, VertexId)> = Vec::new();
    loop {
        // Smallest root pair that is still connected with no other root on
        // its tree path.
        let roots_vec: Vec<VertexId> = roots.iter().copied().collect();
        let mut chosen: Option<Vec<(VertexId, VertexId, usize)>> = None;
        'pairs: for (i, &a) in roots_vec.iter().enumerate() {
            for &b in &roots_vec[i + 1..] {
                if let Some(path) = edges.path(a, b) {
                    let interior_has_root =
                        path.iter().skip(1).any(|&(u, _, _)| roots.contains(&u));
                    if !interior_has_root {
                        chosen = Some(path);
                        break 'pairs;
                    }
                }
            }
        }
        let Some(path) = chosen else { break };
        let &(u, v, _) = path
            .iter()
            .max_by_key(|&&(_, _, ev)| ev)
            .expect("nonempty path");
        edges.remove(u, v);
        removed.push((u, v));
    }

    let forest = Forest::new(vertices.iter().copied(), edges.present.iter().copied())
        .expect("splitting a forest keeps it a forest");
    Ok((
        forest,
        RootedContext {
            roots: roots.clone(),
            removed_edges: removed,
        },
    ))
}

/// One reverse-deletion step: the edge that was cut and the rootless
/// inactive leaf component removed with it.
#[derive(Debug, Clone)]
pub struct Deletion {
    pub edge: (VertexId, VertexId),
    pub component: crate::moat::CompId,
}

/// Reverse deletion: scan each tree's edges in decreasing addition order;
/// an edge is dropped together with one of the two components it merged if
/// that component (a) was inactive at the merge, (b) holds no root, and
/// (c) is incident to no other edge still retained.
pub fn reverse_delete(
    instance: &Instance,
    growth: &Growth,
    forest: &Forest,
    roots: &BTreeSet<VertexId>,
) -> Result<Forest, RootedError> {
    reverse_delete_with_log(instance, growth, forest, roots).map(|(f, _)| f)
}

/// [`reverse_delete`], also reporting every deletion it performed.
pub fn reverse_delete_with_log(
    instance: &Instance,
    growth: &Growth,
    forest: &Forest,
    roots: &BTreeSet<VertexId>,
) -> Result<(Forest, Vec<Deletion>), RootedError> {
    check_roots(instance, roots)?;
    let mut spanned: BTreeSet<VertexId> = forest.spanned().clone();
    let mut edges: BTreeSet<(VertexId, VertexId)> = forest.edges().clone();

    // Incident retained edges per vertex, maintained as edges are dropped.
    let mut incident: HashMap<VertexId, BTreeSet<(VertexId, VertexId)>> = HashMap::new();
    for &(u, v) in &edges {
        incident.entry(u).or_default().insert((u, v));
        incident.entry(v).or_default().insert((u, v));
    }

    let mut ordered: Vec<((VertexId, VertexId), usize, EdgeId)> = edges
        .iter()
        .map(|&(u, v)| {
            let e = instance.edge_between(u, v).expect("forest edge");
            ((u, v), growth.edge_event_index(e).expect("added edge"), e)
        })
        .collect();
    ordered.sort_by_key(|&(_, ev, _)| std::cmp::Reverse(ev));

    let mut log: Vec<Deletion> = Vec::new();
    for (pair, event_idx, _) in ordered {
        if !edges.contains(&pair) {
            continue; // removed together with an earlier component
        }
        let Event::EdgeAdded {
            left,
            right,
            left_active,
            right_active,
            ..
        } = growth.events()[event_idx]
        else {
            unreachable!("edge events index edge additions");
        };
        for (comp, active) in [(left, left_active), (right, right_active)] {
            if active {
                continue; // (a)
            }
            let verts = growth.comp_vertices(comp);
            if roots.iter().any(|r| verts.binary_search(r).is_ok()) {
                continue; // (b)
            }
            let in_comp = |v: VertexId| verts.binary_search(&v).is_ok();
            let mut crossing = 0usize;
            for &v in &verts {
                if let Some(set) = incident.get(&v) {
                    crossing += set
                        .iter()
                        .filter(|&&(a, b)| in_comp(a) != in_comp(b))
                        .count();
                }
            }
            if crossing != 1 {
                continue; // (c): some other retained edge still leaves the component
            }
            // The side being cut is still fully present: kept-root splits
            // never sever a rootless component, and earlier deletions remove
            // family sets wholesale.
            debug_assert!(verts.iter().all(|v| spanned.contains(v)));
            // Drop the edge, the component's vertices, and its inner edges.
            let mut to_drop: Vec<(VertexId, VertexId)> = vec![pair];
            for &v in &verts {
                if let Some(set) = incident.get(&v) {
                    to_drop.extend(set.iter().copied());
                }
            }
            for (a, b) in to_drop {
                if edges.remove(&(a, b)) {
                    incident.get_mut(&a).map(|s| s.remove(&(a, b)));
                    incident.get_mut(&b).map(|s| s.remove(&(a, b)));
                }
            }
            for &v in &verts {
                spanned.remove(&v);
            }
            log.push(Deletion {
                edge: pair,
                component: comp,
            });
            break;
        }
    }

    Ok((
        Forest::new(spanned, edges).expect("deletion keeps the forest valid"),
        log,
    ))
}

/// The full rooted solver: grow, split multi-root trees, reverse-delete.
/// The output has exactly `|roots|` components, one root each, and satisfies
/// `w(F) + 2·pi(unspanned) <= 2·opt` for the rooted instance.
#[derive(Debug, Clone)]
pub struct RpcfSolution {
    pub forest: Forest,
    pub value: Num,
    pub growth: Growth,
    pub context: RootedContext,
}

pub fn solve_rpcf(
    instance: &Instance,
    roots: &BTreeSet<VertexId>,
) -> Result<RpcfSolution, RootedError> {
    check_roots(instance, roots)?;
    let growth = rootless_grow(instance).map_err(|e| RootedError::Mismatched(e.to_string()))?;
    let (split, context) = k_forest_step(instance, &growth, roots)?;
    let forest = reverse_delete(instance, &growth, &split, roots)?;
    let value = crate::instance::cost_plus_penalty(instance, &forest).expect("forest is valid");
    Ok(RpcfSolution {
        forest,
        value,
        growth,
        context,
    })
}

/// The dual certificate behind the rooted guarantee:
/// `w(F) + 2·pi(X) <= 2·sum of y_S over root-free family sets`, checkable
/// directly from the growth's laminar family. Returns (lhs, rhs).
pub fn rooted_lmp_certificate(
    instance: &Instance,
    growth: &Growth,
    forest: &Forest,
    roots: &BTreeSet<VertexId>,
) -> (Num, Num) {
    let two = Num::from_int(2);
    let unspanned_penalty: Num = (0..instance.n())
        .filter(|v| !forest.contains(*v))
        .map(|v| instance.penalty(v).clone())
        .sum();
    let lhs = forest.weight_in(instance) + &two * &unspanned_penalty;
    let mut dual = Num::zero();
    for c in growth.all_components() {
        if growth.y(c).is_zero() {
            continue;
        }
        let verts = growth.comp_vertices(c);
        if roots.iter().all(|r| verts.binary_search(r).is_err()) {
            dual += growth.y(c);
        }
    }
    (lhs, &two * &dual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instance::{cost_plus_penalty, generate_random, lmp_value, Instance};
    use crate::oracle::opt_rpcf;

    fn roots_of(ids: &[VertexId]) -> BTreeSet<VertexId> {
        ids.iter().copied().collect()
    }

    #[test]
    fn singleton_roots_pass_through() {
        // Penalties of zero keep every vertex a singleton component.
        let inst = Instance::new(
            vec![(0, Num::zero()), (1, Num::zero()), (2, Num::zero())],
            vec![(0, 1, Num::from_int(2)), (1, 2, Num::from_int(2))],
        )
        .unwrap();
        let growth = rootless_grow(&inst).unwrap();
        let (forest, ctx) = k_forest_step(&inst, &growth, &roots_of(&[0, 2])).unwrap();
        assert_eq!(forest.k(), 2);
        assert!(ctx.removed_edges.is_empty());
        assert_eq!(forest.spanned().len(), 2);
    }

    #[test]
    fn splits_remove_the_latest_added_path_edge() {
        // Path a-b-c where ab goes tight before bc; splitting roots {a,c}
        // must delete bc, leaving {a,b} and {c}.
        let inst = Instance::new(
            vec![
                (0, Num::from_int(50)),
                (1, Num::from_int(50)),
                (2, Num::from_int(50)),
            ],
            vec![(0, 1, Num::from_int(2)), (1, 2, Num::from_int(3))],
        )
        .unwrap();
        let growth = rootless_grow(&inst).unwrap();
        let ab = growth
            .edge_event_index(inst.edge_between(0, 1).unwrap())
            .unwrap();
        let bc = growth
            .edge_event_index(inst.edge_between(1, 2).unwrap())
            .unwrap();
        assert!(ab < bc);
        let (forest, ctx) = k_forest_step(&inst, &growth, &roots_of(&[0, 2])).unwrap();
        assert_eq!(ctx.removed_edges, vec![(1, 2)]);
        assert_eq!(forest.k(), 2);
        assert!(forest.edges().contains(&(0, 1)));
    }

    #[test]
    fn every_retained_component_holds_one_root() {
        for seed in 0..25 {
            let inst = generate_random(seed, 8, 13, 10, 10).unwrap();
            let growth = rootless_grow(&inst).unwrap();
            let mut rng = crate::instance::SplitMix64::new(seed ^ 0xabcd);
            let k = 1 + (rng.next_below(7) as usize).min(inst.n() - 1);
            let mut roots = BTreeSet::new();
            while roots.len() < k {
                roots.insert(rng.next_below(inst.n() as u64 - 1) as usize);
            }
            let (forest, _) = k_forest_step(&inst, &growth, &roots).unwrap();
            assert_eq!(forest.k(), roots.len());
            for comp in forest.components() {
                assert_eq!(
                    comp.spanned().iter().filter(|v| roots.contains(v)).count(),
                    1,
                    "seed {seed}"
                );
            }
        }
    }

    #[test]
    fn reverse_delete_drops_rootless_inactive_leaves() {
        // Two vertices pi=(1,5), w=4, root {1}: growth adds the edge after
        // deactivating {0}; reverse deletion must cut it again, because {0}
        // is a rootless inactive leaf. Result: the singleton {1}.
        let inst = Instance::new(
            vec![(0, Num::from_int(1)), (1, Num::from_int(5))],
            vec![(0, 1, Num::from_int(4))],
        )
        .unwrap();
        let sol = solve_rpcf(&inst, &roots_of(&[1])).unwrap();
        assert_eq!(sol.forest.spanned().len(), 1);
        assert!(sol.forest.contains(1));
        assert_eq!(sol.value, Num::from_int(1));
        let opt = opt_rpcf(&inst, &roots_of(&[1])).unwrap();
        assert!(
            lmp_value(&inst, &sol.forest, &Num::from_int(2)).unwrap()
                <= &Num::from_int(2) * &opt.value
        );
    }

    #[test]
    fn reverse_delete_keeps_trees_without_inactive_merges() {
        // Symmetric pair grows the edge while both sides are active, so no
        // deletion applies.
        let inst = Instance::new(
            vec![(0, Num::from_int(3)), (1, Num::from_int(3))],
            vec![(0, 1, Num::from_int(4))],
        )
        .unwrap();
        let sol = solve_rpcf(&inst, &roots_of(&[0])).unwrap();
        assert_eq!(sol.forest.edges().len(), 1);
    }

    /// An instance engineered so growth produces the event pattern
    /// e1, e2, S3, e4, S5, e6, S7, e8: two pair-merges, a deactivated pair,
    /// a bridge, a deactivated singleton, a rooted pair, its deactivation,
    /// and a final bridge into one tree. Reverse deletion must keep e8 (the
    /// inactive leaf holds the root), keep e6 (the leaf side was active),
    /// remove e4 together with the rootless inactive pair (and its inner
    /// edge e2), and keep e1.
    #[test]
    fn reverse_deletion_walkthrough() {
        let inst = Instance::new(
            vec![
                (0, Num::from_int(10)),           // a: the root
                (1, Num::parse("3.4").unwrap()),  // b
                (2, Num::from_int(100)),          // c
                (3, Num::from_int(100)),          // d
                (4, Num::parse("1.75").unwrap()), // e
                (5, Num::parse("1.75").unwrap()), // f
            ],
            vec![
                (2, 3, Num::from_int(1)),           // cd = e1
                (4, 5, Num::from_int(2)),           // ef = e2
                (3, 5, Num::parse("5.5").unwrap()), // df = e4
                (0, 1, Num::from_int(7)),           // ab = e6
                (1, 2, Num::from_int(22)),          // cb = e8
            ],
        )
        .unwrap();
        let growth = rootless_grow(&inst).unwrap();
        let kinds: Vec<String> = growth
            .events()
            .iter()
            .map(|ev| match *ev {
                Event::EdgeAdded { edge, .. } => {
                    let e = &inst.edges()[edge];
                    format!("edge({},{})", e.u, e.v)
                }
                Event::Deactivated { comp } => {
                    format!("deact{:?}", growth.comp_vertices(comp))
                }
            })
            .collect();
        assert_eq!(
            kinds,
            vec![
                "edge(2,3)",   // e1
                "edge(4,5)",   // e2
                "deact[4, 5]", // S3
                "edge(3,5)",   // e4
                "deact[1]",    // S5
                "edge(0,1)",   // e6
                "deact[0, 1]", // S7
                "edge(1,2)",   // e8
                "deact[0, 1, 2, 3, 4, 5]",
            ]
        );

        let roots = roots_of(&[0]);
        let (split, _) = k_forest_step(&inst, &growth, &roots).unwrap();
        let (forest, log) = reverse_delete_with_log(&inst, &growth, &split, &roots).unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].edge, (3, 5), "e4 is the cut edge");
        assert_eq!(
            growth.comp_vertices(log[0].component),
            vec![4, 5],
            "S3 goes with it"
        );
        assert_eq!(
            forest,
            Forest::new(vec![0, 1, 2, 3], vec![(0, 1), (1, 2), (2, 3)]).unwrap(),
            "e1, e6, e8 survive"
        );
    }

    /// The split rule removes the path edge added last, which need not be
    /// the heaviest one.
    #[test]
    fn split_prefers_latest_over_heaviest() {
        let inst = Instance::new(
            vec![
                (0, Num::from_int(100)),
                (1, Num::from_int(1)),
                (2, Num::from_int(100)),
                (3, Num::from_int(100)),
            ],
            vec![
                (0, 1, Num::from_int(9)),
                (1, 2, Num::from_int(6)),
                (2, 3, Num::from_int(10)),
            ],
        )
        .unwrap();
        let growth = rootless_grow(&inst).unwrap();
        let order: Vec<usize> = [(1, 2), (2, 3), (0, 1)]
            .iter()
            .map(|&(u, v)| {
                growth
                    .edge_event_index(inst.edge_between(u, v).unwrap())
                    .unwrap()
            })
            .collect();
        assert!(
            order[0] < order[1] && order[1] < order[2],
            "(0,1) is added last"
        );
        let (forest, ctx) = k_forest_step(&inst, &growth, &roots_of(&[0, 3])).unwrap();
        assert_eq!(
            ctx.removed_edges,
            vec![(0, 1)],
            "latest added, not the heaviest (2,3)"
        );
        assert_eq!(forest.k(), 2);
    }

    #[test]
    fn all_roots_yields_singletons() {
        let inst = fixtures::heavy_ends_path(10);
        let sol = solve_rpcf(&inst, &roots_of(&[0, 1, 2, 3, 4])).unwrap();
        assert_eq!(sol.forest.k(), 5);
        assert_eq!(sol.value, Num::zero());
    }

    #[test]
    fn rooted_solver_respects_two_lmp_against_oracle() {
        let two = Num::from_int(2);
        for seed in 0..40 {
            let inst = generate_random(seed + 500, 7, 11, 10, 10).unwrap();
            let mut rng = crate::instance::SplitMix64::new(seed);
            let k = 1 + rng.next_below(6) as usize;
            let mut roots = BTreeSet::new();
            while roots.len() < k.min(inst.n()) {
                roots.insert(rng.next_below(inst.n() as u64 - 1) as usize);
            }
            let sol = solve_rpcf(&inst, &roots).unwrap();
            assert_eq!(sol.forest.k(), roots.len(), "seed {seed}");
            for comp in sol.forest.components() {
                assert_eq!(
                    comp.spanned().iter().filter(|v| roots.contains(v)).count(),
                    1
                );
            }
            for r in &roots {
                assert!(sol.forest.contains(*r), "roots survive reverse deletion");
            }
            let opt = opt_rpcf(&inst, &roots).unwrap();
            let lmp = lmp_value(&inst, &sol.forest, &two).unwrap();
            assert!(
                lmp <= &two * &opt.value,
                "seed {seed}: {lmp:?} vs {:?}",
                opt.value
            );

            let (lhs, rhs) = rooted_lmp_certificate(&inst, &sol.growth, &sol.forest, &roots);
            assert!(lhs <= rhs, "certificate failed on seed {seed}");
            assert_eq!(lhs, lmp);
            assert_eq!(sol.value, cost_plus_penalty(&inst, &sol.forest).unwrap());
        }
    }

    #[test]
    fn deleted_vertices_are_unions_of_inactive_components() {
        for seed in 0..20 {
            let inst = generate_random(seed + 900, 8, 12, 9, 9).unwrap();
            let roots = roots_of(&[0, 3]);
            let growth = rootless_grow(&inst).unwrap();
            let (split, _) = k_forest_step(&inst, &growth, &roots).unwrap();
            let (forest, log) = reverse_delete_with_log(&inst, &growth, &split, &roots).unwrap();
            // The vertices removed by reverse deletion are exactly the
            // disjoint union of the logged components, each of which was
            // inactive at its merge and holds no root.
            let mut removed: Vec<VertexId> = Vec::new();
            for del in &log {
                let verts = growth.comp_vertices(del.component);
                assert!(verts.iter().all(|v| !roots.contains(v)), "seed {seed}");
                removed.extend(verts);
            }
            let before = removed.len();
            removed.sort_unstable();
            removed.dedup();
            assert_eq!(
                removed.len(),
                before,
                "components are disjoint (seed {seed})"
            );
            let expected: Vec<VertexId> = split
                .spanned()
                .iter()
                .copied()
                .filter(|v| !forest.contains(*v))
                .collect();
            assert_eq!(removed, expected, "seed {seed}");
        }
    }

    #[test]
    fn rejects_bad_roots() {
        let inst = fixtures::heavy_ends_path(10);
        assert!(matches!(
            solve_rpcf(&inst, &BTreeSet::new()),
            Err(RootedError::NoRoots)
        ));
        assert!(matches!(
            solve_rpcf(&inst, &roots_of(&[17])),
            Err(RootedError::UnknownRoot(17))
        ));
    }
}
