//! Canonical small instances used across the test suites and the docs, plus
//! the iterative split heuristic kept as a baseline fixture.

use crate::instance::{Dsu, Forest, Instance};
use crate::num::Num;
use crate::prune::RootedTree;

/// Five-vertex path with penalties `(n^2, 1, 1, n^2, n^2)` and weights
/// `(1, n+1, n, 1)`. The optimal 2-component forest keeps the two unit
/// edges and pays the middle penalty, for a value of 3; stripping the
/// heaviest edge from the optimal tree instead costs `n + 2`.
pub fn heavy_ends_path(n: i64) -> Instance {
    let p = Num::from_int(n * n);
    Instance::new(
        vec![
            (0, p.clone()),
            (1, Num::from_int(1)),
            (2, Num::from_int(1)),
            (3, p.clone()),
            (4, p),
        ],
        vec![
            (0, 1, Num::from_int(1)),
            (1, 2, Num::from_int(n + 1)),
            (2, 3, Num::from_int(n)),
            (3, 4, Num::from_int(1)),
        ],
    )
    .expect("fixture is valid")
}

/// The optimal 2-component forest of [`heavy_ends_path`]: both unit edges, middle
/// vertex unspanned.
pub fn heavy_ends_path_opt2() -> Forest {
    Forest::new(vec![0, 1, 3, 4], vec![(0, 1), (3, 4)]).expect("fixture is valid")
}

/// Five-vertex star: center penalty 2, leaf penalties 6.2/6.5/7.5/5.5,
/// edge weights 9/9/9/11 (center first, leaves in id order).
pub fn greedy_trap_star() -> Instance {
    Instance::new(
        vec![
            (0, Num::from_int(2)),
            (1, Num::parse("6.2").unwrap()),
            (2, Num::parse("6.5").unwrap()),
            (3, Num::parse("7.5").unwrap()),
            (4, Num::parse("5.5").unwrap()),
        ],
        vec![
            (0, 1, Num::from_int(9)),
            (0, 2, Num::from_int(9)),
            (0, 3, Num::from_int(9)),
            (0, 4, Num::from_int(11)),
        ],
    )
    .expect("fixture is valid")
}

/// [`greedy_trap_star`] as a rooted tree with the center as root.
pub fn greedy_trap_tree() -> RootedTree {
    let star = greedy_trap_star();
    let edges: Vec<(usize, usize)> = star.edges().iter().map(|e| (e.u, e.v)).collect();
    RootedTree::from_instance_tree(&star, &edges, 0).expect("fixture is a tree")
}

/// The iterative split heuristic, exhaustively evaluated: grow an NW-maximum
/// 1-forest, then repeatedly apply the best single step (add a disjoint
/// subtree, or replace one component by two disjoint subtrees of it).
/// Returns the net worth after each step. It stalls at 39 on the uneven
/// star where the exact answer is 40.4, which is why the DP exists; kept
/// only as a baseline for regression tests. Exponential in the tree size.
pub fn greedy_split_values(tree: &RootedTree, up_to: usize) -> Vec<Num> {
    let n = tree.len();
    assert!(n <= 20, "the greedy fixture enumerates all subtrees");
    let conn_sets: Vec<u32> = (1u32..1 << n)
        .filter(|&mask| {
            let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let inside = |v: usize| mask >> v & 1 == 1;
            let edge_count = verts
                .iter()
                .filter(|&&v| tree.parent(v).map(&inside).unwrap_or(false))
                .count();
            edge_count + 1 == verts.len() && {
                let mut dsu = Dsu::new(n);
                for &v in &verts {
                    if let Some(p) = tree.parent(v) {
                        if inside(p) {
                            dsu.union(v, p);
                        }
                    }
                }
                verts.iter().all(|&v| dsu.find(v) == dsu.find(verts[0]))
            }
        })
        .collect();
    let nw_of = |mask: u32| -> Num {
        let mut total = Num::zero();
        for v in 0..n {
            if mask >> v & 1 == 1 {
                total += &(&Num::from_int(2) * tree.penalty(v));
                if let Some(p) = tree.parent(v) {
                    if mask >> p & 1 == 1 {
                        total -= tree.weight_to_parent(v);
                    }
                }
            }
        }
        total
    };
    let mut forest: Vec<u32> = vec![*conn_sets
        .iter()
        .max_by(|&&a, &&b| nw_of(a).cmp(&nw_of(b)))
        .unwrap()];
    let mut values = vec![forest.iter().map(|&m| nw_of(m)).sum::<Num>()];
    while forest.len() < up_to {
        let used: u32 = forest.iter().fold(0, |acc, &m| acc | m);
        let mut best: Option<(Vec<u32>, Num)> = None;
        // (a) add a subtree disjoint from the current forest
        for &s in &conn_sets {
            if s & used == 0 {
                let mut cand = forest.clone();
                cand.push(s);
                let val = cand.iter().map(|&m| nw_of(m)).sum::<Num>();
                if best.as_ref().map_or(true, |(_, b)| val > *b) {
                    best = Some((cand, val));
                }
            }
        }
        // (b) replace one component by two disjoint subtrees of it
        for (i, &comp) in forest.iter().enumerate() {
            for &s1 in &conn_sets {
                if s1 & comp != s1 {
                    continue;
                }
                for &s2 in &conn_sets {
                    if s2 & comp != s2 || s1 & s2 != 0 || s1 >= s2 {
                        continue;
                    }
                    let mut cand = forest.clone();
                    cand.remove(i);
                    cand.push(s1);
                    cand.push(s2);
                    let val = cand.iter().map(|&m| nw_of(m)).sum::<Num>();
                    if best.as_ref().map_or(true, |(_, b)| val > *b) {
                        best = Some((cand, val));
                    }
                }
            }
        }
        let (next, val) = best.expect("a step always exists below n components");
        forest = next;
        values.push(val);
    }
    values
}
