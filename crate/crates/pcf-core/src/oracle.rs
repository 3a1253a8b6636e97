//! Exhaustive exact solvers for small instances: the ground truth every
//! approximation guarantee and DP-exactness test is checked against.
//!
//! All oracles enumerate spanned sets (or edge sets) outright and rely on one
//! structural fact: for a fixed spanned set U, the cheapest forest spanning U
//! with exactly K components is a minimum spanning forest of G[U] with its
//! K - c(U) heaviest retained edges removed. Guards are hard errors so a
//! too-large input can never silently degrade a test to sampling.

use std::collections::BTreeSet;

use crate::instance::{Dsu, Forest, Instance, VertexId};
use crate::num::Num;
use crate::prune::RootedTree;
use crate::sweep::SweepInstance;

/// Exact optimum plus a witness achieving it; the witness re-evaluates to
/// `value` through the instance operations.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub value: Num,
    pub witness: Forest,
}

/// Certified lower bound for the sweep-cover objective: the best
/// `c·K + pi(V \ U)` over pairs where some K-component forest of weight at
/// most `K·a·t` spans `U`.
#[derive(Debug, Clone)]
pub struct SweepLowerBound {
    pub value: Num,
    pub sensors: usize,
    pub covered: BTreeSet<VertexId>,
}

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("oracle guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("K={k} is out of range {lo}..={hi}")]
    KOutOfRange { k: usize, lo: usize, hi: usize },
    #[error("invalid root set: {0}")]
    InvalidRoots(String),
    #[error("oracle requires a tree without a dummy root")]
    DummyRoot,
}

const URPCF_GUARD: usize = 16;
const RPCF_GUARD: usize = 20;
const NWKF_GUARD: usize = 14;
const SWEEP_GUARD: usize = 10;

/// Edge ids sorted ascending by (weight, id); shared by the Kruskal-style
/// scans below.
fn sorted_edges(instance: &Instance) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..instance.m()).collect();
    ids.sort_by(|&a, &b| instance.weight(a).cmp(instance.weight(b)).then(a.cmp(&b)));
    ids
}

/// Penalty of each subset, built incrementally over the mask lattice.
fn subset_penalties(instance: &Instance) -> Vec<Num> {
    let n = instance.n();
    let mut table = vec![Num::zero(); 1 << n];
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        table[mask] = &table[mask & (mask - 1)] + instance.penalty(low);
    }
    table
}

/// Minimum spanning forest of `G[mask]`: retained edge ids in ascending
/// weight order.
fn msf_in(instance: &Instance, sorted: &[usize], mask: usize) -> Vec<usize> {
    let mut dsu = Dsu::new(instance.n());
    let mut kept = Vec::new();
    for &e in sorted {
        let edge = &instance.edges()[e];
        if mask >> edge.u & 1 == 1 && mask >> edge.v & 1 == 1 && dsu.union(edge.u, edge.v) {
            kept.push(e);
        }
    }
    kept
}

/// Exhaustive URPCF_K optimum: over every spanned set U with
/// `c(G[U]) <= K <= |U|`, the best K-component forest is the MSF of G[U]
/// minus its K - c heaviest edges.
pub fn opt_urpcf(instance: &Instance, k: usize) -> Result<OracleResult, OracleError> {
    let per_k = opt_urpcf_all(instance)?;
    per_k
        .into_iter()
        .nth(k)
        .flatten()
        .ok_or(OracleError::KOutOfRange {
            k,
            lo: 1,
            hi: instance.n(),
        })
}

/// All URPCF optima in one subset sweep; entry `k` is `None` for `k = 0` and
/// `k > n`.
pub fn opt_urpcf_all(instance: &Instance) -> Result<Vec<Option<OracleResult>>, OracleError> {
    let n = instance.n();
    if n > URPCF_GUARD {
        return Err(OracleError::GuardExceeded(format!(
            "opt_urpcf needs n <= {URPCF_GUARD}, got {n}"
        )));
    }
    let sorted = sorted_edges(instance);
    let pi = subset_penalties(instance);
    let total_pi = &pi[(1usize << n) - 1];
    let mut best: Vec<Option<(Num, usize, Vec<usize>, usize)>> = vec![None; n + 1];
    for mask in 1usize..(1 << n) {
        let size = mask.count_ones() as usize;
        let kept = msf_in(instance, &sorted, mask);
        let c = size - kept.len();
        let mut weight: Num = kept.iter().map(|&e| instance.weight(e).clone()).sum();
        let penalty = total_pi - &pi[mask];
        // Walking k upward drops the heaviest retained edge each step.
        let mut dropped = 0;
        for k in c..=size {
            if k > c {
                weight -= instance.weight(kept[kept.len() - dropped - 1]);
                dropped += 1;
            }
            if k == 0 {
                continue;
            }
            let value = &weight + &penalty;
            if best[k].as_ref().map_or(true, |(cur, ..)| value < *cur) {
                best[k] = Some((value, mask, kept.clone(), dropped));
            }
        }
    }
    Ok(best
        .into_iter()
        .map(|slot| {
            slot.map(|(value, mask, kept, dropped)| {
                let edges = kept[..kept.len() - dropped]
                    .iter()
                    .map(|&e| (instance.edges()[e].u, instance.edges()[e].v));
                let spanned = (0..n).filter(|v| mask >> v & 1 == 1);
                OracleResult {
                    value,
                    witness: Forest::new(spanned, edges).expect("msf is acyclic"),
                }
            })
        })
        .collect())
}

/// Exhaustive rooted optimum: enumerate edge subsets, keep acyclic ones in
/// which every component of the spanned graph holds exactly one root.
pub fn opt_rpcf(
    instance: &Instance,
    roots: &BTreeSet<VertexId>,
) -> Result<OracleResult, OracleError> {
    let n = instance.n();
    let m = instance.m();
    if m > RPCF_GUARD {
        return Err(OracleError::GuardExceeded(format!(
            "opt_rpcf needs m <= {RPCF_GUARD}, got {m}"
        )));
    }
    if roots.is_empty() {
        return Err(OracleError::InvalidRoots("empty root set".into()));
    }
    if let Some(&r) = roots.iter().find(|&&r| r >= n) {
        return Err(OracleError::InvalidRoots(format!(
            "root {r} is not a vertex"
        )));
    }
    let mut best: Option<(Num, Forest)> = None;
    'subsets: for mask in 0usize..(1 << m) {
        let mut dsu = Dsu::new(n);
        let mut spanned: BTreeSet<VertexId> = roots.clone();
        let mut weight = Num::zero();
        for e in 0..m {
            if mask >> e & 1 == 0 {
                continue;
            }
            let edge = &instance.edges()[e];
            if !dsu.union(edge.u, edge.v) {
                continue 'subsets;
            }
            spanned.insert(edge.u);
            spanned.insert(edge.v);
            weight += &edge.weight;
        }
        // Exactly one root per spanned component.
        let mut root_of_class: Vec<Option<bool>> = vec![None; n];
        for &r in roots {
            let class = dsu.find(r);
            if root_of_class[class].is_some() {
                continue 'subsets;
            }
            root_of_class[class] = Some(true);
        }
        if !spanned
            .iter()
            .all(|&v| root_of_class[dsu.find(v)].is_some())
        {
            continue 'subsets;
        }
        let penalty: Num = (0..n)
            .filter(|v| !spanned.contains(v))
            .map(|v| instance.penalty(v).clone())
            .sum();
        let value = &weight + &penalty;
        if best.as_ref().map_or(true, |(cur, _)| value < *cur) {
            let edges = (0..m)
                .filter(|e| mask >> e & 1 == 1)
                .map(|e| (instance.edges()[e].u, instance.edges()[e].v));
            best = Some((
                value,
                Forest::new(spanned.iter().copied(), edges).expect("acyclic"),
            ));
        }
    }
    let (value, witness) = best.expect("the all-singleton-roots forest is always feasible");
    Ok(OracleResult { value, witness })
}

/// Exhaustive NW-maximum k-forest of a tree: enumerate spanned sets; the
/// induced forest T[U] is split into exactly k pieces by dropping its k - c
/// heaviest edges.
pub fn opt_nw_kforest(tree: &RootedTree, k: usize) -> Result<OracleResult, OracleError> {
    let per_k = opt_nw_kforest_all(tree)?;
    per_k
        .into_iter()
        .nth(k)
        .flatten()
        .ok_or(OracleError::KOutOfRange {
            k,
            lo: 0,
            hi: tree.len(),
        })
}

/// All k at once; entry `k` is the NW-maximum k-forest value and witness.
pub fn opt_nw_kforest_all(tree: &RootedTree) -> Result<Vec<Option<OracleResult>>, OracleError> {
    let n = tree.len();
    if n > NWKF_GUARD {
        return Err(OracleError::GuardExceeded(format!(
            "opt_nw_kforest needs |V| <= {NWKF_GUARD}, got {n}"
        )));
    }
    if tree.has_dummy_root() {
        return Err(OracleError::DummyRoot);
    }
    // Tree edges (child local id identifies the edge), ascending by weight.
    let mut edge_children: Vec<usize> = (0..n).filter(|&v| tree.parent(v).is_some()).collect();
    edge_children.sort_by(|&a, &b| {
        tree.weight_to_parent(a)
            .cmp(tree.weight_to_parent(b))
            .then(a.cmp(&b))
    });
    // 2*pi per subset, built incrementally.
    let two = Num::from_int(2);
    let mut pi2 = vec![Num::zero(); 1 << n];
    for mask in 1usize..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        pi2[mask] = &pi2[mask & (mask - 1)] + &(&two * tree.penalty(low));
    }

    let mut best: Vec<Option<(Num, usize, Vec<usize>, usize)>> = vec![None; n + 1];
    best[0] = Some((Num::zero(), 0, Vec::new(), 0));
    for mask in 1usize..(1 << n) {
        let size = mask.count_ones() as usize;
        let induced: Vec<usize> = edge_children
            .iter()
            .copied()
            .filter(|&v| mask >> v & 1 == 1 && mask >> tree.parent(v).unwrap() & 1 == 1)
            .collect();
        let c = size - induced.len();
        let mut kept_weight: Num = induced
            .iter()
            .map(|&v| tree.weight_to_parent(v).clone())
            .sum();
        let mut dropped = 0;
        for k in c..=size {
            if k > c {
                kept_weight -= tree.weight_to_parent(induced[induced.len() - dropped - 1]);
                dropped += 1;
            }
            let value = &pi2[mask] - &kept_weight;
            if best[k].as_ref().map_or(true, |(cur, ..)| value > *cur) {
                best[k] = Some((value, mask, induced.clone(), dropped));
            }
        }
    }
    Ok(best
        .into_iter()
        .map(|slot| {
            slot.map(|(value, mask, induced, dropped)| {
                let spanned = (0..n)
                    .filter(|v| mask >> v & 1 == 1)
                    .map(|v| tree.label(v).expect("no dummy"));
                let edges = induced[..induced.len() - dropped].iter().map(|&v| {
                    (
                        tree.label(v).expect("no dummy"),
                        tree.label(tree.parent(v).unwrap()).expect("no dummy"),
                    )
                });
                OracleResult {
                    value,
                    witness: Forest::new(spanned, edges).expect("induced forest"),
                }
            })
        })
        .collect())
}

/// Certified PCMinSSC lower bound: minimize `c·K + pi(V \ U)` over all
/// `(K, U)` such that the cheapest K-component forest spanning U has weight
/// at most `K·a·t`. `(K, U) = (0, {})` is admitted, covering optima that
/// deploy no sensors at all.
pub fn sweep_lower_bound(si: &SweepInstance) -> Result<SweepLowerBound, OracleError> {
    let instance = &si.instance;
    let n = instance.n();
    if n > SWEEP_GUARD {
        return Err(OracleError::GuardExceeded(format!(
            "sweep_lower_bound needs n <= {SWEEP_GUARD}, got {n}"
        )));
    }
    let sorted = sorted_edges(instance);
    let pi = subset_penalties(instance);
    let total_pi = pi[(1usize << n) - 1].clone();
    let at = &si.speed * &si.period;
    let budget: Vec<Num> = (0..=n).map(|k| &Num::from_u64(k as u64) * &at).collect();
    let sensor_cost: Vec<Num> = (0..=n)
        .map(|k| &Num::from_u64(k as u64) * &si.sensor_cost)
        .collect();

    let mut best = SweepLowerBound {
        value: total_pi,
        sensors: 0,
        covered: BTreeSet::new(),
    };
    for mask in 1usize..(1 << n) {
        let size = mask.count_ones() as usize;
        let kept = msf_in(instance, &sorted, mask);
        let c = size - kept.len();
        let penalty = &pi[(1 << n) - 1] - &pi[mask];
        let mut weight: Num = kept.iter().map(|&e| instance.weight(e).clone()).sum();
        let mut dropped = 0;
        for k in c..=size {
            if k > c {
                weight -= instance.weight(kept[kept.len() - dropped - 1]);
                dropped += 1;
            }
            if k == 0 || weight > budget[k] {
                continue;
            }
            let value = &sensor_cost[k] + &penalty;
            if value < best.value {
                best = SweepLowerBound {
                    value,
                    sensors: k,
                    covered: (0..n).filter(|v| mask >> v & 1 == 1).collect(),
                };
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::instance::{cost_plus_penalty, generate_random, metric_closure};

    #[test]
    fn heavy_ends_path_urpcf_values() {
        let inst = fixtures::heavy_ends_path(10);
        let k2 = opt_urpcf(&inst, 2).unwrap();
        assert_eq!(k2.value, Num::from_int(3));
        assert_eq!(cost_plus_penalty(&inst, &k2.witness).unwrap(), k2.value);
        assert_eq!(k2.witness.k(), 2);

        let k1 = opt_urpcf(&inst, 1).unwrap();
        assert_eq!(k1.value, Num::from_int(23), "the whole path");

        let kn = opt_urpcf(&inst, 5).unwrap();
        assert_eq!(kn.value, Num::zero());
        assert!(kn.witness.edges().is_empty());
    }

    #[test]
    fn urpcf_guards() {
        let big = generate_random(3, 17, 10, 5, 5).unwrap();
        assert!(matches!(
            opt_urpcf(&big, 1),
            Err(OracleError::GuardExceeded(_))
        ));
        let inst = fixtures::heavy_ends_path(10);
        assert!(matches!(
            opt_urpcf(&inst, 0),
            Err(OracleError::KOutOfRange { .. })
        ));
        assert!(matches!(
            opt_urpcf(&inst, 6),
            Err(OracleError::KOutOfRange { .. })
        ));
    }

    #[test]
    fn urpcf_never_beaten_by_a_sampled_forest() {
        use crate::instance::{Dsu, SplitMix64};
        for seed in 0..20 {
            let inst = generate_random(seed, 7, 10, 12, 12).unwrap();
            let all = opt_urpcf_all(&inst).unwrap();
            let mut rng = SplitMix64::new(seed ^ 0x0f0f);
            for _ in 0..40 {
                // Random acyclic edge subset plus random extra singletons.
                let mut dsu = Dsu::new(inst.n());
                let mut edges = Vec::new();
                let mut spanned = std::collections::BTreeSet::new();
                for (i, e) in inst.edges().iter().enumerate() {
                    if rng.next_below(2) == 1 && dsu.union(e.u, e.v) {
                        edges.push((e.u, e.v));
                        spanned.insert(e.u);
                        spanned.insert(e.v);
                        let _ = i;
                    }
                }
                for v in 0..inst.n() {
                    if rng.next_below(3) == 0 {
                        spanned.insert(v);
                    }
                }
                let forest = Forest::new(spanned, edges).unwrap();
                let k = forest.k();
                if k == 0 {
                    continue;
                }
                let opt = all[k].as_ref().unwrap();
                assert!(
                    opt.value <= cost_plus_penalty(&inst, &forest).unwrap(),
                    "seed {seed} k {k}"
                );
            }
        }
    }

    #[test]
    fn rpcf_examples() {
        // roots = V: the all-singleton forest is forced, value 0.
        let inst = fixtures::heavy_ends_path(10);
        let all: BTreeSet<VertexId> = (0..5).collect();
        let res = opt_rpcf(&inst, &all).unwrap();
        assert_eq!(res.value, Num::zero());
        assert_eq!(res.witness.k(), 5);

        // Two vertices pi=(1,5), w=4, root {1}: leaving 0 unspanned is best.
        let two = crate::instance::Instance::new(
            vec![(0, Num::from_int(1)), (1, Num::from_int(5))],
            vec![(0, 1, Num::from_int(4))],
        )
        .unwrap();
        let res = opt_rpcf(&two, &BTreeSet::from([1])).unwrap();
        assert_eq!(res.value, Num::from_int(1));
        assert_eq!(res.witness.spanned().len(), 1);
    }

    #[test]
    fn rpcf_matches_urpcf_through_witness_roots() {
        for seed in 0..15 {
            let inst = generate_random(seed + 100, 7, 12, 10, 10).unwrap();
            let all = opt_urpcf_all(&inst).unwrap();
            for k in 1..=inst.n() {
                let u = all[k].as_ref().unwrap();
                let roots: BTreeSet<VertexId> = u
                    .witness
                    .components()
                    .iter()
                    .map(|c| *c.spanned().iter().next().unwrap())
                    .collect();
                assert_eq!(roots.len(), k);
                let r = opt_rpcf(&inst, &roots).unwrap();
                assert_eq!(r.value, u.value, "seed {seed} K {k}");
                assert_eq!(cost_plus_penalty(&inst, &r.witness).unwrap(), r.value);
            }
        }
    }

    #[test]
    fn rpcf_guards() {
        let big = generate_random(5, 8, 21, 5, 5).unwrap();
        assert!(matches!(
            opt_rpcf(&big, &BTreeSet::from([0])),
            Err(OracleError::GuardExceeded(_))
        ));
        let inst = fixtures::heavy_ends_path(10);
        assert!(matches!(
            opt_rpcf(&inst, &BTreeSet::new()),
            Err(OracleError::InvalidRoots(_))
        ));
        assert!(matches!(
            opt_rpcf(&inst, &BTreeSet::from([9])),
            Err(OracleError::InvalidRoots(_))
        ));
    }

    #[test]
    fn nw_kforest_star_values() {
        let tree = fixtures::greedy_trap_tree();
        assert_eq!(
            opt_nw_kforest(&tree, 1).unwrap().value,
            Num::parse("17.4").unwrap()
        );
        assert_eq!(
            opt_nw_kforest(&tree, 3).unwrap().value,
            Num::parse("40.4").unwrap()
        );
        assert_eq!(
            opt_nw_kforest(&tree, 5).unwrap().value,
            Num::parse("55.4").unwrap()
        );
        assert_eq!(opt_nw_kforest(&tree, 0).unwrap().value, Num::zero());
        for k in 0..=5 {
            let res = opt_nw_kforest(&tree, k).unwrap();
            assert_eq!(res.witness.k(), k);
            assert_eq!(tree.net_worth_of(&res.witness).unwrap(), res.value);
        }
        assert!(matches!(
            opt_nw_kforest(&tree, 6),
            Err(OracleError::KOutOfRange { .. })
        ));
    }

    #[test]
    fn sweep_lb_trivial_shapes() {
        let single = crate::instance::Instance::new(vec![(0, Num::from_int(9))], vec![]).unwrap();
        let si = SweepInstance::new(single, Num::from_int(1), Num::from_int(1), Num::from_int(2))
            .unwrap();
        let lb = sweep_lower_bound(&si).unwrap();
        // K=1 stationing beats paying the penalty 9.
        assert_eq!(lb.value, Num::from_int(2));
        assert_eq!(lb.sensors, 1);

        // Two vertices at distance zero: one zero-weight tree covers both.
        let pair = crate::instance::Instance::new(
            vec![(0, Num::from_int(9)), (1, Num::from_int(9))],
            vec![(0, 1, Num::zero())],
        )
        .unwrap();
        let si =
            SweepInstance::new(pair, Num::from_int(1), Num::from_int(1), Num::from_int(2)).unwrap();
        let lb = sweep_lower_bound(&si).unwrap();
        assert_eq!(lb.value, Num::from_int(2));
        assert_eq!(lb.covered.len(), 2);
    }

    #[test]
    fn sweep_lb_collapses_to_penalties_when_sensors_cost_too_much() {
        let pair = crate::instance::Instance::new(
            vec![(0, Num::from_int(1)), (1, Num::from_int(1))],
            vec![(0, 1, Num::from_int(3))],
        )
        .unwrap();
        let si = SweepInstance::new(
            pair,
            Num::from_int(1),
            Num::from_int(1),
            Num::from_int(1000),
        )
        .unwrap();
        let lb = sweep_lower_bound(&si).unwrap();
        assert_eq!(lb.value, Num::from_int(2));
        assert_eq!(lb.sensors, 0);
    }

    #[test]
    fn sweep_lb_guard() {
        let inst = metric_closure(&generate_random(2, 11, 55, 5, 5).unwrap());
        if let Ok((closed, _)) = inst {
            let si =
                SweepInstance::new(closed, Num::from_int(1), Num::from_int(1), Num::from_int(1));
            if let Ok(si) = si {
                assert!(matches!(
                    sweep_lower_bound(&si),
                    Err(OracleError::GuardExceeded(_))
                ));
            }
        }
    }
}
