//! Sweep-cover planning: group vertices with pruned forests, convert trees
//! to patrol cycles, and pick the component count with the best
//! sensors-plus-penalty score.
//!
//! Mobile sensors of speed `a` must visit each covered vertex at least once
//! per period `t`; a sensor costs `c`. Penalties and the sensor cost are
//! rescaled so `a·t/c = 4/5` (which changes nothing about the optimal plan
//! but fixes the constant the analysis needs), one unrooted solve per
//! candidate component count produces the groups, and doubled-and-shortcut
//! Euler tours turn each multi-vertex tree into a cycle of length at most
//! twice the tree weight.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::instance::{Forest, Instance, VertexId};
use crate::moat::rootless_grow;
use crate::num::Num;
use crate::prune::{build_aux_tree, build_dp};

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("speed, period and sensor cost must all be positive")]
    NonPositiveParameter,
    #[error("instance is not complete: missing edge ({u},{v})")]
    NotComplete { u: VertexId, v: VertexId },
    #[error("triangle inequality violated on ({u},{x},{v})")]
    NotMetric {
        u: VertexId,
        x: VertexId,
        v: VertexId,
    },
    #[error("a patrol cycle needs at least two vertices")]
    SingletonCycle,
    #[error("empty instance")]
    Empty,
    #[error("malformed plan document: {0}")]
    MalformedPlan(String),
    #[error("growth failed: {0}")]
    Growth(String),
}

/// A metric instance (complete, triangle inequality) together with the
/// sensor parameters. Construction validates everything.
#[derive(Debug, Clone)]
pub struct SweepInstance {
    pub instance: Instance,
    pub speed: Num,
    pub period: Num,
    pub sensor_cost: Num,
}

impl SweepInstance {
    pub fn new(
        instance: Instance,
        speed: Num,
        period: Num,
        sensor_cost: Num,
    ) -> Result<Self, SweepError> {
        if speed <= Num::zero() || period <= Num::zero() || sensor_cost <= Num::zero() {
            return Err(SweepError::NonPositiveParameter);
        }
        let n = instance.n();
        for u in 0..n {
            for v in u + 1..n {
                if instance.edge_between(u, v).is_none() {
                    return Err(SweepError::NotComplete { u, v });
                }
            }
        }
        let dist = |a: VertexId, b: VertexId| {
            instance
                .weight(instance.edge_between(a, b).expect("checked complete"))
                .clone()
        };
        for u in 0..n {
            for v in u + 1..n {
                let direct = dist(u, v);
                for x in 0..n {
                    if x == u || x == v {
                        continue;
                    }
                    if direct > dist(u, x) + dist(x, v) {
                        return Err(SweepError::NotMetric { u, x, v });
                    }
                }
            }
        }
        Ok(SweepInstance {
            instance,
            speed,
            period,
            sensor_cost,
        })
    }

    pub fn distance(&self, u: VertexId, v: VertexId) -> Num {
        if u == v {
            return Num::zero();
        }
        self.instance
            .weight(self.instance.edge_between(u, v).expect("complete"))
            .clone()
    }
}

/// Rescales penalties and the sensor cost by `sigma = 5at/(4c)` so that
/// `a·t/c' = 4/5` exactly. Both are scaled by the same factor, so every
/// plan's objective is multiplied by sigma and the optimal plan is
/// unchanged. Returns the scaled instance and sigma.
pub fn scale_for_lmp(si: &SweepInstance) -> (SweepInstance, Num) {
    let at = &si.speed * &si.period;
    let sigma = &(&Num::from_int(5) * &at) / &(&Num::from_int(4) * &si.sensor_cost);
    let vertices = si
        .instance
        .vertices()
        .iter()
        .map(|v| (v.label, &sigma * &v.penalty))
        .collect();
    let edges = si
        .instance
        .edges()
        .iter()
        .map(|e| {
            (
                si.instance.label(e.u),
                si.instance.label(e.v),
                e.weight.clone(),
            )
        })
        .collect();
    let scaled = SweepInstance {
        instance: Instance::new(vertices, edges).expect("rescaling keeps validity"),
        speed: si.speed.clone(),
        period: si.period.clone(),
        sensor_cost: &sigma * &si.sensor_cost,
    };
    (scaled, sigma)
}

/// Depth-first Euler doubling with shortcuts: visits every tree vertex once,
/// starting from the minimum-id vertex, children in ascending id order.
/// Cycle length (including the closing hop) is at most `2·w(tree)` by the
/// triangle inequality.
pub fn tree_to_cycle(
    si: &SweepInstance,
    tree: &Forest,
) -> Result<(Vec<VertexId>, Num), SweepError> {
    if tree.spanned().len() < 2 {
        return Err(SweepError::SingletonCycle);
    }
    let start = *tree.spanned().iter().next().expect("nonempty");
    let mut order: Vec<VertexId> = Vec::with_capacity(tree.spanned().len());
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        if !seen.insert(v) {
            continue;
        }
        order.push(v);
        // Push descending so the smallest unvisited neighbor comes out first.
        let mut nbrs: Vec<VertexId> = tree
            .edges()
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .filter(|w| !seen.contains(w))
            .collect();
        nbrs.sort_unstable_by(|a, b| b.cmp(a));
        stack.extend(nbrs);
    }
    let mut length = Num::zero();
    for i in 0..order.len() {
        let next = order[(i + 1) % order.len()];
        length += &si.distance(order[i], next);
    }
    Ok((order, length))
}

/// One group of the deployment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Deployment {
    /// A singleton group watched by one stationed sensor.
    Stationed { vertex: i64 },
    /// A cycle patrolled by `sensors` evenly spaced sensors moving in the
    /// same direction.
    Patrol {
        cycle: Vec<i64>,
        length: Num,
        sensors: usize,
    },
}

/// A full deployment: the chosen component count, per-group allocation, the
/// uncovered vertices, and the objective in original (unscaled) units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub k_hat: usize,
    pub groups: Vec<Deployment>,
    pub uncovered: Vec<i64>,
    pub objective: Num,
}

fn sensors_for(length: &Num, at: &Num) -> usize {
    // ceil(length/at), but never zero: even a zero-length cycle needs one
    // sensor to be visited at all.
    (length / at).ceil_to_usize().max(1)
}

/// One per-K deployment the planner chooses among. `sensors` is the `n_K`
/// count (stationed singletons plus ceil(cycle length / at) per patrol) and
/// `selection_score = c'·n_K + 5·pi'(uncovered)` in scaled units.
#[derive(Debug, Clone)]
pub struct KCandidate {
    pub k: usize,
    pub forest: Forest,
    pub sensors: usize,
    pub selection_score: Num,
}

/// Enumerates the deployments the selection rule compares: one unrooted
/// solve per K over the rescaled penalties (the growth is shared; only the
/// extraction varies), plus the empty deployment as K = 0.
pub fn enumerate_candidates(si: &SweepInstance) -> Result<Vec<KCandidate>, SweepError> {
    let n = si.instance.n();
    if n == 0 {
        return Err(SweepError::Empty);
    }
    let (scaled, _sigma) = scale_for_lmp(si);
    let five = Num::from_int(5);
    let at = &si.speed * &si.period;

    let growth = rootless_grow(&scaled.instance).map_err(|e| SweepError::Growth(e.to_string()))?;
    let aux =
        build_aux_tree(&scaled.instance, &growth).map_err(|e| SweepError::Growth(e.to_string()))?;
    let dp = build_dp(&aux, n);

    let mut out = vec![KCandidate {
        k: 0,
        forest: Forest::empty(),
        sensors: 0,
        selection_score: &five * &scaled.instance.total_penalty(),
    }];
    for k in 1..=n {
        let (forest, _) = dp.extract(false, false, k).expect("k <= n is feasible");
        let mut sensors = 0usize;
        for comp in forest.components() {
            if comp.spanned().len() == 1 {
                sensors += 1;
            } else {
                let (_, length) = tree_to_cycle(&scaled, &comp)?;
                sensors += sensors_for(&length, &at);
            }
        }
        let uncovered_penalty: Num = (0..n)
            .filter(|v| !forest.contains(*v))
            .map(|v| scaled.instance.penalty(v).clone())
            .sum();
        let selection_score =
            &(&scaled.sensor_cost * &Num::from_u64(sensors as u64)) + &(&five * &uncovered_penalty);
        out.push(KCandidate {
            k,
            forest,
            sensors,
            selection_score,
        });
    }
    Ok(out)
}

/// The planner. For each K, solve the unrooted problem on the scaled
/// penalties, convert every multi-vertex tree to a cycle, and count sensors;
/// pick the K minimizing `c·n_K + 5·pi(uncovered)` (with the empty
/// deployment competing as K = 0), then allocate. Ties prefer smaller K.
pub fn plan_sweep_cover(si: &SweepInstance) -> Result<SweepPlan, SweepError> {
    let candidates = enumerate_candidates(si)?;
    let at = &si.speed * &si.period;
    let chosen = candidates
        .iter()
        .min_by(|a, b| {
            a.selection_score
                .cmp(&b.selection_score)
                .then(a.k.cmp(&b.k))
        })
        .expect("K = 0 always exists");

    // Assemble the chosen deployment, reporting in original units.
    let n = si.instance.n();
    let mut groups = Vec::new();
    let mut covered: BTreeSet<VertexId> = BTreeSet::new();
    let mut total_sensors = 0usize;
    for comp in chosen.forest.components() {
        covered.extend(comp.spanned().iter().copied());
        if comp.spanned().len() == 1 {
            let v = *comp.spanned().iter().next().unwrap();
            groups.push(Deployment::Stationed {
                vertex: si.instance.label(v),
            });
            total_sensors += 1;
        } else {
            let (cycle, length) = tree_to_cycle(si, &comp)?;
            let sensors = sensors_for(&length, &at);
            total_sensors += sensors;
            groups.push(Deployment::Patrol {
                cycle: cycle.into_iter().map(|v| si.instance.label(v)).collect(),
                length,
                sensors,
            });
        }
    }
    let uncovered: Vec<VertexId> = (0..n).filter(|v| !covered.contains(v)).collect();
    let objective = &(&si.sensor_cost * &Num::from_u64(total_sensors as u64))
        + &uncovered
            .iter()
            .map(|&v| si.instance.penalty(v).clone())
            .sum::<Num>();
    Ok(SweepPlan {
        k_hat: chosen.k,
        groups,
        uncovered: uncovered
            .into_iter()
            .map(|v| si.instance.label(v))
            .collect(),
        objective,
    })
}

/// Verification outcome for a plan document.
#[derive(Debug, Clone)]
pub struct PlanReport {
    pub pass: bool,
    pub first_violation: Option<String>,
    pub recomputed_objective: Num,
}

/// Re-derives everything checkable about a plan: patrol revisit intervals
/// (`sensors·a·t >= length`, with the stated length recomputed from the
/// metric), stationed groups being singletons, group count, coverage
/// partition, and the objective.
pub fn verify_plan(si: &SweepInstance, plan: &SweepPlan) -> Result<PlanReport, SweepError> {
    let mut violations: Vec<String> = Vec::new();
    let n = si.instance.n();
    let at = &si.speed * &si.period;
    let mut covered: BTreeSet<VertexId> = BTreeSet::new();
    let mut total_sensors = 0usize;

    let resolve = |label: i64| si.instance.id_of_label(label);

    for (i, group) in plan.groups.iter().enumerate() {
        match group {
            Deployment::Stationed { vertex } => {
                match resolve(*vertex) {
                    Some(v) => {
                        if !covered.insert(v) {
                            violations.push(format!("group {i}: vertex {vertex} covered twice"));
                        }
                    }
                    None => violations.push(format!("group {i}: unknown vertex {vertex}")),
                }
                total_sensors += 1;
            }
            Deployment::Patrol {
                cycle,
                length,
                sensors,
            } => {
                total_sensors += sensors;
                if cycle.len() < 2 {
                    violations.push(format!("group {i}: patrol over fewer than two vertices"));
                    continue;
                }
                let mut ids = Vec::with_capacity(cycle.len());
                for label in cycle {
                    match resolve(*label) {
                        Some(v) => ids.push(v),
                        None => {
                            violations.push(format!("group {i}: unknown vertex {label}"));
                        }
                    }
                }
                if ids.len() != cycle.len() {
                    continue;
                }
                for &v in &ids {
                    if !covered.insert(v) {
                        violations.push(format!(
                            "group {i}: vertex {} covered twice",
                            si.instance.label(v)
                        ));
                    }
                }
                let mut recomputed = Num::zero();
                for j in 0..ids.len() {
                    recomputed += &si.distance(ids[j], ids[(j + 1) % ids.len()]);
                }
                if &recomputed != length {
                    violations.push(format!(
                        "group {i}: stated length {} but metric gives {}",
                        length.to_decimal_string(),
                        recomputed.to_decimal_string()
                    ));
                }
                if *sensors == 0 {
                    violations.push(format!("group {i}: zero sensors on a patrol"));
                } else {
                    // Evenly spaced same-direction sensors revisit every
                    // length/sensors distance; that must fit in one period.
                    let capacity = &Num::from_u64(*sensors as u64) * &at;
                    if capacity < recomputed {
                        violations.push(format!(
                            "group {i}: {} sensors cannot sweep length {} within the period",
                            sensors,
                            recomputed.to_decimal_string()
                        ));
                    }
                }
            }
        }
    }

    if plan.groups.len() != plan.k_hat {
        violations.push(format!(
            "plan declares K={} but lists {} groups",
            plan.k_hat,
            plan.groups.len()
        ));
    }

    let mut uncovered_ids: BTreeSet<VertexId> = BTreeSet::new();
    for label in &plan.uncovered {
        match resolve(*label) {
            Some(v) => {
                uncovered_ids.insert(v);
            }
            None => violations.push(format!("uncovered list names unknown vertex {label}")),
        }
    }
    for v in 0..n {
        let is_covered = covered.contains(&v);
        let is_uncovered = uncovered_ids.contains(&v);
        if is_covered == is_uncovered {
            violations.push(format!(
                "vertex {} must be exactly one of covered/uncovered",
                si.instance.label(v)
            ));
        }
    }

    let recomputed_objective = &(&si.sensor_cost * &Num::from_u64(total_sensors as u64))
        + &uncovered_ids
            .iter()
            .map(|&v| si.instance.penalty(v).clone())
            .sum::<Num>();
    if recomputed_objective != plan.objective {
        violations.push(format!(
            "stated objective {} but recomputation gives {}",
            plan.objective.to_decimal_string(),
            recomputed_objective.to_decimal_string()
        ));
    }

    Ok(PlanReport {
        pass: violations.is_empty(),
        first_violation: violations.into_iter().next(),
        recomputed_objective,
    })
}

pub fn serialize_plan(plan: &SweepPlan) -> String {
    serde_json::to_string_pretty(plan).expect("plan serialization")
}

pub fn parse_plan(text: &str) -> Result<SweepPlan, SweepError> {
    serde_json::from_str(text).map_err(|e| SweepError::MalformedPlan(e.to_string()))
}
