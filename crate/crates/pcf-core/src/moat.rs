//! Rootless moat growth: simultaneous dual ascent over all active
//! components.
//!
//! Starting from singleton components, every active component's dual variable
//! grows at unit rate until either an edge constraint `d(u) + d(v) <= w(e)`
//! or a set constraint `h(S) <= pi(S)` becomes tight. A tight edge merges its
//! two components (the merged component is active again); a tight set is
//! deactivated and its dual frozen. Event detection is exact: all duals are
//! rationals, so "first tight constraint" is unambiguous. A float
//! pre-filter narrows the per-iteration minimizations; winners are always
//! confirmed with exact comparisons, so the filter never changes the result.

use std::collections::HashMap;

use serde::Serialize;

use crate::instance::{Dsu, EdgeId, Forest, Instance, VertexId};
use crate::num::Num;

/// Persistent component id. Singletons occupy `0..n`; every merge allocates
/// a fresh id, so the ids form a laminar family ordered by creation time.
pub type CompId = usize;

/// One entry of the totally ordered event log.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    /// Edge constraint went tight: `left` and `right` (their activity flags
    /// as of this moment) merged into `merged`.
    EdgeAdded {
        edge: EdgeId,
        left: CompId,
        right: CompId,
        left_active: bool,
        right_active: bool,
        merged: CompId,
    },
    /// Set constraint went tight: `h(S) = pi(S)` now holds exactly.
    Deactivated { comp: CompId },
}

#[derive(Debug, Clone)]
struct Comp {
    /// Merge provenance; `None` for the singleton `{id}`.
    children: Option<(CompId, CompId, EdgeId)>,
    min_vertex: VertexId,
    size: usize,
    pi: Num,
    y: Num,
    /// `h(S)` at the end of the run (frozen at deactivation for sets that
    /// never merge again; a merged set's h keeps growing only through its
    /// supersets, never through itself).
    h: Num,
    deactivated_at: Option<usize>,
}

/// Immutable result of rootless growth: the full pre-pruning forest, the
/// laminar dual family with exact `y`, `d`, `h` values, and the event log.
#[derive(Debug, Clone)]
pub struct Growth {
    n: usize,
    events: Vec<Event>,
    comps: Vec<Comp>,
    final_comps: Vec<CompId>,
    final_comp_of: Vec<CompId>,
    d: Vec<Num>,
    forest_b: Forest,
    edge_event: HashMap<EdgeId, usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum GrowthError {
    #[error("growth requires at least one vertex")]
    EmptyInstance,
    #[error("growth was produced from a different instance: {0}")]
    Mismatched(String),
}

impl Growth {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Every component id ever formed, singletons first.
    pub fn all_components(&self) -> impl Iterator<Item = CompId> {
        0..self.comps.len()
    }

    /// Ids of the components alive when growth stopped (all deactivated).
    pub fn final_components(&self) -> &[CompId] {
        &self.final_comps
    }

    pub fn final_component_of(&self, v: VertexId) -> CompId {
        self.final_comp_of[v]
    }

    pub fn y(&self, c: CompId) -> &Num {
        &self.comps[c].y
    }

    pub fn h(&self, c: CompId) -> &Num {
        &self.comps[c].h
    }

    pub fn pi(&self, c: CompId) -> &Num {
        &self.comps[c].pi
    }

    pub fn d(&self, v: VertexId) -> &Num {
        &self.d[v]
    }

    pub fn min_vertex(&self, c: CompId) -> VertexId {
        self.comps[c].min_vertex
    }

    pub fn size(&self, c: CompId) -> usize {
        self.comps[c].size
    }

    pub fn is_deactivated(&self, c: CompId) -> bool {
        self.comps[c].deactivated_at.is_some()
    }

    pub fn deactivation_event(&self, c: CompId) -> Option<usize> {
        self.comps[c].deactivated_at
    }

    /// Merge provenance of `c`, if it is not a singleton.
    pub fn children(&self, c: CompId) -> Option<(CompId, CompId, EdgeId)> {
        self.comps[c].children
    }

    /// All edges ever added, before any pruning.
    pub fn forest_b(&self) -> &Forest {
        &self.forest_b
    }

    /// Position of the edge's addition in the event log.
    pub fn edge_event_index(&self, e: EdgeId) -> Option<usize> {
        self.edge_event.get(&e).copied()
    }

    /// Vertex set of a component, ascending.
    pub fn comp_vertices(&self, c: CompId) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.comps[c].size);
        let mut stack = vec![c];
        while let Some(id) = stack.pop() {
            match self.comps[id].children {
                None => out.push(id),
                Some((l, r, _)) => {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Tree edges inside a component, in addition order.
    pub fn comp_tree_edges(&self, c: CompId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut stack = vec![c];
        while let Some(id) = stack.pop() {
            if let Some((l, r, e)) = self.comps[id].children {
                out.push(e);
                stack.push(l);
                stack.push(r);
            }
        }
        out.sort_unstable_by_key(|e| self.edge_event[e]);
        out
    }

    /// The final component family as plain forests.
    pub fn component_forests(&self, instance: &Instance) -> Vec<Forest> {
        self.final_comps
            .iter()
            .map(|&c| {
                let verts = self.comp_vertices(c);
                let edges = self
                    .comp_tree_edges(c)
                    .into_iter()
                    .map(|e| (instance.edges()[e].u, instance.edges()[e].v));
                Forest::new(verts, edges).expect("component is a tree")
            })
            .collect()
    }

    #[doc(hidden)]
    pub fn override_y_for_audit(&mut self, c: CompId, y: Num) {
        self.comps[c].y = y;
    }
}

/// Runs the growth phase on `instance`. Deterministic: ties between
/// simultaneously tight edges pick the lexicographically smallest endpoint
/// pair, ties between sets pick the smallest minimum vertex id, and an
/// edge/set tie is resolved in favor of the edge (a set is deactivated only
/// when its slack is strictly smaller).
pub fn rootless_grow(instance: &Instance) -> Result<Growth, GrowthError> {
    let n = instance.n();
    if n == 0 {
        return Err(GrowthError::EmptyInstance);
    }

    let mut comps: Vec<Comp> = (0..n)
        .map(|v| Comp {
            children: None,
            min_vertex: v,
            size: 1,
            pi: instance.penalty(v).clone(),
            y: Num::zero(),
            h: Num::zero(),
            deactivated_at: None,
        })
        .collect();
    let mut active: Vec<bool> = vec![true; n];
    let mut members: Vec<Vec<VertexId>> = (0..n).map(|v| vec![v]).collect();
    let mut live: Vec<CompId> = (0..n).collect();
    let mut active_count = n;

    let mut dsu = Dsu::new(n);
    let mut comp_at_root: Vec<CompId> = (0..n).collect();

    let mut d: Vec<Num> = vec![Num::zero(); n];
    let mut events: Vec<Event> = Vec::new();
    let mut forest_spanned: Vec<VertexId> = (0..n).collect();
    let mut forest_edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut edge_event: HashMap<EdgeId, usize> = HashMap::new();

    // Float mirrors for the pre-filter, plus a certified margin. The margin
    // bounds the accumulated rounding error of any mirrored quantity, so the
    // exact minimum is always inside the candidate band.
    let w_approx: Vec<f64> = instance.edges().iter().map(|e| e.weight.to_f64()).collect();
    let mut d_approx: Vec<f64> = vec![0.0; n];
    let mut h_approx: Vec<f64> = vec![0.0; comps.len()];
    let pi_scale: f64 = instance.total_penalty().to_f64();
    let w_scale: f64 = w_approx.iter().cloned().fold(0.0f64, f64::max);
    let scale = pi_scale.max(w_scale).max(1.0);
    let margin = if scale.is_finite() {
        (16.0 * (2 * n + 8) as f64) * scale * f64::EPSILON
    } else {
        f64::INFINITY
    };

    while active_count > 0 {
        // epsilon_1: slack/(kappa_u + kappa_v) over inter-component edges
        // with at least one active side.
        let mut best_ratio = f64::INFINITY;
        let mut scanned: Vec<(EdgeId, f64, u32)> = Vec::new();
        for (e, edge) in instance.edges().iter().enumerate() {
            let ru = dsu.find(edge.u);
            let rv = dsu.find(edge.v);
            if ru == rv {
                continue;
            }
            let (cu, cv) = (comp_at_root[ru], comp_at_root[rv]);
            let denom = active[cu] as u32 + active[cv] as u32;
            if denom == 0 {
                continue;
            }
            let ratio = (w_approx[e] - d_approx[edge.u] - d_approx[edge.v]) / denom as f64;
            scanned.push((e, ratio, denom));
            if ratio < best_ratio {
                best_ratio = ratio;
            }
        }
        let mut eps1: Option<(Num, EdgeId)> = None;
        if !scanned.is_empty() {
            let band = if best_ratio.is_finite() {
                best_ratio + 2.0 * margin
            } else {
                f64::INFINITY
            };
            for &(e, ratio, denom) in &scanned {
                if ratio > band {
                    continue;
                }
                let edge = &instance.edges()[e];
                let slack = instance.weight(e) - &(&d[edge.u] + &d[edge.v]);
                let exact = slack / Num::from_u64(denom as u64);
                let better = match &eps1 {
                    None => true,
                    Some((cur, cur_e)) => {
                        exact < *cur
                            || (exact == *cur
                                && (edge.u, edge.v)
                                    < (instance.edges()[*cur_e].u, instance.edges()[*cur_e].v))
                    }
                };
                if better {
                    eps1 = Some((exact, e));
                }
            }
        }

        // epsilon_2: pi(S) - h(S) over active components.
        let mut best_slack = f64::INFINITY;
        let mut active_scan: Vec<(CompId, f64)> = Vec::new();
        for &c in &live {
            if !active[c] {
                continue;
            }
            let slack = comps[c].pi.to_f64() - h_approx[c];
            active_scan.push((c, slack));
            if slack < best_slack {
                best_slack = slack;
            }
        }
        let band = if best_slack.is_finite() {
            best_slack + 2.0 * margin
        } else {
            f64::INFINITY
        };
        let mut eps2: Option<(Num, CompId)> = None;
        for &(c, slack) in &active_scan {
            if slack > band {
                continue;
            }
            let exact = &comps[c].pi - &comps[c].h;
            let better = match &eps2 {
                None => true,
                Some((cur, cur_c)) => {
                    exact < *cur
                        || (exact == *cur && comps[c].min_vertex < comps[*cur_c].min_vertex)
                }
            };
            if better {
                eps2 = Some((exact, c));
            }
        }
        let (eps2_val, eps2_comp) = eps2.expect("an active component exists");

        // Deactivation only on a strictly smaller set slack; otherwise the
        // minimizing edge is added.
        let edge_wins = match &eps1 {
            Some((e1, _)) => eps2_val >= *e1,
            None => false,
        };
        let eps = if edge_wins {
            eps1.as_ref().unwrap().0.clone()
        } else {
            eps2_val.clone()
        };

        // Raise every active dual by eps.
        if !eps.is_zero() {
            let eps_f = eps.to_f64();
            for &c in &live {
                if !active[c] {
                    continue;
                }
                comps[c].y += &eps;
                comps[c].h += &eps;
                h_approx[c] += eps_f;
                for &v in &members[c] {
                    d[v] += &eps;
                    d_approx[v] += eps_f;
                }
            }
        }

        if edge_wins {
            let (_, e) = eps1.unwrap();
            let edge = &instance.edges()[e];
            let ru = dsu.find(edge.u);
            let rv = dsu.find(edge.v);
            let (cu, cv) = (comp_at_root[ru], comp_at_root[rv]);
            debug_assert_eq!(&(&d[edge.u] + &d[edge.v]), instance.weight(e));

            let merged = comps.len();
            let was_active = (active[cu], active[cv]);
            comps.push(Comp {
                children: Some((cu, cv, e)),
                min_vertex: comps[cu].min_vertex.min(comps[cv].min_vertex),
                size: comps[cu].size + comps[cv].size,
                pi: &comps[cu].pi + &comps[cv].pi,
                y: Num::zero(),
                h: &comps[cu].h + &comps[cv].h,
                deactivated_at: None,
            });
            active.push(true);
            h_approx.push(h_approx[cu] + h_approx[cv]);
            let mut merged_members = std::mem::take(&mut members[cu]);
            let mut other = std::mem::take(&mut members[cv]);
            if merged_members.len() < other.len() {
                std::mem::swap(&mut merged_members, &mut other);
            }
            merged_members.extend(other);
            members.push(merged_members);

            active_count -= was_active.0 as usize + was_active.1 as usize;
            active_count += 1;
            live.retain(|&c| c != cu && c != cv);
            live.push(merged);

            dsu.union(edge.u, edge.v);
            let root = dsu.find(edge.u);
            comp_at_root[root] = merged;

            edge_event.insert(e, events.len());
            forest_edges.push((edge.u, edge.v));
            events.push(Event::EdgeAdded {
                edge: e,
                left: cu,
                right: cv,
                left_active: was_active.0,
                right_active: was_active.1,
                merged,
            });
        } else {
            active[eps2_comp] = false;
            comps[eps2_comp].deactivated_at = Some(events.len());
            active_count -= 1;
            events.push(Event::Deactivated { comp: eps2_comp });
            debug_assert_eq!(comps[eps2_comp].h, comps[eps2_comp].pi);
        }
    }

    let mut final_comp_of = vec![0; n];
    for v in 0..n {
        final_comp_of[v] = comp_at_root[dsu.find(v)];
    }
    let mut final_comps: Vec<CompId> = live;
    final_comps.sort_unstable();

    Ok(Growth {
        n,
        events,
        comps,
        final_comps,
        final_comp_of,
        d,
        forest_b: Forest::new(forest_spanned.drain(..), forest_edges)
            .expect("grown edges always join distinct components"),
        edge_event,
    })
}

// ---------------------------------------------------------------------------
// Dual-feasibility audit
// ---------------------------------------------------------------------------

/// Result of re-deriving the dual solution from the `y` values alone and
/// checking it against the LP constraints and the stored bookkeeping.
#[derive(Debug, Clone)]
pub struct AuditReport {
    pub pass: bool,
    pub first_violation: Option<String>,
    pub edges_checked: usize,
    pub sets_checked: usize,
}

/// Verifies, from scratch:
/// (i) the edge constraint `sum of y_S over sets cut by e <= w(e)` for every
/// instance edge, with exact equality for every added edge (for endpoints in
/// different final components this sum is exactly `d(u) + d(v)`; for merged
/// endpoints the sum stops at their first common set, since supersets of both
/// endpoints do not cut the edge); (ii) `h(S) <= pi(S)` for every set in the
/// family, with equality for deactivated sets; (iii) laminarity of the
/// family. `d` and `h` are recomputed from the `y` values, not read from the
/// growth bookkeeping, and the recomputation is also compared against the
/// stored values.
pub fn check_dual_feasibility(
    instance: &Instance,
    growth: &Growth,
) -> Result<AuditReport, GrowthError> {
    if growth.n() != instance.n() {
        return Err(GrowthError::Mismatched(format!(
            "instance has {} vertices, growth has {}",
            instance.n(),
            growth.n()
        )));
    }
    let fail = |msg: String, edges: usize, sets: usize| AuditReport {
        pass: false,
        first_violation: Some(msg),
        edges_checked: edges,
        sets_checked: sets,
    };

    let ids: Vec<CompId> = growth.all_components().collect();

    // Laminarity: every merge combines two disjoint sets into their union.
    for &c in &ids {
        if let Some((l, r, _)) = growth.children(c) {
            let lv = growth.comp_vertices(l);
            let rv = growth.comp_vertices(r);
            let mut union: Vec<VertexId> = lv.iter().chain(rv.iter()).copied().collect();
            union.sort_unstable();
            let before = union.len();
            union.dedup();
            if union.len() != before {
                return Ok(fail(format!("components {l} and {r} overlap"), 0, 0));
            }
            if union != growth.comp_vertices(c) {
                return Ok(fail(
                    format!("component {c} is not the union of its children"),
                    0,
                    0,
                ));
            }
        }
    }

    // d(v) = sum of y over the chain of sets containing v.
    let mut parent: Vec<Option<CompId>> = vec![None; ids.len()];
    for &c in &ids {
        if let Some((l, r, _)) = growth.children(c) {
            parent[l] = Some(c);
            parent[r] = Some(c);
        }
    }
    let mut d_check: Vec<Num> = vec![Num::zero(); instance.n()];
    for v in 0..instance.n() {
        let mut cur = Some(v);
        while let Some(c) = cur {
            d_check[v] += growth.y(c);
            cur = parent[c];
        }
        if &d_check[v] != growth.d(v) {
            return Ok(fail(
                format!("stored d({v}) disagrees with recomputation"),
                0,
                0,
            ));
        }
    }

    // h(S) = sum of y over subsets of S in the family.
    let mut h_check: Vec<Num> = vec![Num::zero(); ids.len()];
    for &c in &ids {
        h_check[c] = match growth.children(c) {
            None => growth.y(c).clone(),
            Some((l, r, _)) => &(&h_check[l] + &h_check[r]) + growth.y(c),
        };
    }

    let mut edges_checked = 0;
    for (e, edge) in instance.edges().iter().enumerate() {
        // Sum y over sets containing exactly one endpoint: both chains up to
        // (excluding) the first set containing both ends.
        let mut u_chain = Vec::new();
        let mut cur = Some(edge.u);
        while let Some(c) = cur {
            u_chain.push(c);
            cur = parent[c];
        }
        let mut lhs = Num::zero();
        let mut cur = Some(edge.v);
        let mut common: Option<CompId> = None;
        while let Some(c) = cur {
            if u_chain.contains(&c) {
                common = Some(c);
                break;
            }
            lhs += growth.y(c);
            cur = parent[c];
        }
        for &c in &u_chain {
            if Some(c) == common {
                break;
            }
            lhs += growth.y(c);
        }
        let w = instance.weight(e);
        if &lhs > w {
            return Ok(fail(
                format!("edge ({},{}) violates its cut constraint", edge.u, edge.v),
                edges_checked,
                0,
            ));
        }
        if growth.edge_event_index(e).is_some() && &lhs != w {
            return Ok(fail(
                format!("added edge ({},{}) is not exactly tight", edge.u, edge.v),
                edges_checked,
                0,
            ));
        }
        edges_checked += 1;
    }

    let mut sets_checked = 0;
    for &c in &ids {
        if growth.y(c).is_negative() {
            return Ok(fail(
                format!("y of component {c} is negative"),
                edges_checked,
                sets_checked,
            ));
        }
        if &h_check[c] > growth.pi(c) {
            return Ok(fail(
                format!("component {c} violates h(S) <= pi(S)"),
                edges_checked,
                sets_checked,
            ));
        }
        if growth.is_deactivated(c) && &h_check[c] != growth.pi(c) {
            return Ok(fail(
                format!("deactivated component {c} is not exactly tight"),
                edges_checked,
                sets_checked,
            ));
        }
        sets_checked += 1;
    }

    // Every final component must have been deactivated, and every merge must
    // have had at least one active side.
    for &c in growth.final_components() {
        if !growth.is_deactivated(c) {
            return Ok(fail(
                format!("final component {c} never deactivated"),
                edges_checked,
                sets_checked,
            ));
        }
    }
    for ev in growth.events() {
        if let Event::EdgeAdded {
            left,
            right,
            left_active,
            right_active,
            ..
        } = ev
        {
            if !left_active && !right_active {
                return Ok(fail(
                    format!("edge event merged two inactive components {left} and {right}"),
                    edges_checked,
                    sets_checked,
                ));
            }
        }
    }

    Ok(AuditReport {
        pass: true,
        first_violation: None,
        edges_checked,
        sets_checked,
    })
}

// ---------------------------------------------------------------------------
// Trace document
// ---------------------------------------------------------------------------

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum TraceEvent {
    Edge {
        index: usize,
        edge: [i64; 2],
        left: CompId,
        right: CompId,
        left_active: bool,
        right_active: bool,
        merged: CompId,
    },
    Deactivate {
        index: usize,
        component: CompId,
    },
}

#[derive(Serialize)]
struct TraceComp {
    id: CompId,
    vertices: Vec<i64>,
    y: String,
    h: String,
    pi: String,
    deactivated_at: Option<usize>,
}

#[derive(Serialize)]
struct TraceDoc {
    n: usize,
    events: Vec<TraceEvent>,
    components: Vec<TraceComp>,
    final_components: Vec<CompId>,
}

/// Serializes the ordered event log and the dual family, `y`/`h` values as
/// exact decimal strings.
pub fn growth_trace_json(instance: &Instance, growth: &Growth) -> String {
    let events = growth
        .events()
        .iter()
        .enumerate()
        .map(|(i, ev)| match *ev {
            Event::EdgeAdded {
                edge,
                left,
                right,
                left_active,
                right_active,
                merged,
            } => {
                let e = &instance.edges()[edge];
                TraceEvent::Edge {
                    index: i,
                    edge: [instance.label(e.u), instance.label(e.v)],
                    left,
                    right,
                    left_active,
                    right_active,
                    merged,
                }
            }
            Event::Deactivated { comp } => TraceEvent::Deactivate {
                index: i,
                component: comp,
            },
        })
        .collect();
    let components = growth
        .all_components()
        .map(|c| TraceComp {
            id: c,
            vertices: growth
                .comp_vertices(c)
                .into_iter()
                .map(|v| instance.label(v))
                .collect(),
            y: growth.y(c).to_decimal_string(),
            h: growth.h(c).to_decimal_string(),
            pi: growth.pi(c).to_decimal_string(),
            deactivated_at: growth.deactivation_event(c),
        })
        .collect();
    let doc = TraceDoc {
        n: growth.n(),
        events,
        components,
        final_components: growth.final_components().to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("trace serialization")
}
