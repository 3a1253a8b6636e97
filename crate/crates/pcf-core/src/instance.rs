//! Graph data model and instance I/O.
//!
//! An [`Instance`] is an undirected graph with exact nonnegative edge weights
//! and vertex penalties. Vertices are addressed by dense indices `0..n`
//! assigned at parse time; the original integer labels from the input
//! document are retained for output. A [`Forest`] is an explicit spanned
//! vertex set plus an acyclic edge set over an instance.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::num::{Num, NumParseError};

/// Dense vertex index, `0..n`.
pub type VertexId = usize;
/// Index into [`Instance::edges`].
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    /// Label from the input document; used in every emitted document.
    pub label: i64,
    pub penalty: Num,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Num,
}

/// An undirected graph with edge weights and vertex penalties, validated on
/// construction: no self-loops, no parallel edges, nothing negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    edge_lookup: HashMap<(VertexId, VertexId), EdgeId>,
}

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("bad number {raw:?}: {source}")]
    BadNumber { raw: String, source: NumParseError },
    #[error("duplicate vertex id {id}")]
    DuplicateVertex { id: i64 },
    #[error("negative penalty {raw:?} on vertex {id}")]
    NegativePenalty { id: i64, raw: String },
    #[error("negative weight {raw:?} on edge ({u},{v})")]
    NegativeWeight { u: i64, v: i64, raw: String },
    #[error("edge ({u},{v}) references unknown vertex id")]
    DanglingVertexId { u: i64, v: i64 },
    #[error("self-loop on vertex {id}")]
    SelfLoop { id: i64 },
    #[error("duplicate edge ({u},{v})")]
    DuplicateEdge { u: i64, v: i64 },
    #[error("too many edges: m={m} exceeds n(n-1)/2={max}")]
    TooManyEdges { m: usize, max: usize },
    #[error("instance is disconnected; metric closure undefined")]
    Disconnected,
    #[error("instance is empty")]
    Empty,
}

#[derive(Debug, thiserror::Error)]
pub enum ForestError {
    #[error("forest edge ({u},{v}) is not an instance edge")]
    UnknownEdge { u: VertexId, v: VertexId },
    #[error("forest references vertex {v} outside the instance")]
    UnknownVertex { v: VertexId },
    #[error("forest edge ({u},{v}) has an unspanned endpoint")]
    UnspannedEndpoint { u: VertexId, v: VertexId },
    #[error("forest edges contain a cycle")]
    Cyclic,
    #[error("r must be >= 1 for an LMP value")]
    InvalidR,
}

impl Instance {
    /// Builds and validates an instance from parsed parts. `vertices` are
    /// (label, penalty) pairs; `edges` reference labels.
    pub fn new(
        vertices: Vec<(i64, Num)>,
        edges: Vec<(i64, i64, Num)>,
    ) -> Result<Self, InstanceError> {
        let mut labels: Vec<i64> = vertices.iter().map(|(l, _)| *l).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != vertices.len() {
            let mut seen = BTreeSet::new();
            for (l, _) in &vertices {
                if !seen.insert(*l) {
                    return Err(InstanceError::DuplicateVertex { id: *l });
                }
            }
        }
        let index_of: HashMap<i64, VertexId> =
            labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let mut verts = vec![None; labels.len()];
        for (label, penalty) in vertices {
            if penalty.is_negative() {
                return Err(InstanceError::NegativePenalty {
                    id: label,
                    raw: penalty.to_decimal_string(),
                });
            }
            verts[index_of[&label]] = Some(Vertex { label, penalty });
        }
        let vertices: Vec<Vertex> = verts.into_iter().map(|v| v.unwrap()).collect();

        let mut inst = Instance {
            adj: vec![Vec::new(); vertices.len()],
            edge_lookup: HashMap::new(),
            vertices,
            edges: Vec::new(),
        };
        for (lu, lv, weight) in edges {
            if weight.is_negative() {
                return Err(InstanceError::NegativeWeight {
                    u: lu,
                    v: lv,
                    raw: weight.to_decimal_string(),
                });
            }
            let (&u, &v) = match (index_of.get(&lu), index_of.get(&lv)) {
                (Some(u), Some(v)) => (u, v),
                _ => return Err(InstanceError::DanglingVertexId { u: lu, v: lv }),
            };
            if u == v {
                return Err(InstanceError::SelfLoop { id: lu });
            }
            let key = (u.min(v), u.max(v));
            if inst.edge_lookup.contains_key(&key) {
                return Err(InstanceError::DuplicateEdge { u: lu, v: lv });
            }
            let id = inst.edges.len();
            inst.edge_lookup.insert(key, id);
            inst.adj[u].push((v, id));
            inst.adj[v].push((u, id));
            inst.edges.push(Edge {
                u: key.0,
                v: key.1,
                weight,
            });
        }
        for nbrs in &mut inst.adj {
            nbrs.sort_unstable_by_key(|&(w, _)| w);
        }
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn penalty(&self, v: VertexId) -> &Num {
        &self.vertices[v].penalty
    }

    pub fn label(&self, v: VertexId) -> i64 {
        self.vertices[v].label
    }

    /// Dense id carrying the given input label, if any.
    pub fn id_of_label(&self, label: i64) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.label == label)
    }

    /// Neighbors of `v` as `(neighbor, edge id)`, ascending by neighbor.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edge_lookup.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn weight(&self, e: EdgeId) -> &Num {
        &self.edges[e].weight
    }

    pub fn total_penalty(&self) -> Num {
        self.vertices.iter().map(|v| v.penalty.clone()).sum()
    }

    /// True if the underlying graph is connected (vacuously true for n <= 1).
    pub fn is_connected(&self) -> bool {
        if self.n() <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n()
    }
}

/// A subforest of an instance: spanned vertices plus an acyclic set of edges
/// whose endpoints are all spanned. Components may be singletons; the
/// component count is `k = |spanned| - |edges|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    spanned: BTreeSet<VertexId>,
    edges: BTreeSet<(VertexId, VertexId)>,
}

impl Forest {
    pub fn empty() -> Self {
        Forest {
            spanned: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }

    /// Validates endpoints-are-spanned and acyclicity. Edges are normalized
    /// to `(min, max)`.
    pub fn new<I, J>(spanned: I, edges: J) -> Result<Self, ForestError>
    where
        I: IntoIterator<Item = VertexId>,
        J: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let spanned: BTreeSet<VertexId> = spanned.into_iter().collect();
        let mut normalized = BTreeSet::new();
        for (u, v) in edges {
            normalized.insert((u.min(v), u.max(v)));
        }
        let forest = Forest {
            spanned,
            edges: normalized,
        };
        forest.check_shape()?;
        Ok(forest)
    }

    fn check_shape(&self) -> Result<(), ForestError> {
        let index: BTreeMap<VertexId, usize> = self
            .spanned
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut dsu = Dsu::new(self.spanned.len());
        for &(u, v) in &self.edges {
            let (iu, iv) = match (index.get(&u), index.get(&v)) {
                (Some(&iu), Some(&iv)) => (iu, iv),
                _ => return Err(ForestError::UnspannedEndpoint { u, v }),
            };
            if !dsu.union(iu, iv) {
                return Err(ForestError::Cyclic);
            }
        }
        Ok(())
    }

    pub fn spanned(&self) -> &BTreeSet<VertexId> {
        &self.spanned
    }

    pub fn edges(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.edges
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.spanned.contains(&v)
    }

    /// Component count; equals `|spanned| - |edges|` by acyclicity.
    pub fn k(&self) -> usize {
        self.spanned.len() - self.edges.len()
    }

    /// Splits the forest into its connected components.
    pub fn components(&self) -> Vec<Forest> {
        let verts: Vec<VertexId> = self.spanned.iter().copied().collect();
        let index: BTreeMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut dsu = Dsu::new(verts.len());
        for &(u, v) in &self.edges {
            dsu.union(index[&u], index[&v]);
        }
        let mut by_root: BTreeMap<usize, Forest> = BTreeMap::new();
        for (i, &v) in verts.iter().enumerate() {
            by_root
                .entry(dsu.find(i))
                .or_insert_with(Forest::empty)
                .spanned
                .insert(v);
        }
        for &(u, v) in &self.edges {
            by_root
                .get_mut(&dsu.find(index[&u]))
                .unwrap()
                .edges
                .insert((u, v));
        }
        by_root.into_values().collect()
    }

    /// Checks that this forest only references vertices and edges of
    /// `instance`.
    pub fn validate_against(&self, instance: &Instance) -> Result<(), ForestError> {
        if let Some(&v) = self.spanned.iter().find(|&&v| v >= instance.n()) {
            return Err(ForestError::UnknownVertex { v });
        }
        for &(u, v) in &self.edges {
            if instance.edge_between(u, v).is_none() {
                return Err(ForestError::UnknownEdge { u, v });
            }
        }
        Ok(())
    }

    /// Total edge weight within `instance`.
    pub fn weight_in(&self, instance: &Instance) -> Num {
        self.edges
            .iter()
            .map(|&(u, v)| {
                instance
                    .weight(instance.edge_between(u, v).expect("validated"))
                    .clone()
            })
            .sum()
    }
}

/// `w(F) + pi(V \ V(F))`: the cost-plus-penalty objective.
pub fn cost_plus_penalty(instance: &Instance, forest: &Forest) -> Result<Num, ForestError> {
    forest.validate_against(instance)?;
    let penalties: Num = (0..instance.n())
        .filter(|v| !forest.contains(*v))
        .map(|v| instance.penalty(v).clone())
        .sum();
    Ok(forest.weight_in(instance) + penalties)
}

/// `w(F) + r·pi(V \ V(F))` for r >= 1: the quantity an r-LMP guarantee bounds
/// by `r·opt`.
pub fn lmp_value(instance: &Instance, forest: &Forest, r: &Num) -> Result<Num, ForestError> {
    if r < &Num::from_int(1) {
        return Err(ForestError::InvalidR);
    }
    forest.validate_against(instance)?;
    let penalties: Num = (0..instance.n())
        .filter(|v| !forest.contains(*v))
        .map(|v| instance.penalty(v).clone())
        .sum();
    Ok(forest.weight_in(instance) + r * &penalties)
}

// ---------------------------------------------------------------------------
// JSON documents
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RawVertex {
    id: i64,
    penalty: String,
}

#[derive(Serialize, Deserialize)]
struct RawEdge {
    u: i64,
    v: i64,
    w: String,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    vertices: Vec<RawVertex>,
    edges: Vec<RawEdge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    root: Option<i64>,
}

/// Parses the instance document
/// `{"vertices":[{"id":int,"penalty":"decimal"}],"edges":[{"u":int,"v":int,"w":"decimal"}]}`.
/// Numbers are decimal strings so values survive the trip exactly.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    parse_instance_with_root(text).map(|(inst, _)| inst)
}

/// Like [`parse_instance`] but also surfaces the optional `"root"` field used
/// by standalone tree documents.
pub fn parse_instance_with_root(text: &str) -> Result<(Instance, Option<VertexId>), InstanceError> {
    let raw: RawInstance =
        serde_json::from_str(text).map_err(|e| InstanceError::MalformedJson(e.to_string()))?;
    let mut vertices = Vec::with_capacity(raw.vertices.len());
    for rv in &raw.vertices {
        let penalty = Num::parse(&rv.penalty).map_err(|source| InstanceError::BadNumber {
            raw: rv.penalty.clone(),
            source,
        })?;
        if penalty.is_negative() {
            return Err(InstanceError::NegativePenalty {
                id: rv.id,
                raw: rv.penalty.clone(),
            });
        }
        vertices.push((rv.id, penalty));
    }
    let mut edges = Vec::with_capacity(raw.edges.len());
    for re in &raw.edges {
        let weight = Num::parse(&re.w).map_err(|source| InstanceError::BadNumber {
            raw: re.w.clone(),
            source,
        })?;
        if weight.is_negative() {
            return Err(InstanceError::NegativeWeight {
                u: re.u,
                v: re.v,
                raw: re.w.clone(),
            });
        }
        edges.push((re.u, re.v, weight));
    }
    let instance = Instance::new(vertices, edges)?;
    let root = match raw.root {
        None => None,
        Some(label) => Some(
            instance
                .id_of_label(label)
                .ok_or(InstanceError::DanglingVertexId { u: label, v: label })?,
        ),
    };
    Ok((instance, root))
}

/// Serializes back to the document form. `parse(serialize(i)) == i`.
pub fn serialize_instance(instance: &Instance) -> String {
    let raw = RawInstance {
        vertices: instance
            .vertices
            .iter()
            .map(|v| RawVertex {
                id: v.label,
                penalty: v.penalty.to_decimal_string(),
            })
            .collect(),
        edges: instance
            .edges
            .iter()
            .map(|e| RawEdge {
                u: instance.vertices[e.u].label,
                v: instance.vertices[e.v].label,
                w: e.weight.to_decimal_string(),
            })
            .collect(),
        root: None,
    };
    serde_json::to_string_pretty(&raw).expect("instance serialization")
}

#[derive(Serialize, Deserialize)]
struct RawForest {
    spanned: Vec<i64>,
    edges: Vec<[i64; 2]>,
    k: usize,
    value: String,
}

/// Forest document: `{"spanned":[ids],"edges":[[u,v]],"k":int,"value":"decimal"}`
/// with vertices as input labels and `value` the cost-plus-penalty objective.
pub fn serialize_forest(instance: &Instance, forest: &Forest, value: &Num) -> String {
    let raw = RawForest {
        spanned: forest.spanned.iter().map(|&v| instance.label(v)).collect(),
        edges: forest
            .edges
            .iter()
            .map(|&(u, v)| [instance.label(u), instance.label(v)])
            .collect(),
        k: forest.k(),
        value: value.to_decimal_string(),
    };
    serde_json::to_string_pretty(&raw).expect("forest serialization")
}

/// Reads a forest document back against an instance.
pub fn parse_forest(instance: &Instance, text: &str) -> Result<(Forest, Num), InstanceError> {
    let raw: RawForest =
        serde_json::from_str(text).map_err(|e| InstanceError::MalformedJson(e.to_string()))?;
    let mut spanned = Vec::new();
    for label in raw.spanned {
        spanned.push(
            instance
                .id_of_label(label)
                .ok_or(InstanceError::DanglingVertexId { u: label, v: label })?,
        );
    }
    let mut edges = Vec::new();
    for [lu, lv] in raw.edges {
        let u = instance
            .id_of_label(lu)
            .ok_or(InstanceError::DanglingVertexId { u: lu, v: lv })?;
        let v = instance
            .id_of_label(lv)
            .ok_or(InstanceError::DanglingVertexId { u: lu, v: lv })?;
        edges.push((u, v));
    }
    let forest =
        Forest::new(spanned, edges).map_err(|e| InstanceError::MalformedJson(e.to_string()))?;
    let value = Num::parse(&raw.value).map_err(|source| InstanceError::BadNumber {
        raw: raw.value.clone(),
        source,
    })?;
    Ok((forest, value))
}

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

/// SplitMix64: the fixtures depend on this exact recurrence, so it is spelled
/// out here rather than pulled from a crate whose stream might change.
///
/// `state += 0x9E3779B97F4A7C15; z = state; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9;
/// z = (z ^ z>>27) * 0x94D049BB133111EB; return z ^ z>>31`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw in `0..=bound` (modulo bias is irrelevant for test
    /// fixtures and keeps the stream trivially portable).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        self.next_u64() % (bound + 1)
    }
}

/// Deterministic random instance: `n` vertices with integer penalties in
/// `[0, pmax]`, `m` distinct edges with integer weights in `[0, wmax]`.
/// Identical arguments always produce identical instances.
pub fn generate_random(
    seed: u64,
    n: usize,
    m: usize,
    wmax: u64,
    pmax: u64,
) -> Result<Instance, InstanceError> {
    let max_edges = n * n.saturating_sub(1) / 2;
    if m > max_edges {
        return Err(InstanceError::TooManyEdges { m, max: max_edges });
    }
    let mut rng = SplitMix64::new(seed);
    let vertices: Vec<(i64, Num)> = (0..n)
        .map(|i| (i as i64, Num::from_u64(rng.next_below(pmax))))
        .collect();
    let mut chosen = BTreeSet::new();
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let a = rng.next_below(n as u64 - 1) as i64;
        let b = rng.next_below(n as u64 - 1) as i64;
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if !chosen.insert(key) {
            continue;
        }
        let w = Num::from_u64(rng.next_below(wmax));
        edges.push((key.0, key.1, w));
    }
    Instance::new(vertices, edges)
}

/// Deterministic random tree on `n` vertices: each vertex past the first
/// attaches to a uniformly drawn earlier vertex. Integer weights in
/// `[0, wmax]`, penalties in `[0, pmax]`.
pub fn generate_random_tree(
    seed: u64,
    n: usize,
    wmax: u64,
    pmax: u64,
) -> Result<Instance, InstanceError> {
    if n == 0 {
        return Err(InstanceError::Empty);
    }
    let mut rng = SplitMix64::new(seed);
    let vertices: Vec<(i64, Num)> = (0..n)
        .map(|i| (i as i64, Num::from_u64(rng.next_below(pmax))))
        .collect();
    let edges: Vec<(i64, i64, Num)> = (1..n)
        .map(|v| {
            let parent = rng.next_below(v as u64 - 1) as i64;
            (parent, v as i64, Num::from_u64(rng.next_below(wmax)))
        })
        .collect();
    Instance::new(vertices, edges)
}

/// Deterministic random connected instance: a random tree plus up to
/// `extra` further distinct edges.
pub fn generate_random_connected(
    seed: u64,
    n: usize,
    extra: usize,
    wmax: u64,
    pmax: u64,
) -> Result<Instance, InstanceError> {
    let tree = generate_random_tree(seed, n, wmax, pmax)?;
    let mut rng = SplitMix64::new(seed ^ 0x51ed_270b);
    let mut chosen: BTreeSet<(i64, i64)> = tree
        .edges()
        .iter()
        .map(|e| (e.u as i64, e.v as i64))
        .collect();
    let mut edges: Vec<(i64, i64, Num)> = tree
        .edges()
        .iter()
        .map(|e| (e.u as i64, e.v as i64, e.weight.clone()))
        .collect();
    let max_edges = n * (n - 1) / 2;
    let wanted = (n - 1 + extra).min(max_edges);
    while edges.len() < wanted {
        let a = rng.next_below(n as u64 - 1) as i64;
        let b = rng.next_below(n as u64 - 1) as i64;
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if !chosen.insert(key) {
            continue;
        }
        edges.push((key.0, key.1, Num::from_u64(rng.next_below(wmax))));
    }
    let vertices = tree
        .vertices()
        .iter()
        .map(|v| (v.label, v.penalty.clone()))
        .collect();
    Instance::new(vertices, edges)
}

// ---------------------------------------------------------------------------
// Metric closure
// ---------------------------------------------------------------------------

/// Witness paths for a metric closure: `path(u, v)` is a shortest route in
/// the original graph realizing the closure weight of edge `uv`.
#[derive(Debug, Clone)]
pub struct PathTable {
    paths: HashMap<(VertexId, VertexId), Vec<VertexId>>,
}

impl PathTable {
    /// Path from `u` to `v` inclusive of both endpoints.
    pub fn path(&self, u: VertexId, v: VertexId) -> Option<Vec<VertexId>> {
        if let Some(p) = self.paths.get(&(u.min(v), u.max(v))) {
            let mut p = p.clone();
            if p.first() != Some(&u) {
                p.reverse();
            }
            Some(p)
        } else if u == v {
            Some(vec![u])
        } else {
            None
        }
    }
}

/// Complete graph whose edge weights are exact shortest-path distances in
/// `instance`, plus witness paths. Penalties carry over. Errors on
/// disconnected input. The output satisfies the triangle inequality.
pub fn metric_closure(instance: &Instance) -> Result<(Instance, PathTable), InstanceError> {
    if !instance.is_connected() {
        return Err(InstanceError::Disconnected);
    }
    let n = instance.n();
    let mut closure_edges = Vec::new();
    let mut paths = HashMap::new();
    for src in 0..n {
        let (dist, pred) = dijkstra(instance, src);
        for dst in src + 1..n {
            let d = dist[dst].clone().expect("connected");
            let mut path = vec![dst];
            let mut cur = dst;
            while cur != src {
                cur = pred[cur].expect("reached");
                path.push(cur);
            }
            path.reverse();
            paths.insert((src, dst), path);
            closure_edges.push((instance.label(src), instance.label(dst), d));
        }
    }
    let vertices = instance
        .vertices()
        .iter()
        .map(|v| (v.label, v.penalty.clone()))
        .collect();
    let closed = Instance::new(vertices, closure_edges)?;
    Ok((closed, PathTable { paths }))
}

fn dijkstra(instance: &Instance, src: VertexId) -> (Vec<Option<Num>>, Vec<Option<VertexId>>) {
    use std::cmp::Reverse;
    let n = instance.n();
    let mut dist: Vec<Option<Num>> = vec![None; n];
    let mut pred: Vec<Option<VertexId>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[src] = Some(Num::zero());
    heap.push(Reverse((Num::zero(), src)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist[v].as_ref() != Some(&d) {
            continue;
        }
        for &(w, e) in instance.neighbors(v) {
            let nd = &d + instance.weight(e);
            if dist[w].as_ref().map_or(true, |cur| &nd < cur) {
                dist[w] = Some(nd.clone());
                pred[w] = Some(v);
                heap.push(Reverse((nd, w)));
            }
        }
    }
    (dist, pred)
}

/// Union-find with path halving; used for acyclicity checks and component
/// counting throughout the crate.
#[derive(Debug, Clone)]
pub struct Dsu {
    parent: Vec<usize>,
    count: usize,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            count: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `x` and `y` were already joined.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.parent[rx] = ry;
        self.count -= 1;
        true
    }

    /// Number of disjoint sets.
    pub fn components(&self) -> usize {
        self.count
    }
}
