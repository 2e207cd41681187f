//! Directed multigraphs presenting edge shifts.
//!
//! Vertices and edges carry opaque string ids. On construction both are
//! sorted lexicographically and every matrix and vector in the crate is
//! indexed by that canonical order; `VertexId`/`EdgeId` below are the
//! positions in it.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Position of a vertex in the canonical vertex order.
pub type VertexId = usize;
/// Position of an edge in the canonical edge order.
pub type EdgeId = usize;

/// JSON form of a graph: `{"vertices": [..], "edges": [{"id","from","to"}, ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// A validated directed multigraph in which every vertex has an incoming
/// and an outgoing edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_lookup: HashMap<String, VertexId>,
    edge_lookup: HashMap<String, EdgeId>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

impl Graph {
    /// Builds a graph from vertex ids and `(edge id, from, to)` triples.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Graph>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        E: IntoIterator<Item = (String, String, String)>,
    {
        let mut vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        vertices.sort();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0].clone()));
            }
        }
        let vertex_lookup: HashMap<String, VertexId> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();

        let mut raw: Vec<(String, String, String)> = edges.into_iter().collect();
        raw.sort();
        let mut edges = Vec::with_capacity(raw.len());
        let mut edge_lookup = HashMap::with_capacity(raw.len());
        for (id, from, to) in raw {
            if edge_lookup.contains_key(&id) {
                return Err(Error::DuplicateEdge(id));
            }
            let endpoint = |v: &String| {
                vertex_lookup
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::DanglingEndpoint {
                        edge: id.clone(),
                        vertex: v.clone(),
                    })
            };
            let source = endpoint(&from)?;
            let target = endpoint(&to)?;
            edge_lookup.insert(id.clone(), edges.len());
            edges.push(Edge { id, source, target });
        }

        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (e, edge) in edges.iter().enumerate() {
            out_edges[edge.source].push(e);
            in_edges[edge.target].push(e);
        }
        for (v, name) in vertices.iter().enumerate() {
            if out_edges[v].is_empty() {
                return Err(Error::Sink(name.clone()));
            }
            if in_edges[v].is_empty() {
                return Err(Error::Source(name.clone()));
            }
        }

        Ok(Graph {
            vertices,
            edges,
            vertex_lookup,
            edge_lookup,
            out_edges,
            in_edges,
        })
    }

    pub fn from_spec(spec: &GraphSpec) -> Result<Graph> {
        Graph::new(
            spec.vertices.iter().cloned(),
            spec.edges
                .iter()
                .map(|e| (e.id.clone(), e.from.clone(), e.to.clone())),
        )
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let spec: GraphSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Graph::from_spec(&spec)
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    from: self.vertices[e.source].clone(),
                    to: self.vertices[e.target].clone(),
                })
                .collect(),
        }
    }

    /// The full shift on `k` symbols: one vertex, loops `0..k`.
    pub fn full_shift(k: usize) -> Graph {
        Graph::new(
            ["0"],
            (0..k).map(|s| (s.to_string(), "0".to_string(), "0".to_string())),
        )
        .expect("full shift is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_lookup.get(name).copied()
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_id(&self, name: &str) -> Result<EdgeId> {
        self.edge_lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownEdge(name.to_string()))
    }

    /// Resolves a list of edge ids into an edge word.
    pub fn word(&self, names: &[&str]) -> Result<Vec<EdgeId>> {
        names.iter().map(|n| self.edge_id(n)).collect()
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e].id
    }

    pub fn word_names(&self, word: &[EdgeId]) -> Vec<String> {
        word.iter().map(|&e| self.edges[e].id.clone()).collect()
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e].source
    }

    pub fn target(&self, e: EdgeId) -> VertexId {
        self.edges[e].target
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v]
    }

    /// Checks that consecutive edges of `word` meet.
    pub fn check_path(&self, word: &[EdgeId]) -> Result<()> {
        for w in word.windows(2) {
            if self.target(w[0]) != self.source(w[1]) {
                return Err(Error::InconsistentWord(
                    self.edge_name(w[1]).to_string(),
                    self.edge_name(w[0]).to_string(),
                ));
            }
        }
        Ok(())
    }

    pub fn is_path(&self, word: &[EdgeId]) -> bool {
        self.check_path(word).is_ok()
    }

    pub fn adjacency(&self) -> IntMatrix {
        let n = self.vertex_count();
        let mut a = IntMatrix::zeros(n);
        for e in &self.edges {
            *a.get_mut(e.source, e.target) += 1u32;
        }
        a
    }

    /// Entry `(i, j)` counts the edge paths of length `n` from `i` to `j`.
    pub fn adjacency_power(&self, n: u64) -> IntMatrix {
        self.adjacency().pow(n)
    }

    /// All edge paths of length `len` from `from` to `to`, in lexicographic
    /// order of edge positions. Stops and returns `None` once more than
    /// `cap` paths have been found.
    ///
    /// This walks the graph directly and never consults adjacency powers.
    pub fn enumerate_paths(
        &self,
        from: VertexId,
        to: VertexId,
        len: usize,
        cap: usize,
    ) -> Option<Vec<Vec<EdgeId>>> {
        // can_finish[r] = vertices with some path of length r into `to`
        let n = self.vertex_count();
        let mut can_finish = vec![vec![false; n]; len + 1];
        can_finish[0][to] = true;
        for r in 1..=len {
            for v in 0..n {
                can_finish[r][v] = self.out_edges[v]
                    .iter()
                    .any(|&e| can_finish[r - 1][self.target(e)]);
            }
        }
        let mut out = Vec::new();
        if !can_finish[len][from] {
            return Some(out);
        }
        let mut word: Vec<EdgeId> = Vec::with_capacity(len);
        fn walk(
            g: &Graph,
            v: VertexId,
            remaining: usize,
            can_finish: &[Vec<bool>],
            word: &mut Vec<EdgeId>,
            out: &mut Vec<Vec<EdgeId>>,
            cap: usize,
        ) -> bool {
            if remaining == 0 {
                out.push(word.clone());
                return out.len() <= cap;
            }
            for &e in g.out_edges(v) {
                let t = g.target(e);
                if can_finish[remaining - 1][t] {
                    word.push(e);
                    let ok = walk(g, t, remaining - 1, can_finish, word, out, cap);
                    word.pop();
                    if !ok {
                        return false;
                    }
                }
            }
            true
        }
        if walk(self, from, len, &can_finish, &mut word, &mut out, cap) {
            Some(out)
        } else {
            None
        }
    }

    /// All edge words of length `len` that are paths.
    pub fn all_words(&self, len: usize) -> Vec<Vec<EdgeId>> {
        let mut words: Vec<Vec<EdgeId>> = (0..self.edge_count()).map(|e| vec![e]).collect();
        if len == 0 {
            return vec![Vec::new()];
        }
        for _ in 1..len {
            let mut next = Vec::new();
            for w in &words {
                let last = *w.last().expect("nonempty");
                for &e in self.out_edges(self.target(last)) {
                    let mut x = w.clone();
                    x.push(e);
                    next.push(x);
                }
            }
            words = next;
        }
        words
    }

    fn reaches_all(&self, start: VertexId, forward: bool) -> bool {
        let mut seen = vec![false; self.vertex_count()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let next = if forward {
                &self.out_edges[v]
            } else {
                &self.in_edges[v]
            };
            for &e in next {
                let w = if forward {
                    self.target(e)
                } else {
                    self.source(e)
                };
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Irreducibility, period and cyclic classes.
    ///
    /// Irreducibility is checked by a forward and a backward traversal from
    /// the first vertex. The period is the gcd of `depth(u) + 1 - depth(v)`
    /// over all edges `u -> v` of a BFS layering, and the class of a vertex
    /// is its depth modulo the period.
    pub fn structure_analysis(&self) -> SpectralDecomposition {
        if !(self.reaches_all(0, true) && self.reaches_all(0, false)) {
            return SpectralDecomposition {
                irreducible: false,
                period: None,
                class_of: None,
            };
        }
        let n = self.vertex_count();
        let mut depth = vec![usize::MAX; n];
        depth[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.out_edges[v] {
                let w = self.target(e);
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut period = 0usize;
        for e in &self.edges {
            let diff =
                (depth[e.source] as i64 + 1 - depth[e.target] as i64).unsigned_abs() as usize;
            period = period.gcd(&diff);
        }
        let class_of = depth.iter().map(|d| d % period).collect();
        SpectralDecomposition {
            irreducible: true,
            period: Some(period),
            class_of: Some(class_of),
        }
    }

    /// The graph whose edges are the length-`period` paths of `self`
    /// starting in cyclic class `class_index`.
    ///
    /// Its edge shift is conjugate to the `period`-th power of the shift
    /// restricted to that component, and is mixing. Edge ids of the new graph
    /// are `(e1,e2,...)`; with period 1 the graph is returned unchanged.
    pub fn power_recode(&self, period: usize, class_index: usize) -> Result<Graph> {
        let decomp = self.structure_analysis();
        if !decomp.irreducible {
            return Err(Error::Reducible);
        }
        let actual = decomp.period().expect("irreducible");
        if actual != period {
            return Err(Error::PeriodMismatch {
                requested: period,
                actual,
            });
        }
        if class_index >= period {
            return Err(Error::ClassOutOfRange {
                index: class_index,
                period,
            });
        }
        if period == 1 {
            return Ok(self.clone());
        }
        let members = decomp.class(class_index);
        let mut edges = Vec::new();
        for &v in &members {
            for &w in &members {
                for path in self
                    .enumerate_paths(v, w, period, usize::MAX)
                    .expect("uncapped")
                {
                    let id = format!("({})", self.word_names(&path).join(","));
                    edges.push((id, self.vertices[v].clone(), self.vertices[w].clone()));
                }
            }
        }
        Graph::new(members.iter().map(|&v| self.vertices[v].clone()), edges)
    }

    /// The 2-block presentation: vertices are the edges of `self`, and each
    /// path `e f` becomes an edge `(e,f)` from vertex `e` to vertex `f`.
    pub fn higher_block(&self) -> Graph {
        let mut edges = Vec::new();
        for e in &self.edges {
            for &f in &self.out_edges[e.target] {
                let f = &self.edges[f];
                edges.push((format!("({},{})", e.id, f.id), e.id.clone(), f.id.clone()));
            }
        }
        Graph::new(self.edges.iter().map(|e| e.id.clone()), edges)
            .expect("higher block graph of a valid graph is valid")
    }

    /// Disjoint union; ids of the second copy get `suffix` appended.
    pub fn disjoint_union(&self, other: &Graph, suffix: &str) -> Result<Graph> {
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().map(|v| format!("{v}{suffix}")));
        let mut edges: Vec<(String, String, String)> = self
            .edges
            .iter()
            .map(|e| {
                (
                    e.id.clone(),
                    self.vertices[e.source].clone(),
                    self.vertices[e.target].clone(),
                )
            })
            .collect();
        edges.extend(other.edges.iter().map(|e| {
            (
                format!("{}{suffix}", e.id),
                format!("{}{suffix}", other.vertices[e.source]),
                format!("{}{suffix}", other.vertices[e.target]),
            )
        }));
        Graph::new(vertices, edges)
    }

    /// A shortest path from `from` to `to` (empty when equal).
    pub fn shortest_path(&self, from: VertexId, to: VertexId) -> Option<Vec<EdgeId>> {
        let mut prev: Vec<Option<EdgeId>> = vec![None; self.vertex_count()];
        let mut seen = vec![false; self.vertex_count()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &e in &self.out_edges[v] {
                let w = self.target(e);
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut path = Vec::new();
        let mut v = to;
        while v != from {
            let e = prev[v].expect("reached");
            path.push(e);
            v = self.source(e);
        }
        path.reverse();
        Some(path)
    }

    /// Some left-infinite path ending at `v`, as `(cycle, connector)`:
    /// the cycle repeats forever to the left, then `connector` leads into `v`.
    pub fn past_into(&self, v: VertexId) -> (Vec<EdgeId>, Vec<EdgeId>) {
        let mut trail: Vec<EdgeId> = Vec::new();
        let mut visited: HashMap<VertexId, usize> = HashMap::new();
        let mut cur = v;
        loop {
            if let Some(&pos) = visited.get(&cur) {
                // trail[pos..] walks backwards around a cycle through `cur`
                let mut cycle: Vec<EdgeId> = trail[pos..].to_vec();
                cycle.reverse();
                let mut connector: Vec<EdgeId> = trail[..pos].to_vec();
                connector.reverse();
                return (cycle, connector);
            }
            visited.insert(cur, trail.len());
            let e = self.in_edges[cur][0];
            trail.push(e);
            cur = self.source(e);
        }
    }

    /// Some right-infinite path starting at `v`, as `(connector, cycle)`.
    pub fn future_from(&self, v: VertexId) -> (Vec<EdgeId>, Vec<EdgeId>) {
        let mut trail: Vec<EdgeId> = Vec::new();
        let mut visited: HashMap<VertexId, usize> = HashMap::new();
        let mut cur = v;
        loop {
            if let Some(&pos) = visited.get(&cur) {
                return (trail[..pos].to_vec(), trail[pos..].to_vec());
            }
            visited.insert(cur, trail.len());
            let e = self.out_edges[cur][0];
            trail.push(e);
            cur = self.target(e);
        }
    }
}

/// Irreducibility data of a graph: period and the ordered cyclic classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralDecomposition {
    pub irreducible: bool,
    period: Option<usize>,
    class_of: Option<Vec<usize>>,
}

impl SpectralDecomposition {
    /// The period, when irreducible.
    pub fn period(&self) -> Option<usize> {
        self.period
    }

    pub fn is_primitive(&self) -> bool {
        self.irreducible && self.period == Some(1)
    }

    pub fn class_of(&self, v: VertexId) -> Option<usize> {
        self.class_of.as_ref().map(|c| c[v])
    }

    /// Members of class `index`, in canonical order.
    pub fn class(&self, index: usize) -> Vec<VertexId> {
        match &self.class_of {
            Some(c) => (0..c.len()).filter(|&v| c[v] == index).collect(),
            None => Vec::new(),
        }
    }

    /// All classes `D_0, ..., D_{I-1}`; edges go from `D_t` to `D_{t+1 mod I}`.
    pub fn classes(&self) -> Option<Vec<Vec<VertexId>>> {
        self.period.map(|p| (0..p).map(|i| self.class(i)).collect())
    }
}
