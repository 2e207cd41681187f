//! One-block codes between edge shifts.
//!
//! Unstable sets are left-tail classes, so a code is injective on them
//! (u-resolving) exactly when it is right-resolving: injective on the
//! out-edges of every vertex. Symmetrically s-resolving means left-resolving.
//!
//! Ray masses upstairs use the domain Perron data rescaled so that its right
//! vector sums to what the codomain right vector gives on the image
//! vertices. For right-covering codes this makes `u_r` of the domain equal
//! to `u_r ∘ φ` of the codomain, and the ray masses push forward exactly.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::hetero::{hetero_count, HeteroSpec};
use crate::parry::{centered_cylinder_mass, ray_cylinder_mass, MassCheck};
use crate::periodic::enumerate_periodic;
use crate::perron::PerronData;
use crate::shift::{CenteredCylinder, RayCylinder, ShiftPoint, Side};

/// JSON form: graph file paths (relative to the code file) and the edge map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub domain: String,
    pub codomain: String,
    pub edge_map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneBlockCode {
    domain: Graph,
    codomain: Graph,
    edge_map: Vec<EdgeId>,
    vertex_map: Vec<VertexId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResolvingType {
    pub left_resolving: bool,
    pub right_resolving: bool,
}

impl OneBlockCode {
    /// Validates a code given by edge ids.
    pub fn new(
        domain: Graph,
        codomain: Graph,
        edge_map: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut map = Vec::with_capacity(domain.edge_count());
        for e in domain.edges() {
            let image = edge_map
                .get(&e.id)
                .ok_or_else(|| Error::UnmappedEdge(e.id.clone()))?;
            map.push(codomain.edge_id(image)?);
        }
        if let Some(extra) = edge_map.keys().find(|k| domain.edge_id(k).is_err()) {
            return Err(Error::UnknownEdge(extra.clone()));
        }
        OneBlockCode::from_indices(domain, codomain, map)
    }

    pub fn from_indices(domain: Graph, codomain: Graph, edge_map: Vec<EdgeId>) -> Result<Self> {
        let mut vertex_map: Vec<Option<VertexId>> = vec![None; domain.vertex_count()];
        for (e, &f) in edge_map.iter().enumerate() {
            let ends = [
                (domain.source(e), codomain.source(f)),
                (domain.target(e), codomain.target(f)),
            ];
            for (v, w) in ends {
                match vertex_map[v] {
                    Some(prev) if prev != w => {
                        return Err(Error::VertexMapConflict(domain.edge_name(e).to_string()))
                    }
                    _ => vertex_map[v] = Some(w),
                }
            }
        }
        let mut hit = vec![false; codomain.edge_count()];
        edge_map.iter().for_each(|&f| hit[f] = true);
        if let Some(f) = hit.iter().position(|h| !h) {
            return Err(Error::NotSurjective(codomain.edge_name(f).to_string()));
        }
        Ok(OneBlockCode {
            vertex_map: vertex_map
                .into_iter()
                .map(|v| v.expect("every vertex has an edge"))
                .collect(),
            domain,
            codomain,
            edge_map,
        })
    }

    /// Loads a code file; graph paths are resolved against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let read = |p: &Path| {
            std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))
        };
        let spec: CodeSpec =
            serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(e.to_string()))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let domain = Graph::from_json(&read(&dir.join(&spec.domain))?)?;
        let codomain = Graph::from_json(&read(&dir.join(&spec.codomain))?)?;
        OneBlockCode::new(domain, codomain, &spec.edge_map)
    }

    pub fn identity(g: &Graph) -> Self {
        let map = (0..g.edge_count()).collect();
        OneBlockCode::from_indices(g.clone(), g.clone(), map).expect("identity is valid")
    }

    /// The 2-block presentation of `g` mapped onto `g` by `(e,f) -> f`.
    pub fn higher_block(g: &Graph) -> Self {
        Self::higher_block_by(g, |_, f| f)
    }

    /// The 2-block presentation mapped by `(e,f) -> e`.
    pub fn higher_block_first(g: &Graph) -> Self {
        Self::higher_block_by(g, |e, _| e)
    }

    fn higher_block_by(g: &Graph, pick: fn(EdgeId, EdgeId) -> EdgeId) -> Self {
        let h = g.higher_block();
        let map = h
            .edges()
            .iter()
            .map(|edge| {
                // vertices of the 2-block graph are the edges of g
                let e = g
                    .edge_id(h.vertex_name(edge.source))
                    .expect("vertex is an edge");
                let f = g
                    .edge_id(h.vertex_name(edge.target))
                    .expect("vertex is an edge");
                pick(e, f)
            })
            .collect();
        OneBlockCode::from_indices(h, g.clone(), map).expect("2-block codes are valid")
    }

    /// Two disjoint copies of `g` mapped onto one.
    pub fn doubling(g: &Graph) -> Result<Self> {
        let d = g.disjoint_union(g, "'")?;
        let map = d
            .edges()
            .iter()
            .map(|e| g.edge_id(e.id.trim_end_matches('\'')))
            .collect::<Result<Vec<_>>>()?;
        OneBlockCode::from_indices(d, g.clone(), map)
    }

    pub fn domain(&self) -> &Graph {
        &self.domain
    }

    pub fn codomain(&self) -> &Graph {
        &self.codomain
    }

    pub fn edge_image(&self, e: EdgeId) -> EdgeId {
        self.edge_map[e]
    }

    pub fn vertex_image(&self, v: VertexId) -> VertexId {
        self.vertex_map[v]
    }

    /// Domain vertices over `w`.
    pub fn vertex_fiber(&self, w: VertexId) -> Vec<VertexId> {
        (0..self.domain.vertex_count())
            .filter(|&v| self.vertex_map[v] == w)
            .collect()
    }

    pub fn map_word(&self, word: &[EdgeId]) -> Vec<EdgeId> {
        word.iter().map(|&e| self.edge_map[e]).collect()
    }

    pub fn map_point(&self, z: &ShiftPoint) -> ShiftPoint {
        ShiftPoint::new(
            &self.codomain,
            self.map_word(z.left_cycle()),
            self.map_word(z.core()),
            self.map_word(z.right_cycle()),
            z.core_start(),
        )
        .expect("codes map paths to paths")
    }

    pub fn resolving_type(&self) -> ResolvingType {
        let injective = |edges: &[EdgeId]| {
            let mut seen: Vec<EdgeId> = edges.iter().map(|&e| self.edge_map[e]).collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        };
        let v = 0..self.domain.vertex_count();
        ResolvingType {
            right_resolving: v.clone().all(|v| injective(self.domain.out_edges(v))),
            left_resolving: v.into_iter().all(|v| injective(self.domain.in_edges(v))),
        }
    }

    /// Domain edges over `f` leaving `v`.
    fn lifts_from(&self, v: VertexId, f: EdgeId) -> impl Iterator<Item = EdgeId> + '_ {
        self.domain
            .out_edges(v)
            .iter()
            .copied()
            .filter(move |&e| self.edge_map[e] == f)
    }

    /// For each end vertex, one domain path from `v` lifting `word`.
    fn witnesses(&self, v: VertexId, word: &[EdgeId]) -> HashMap<VertexId, Vec<EdgeId>> {
        let mut layer: HashMap<VertexId, Vec<EdgeId>> = HashMap::from([(v, Vec::new())]);
        for &f in word {
            let mut next: HashMap<VertexId, Vec<EdgeId>> = HashMap::new();
            let mut keys: Vec<VertexId> = layer.keys().copied().collect();
            keys.sort_unstable();
            for u in keys {
                for e in self.lifts_from(u, f) {
                    next.entry(self.domain.target(e)).or_insert_with(|| {
                        let mut p = layer[&u].clone();
                        p.push(e);
                        p
                    });
                }
            }
            layer = next;
        }
        layer
    }

    /// Number of domain paths from `u` to each vertex lifting `word`.
    fn lift_counts(&self, u: VertexId, word: &[EdgeId]) -> Vec<BigUint> {
        let n = self.domain.vertex_count();
        let mut cur = vec![BigUint::from(0u32); n];
        cur[u] = BigUint::from(1u32);
        for &f in word {
            let mut next = vec![BigUint::from(0u32); n];
            for (v, c) in cur.iter().enumerate() {
                if *c == BigUint::from(0u32) {
                    continue;
                }
                for e in self.lifts_from(v, f) {
                    next[self.domain.target(e)] += c;
                }
            }
            cur = next;
        }
        cur
    }
}

/// `π^-1(E)` as domain cylinders.
pub fn cylinder_preimage(code: &OneBlockCode, e: &CenteredCylinder) -> Vec<CenteredCylinder> {
    let d = &code.domain;
    let mut words: Vec<Vec<EdgeId>> = vec![Vec::new()];
    for &f in e.word() {
        let mut next = Vec::new();
        for w in &words {
            let candidates: Vec<EdgeId> = match w.last() {
                Some(&last) => code.lifts_from(d.target(last), f).collect(),
                None => (0..d.edge_count())
                    .filter(|&x| code.edge_map[x] == f)
                    .collect(),
            };
            for x in candidates {
                let mut w2 = w.clone();
                w2.push(x);
                next.push(w2);
            }
        }
        words = next;
    }
    words
        .into_iter()
        .map(|w| CenteredCylinder::new(d, w).expect("lifted words are paths"))
        .collect()
}

/// `μ_codomain(E)` against `Σ μ_domain` over the preimage cylinders.
pub fn pushforward_check(
    code: &OneBlockCode,
    pd_domain: &PerronData,
    pd_codomain: &PerronData,
    e: &CenteredCylinder,
) -> MassCheck {
    let lhs = centered_cylinder_mass(pd_codomain, e).value;
    let pre = cylinder_preimage(code, e);
    let rhs = pre
        .iter()
        .map(|c| centered_cylinder_mass(pd_domain, c).value)
        .sum();
    MassCheck::new(
        lhs,
        rhs,
        serde_json::json!({
            "cylinder": e.display(&code.codomain),
            "preimages": pre.iter().map(|c| c.display(&code.domain)).collect::<Vec<_>>(),
        }),
    )
}

/// Sup deviation of [`pushforward_check`] over all cylinders with `l <= l_max`.
pub fn pushforward_sup(
    code: &OneBlockCode,
    pd_domain: &PerronData,
    pd_codomain: &PerronData,
    l_max: usize,
) -> f64 {
    (1..=l_max)
        .flat_map(|l| CenteredCylinder::all(&code.codomain, l))
        .map(|e| pushforward_check(code, pd_domain, pd_codomain, &e).abs_err)
        .fold(0.0, f64::max)
}

/// Domain Perron data rescaled so that `Σ_v u_r(v) = Σ_v u_r^cod(φ(v))`.
pub fn pulled_back_perron(code: &OneBlockCode, pd_codomain: &PerronData) -> Result<PerronData> {
    let pd = PerronData::compute(&code.domain)?;
    let want: f64 = (0..code.domain.vertex_count())
        .map(|v| pd_codomain.right_at(code.vertex_map[v]))
        .sum();
    let have: f64 = pd.right.iter().sum();
    Ok(pd.rescaled(want / have))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiberDecomposition {
    pub ray: RayCylinder,
    pub components: Vec<RayCylinder>,
    /// Number of domain vertices over the anchor of `ray`.
    pub bound: usize,
}

/// The forced lift of `y` on `t >= from`, starting at domain vertex `v`,
/// as `(prefix, cycle)` beginning at coordinate `from`. `None` if `y` does
/// not lift from `v`. Requires a right-resolving code.
fn forward_lift(
    code: &OneBlockCode,
    v: VertexId,
    y: &ShiftPoint,
    from: i64,
) -> Option<(Vec<EdgeId>, Vec<EdgeId>)> {
    let p = y.right_cycle().len() as i64;
    let mut seen: HashMap<(VertexId, i64), usize> = HashMap::new();
    let mut path: Vec<EdgeId> = Vec::new();
    let mut cur = v;
    let mut t = from;
    loop {
        if t >= y.core_end() {
            let key = (cur, (t - y.core_end()).rem_euclid(p));
            if let Some(&start) = seen.get(&key) {
                let cycle = path[start..].to_vec();
                path.truncate(start);
                return Some((path, cycle));
            }
            seen.insert(key, path.len());
        }
        let e = code.lifts_from(cur, y.coordinate(t)).next()?;
        path.push(e);
        cur = code.domain.target(e);
        t += 1;
    }
}

/// `π^-1(C)` for a stable ray `C = Σ^s_m(y)` downstairs, as disjoint stable
/// rays upstairs, one per domain vertex over the anchor from which `y` lifts.
pub fn fiber_decomposition(code: &OneBlockCode, c: &RayCylinder) -> Result<FiberDecomposition> {
    if c.side() != Side::Stable {
        return Err(Error::WrongSide);
    }
    if !code.resolving_type().right_resolving {
        return Err(Error::NotRightResolving);
    }
    let from = 1 - c.parameter();
    let over = code.vertex_fiber(c.anchor());
    let mut components = Vec::new();
    for &v in &over {
        let Some((prefix, cycle)) = forward_lift(code, v, c.base(), from) else {
            continue;
        };
        let (left, connector) = code.domain.past_into(v);
        let start = from - connector.len() as i64;
        let mut core = connector;
        core.extend(prefix);
        let base = ShiftPoint::new(&code.domain, left, core, cycle, start)?;
        components.push(RayCylinder::stable(&code.domain, base, c.parameter()));
    }
    Ok(FiberDecomposition {
        ray: c.clone(),
        components,
        bound: over.len(),
    })
}

/// Relation graph of `word` on domain vertices, with one witness per arrow.
fn relation(code: &OneBlockCode, word: &[EdgeId]) -> Vec<HashMap<VertexId, Vec<EdgeId>>> {
    (0..code.domain.vertex_count())
        .map(|v| code.witnesses(v, word))
        .collect()
}

/// A shortest arrow path in a relation graph from `from` to a vertex
/// satisfying `goal`, as its vertex sequence. With `nonempty` at least one
/// arrow is taken, so `from` itself can be the goal of a loop.
fn relation_path(
    rel: &[HashMap<VertexId, Vec<EdgeId>>],
    from: VertexId,
    goal: &dyn Fn(VertexId) -> bool,
    nonempty: bool,
) -> Option<Vec<VertexId>> {
    let mut seen = vec![false; rel.len()];
    if !nonempty {
        if goal(from) {
            return Some(vec![from]);
        }
        seen[from] = true;
    }
    // breadth-first tree as (vertex, parent index)
    let mut nodes: Vec<(VertexId, usize)> = vec![(from, usize::MAX)];
    let mut head = 0;
    while head < nodes.len() {
        let mut next: Vec<VertexId> = rel[nodes[head].0].keys().copied().collect();
        next.sort_unstable();
        for w in next {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            nodes.push((w, head));
            if goal(w) {
                let mut seq = Vec::new();
                let mut i = nodes.len() - 1;
                while i != usize::MAX {
                    seq.push(nodes[i].0);
                    i = nodes[i].1;
                }
                seq.reverse();
                return Some(seq);
            }
        }
        head += 1;
    }
    None
}

fn concat(rel: &[HashMap<VertexId, Vec<EdgeId>>], seq: &[VertexId]) -> Vec<EdgeId> {
    seq.windows(2)
        .flat_map(|w| rel[w[0]][&w[1]].clone())
        .collect()
}

/// Some domain point over `x`, or `NoLift`.
#[allow(clippy::needless_range_loop)]
pub fn lift_point(code: &OneBlockCode, x: &ShiftPoint) -> Result<ShiftPoint> {
    let n = code.domain.vertex_count();
    let left = relation(code, x.left_cycle());
    let right = relation(code, x.right_cycle());
    let core = relation(code, x.core());
    let cyclic = |rel: &[HashMap<VertexId, Vec<EdgeId>>], v: VertexId| {
        relation_path(rel, v, &|w| w == v, true).is_some()
    };
    let left_cyclic: Vec<bool> = (0..n).map(|v| cyclic(&left, v)).collect();
    let right_cyclic: Vec<bool> = (0..n).map(|v| cyclic(&right, v)).collect();

    for c in (0..n).filter(|&c| left_cyclic[c]) {
        for w in 0..n {
            let Some(to_w) = relation_path(&left, c, &|v| v == w, false) else {
                continue;
            };
            let mut ends: Vec<VertexId> = core[w].keys().copied().collect();
            ends.sort_unstable();
            for u0 in ends {
                let Some(to_d) = relation_path(&right, u0, &|v| right_cyclic[v], false) else {
                    continue;
                };
                let d = *to_d.last().expect("nonempty");
                let left_loop = relation_path(&left, c, &|v| v == c, true).expect("cyclic");
                let right_loop = relation_path(&right, d, &|v| v == d, true).expect("cyclic");
                let connector = concat(&left, &to_w);
                let mut body = connector.clone();
                body.extend(core[w][&u0].clone());
                body.extend(concat(&right, &to_d));
                let start = x.core_start() - connector.len() as i64;
                return ShiftPoint::new(
                    &code.domain,
                    concat(&left, &left_loop),
                    body,
                    concat(&right, &right_loop),
                    start,
                );
            }
        }
    }
    Err(Error::NoLift)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuPushforward {
    pub stable: MassCheck,
    pub unstable: MassCheck,
    pub components: usize,
    pub bound: usize,
}

/// Stable side: `μ^s(C)` against the sum over fiber components. Unstable
/// side: `μ^u(B)` against the mass of the lifted ray.
pub fn pushforward_su_measures(
    code: &OneBlockCode,
    pd_codomain: &PerronData,
    b: &RayCylinder,
    c: &RayCylinder,
) -> Result<SuPushforward> {
    if b.side() != Side::Unstable {
        return Err(Error::WrongSide);
    }
    let pd = pulled_back_perron(code, pd_codomain)?;
    let fiber = fiber_decomposition(code, c)?;
    let stable = MassCheck::new(
        ray_cylinder_mass(pd_codomain, c).value,
        fiber
            .components
            .iter()
            .map(|r| ray_cylinder_mass(&pd, r).value)
            .sum(),
        serde_json::json!({ "side": "stable", "components": fiber.components.len() }),
    );
    let lifted = RayCylinder::unstable(&code.domain, lift_point(code, b.base())?, b.parameter());
    let unstable = MassCheck::new(
        ray_cylinder_mass(pd_codomain, b).value,
        ray_cylinder_mass(&pd, &lifted).value,
        serde_json::json!({
            "side": "unstable",
            "lift_anchor": code.domain.vertex_name(lifted.anchor()),
        }),
    );
    Ok(SuPushforward {
        stable,
        unstable,
        components: fiber.components.len(),
        bound: fiber.bound,
    })
}

/// `#h^k` downstairs and the sum of upstairs counts over a lift of `x` and
/// the fiber components of `C`.
pub fn fiber_count_identity(
    code: &OneBlockCode,
    x: &ShiftPoint,
    n: i64,
    y: &ShiftPoint,
    m: i64,
    k: u64,
) -> Result<(BigUint, BigUint)> {
    let down = hetero_count(
        &code.codomain,
        &HeteroSpec::new(&code.codomain, x.clone(), n, y.clone(), m),
        k,
    )?;
    let x_hat = lift_point(code, x)?;
    let fiber = fiber_decomposition(code, &RayCylinder::stable(&code.codomain, y.clone(), m))?;
    let mut up = BigUint::from(0u32);
    for comp in &fiber.components {
        let spec = HeteroSpec::new(&code.domain, x_hat.clone(), n, comp.base().clone(), m);
        up += hetero_count(&code.domain, &spec, k)?;
    }
    Ok((down, up))
}

/// Number of domain points over the periodic point `w^∞`, or `None` when
/// infinite.
///
/// Lifts of `w^∞` are bi-infinite walks in the graph on domain vertices
/// whose arrows count lifts of `w`. Their number is finite exactly when the
/// vertices on cycles form disjoint simple cycles of single arrows with no
/// walk between two of them; it is then the total length of those cycles.
#[allow(clippy::needless_range_loop)]
pub fn periodic_fiber_size(code: &OneBlockCode, w: &[EdgeId]) -> Option<u64> {
    let n = code.domain.vertex_count();
    let arrows: Vec<Vec<BigUint>> = (0..n).map(|u| code.lift_counts(u, w)).collect();
    let one = BigUint::from(1u32);
    let zero = BigUint::from(0u32);
    // reach[u][v]: a walk of at least one arrow from u to v
    let mut reach: Vec<Vec<bool>> = arrows
        .iter()
        .map(|row| row.iter().map(|c| *c != zero).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let on_cycle: Vec<bool> = (0..n).map(|v| reach[v][v]).collect();
    let mut total = 0u64;
    for u in (0..n).filter(|&u| on_cycle[u]) {
        let same = |v: usize| reach[u][v] && reach[v][u];
        let mut out_in_class = 0;
        for v in 0..n {
            if arrows[u][v] == zero {
                continue;
            }
            if same(v) {
                if arrows[u][v] != one {
                    return None;
                }
                out_in_class += 1;
            }
        }
        if out_in_class != 1 {
            return None;
        }
        // a walk into a different cycle
        if (0..n).any(|v| on_cycle[v] && reach[u][v] && !same(v)) {
            return None;
        }
        total += 1;
    }
    Some(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub period_bound: usize,
    pub orbits: usize,
    pub points: u64,
    /// Fiber size over the points, `None` for an infinite fiber.
    pub histogram: BTreeMap<String, u64>,
    pub min_fiber: Option<u64>,
    /// A singleton fiber was seen. Evidence only; degree is not computed.
    pub almost_one_to_one_evidence: bool,
}

/// Fiber sizes over every periodic point of least period at most `period_bound`.
pub fn almost_one_to_one_probe(
    code: &OneBlockCode,
    period_bound: usize,
    cap: u64,
) -> Result<ProbeReport> {
    let ens = enumerate_periodic(&code.codomain, period_bound, cap)?;
    let mut histogram = BTreeMap::new();
    let mut min_fiber: Option<u64> = None;
    for orbit in &ens.orbits {
        // fibers are equal along an orbit
        let size = periodic_fiber_size(code, orbit);
        let key = size.map_or_else(|| "infinite".to_string(), |s| s.to_string());
        *histogram.entry(key).or_insert(0) += orbit.len() as u64;
        if let Some(s) = size {
            min_fiber = Some(min_fiber.map_or(s, |m| m.min(s)));
        }
    }
    Ok(ProbeReport {
        period_bound,
        orbits: ens.orbits.len(),
        points: ens.total,
        histogram,
        almost_one_to_one_evidence: min_fiber == Some(1),
        min_fiber,
    })
}
