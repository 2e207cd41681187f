//! Random graphs and points shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smale::graph::{EdgeId, Graph, VertexId};
use smale::shift::ShiftPoint;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(n: usize, pairs: &[(usize, usize)]) -> Graph {
    let vertices: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
    let edges = pairs
        .iter()
        .enumerate()
        .map(|(i, &(s, t))| (format!("e{i}"), format!("v{s}"), format!("v{t}")));
    Graph::new(vertices, edges).expect("generated graphs are valid")
}

/// A strongly connected graph: a Hamiltonian cycle plus random extra edges,
/// at most `max_vertices` vertices and `max_edges` edges in total.
pub fn strongly_connected(rng: &mut ChaCha8Rng, max_vertices: usize, max_edges: usize) -> Graph {
    let n = rng.gen_range(1..=max_vertices);
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    let extra = rng.gen_range(0..=max_edges.saturating_sub(n));
    for _ in 0..extra {
        pairs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    build(n, &pairs)
}

/// Like [`strongly_connected`] with a self-loop at `v0`, so the graph is
/// primitive.
pub fn primitive(rng: &mut ChaCha8Rng, max_vertices: usize, max_edges: usize) -> Graph {
    let n = rng.gen_range(1..=max_vertices);
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    if n > 1 {
        pairs.push((0, 0));
    }
    let extra = rng.gen_range(0..=max_edges.saturating_sub(pairs.len()));
    for _ in 0..extra {
        pairs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    build(n, &pairs)
}

/// Each vertex is kept with a self-loop and each ordered pair gets an edge
/// with probability `density`, plus a cycle for strong connectivity.
pub fn dense(rng: &mut ChaCha8Rng, max_vertices: usize, density: f64) -> Graph {
    let n = rng.gen_range(1..=max_vertices);
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    for s in 0..n {
        pairs.push((s, s));
        for t in 0..n {
            if rng.gen_bool(density) {
                pairs.push((s, t));
            }
        }
    }
    build(n, &pairs)
}

/// An irreducible graph of period exactly `period`: classes of random size
/// with edges only from class `t` to class `t + 1`, and one class of size
/// one so the gcd of cycle lengths is the period.
pub fn periodic(rng: &mut ChaCha8Rng, period: usize, extra: usize) -> Graph {
    let sizes: Vec<usize> = (0..period)
        .map(|t| if t == 0 { 1 } else { rng.gen_range(1..=2) })
        .collect();
    let mut first = Vec::new();
    let mut next = 0;
    for &s in &sizes {
        first.push(next);
        next += s;
    }
    let member = |t: usize, i: usize| first[t] + i % sizes[t];
    let mut pairs = Vec::new();
    for t in 0..period {
        let u = (t + 1) % period;
        // every vertex gets an out-edge and an in-edge
        for i in 0..sizes[t].max(sizes[u]) {
            pairs.push((member(t, i), member(u, i)));
        }
    }
    for _ in 0..extra {
        let t = rng.gen_range(0..period);
        let u = (t + 1) % period;
        pairs.push((
            member(t, rng.gen_range(0..sizes[t])),
            member(u, rng.gen_range(0..sizes[u])),
        ));
    }
    build(next, &pairs)
}

fn random_walk(rng: &mut ChaCha8Rng, g: &Graph, from: VertexId, len: usize) -> Vec<EdgeId> {
    let mut v = from;
    let mut word = Vec::with_capacity(len);
    for _ in 0..len {
        let e = *g.out_edges(v).choose(rng).expect("no sinks");
        word.push(e);
        v = g.target(e);
    }
    word
}

fn random_back_walk(rng: &mut ChaCha8Rng, g: &Graph, into: VertexId, len: usize) -> Vec<EdgeId> {
    let mut v = into;
    let mut word = Vec::with_capacity(len);
    for _ in 0..len {
        let e = *g.in_edges(v).choose(rng).expect("no sources");
        word.push(e);
        v = g.source(e);
    }
    word.reverse();
    word
}

/// A closed walk of positive length through `v`, chosen at random among
/// walks out and shortest paths back.
pub fn random_cycle(rng: &mut ChaCha8Rng, g: &Graph, v: VertexId) -> Vec<EdgeId> {
    let out_len = rng.gen_range(1..=3);
    let mut w = random_walk(rng, g, v, out_len);
    let end = g.target(*w.last().expect("nonempty"));
    w.extend(g.shortest_path(end, v).expect("strongly connected"));
    w
}

/// An eventually periodic point with random cycles, a random core and a
/// random core offset in `-3..=3`.
pub fn random_point(rng: &mut ChaCha8Rng, g: &Graph) -> ShiftPoint {
    let v = rng.gen_range(0..g.vertex_count());
    let core_len = rng.gen_range(0..=4);
    let back = rng.gen_range(0..=2);
    let lead = random_back_walk(rng, g, v, back);
    let start = lead.first().map_or(v, |&e| g.source(e));
    let left = random_cycle(rng, g, start);
    let mut core = lead;
    core.extend(random_walk(rng, g, v, core_len));
    let end = core.last().map_or(start, |&e| g.target(e));
    let right = random_cycle(rng, g, end);
    let core_start = rng.gen_range(-3..=3);
    ShiftPoint::new(g, left, core, right, core_start).expect("random points are paths")
}

/// Second-largest eigenvalue modulus over `λ`, from the dense spectrum.
pub fn gap_ratio(g: &Graph) -> f64 {
    let n = g.vertex_count();
    let rows = g.adjacency().to_f64_rows();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let mut moduli: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if moduli.len() < 2 {
        0.0
    } else {
        moduli[1] / moduli[0]
    }
}
