//! Periodic-point measures: the uniform measure on `S_n`, the points fixed by
//! `shift^j` for some `j <= n`.
//!
//! Orbits are enumerated explicitly as Lyndon cycles: closed paths that are
//! strictly smaller, edge by edge, than each of their proper rotations. Each
//! such cycle of length `p` is one orbit of exactly `p` points.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::hetero::{weak_star_report, HeteroSpec};
use crate::parry::centered_cylinder_mass;
use crate::perron::PerronData;
use crate::shift::{CenteredCylinder, ShiftPoint};

pub const DEFAULT_CAP: u64 = 1_000_000;

/// Orbits of least period at most `n`, each stored once as its Lyndon cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicEnsemble {
    pub n: usize,
    pub orbits: Vec<Vec<EdgeId>>,
    pub total: u64,
}

impl PeriodicEnsemble {
    /// Every point as `(orbit index, phase)`; the point is
    /// `z_t = cycle[(t + phase) mod p]`.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.orbits
            .iter()
            .enumerate()
            .flat_map(|(i, c)| (0..c.len()).map(move |p| (i, p)))
    }

    pub fn point(&self, g: &Graph, orbit: usize, phase: usize) -> ShiftPoint {
        let c = &self.orbits[orbit];
        let word = (0..c.len()).map(|t| c[(t + phase) % c.len()]).collect();
        ShiftPoint::periodic(g, word).expect("closed cycle")
    }

    /// Number of orbits of each least period `1..=n`.
    pub fn orbit_histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.n];
        for c in &self.orbits {
            h[c.len() - 1] += 1;
        }
        h
    }
}

/// `Σ_{p<=n} trace(A^p)`, an upper bound for `#S_n`.
pub fn estimated_size(g: &Graph, n: usize) -> BigUint {
    let a = g.adjacency();
    let mut power = a.clone();
    let mut total = BigUint::zero();
    for _ in 0..n {
        total += power.trace();
        power = &power * &a;
    }
    total
}

pub fn mobius(mut d: usize) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            d /= p;
            if d.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if d > 1 {
        result = -result;
    }
    result
}

/// `#S_n = Σ_{p<=n} Σ_{d|p} μ(d) trace(A^(p/d))`.
pub fn mobius_count(g: &Graph, n: usize) -> BigUint {
    let a = g.adjacency();
    let mut traces = vec![BigInt::zero()];
    let mut power = a.clone();
    for _ in 0..n {
        traces.push(BigInt::from(power.trace()));
        power = &power * &a;
    }
    let mut total = BigInt::zero();
    for p in 1..=n {
        for d in (1..=p).filter(|d| p % d == 0) {
            total += &traces[p / d] * mobius(d);
        }
    }
    assert!(!total.is_negative());
    total.to_biguint().expect("nonnegative")
}

/// Duval's test: `w` is Lyndon iff its first Lyndon factor is all of `w`.
fn is_lyndon(w: &[EdgeId]) -> bool {
    let (mut j, mut k) = (1, 0);
    while j < w.len() && w[k] <= w[j] {
        k = if w[k] < w[j] { 0 } else { k + 1 };
        j += 1;
    }
    j - k == w.len()
}

/// Enumerates `S_n` when its trace bound is at most `cap`.
pub fn enumerate_periodic(g: &Graph, n: usize, cap: u64) -> Result<PeriodicEnsemble> {
    if n == 0 {
        return Err(Error::Invalid("period bound must be at least 1".into()));
    }
    let estimate = estimated_size(g, n);
    if estimate > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            cap,
            count: estimate,
        });
    }
    let mut orbits = Vec::new();
    for first in 0..g.edge_count() {
        let home = g.source(first);
        let dist = distances_to(g, home, first);
        let mut word = vec![first];
        extend(g, n, home, first, &dist, &mut word, &mut orbits);
    }
    orbits.sort_by(|a: &Vec<EdgeId>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let total = orbits.iter().map(|c| c.len() as u64).sum();
    Ok(PeriodicEnsemble { n, orbits, total })
}

/// Shortest distance from each vertex back to `home` using edges `>= min`.
fn distances_to(g: &Graph, home: usize, min: EdgeId) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[home] = 0;
    let mut queue = std::collections::VecDeque::from([home]);
    while let Some(v) = queue.pop_front() {
        for &e in g.in_edges(v) {
            let u = g.source(e);
            if e >= min && dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

fn extend(
    g: &Graph,
    n: usize,
    home: usize,
    first: EdgeId,
    dist: &[usize],
    word: &mut Vec<EdgeId>,
    out: &mut Vec<Vec<EdgeId>>,
) {
    let v = g.target(*word.last().expect("nonempty"));
    if v == home && is_lyndon(word) {
        out.push(word.clone());
    }
    for &e in g.out_edges(v) {
        if e < first {
            continue;
        }
        let t = g.target(e);
        if dist[t] != usize::MAX && word.len() + 1 + dist[t] <= n {
            word.push(e);
            extend(g, n, home, first, dist, word, out);
            word.pop();
        }
    }
}

/// Number of ensemble points whose window `-l+1 ..= l` reads the cylinder word.
pub fn periodic_hits(ens: &PeriodicEnsemble, e: &CenteredCylinder) -> u64 {
    let mut hits = 0;
    for c in &ens.orbits {
        let p = c.len() as i64;
        for phase in 0..p {
            if e.matches(|t| c[(t + phase).rem_euclid(p) as usize]) {
                hits += 1;
            }
        }
    }
    hits
}

/// `μ_n(E)`, exactly.
pub fn periodic_measure_mass(ens: &PeriodicEnsemble, e: &CenteredCylinder) -> BigRational {
    BigRational::new(BigInt::from(periodic_hits(ens, e)), BigInt::from(ens.total))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub cylinder: String,
    pub periodic: f64,
    pub hetero: f64,
    pub parry: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub n: usize,
    pub k: u64,
    pub l_max: usize,
    pub ensemble_size: u64,
    pub rows: Vec<CompareRow>,
    pub sup_periodic_parry: f64,
    pub sup_hetero_parry: f64,
    pub sup_periodic_hetero: f64,
}

/// `μ_n`, `μ^k_{B,C}` and `μ` side by side on cylinders with `l <= l_max`.
pub fn compare_constructions(
    g: &Graph,
    pd: &PerronData,
    spec: &HeteroSpec,
    k: u64,
    ens: &PeriodicEnsemble,
    l_max: usize,
) -> Result<CompareReport> {
    let hetero = weak_star_report(g, pd, spec, k, l_max)?;
    let mut rows = Vec::new();
    let mut idx = 0;
    for l in 1..=l_max {
        for e in CenteredCylinder::all(g, l) {
            let h = &hetero.rows[idx];
            idx += 1;
            rows.push(CompareRow {
                cylinder: e.display(g),
                periodic: periodic_measure_mass(ens, &e).to_f64().expect("finite"),
                hetero: h.empirical,
                parry: centered_cylinder_mass(pd, &e).value,
            });
        }
    }
    let sup = |f: &dyn Fn(&CompareRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    Ok(CompareReport {
        n: ens.n,
        k,
        l_max,
        ensemble_size: ens.total,
        sup_periodic_parry: sup(&|r| (r.periodic - r.parry).abs()),
        sup_hetero_parry: sup(&|r| (r.hetero - r.parry).abs()),
        sup_periodic_hetero: sup(&|r| (r.periodic - r.hetero).abs()),
        rows,
    })
}
