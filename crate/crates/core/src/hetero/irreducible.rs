//! Heteroclinic sets of an irreducible graph of period `I`.
//!
//! For `x` and `y` in the same cyclic component the set at step `k` is the
//! union over `i = 0..I` of the pieces `shift^(kI+i)(B) ∩ shift^(-kI+i)(C)`.
//! Piece `i` frees the coordinates `n - kI - i + 1 ..= kI - i - m`, a middle
//! of length `2kI - (n + m)` for every `i`, and the pieces lie in distinct
//! cyclic classes at coordinate 0. With `I = 1` everything reduces to the
//! primitive case of the parent module.
//!
//! The limit of `λ^(-2kI) #h^k` is `I` times the product of the ray masses
//! computed in the component system: the `I`-block recoding of the
//! component of `x` under `shift^I` with its own Perron data. Blocks are
//! aligned at coordinate 0, and a ray that ends inside a block is summed over
//! its completions. The X-level product differs from the component one by a
//! normalization factor; both are reported.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{big_ln, scaled_count, weak_star_row, HeteroSpec, WeakStarRow};
use crate::error::{Error, Result};
use crate::graph::{Graph, SpectralDecomposition, VertexId};
use crate::matrix::PowerCache;
use crate::perron::PerronData;
use crate::shift::{CenteredCylinder, RayCylinder, ShiftPoint, Side};

/// The cyclic class containing `source(z_0)`.
pub fn component_of(g: &Graph, decomp: &SpectralDecomposition, z: &ShiftPoint) -> usize {
    decomp
        .class_of(z.base_vertex(g))
        .expect("irreducible decomposition")
}

fn period_of(decomp: &SpectralDecomposition) -> Result<usize> {
    decomp.period().ok_or(Error::Reducible)
}

/// The common component of every base point in `spec`.
pub fn spec_component(
    g: &Graph,
    spec: &HeteroSpec,
    decomp: &SpectralDecomposition,
) -> Result<usize> {
    period_of(decomp)?;
    let mut rays = spec.unstable().iter().chain(spec.stable());
    let first = component_of(g, decomp, rays.next().expect("nonempty").base());
    for r in rays {
        let c = component_of(g, decomp, r.base());
        if c != first {
            return Err(Error::ComponentMismatch(first, c));
        }
    }
    Ok(first)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IrreducibleCount {
    pub period: usize,
    #[serde(serialize_with = "crate::report::decimal")]
    pub total: BigUint,
    /// Count of piece `i` for `i = 0..I`.
    #[serde(serialize_with = "crate::report::decimal_vec")]
    pub pieces: Vec<BigUint>,
}

fn middle_length(b: &RayCylinder, c: &RayCylinder, k: u64, period: usize) -> Result<u64> {
    let len = 2 * (k * period as u64) as i64 - (b.parameter() + c.parameter());
    if len < 0 {
        return Err(Error::NegativeLength(len));
    }
    Ok(len as u64)
}

fn count_with(
    powers: &mut PowerCache,
    spec: &HeteroSpec,
    k: u64,
    period: usize,
) -> Result<IrreducibleCount> {
    let mut per_piece = BigUint::zero();
    for (b, c) in spec.pairs() {
        per_piece += powers.entry(middle_length(b, c, k, period)?, b.anchor(), c.anchor());
    }
    Ok(IrreducibleCount {
        period,
        total: &per_piece * BigUint::from(period),
        pieces: vec![per_piece; period],
    })
}

pub fn irreducible_hetero_count(
    g: &Graph,
    spec: &HeteroSpec,
    k: u64,
    decomp: &SpectralDecomposition,
) -> Result<IrreducibleCount> {
    spec_component(g, spec, decomp)?;
    let period = period_of(decomp)?;
    count_with(&mut PowerCache::new(g.adjacency()), spec, k, period)
}

fn check_window(spec: &HeteroSpec, k: u64, l: usize, period: usize) -> Result<()> {
    let room = (k * period as u64) as i64 - (period as i64 - 1);
    if spec.max_parameter() + l as i64 > room {
        return Err(Error::WindowTooWide { k, l });
    }
    Ok(())
}

/// `#(E ∩ piece i)` for `i = 0..I`.
fn piece_cylinder_counts(
    powers: &mut PowerCache,
    spec: &HeteroSpec,
    k: u64,
    period: usize,
    e: &CenteredCylinder,
) -> Vec<BigUint> {
    let (ki, l) = ((k * period as u64) as i64, e.halfwidth() as i64);
    (0..period as i64)
        .map(|i| {
            let mut total = BigUint::zero();
            for (b, c) in spec.pairs() {
                let before = (ki + i - b.parameter() - l) as u64;
                let after = (ki - i - c.parameter() - l) as u64;
                total += powers.entry(before, b.anchor(), e.left_anchor())
                    * powers.entry(after, e.right_anchor(), c.anchor());
            }
            total
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrreducibleEmpirical {
    #[serde(serialize_with = "crate::report::rational")]
    pub mass: BigRational,
    #[serde(serialize_with = "crate::report::decimal_vec")]
    pub piece_hits: Vec<BigUint>,
}

/// `μ^k(E)` over the union of the pieces, exactly.
pub fn irreducible_empirical_mass(
    g: &Graph,
    spec: &HeteroSpec,
    k: u64,
    e: &CenteredCylinder,
    decomp: &SpectralDecomposition,
) -> Result<IrreducibleEmpirical> {
    spec_component(g, spec, decomp)?;
    let period = period_of(decomp)?;
    check_window(spec, k, e.halfwidth(), period)?;
    let mut powers = PowerCache::new(g.adjacency());
    let count = count_with(&mut powers, spec, k, period)?;
    if count.total.is_zero() {
        return Err(Error::EmptyHeteroclinicSet(k));
    }
    let piece_hits = piece_cylinder_counts(&mut powers, spec, k, period, e);
    let hits: BigUint = piece_hits.iter().sum();
    Ok(IrreducibleEmpirical {
        mass: BigRational::new(BigInt::from(hits), BigInt::from(count.total)),
        piece_hits,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrreducibleWeakStarReport {
    pub k: u64,
    pub l_max: usize,
    pub period: usize,
    #[serde(serialize_with = "crate::report::decimal")]
    pub count: BigUint,
    /// `#piece_i / #h^k`.
    pub piece_weights: Vec<String>,
    pub rows: Vec<WeakStarRow>,
    pub sup_deviation: f64,
}

pub fn irreducible_weak_star_report(
    g: &Graph,
    pd: &PerronData,
    spec: &HeteroSpec,
    k: u64,
    l_max: usize,
    decomp: &SpectralDecomposition,
) -> Result<IrreducibleWeakStarReport> {
    spec_component(g, spec, decomp)?;
    let period = period_of(decomp)?;
    check_window(spec, k, l_max, period)?;
    let mut powers = PowerCache::new(g.adjacency());
    let count = count_with(&mut powers, spec, k, period)?;
    if count.total.is_zero() {
        return Err(Error::EmptyHeteroclinicSet(k));
    }
    let total = BigInt::from(count.total.clone());
    let piece_weights = count
        .pieces
        .iter()
        .map(|p| BigRational::new(BigInt::from(p.clone()), total.clone()).to_string())
        .collect();
    let mut rows = Vec::new();
    for l in 1..=l_max {
        for e in CenteredCylinder::all(g, l) {
            let hits: BigUint = piece_cylinder_counts(&mut powers, spec, k, period, &e)
                .iter()
                .sum();
            let exact = BigRational::new(BigInt::from(hits), total.clone());
            rows.push(weak_star_row(g, pd, &e, exact));
        }
    }
    let sup_deviation = rows.iter().map(|r| r.abs_err).fold(0.0, f64::max);
    Ok(IrreducibleWeakStarReport {
        k,
        l_max,
        period,
        count: count.total,
        piece_weights,
        rows,
        sup_deviation,
    })
}

/// The mixing system of one cyclic class under `shift^I`.
#[derive(Debug, Clone)]
pub struct ComponentSystem {
    pub class: usize,
    pub period: usize,
    pub graph: Graph,
    pub perron: PerronData,
    members: Vec<VertexId>,
}

impl ComponentSystem {
    pub fn new(g: &Graph, decomp: &SpectralDecomposition, class: usize) -> Result<ComponentSystem> {
        let period = period_of(decomp)?;
        let graph = g.power_recode(period, class)?;
        let perron = PerronData::compute(&graph)?;
        Ok(ComponentSystem {
            class,
            period,
            graph,
            perron,
            members: decomp.class(class),
        })
    }

    fn local(&self, g: &Graph, v: VertexId) -> VertexId {
        self.graph
            .vertex(g.vertex_name(v))
            .expect("class member of the recoded graph")
    }

    /// Mass of a ray of `g`, read in block coordinates.
    ///
    /// `Σ^u_n(x)` fixes `q = floor((n+1)/I)` whole blocks and the first `r`
    /// edges of the next one; its mass is
    /// `λ_c^(-q) Σ_v A^(I-r)_(anchor,v) u_r^c(v)`. Stable rays are handled
    /// symmetrically with `u_l^c`.
    pub fn ray_mass(&self, g: &Graph, powers: &mut PowerCache, r: &RayCylinder) -> f64 {
        let period = self.period as i64;
        let lambda = self.perron.lambda;
        match r.side() {
            Side::Unstable => {
                let q = (r.parameter() + 1).div_euclid(period);
                let rem = (r.parameter() + 1).rem_euclid(period);
                let sum: f64 = self
                    .members
                    .iter()
                    .map(|&v| {
                        count_f64(&powers.entry((period - rem) as u64, r.anchor(), v))
                            * self.perron.right_at(self.local(g, v))
                    })
                    .sum();
                lambda.powi(-(q as i32)) * sum
            }
            Side::Stable => {
                let first = 1 - r.parameter();
                let s0 = -(-first).div_euclid(period);
                let fixed = s0 * period - first;
                let sum: f64 = self
                    .members
                    .iter()
                    .map(|&v| {
                        self.perron.left_at(self.local(g, v))
                            * count_f64(&powers.entry((period - fixed) as u64, v, r.anchor()))
                    })
                    .sum();
                lambda.powi(-((2 - s0) as i32)) * sum
            }
        }
    }

    /// `μ^u_c(B) μ^s_c(C)`.
    pub fn ray_mass_product(&self, g: &Graph, spec: &HeteroSpec) -> f64 {
        let mut powers = PowerCache::new(g.adjacency());
        let u: f64 = spec
            .unstable()
            .iter()
            .map(|r| self.ray_mass(g, &mut powers, r))
            .sum();
        let s: f64 = spec
            .stable()
            .iter()
            .map(|r| self.ray_mass(g, &mut powers, r))
            .sum();
        u * s
    }
}

fn count_f64(x: &BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrreducibleSeriesRow {
    pub k: u64,
    #[serde(serialize_with = "crate::report::decimal")]
    pub count: BigUint,
    /// `λ^(-2kI) #h^k`.
    pub scaled: f64,
    /// `I` times the component-level product.
    pub target: f64,
    pub abs_err: f64,
    /// `log(#h^k) / (2kI)`.
    pub entropy_est: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrreducibleSeries {
    pub period: usize,
    pub lambda: f64,
    pub component_product: f64,
    pub x_level_product: f64,
    /// `I × component_product`, the target used in the rows.
    pub target_component: f64,
    /// `I² × x_level_product`.
    pub target_x_level_squared: f64,
    /// `I × x_level_product`.
    pub target_x_level: f64,
    /// `target_component / target_x_level`.
    pub discrepancy_factor: f64,
    pub rows: Vec<IrreducibleSeriesRow>,
}

pub fn irreducible_series(
    g: &Graph,
    pd: &PerronData,
    spec: &HeteroSpec,
    k_max: u64,
    decomp: &SpectralDecomposition,
) -> Result<IrreducibleSeries> {
    if k_max == 0 {
        return Err(Error::Invalid("k_max must be at least 1".into()));
    }
    let class = spec_component(g, spec, decomp)?;
    let period = period_of(decomp)?;
    let comp = ComponentSystem::new(g, decomp, class)?;
    let component_product = comp.ray_mass_product(g, spec);
    let x_level_product = spec.ray_mass_product(pd);
    let p = period as f64;
    let target = p * component_product;

    let need = spec.max_length_offset().max(0) as u64;
    let k_min = need.div_ceil(2 * period as u64).max(1);
    let mut powers = PowerCache::new(g.adjacency());
    let mut rows = Vec::new();
    for k in k_min..=k_max {
        let count = count_with(&mut powers, spec, k, period)?.total;
        let exponent = 2 * k * period as u64;
        let scaled = scaled_count(&count, pd.lambda, exponent);
        let entropy_est = (!count.is_zero()).then(|| big_ln(&count) / exponent as f64);
        rows.push(IrreducibleSeriesRow {
            k,
            scaled,
            target,
            abs_err: (scaled - target).abs(),
            entropy_est,
            count,
        });
    }
    Ok(IrreducibleSeries {
        period,
        lambda: pd.lambda,
        component_product,
        x_level_product,
        target_component: target,
        target_x_level_squared: p * p * x_level_product,
        target_x_level: p * x_level_product,
        discrepancy_factor: target / (p * x_level_product),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::hetero::{hetero_count, weak_star_report};

    fn pr(g: &Graph) -> ShiftPoint {
        ShiftPoint::from_names(g, &["p", "r"], &[], &["p", "r"], 0).unwrap()
    }

    #[test]
    fn period_two_counts() {
        let g = catalog::period_two();
        let decomp = g.structure_analysis();
        let spec = HeteroSpec::new(&g, pr(&g), 0, pr(&g), 0);
        for k in 1..6u32 {
            let c = irreducible_hetero_count(&g, &spec, k as u64, &decomp).unwrap();
            let piece = BigUint::from(4u32).pow(2 * k);
            assert_eq!(c.pieces, vec![piece.clone(), piece.clone()]);
            assert_eq!(c.total, piece * 2u32);
        }
        let pd = PerronData::compute(&g).unwrap();
        let s = irreducible_series(&g, &pd, &spec, 12, &decomp).unwrap();
        assert!(s.rows.iter().all(|r| r.scaled == 2.0));
        assert!((s.target_component - 2.0).abs() < 1e-12);
        assert!((s.target_x_level - 1.0).abs() < 1e-12);
        assert!((s.target_x_level_squared - 2.0).abs() < 1e-12);
    }

    #[test]
    fn period_two_weak_star() {
        let g = catalog::period_two();
        let decomp = g.structure_analysis();
        let pd = PerronData::compute(&g).unwrap();
        let spec = HeteroSpec::new(&g, pr(&g), 0, pr(&g), 0);
        let e = CenteredCylinder::from_names(&g, &["p", "r"]).unwrap();
        for k in 1..6 {
            let m = irreducible_empirical_mass(&g, &spec, k, &e, &decomp).unwrap();
            assert_eq!(m.mass, BigRational::new(1.into(), 8.into()));
            assert!(m.piece_hits[1].is_zero());
        }
        let rep = irreducible_weak_star_report(&g, &pd, &spec, 10, 2, &decomp).unwrap();
        assert_eq!(rep.piece_weights, ["1/2", "1/2"]);
        assert!(rep.sup_deviation < 1e-10);
    }

    #[test]
    fn mismatched_components_are_rejected() {
        let g = catalog::period_two();
        let decomp = g.structure_analysis();
        let rp = pr(&g).shifted(1);
        let spec = HeteroSpec::new(&g, pr(&g), 0, rp, 0);
        assert_eq!(
            irreducible_hetero_count(&g, &spec, 1, &decomp),
            Err(Error::ComponentMismatch(0, 1))
        );
    }

    #[test]
    fn primitive_case_reduces() {
        let g = catalog::golden_mean();
        let decomp = g.structure_analysis();
        let pd = PerronData::compute(&g).unwrap();
        let x = ShiftPoint::from_names(&g, &["a"], &[], &["a"], 0).unwrap();
        let y = ShiftPoint::from_names(&g, &["b", "c"], &[], &["a"], 0).unwrap();
        let spec = HeteroSpec::new(&g, x, 1, y, 2);
        for k in 2..8 {
            let c = irreducible_hetero_count(&g, &spec, k, &decomp).unwrap();
            assert_eq!(c.total, hetero_count(&g, &spec, k).unwrap());
        }
        let a = irreducible_weak_star_report(&g, &pd, &spec, 6, 2, &decomp).unwrap();
        let b = weak_star_report(&g, &pd, &spec, 6, 2).unwrap();
        assert_eq!(a.rows, b.rows);
        let s = irreducible_series(&g, &pd, &spec, 5, &decomp).unwrap();
        assert!((s.component_product - s.x_level_product).abs() < 1e-12);
    }

    #[test]
    fn period_three_limit_matches_component_product() {
        let g = catalog::period_three();
        let decomp = g.structure_analysis();
        assert_eq!(decomp.period(), Some(3));
        let pd = PerronData::compute(&g).unwrap();
        let x = ShiftPoint::from_names(&g, &["e", "g", "h"], &[], &["f", "k", "h"], 0).unwrap();
        let y = ShiftPoint::from_names(&g, &["f", "g", "h"], &[], &["e", "k", "h"], 0).unwrap();
        for (n, m) in [(0, 0), (1, 0), (2, 1), (-1, 2), (4, -2)] {
            let spec = HeteroSpec::new(&g, x.clone(), n, y.clone(), m);
            let s = irreducible_series(&g, &pd, &spec, 8, &decomp).unwrap();
            let last = s.rows.last().unwrap();
            assert!(last.abs_err < 1e-12, "n={n} m={m}: {last:?}");
        }
    }
}
