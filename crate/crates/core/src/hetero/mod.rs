//! Heteroclinic sets `h^k = shift^k(B) ∩ shift^-k(C)` for an unstable ray
//! `B = Σ^u_n(x)` and a stable ray `C = Σ^s_m(y)`, their exact sizes and the
//! empirical measures they carry.
//!
//! A point of `h^k` agrees with `shift^k x` at every `t <= n - k`, with
//! `shift^-k y` at every `t >= k - m + 1`, and is free on the middle
//! coordinates `n - k + 1 ..= k - m`. The middle is a path of length
//! `2k - (n + m)` from `i = target(x_n)` to `j = source(y_(-m+1))`, so
//! `#h^k = A^(2k-n-m)_(ij)`.
//!
//! `B` and `C` may also be finite disjoint unions of rays; counts and
//! cylinder counts then add over the pairs of pieces.

pub mod irreducible;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::matrix::PowerCache;
use crate::parry::{centered_cylinder_mass, ray_cylinder_mass};
use crate::perron::PerronData;
use crate::shift::{CenteredCylinder, RayCylinder, ShiftPoint, Side};

/// Default bound on explicit enumeration.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// The pair `(B, C)`, each a finite disjoint union of rays.
#[derive(Debug, Clone, PartialEq)]
pub struct HeteroSpec {
    unstable: Vec<RayCylinder>,
    stable: Vec<RayCylinder>,
}

impl HeteroSpec {
    /// `B = Σ^u_n(x)`, `C = Σ^s_m(y)`.
    pub fn new(g: &Graph, x: ShiftPoint, n: i64, y: ShiftPoint, m: i64) -> HeteroSpec {
        HeteroSpec {
            unstable: vec![RayCylinder::unstable(g, x, n)],
            stable: vec![RayCylinder::stable(g, y, m)],
        }
    }

    /// Unions of rays. Pieces on each side must be pairwise disjoint.
    pub fn union(unstable: Vec<RayCylinder>, stable: Vec<RayCylinder>) -> Result<HeteroSpec> {
        if unstable.is_empty() || stable.is_empty() {
            return Err(Error::Invalid("each side needs at least one ray".into()));
        }
        if unstable.iter().any(|r| r.side() != Side::Unstable)
            || stable.iter().any(|r| r.side() != Side::Stable)
        {
            return Err(Error::WrongSide);
        }
        for side in [&unstable, &stable] {
            for (a, r) in side.iter().enumerate() {
                if side[a + 1..].iter().any(|s| !r.is_disjoint_from(s)) {
                    return Err(Error::OverlappingPieces);
                }
            }
        }
        Ok(HeteroSpec { unstable, stable })
    }

    pub fn unstable(&self) -> &[RayCylinder] {
        &self.unstable
    }

    pub fn stable(&self) -> &[RayCylinder] {
        &self.stable
    }

    /// All `(B_a, C_b)` pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (&RayCylinder, &RayCylinder)> {
        self.unstable
            .iter()
            .flat_map(|b| self.stable.iter().map(move |c| (b, c)))
    }

    /// Largest `n + m` over the pairs.
    pub fn max_length_offset(&self) -> i64 {
        self.pairs()
            .map(|(b, c)| b.parameter() + c.parameter())
            .max()
            .expect("nonempty")
    }

    /// Largest of all ray parameters.
    pub fn max_parameter(&self) -> i64 {
        self.unstable
            .iter()
            .chain(&self.stable)
            .map(RayCylinder::parameter)
            .max()
            .expect("nonempty")
    }

    /// `μ^u(B) μ^s(C)`.
    pub fn ray_mass_product(&self, pd: &PerronData) -> f64 {
        let u: f64 = self
            .unstable
            .iter()
            .map(|r| ray_cylinder_mass(pd, r).value)
            .sum();
        let s: f64 = self
            .stable
            .iter()
            .map(|r| ray_cylinder_mass(pd, r).value)
            .sum();
        u * s
    }

    /// Smallest `k >= 1` at which every middle length `2k - (n + m)` is
    /// nonnegative.
    pub fn first_k(&self) -> u64 {
        let need = self.max_length_offset().max(0);
        ((need + 1) / 2).max(1) as u64
    }

    pub fn to_json(&self, g: &Graph) -> serde_json::Value {
        let ray = |r: &RayCylinder| {
            serde_json::json!({
                "base": r.base().to_spec(g),
                "parameter": r.parameter(),
                "anchor": g.vertex_name(r.anchor()),
            })
        };
        serde_json::json!({
            "unstable": self.unstable.iter().map(ray).collect::<Vec<_>>(),
            "stable": self.stable.iter().map(ray).collect::<Vec<_>>(),
        })
    }
}

/// Length of the free middle for one pair at step `k`.
fn middle_length(b: &RayCylinder, c: &RayCylinder, k: u64) -> Result<u64> {
    let len = 2 * k as i64 - (b.parameter() + c.parameter());
    if len < 0 {
        return Err(Error::NegativeLength(len));
    }
    Ok(len as u64)
}

/// `#h^k`.
pub fn hetero_count(g: &Graph, spec: &HeteroSpec, k: u64) -> Result<BigUint> {
    let mut powers = PowerCache::new(g.adjacency());
    count_with(&mut powers, spec, k)
}

fn count_with(powers: &mut PowerCache, spec: &HeteroSpec, k: u64) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for (b, c) in spec.pairs() {
        let len = middle_length(b, c, k)?;
        total += powers.entry(len, b.anchor(), c.anchor());
    }
    Ok(total)
}

/// Middle paths of one `(B_a, C_b)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceEnumeration {
    pub unstable_index: usize,
    pub stable_index: usize,
    pub middle_paths: Vec<Vec<EdgeId>>,
}

/// `h^k` listed explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeteroEnumeration {
    pub k: u64,
    pub count: BigUint,
    pub pieces: Vec<PieceEnumeration>,
}

impl HeteroEnumeration {
    /// The heteroclinic points themselves.
    pub fn points(&self, g: &Graph, spec: &HeteroSpec) -> Vec<ShiftPoint> {
        let k = self.k as i64;
        let mut out = Vec::new();
        for piece in &self.pieces {
            let b = &spec.unstable[piece.unstable_index];
            let c = &spec.stable[piece.stable_index];
            let past = b.base().shifted(k);
            let future = c.base().shifted(-k);
            for middle in &piece.middle_paths {
                let z = ShiftPoint::splice(g, &past, b.parameter() - k, middle, &future)
                    .expect("middle paths join the frozen rays");
                out.push(z);
            }
        }
        out
    }
}

/// Enumerates `h^k` by walking the graph, up to `cap` points.
///
/// Exceeding the cap is an error that still reports the exact count.
pub fn hetero_enumerate(
    g: &Graph,
    spec: &HeteroSpec,
    k: u64,
    cap: u64,
) -> Result<HeteroEnumeration> {
    let count = hetero_count(g, spec, k)?;
    if count > BigUint::from(cap) {
        return Err(Error::CapExceeded { cap, count });
    }
    let mut pieces = Vec::new();
    for (a, b) in spec.unstable.iter().enumerate() {
        for (s, c) in spec.stable.iter().enumerate() {
            let len = middle_length(b, c, k)?;
            let middle_paths = g
                .enumerate_paths(b.anchor(), c.anchor(), len as usize, cap as usize)
                .ok_or_else(|| Error::CapExceeded {
                    cap,
                    count: count.clone(),
                })?;
            pieces.push(PieceEnumeration {
                unstable_index: a,
                stable_index: s,
                middle_paths,
            });
        }
    }
    Ok(HeteroEnumeration { k, count, pieces })
}

fn ratio(num: BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den.clone()))
}

fn check_window(spec: &HeteroSpec, k: u64, l: usize) -> Result<()> {
    if spec.max_parameter() + l as i64 > k as i64 {
        return Err(Error::WindowTooWide { k, l });
    }
    Ok(())
}

fn cylinder_count_with(
    powers: &mut PowerCache,
    spec: &HeteroSpec,
    k: u64,
    e: &CenteredCylinder,
) -> BigUint {
    let (k, l) = (k as i64, e.halfwidth() as i64);
    let mut total = BigUint::zero();
    for (b, c) in spec.pairs() {
        let before = (k - b.parameter() - l) as u64;
        let after = (k - c.parameter() - l) as u64;
        total += powers.entry(before, b.anchor(), e.left_anchor())
            * powers.entry(after, e.right_anchor(), c.anchor());
    }
    total
}

/// `#(E ∩ h^k)` from matrix powers:
/// `Σ A^(k-n-l)_(i,i') A^(k-m-l)_(j',j)` over pairs.
pub fn cylinder_count(
    g: &Graph,
    spec: &HeteroSpec,
    k: u64,
    e: &CenteredCylinder,
) -> Result<BigUint> {
    check_window(spec, k, e.halfwidth())?;
    let mut powers = PowerCache::new(g.adjacency());
    Ok(cylinder_count_with(&mut powers, spec, k, e))
}

/// `μ^k(E) = #(E ∩ h^k) / #h^k`, exactly.
pub fn empirical_cylinder_mass(
    g: &Graph,
    spec: &HeteroSpec,
    k: u64,
    e: &CenteredCylinder,
) -> Result<BigRational> {
    check_window(spec, k, e.halfwidth())?;
    let mut powers = PowerCache::new(g.adjacency());
    let total = count_with(&mut powers, spec, k)?;
    if total.is_zero() {
        return Err(Error::EmptyHeteroclinicSet(k));
    }
    Ok(ratio(cylinder_count_with(&mut powers, spec, k, e), &total))
}

/// The same ratio obtained by listing `h^k` and reading each point's window.
pub fn empirical_by_enumeration(
    g: &Graph,
    spec: &HeteroSpec,
    k: u64,
    e: &CenteredCylinder,
    cap: u64,
) -> Result<BigRational> {
    let en = hetero_enumerate(g, spec, k, cap)?;
    if en.count.is_zero() {
        return Err(Error::EmptyHeteroclinicSet(k));
    }
    let hits = en.points(g, spec).iter().filter(|z| e.contains(z)).count();
    Ok(ratio(BigUint::from(hits), &en.count))
}

/// Natural log of a big integer (`-inf` for zero).
pub fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64 bits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `count · λ^(-p)`, through logarithms when either factor overflows.
pub fn scaled_count(count: &BigUint, lambda: f64, p: u64) -> f64 {
    if count.is_zero() {
        return 0.0;
    }
    let direct = count.to_f64().unwrap_or(f64::INFINITY) * lambda.powi(-(p as i32));
    if direct.is_finite() && direct > 0.0 && p < i32::MAX as u64 {
        direct
    } else {
        (big_ln(count) - p as f64 * lambda.ln()).exp()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesRow {
    pub k: u64,
    #[serde(serialize_with = "crate::report::decimal")]
    pub count: BigUint,
    pub scaled: f64,
    pub target: f64,
    pub abs_err: f64,
    /// `log(count) / (2k)`; absent when the set is empty.
    pub entropy_est: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceSeries {
    pub lambda: f64,
    pub entropy: f64,
    pub rows: Vec<SeriesRow>,
}

impl ConvergenceSeries {
    pub fn row(&self, k: u64) -> Option<&SeriesRow> {
        self.rows.iter().find(|r| r.k == k)
    }

    /// Whether every row has an empty heteroclinic set.
    pub fn all_empty(&self) -> bool {
        self.rows.iter().all(|r| r.count.is_zero())
    }
}

/// Rows for `k` from the first admissible value up to `k_max` comparing
/// `λ^(-2k) #h^k` with `μ^u(B) μ^s(C)`.
pub fn ratio_and_entropy_series(
    g: &Graph,
    pd: &PerronData,
    spec: &HeteroSpec,
    k_max: u64,
) -> Result<ConvergenceSeries> {
    if k_max == 0 {
        return Err(Error::Invalid("k_max must be at least 1".into()));
    }
    let target = spec.ray_mass_product(pd);
    let mut powers = PowerCache::new(g.adjacency());
    let mut rows = Vec::new();
    for k in spec.first_k()..=k_max {
        let count = count_with(&mut powers, spec, k)?;
        let scaled = scaled_count(&count, pd.lambda, 2 * k);
        let entropy_est = (!count.is_zero()).then(|| big_ln(&count) / (2 * k) as f64);
        rows.push(SeriesRow {
            k,
            scaled,
            target,
            abs_err: (scaled - target).abs(),
            entropy_est,
            count,
        });
    }
    Ok(ConvergenceSeries {
        lambda: pd.lambda,
        entropy: pd.entropy(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakStarRow {
    pub cylinder: String,
    #[serde(serialize_with = "crate::report::rational")]
    pub exact: BigRational,
    pub empirical: f64,
    pub parry: f64,
    pub abs_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakStarReport {
    pub k: u64,
    pub l_max: usize,
    #[serde(serialize_with = "crate::report::decimal")]
    pub count: BigUint,
    pub rows: Vec<WeakStarRow>,
    pub sup_deviation: f64,
}

pub(crate) fn weak_star_row(
    g: &Graph,
    pd: &PerronData,
    e: &CenteredCylinder,
    exact: BigRational,
) -> WeakStarRow {
    let empirical = exact.to_f64().expect("finite ratio");
    let parry = centered_cylinder_mass(pd, e).value;
    WeakStarRow {
        cylinder: e.display(g),
        exact,
        empirical,
        parry,
        abs_err: (empirical - parry).abs(),
    }
}

/// `μ^k(E)` against `μ(E)` for every centered cylinder with `l <= l_max`.
pub fn weak_star_report(
    g: &Graph,
    pd: &PerronData,
    spec: &HeteroSpec,
    k: u64,
    l_max: usize,
) -> Result<WeakStarReport> {
    check_window(spec, k, l_max)?;
    let mut powers = PowerCache::new(g.adjacency());
    let count = count_with(&mut powers, spec, k)?;
    if count.is_zero() {
        return Err(Error::EmptyHeteroclinicSet(k));
    }
    let mut rows = Vec::new();
    for l in 1..=l_max {
        for e in CenteredCylinder::all(g, l) {
            let exact = ratio(cylinder_count_with(&mut powers, spec, k, &e), &count);
            rows.push(weak_star_row(g, pd, &e, exact));
        }
    }
    let sup_deviation = rows.iter().map(|r| r.abs_err).fold(0.0, f64::max);
    Ok(WeakStarReport {
        k,
        l_max,
        count,
        rows,
        sup_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn fixed_a(g: &Graph) -> ShiftPoint {
        ShiftPoint::from_names(g, &["a"], &[], &["a"], 0).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn count_examples() {
        let g = Graph::full_shift(2);
        let z = ShiftPoint::periodic(&g, vec![0]).unwrap();
        let spec = HeteroSpec::new(&g, z.clone(), 0, z, 0);
        for k in 1..10 {
            assert_eq!(
                hetero_count(&g, &spec, k).unwrap(),
                BigUint::from(4u32).pow(k as u32)
            );
        }

        let g = catalog::golden_mean();
        let spec = HeteroSpec::new(&g, fixed_a(&g), 0, fixed_a(&g), 0);
        assert_eq!(hetero_count(&g, &spec, 5).unwrap(), BigUint::from(89u32));

        // i = 1, j = 2 and a single free edge
        let y = ShiftPoint::from_names(&g, &["c", "b"], &[], &["c", "b"], 0).unwrap();
        let spec = HeteroSpec::new(&g, fixed_a(&g), 0, y, 1);
        assert_eq!(spec.stable()[0].anchor(), 1);
        assert_eq!(hetero_count(&g, &spec, 1).unwrap(), BigUint::from(1u32));

        let spec = HeteroSpec::new(&g, fixed_a(&g), 2, fixed_a(&g), 1);
        assert!(matches!(
            hetero_count(&g, &spec, 1),
            Err(Error::NegativeLength(-1))
        ));
    }

    #[test]
    fn enumeration_examples() {
        let g = Graph::full_shift(2);
        let z = ShiftPoint::periodic(&g, vec![0]).unwrap();
        let spec = HeteroSpec::new(&g, z.clone(), 0, z, 0);
        let en = hetero_enumerate(&g, &spec, 1, 100).unwrap();
        let mut words: Vec<String> = en.pieces[0]
            .middle_paths
            .iter()
            .map(|w| g.word_names(w).concat())
            .collect();
        words.sort();
        assert_eq!(words, ["00", "01", "10", "11"]);

        let g = catalog::golden_mean();
        let spec = HeteroSpec::new(&g, fixed_a(&g), 0, fixed_a(&g), 0);
        let en = hetero_enumerate(&g, &spec, 2, 100).unwrap();
        let words: Vec<String> = en.pieces[0]
            .middle_paths
            .iter()
            .map(|w| g.word_names(w).concat())
            .collect();
        assert_eq!(words, ["aaaa", "aabc", "abca", "bcaa", "bcbc"]);
        let x = fixed_a(&g);
        for z in en.points(&g, &spec) {
            assert!(z.agrees_left_of(&x, -2) && z.agrees_right_of(&x, 3));
        }
        assert!(matches!(
            hetero_enumerate(&g, &spec, 2, 0),
            Err(Error::CapExceeded { cap: 0, .. })
        ));
    }

    #[test]
    fn empirical_examples() {
        let g = Graph::full_shift(2);
        let z = ShiftPoint::periodic(&g, vec![0]).unwrap();
        let spec = HeteroSpec::new(&g, z.clone(), 0, z, 0);
        let e = CenteredCylinder::from_names(&g, &["0", "1"]).unwrap();
        for k in 2..8 {
            assert_eq!(empirical_cylinder_mass(&g, &spec, k, &e).unwrap(), r(1, 4));
        }

        let g = catalog::golden_mean();
        let spec = HeteroSpec::new(&g, fixed_a(&g), 0, fixed_a(&g), 0);
        let aa = CenteredCylinder::from_names(&g, &["a", "a"]).unwrap();
        assert_eq!(
            empirical_cylinder_mass(&g, &spec, 3, &aa).unwrap(),
            r(4, 13)
        );
        assert_eq!(
            empirical_cylinder_mass(&g, &spec, 4, &aa).unwrap(),
            r(9, 34)
        );
        assert_eq!(
            empirical_by_enumeration(&g, &spec, 4, &aa, 1000).unwrap(),
            r(9, 34)
        );
        assert!(matches!(
            empirical_cylinder_mass(&g, &spec, 0, &aa),
            Err(Error::WindowTooWide { .. })
        ));
    }

    #[test]
    fn empty_sets_leave_the_measure_undefined() {
        let g = catalog::period_two();
        let x = ShiftPoint::from_names(&g, &["p", "r"], &[], &["p", "r"], 0).unwrap();
        // i = target(p) = 2, j = source(r) = 2 with odd middle length
        let spec = HeteroSpec::new(&g, x.clone(), 0, x.shifted(1), 1);
        assert!(hetero_count(&g, &spec, 3).unwrap().is_zero());
        let e = CenteredCylinder::from_names(&g, &["p", "r"]).unwrap();
        assert_eq!(
            empirical_cylinder_mass(&g, &spec, 3, &e),
            Err(Error::EmptyHeteroclinicSet(3))
        );
        let pd = PerronData::compute(&g).unwrap();
        let series = ratio_and_entropy_series(&g, &pd, &spec, 6).unwrap();
        assert!(series.all_empty());
        assert!(series.rows.iter().all(|r| r.entropy_est.is_none()));
    }

    #[test]
    fn series_examples() {
        let g = Graph::full_shift(2);
        let pd = PerronData::compute(&g).unwrap();
        let z = ShiftPoint::periodic(&g, vec![1]).unwrap();
        let spec = HeteroSpec::new(&g, z.clone(), 0, z, 0);
        for row in ratio_and_entropy_series(&g, &pd, &spec, 30).unwrap().rows {
            assert_eq!(row.scaled, 1.0);
            assert_eq!(row.target, 1.0);
            assert!((row.entropy_est.unwrap() - 2f64.ln()).abs() < 1e-15);
        }

        let g = catalog::golden_mean();
        let pd = PerronData::compute(&g).unwrap();
        let spec = HeteroSpec::new(&g, fixed_a(&g), 0, fixed_a(&g), 0);
        let s = ratio_and_entropy_series(&g, &pd, &spec, 50).unwrap();
        assert!(s.row(15).unwrap().abs_err < 1e-8);
        assert!((s.row(15).unwrap().target - 0.7236067977499789).abs() < 1e-12);
        assert!((s.row(50).unwrap().entropy_est.unwrap() - pd.entropy()).abs() < 0.01);
    }

    #[test]
    fn weak_star_examples() {
        let g = Graph::full_shift(2);
        let pd = PerronData::compute(&g).unwrap();
        let z = ShiftPoint::periodic(&g, vec![0]).unwrap();
        let spec = HeteroSpec::new(&g, z.clone(), 0, z, 0);
        assert_eq!(
            weak_star_report(&g, &pd, &spec, 2, 2)
                .unwrap()
                .sup_deviation,
            0.0
        );

        let g = catalog::golden_mean();
        let pd = PerronData::compute(&g).unwrap();
        let spec = HeteroSpec::new(&g, fixed_a(&g), 0, fixed_a(&g), 0);
        let rep = weak_star_report(&g, &pd, &spec, 25, 3).unwrap();
        assert!(rep.sup_deviation < 1e-6);
        assert_eq!(rep.rows.len(), 5 + 13 + 34);
    }

    #[test]
    fn unions_add_over_pieces() {
        let g = catalog::golden_mean();
        let x1 = fixed_a(&g);
        let x2 = ShiftPoint::from_names(&g, &["b", "c"], &[], &["a"], 0).unwrap();
        let b1 = RayCylinder::unstable(&g, x1.clone(), 0);
        let b2 = RayCylinder::unstable(&g, x2.clone(), 0);
        let c = RayCylinder::stable(&g, x1.clone(), 1);
        let spec = HeteroSpec::union(vec![b1.clone(), b2.clone()], vec![c.clone()]).unwrap();
        for k in 1..8 {
            let parts = hetero_count(
                &g,
                &HeteroSpec::union(vec![b1.clone()], vec![c.clone()]).unwrap(),
                k,
            )
            .unwrap()
                + hetero_count(
                    &g,
                    &HeteroSpec::union(vec![b2.clone()], vec![c.clone()]).unwrap(),
                    k,
                )
                .unwrap();
            assert_eq!(hetero_count(&g, &spec, k).unwrap(), parts);
        }
        assert_eq!(
            HeteroSpec::union(vec![b1.clone(), b1], vec![c]),
            Err(Error::OverlappingPieces)
        );
    }
}
