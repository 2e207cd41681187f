//! The Parry measure on centered cylinders and its unstable and stable
//! component measures on ray cylinders.
//!
//! With Perron data `(λ, u_r, u_l)`:
//!
//! * `μ(E) = λ^(-2l) u_l(i') u_r(j')` for a centered cylinder of halfwidth `l`
//!   running from `i'` to `j'`;
//! * `μ^u(Σ^u_n(x)) = λ^(-n) u_r(target x_n)`;
//! * `μ^s(Σ^s_m(y)) = λ^(-m) u_l(source y_(-m+1))`.
//!
//! Ray masses are densities of infinite measures and may exceed one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::perron::PerronData;
use crate::shift::{CenteredCylinder, ProductSet, RayCylinder, ShiftPoint, Side};

/// Symbolic form `λ^(-lambda_power) · u_l(left) · u_r(right)`; an absent
/// vertex means the factor is omitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MassForm {
    pub lambda_power: i64,
    pub left: Option<VertexId>,
    pub right: Option<VertexId>,
}

impl MassForm {
    pub fn evaluate(&self, pd: &PerronData) -> f64 {
        let l = self.left.map_or(1.0, |v| pd.left_at(v));
        let r = self.right.map_or(1.0, |v| pd.right_at(v));
        pd.lambda_inv_pow(self.lambda_power) * l * r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureValue {
    pub value: f64,
    pub exact: Option<MassForm>,
}

impl MeasureValue {
    fn from_form(pd: &PerronData, form: MassForm) -> MeasureValue {
        MeasureValue {
            value: form.evaluate(pd),
            exact: Some(form),
        }
    }
}

pub fn centered_cylinder_mass(pd: &PerronData, e: &CenteredCylinder) -> MeasureValue {
    MeasureValue::from_form(
        pd,
        MassForm {
            lambda_power: 2 * e.halfwidth() as i64,
            left: Some(e.left_anchor()),
            right: Some(e.right_anchor()),
        },
    )
}

pub fn ray_cylinder_mass(pd: &PerronData, r: &RayCylinder) -> MeasureValue {
    let form = match r.side() {
        Side::Unstable => MassForm {
            lambda_power: r.parameter(),
            left: None,
            right: Some(r.anchor()),
        },
        Side::Stable => MassForm {
            lambda_power: r.parameter(),
            left: Some(r.anchor()),
            right: None,
        },
    };
    MeasureValue::from_form(pd, form)
}

/// Total Parry mass of all centered cylinders of halfwidth `l`.
pub fn total_mass(g: &Graph, pd: &PerronData, l: usize) -> f64 {
    CenteredCylinder::all(g, l)
        .iter()
        .map(|e| centered_cylinder_mass(pd, e).value)
        .sum()
}

/// Two numbers that should agree, with the parameters that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub config: serde_json::Value,
}

impl MassCheck {
    pub fn new(lhs: f64, rhs: f64, config: serde_json::Value) -> MassCheck {
        MassCheck {
            lhs,
            rhs,
            abs_err: (lhs - rhs).abs(),
            config,
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.abs_err <= tol
    }
}

fn ray_config(g: &Graph, r: &RayCylinder) -> serde_json::Value {
    serde_json::json!({
        "side": r.side(),
        "parameter": r.parameter(),
        "anchor": g.vertex_name(r.anchor()),
        "base": r.base().to_spec(g),
    })
}

/// `μ([B, C])` summed over the cylinder decomposition against
/// `μ^u(B) μ^s(C)`.
pub fn product_mass_check(g: &Graph, pd: &PerronData, p: &ProductSet) -> Result<MassCheck> {
    if p.is_empty() {
        return Err(Error::Invalid("product set is empty".into()));
    }
    let lhs = p
        .cylinders(g)
        .iter()
        .map(|e| centered_cylinder_mass(pd, e).value)
        .sum();
    let rhs = ray_cylinder_mass(pd, p.unstable()).value * ray_cylinder_mass(pd, p.stable()).value;
    let config = serde_json::json!({
        "unstable": ray_config(g, p.unstable()),
        "stable": ray_config(g, p.stable()),
    });
    Ok(MassCheck::new(lhs, rhs, config))
}

/// The base point of `r` carried to `other` by the holonomy of the bracket.
///
/// An unstable ray `Σ^u_n(x)` keeps `x` after the cut `min(n, 0)` and takes
/// `other` up to it; a stable ray `Σ^s_m(y)` keeps `y` up to the cut
/// `max(-m, 0)` and takes `other` after it. With a cut at 0 these are the
/// brackets `[x, other]` and `[other, y]`. `None` when the glued sequence is
/// not a path.
pub fn transported_base(g: &Graph, r: &RayCylinder, other: &ShiftPoint) -> Option<ShiftPoint> {
    let base = r.base();
    match r.side() {
        Side::Unstable => ShiftPoint::splice(g, other, r.parameter().min(0), &[], base),
        Side::Stable => ShiftPoint::splice(g, base, (-r.parameter()).max(0), &[], other),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformalityReport {
    /// Mass of `shift(R)` against `λ^±1` times the mass of `R`.
    pub shifted: MassCheck,
    /// Mass after bracket transport against the original mass.
    pub transport: Option<MassCheck>,
}

impl ConformalityReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.shifted.holds(tol) && self.transport.as_ref().is_none_or(|t| t.holds(tol))
    }
}

pub fn conformality_report(
    g: &Graph,
    pd: &PerronData,
    r: &RayCylinder,
    transport_to: Option<&ShiftPoint>,
) -> ConformalityReport {
    let mass = ray_cylinder_mass(pd, r).value;
    let image = r.shifted(g, 1);
    let factor = match r.side() {
        Side::Unstable => pd.lambda,
        Side::Stable => pd.lambda.recip(),
    };
    let shifted = MassCheck::new(
        ray_cylinder_mass(pd, &image).value,
        factor * mass,
        serde_json::json!({ "ray": ray_config(g, r), "factor": factor }),
    );
    let transport = transport_to
        .and_then(|other| transported_base(g, r, other))
        .map(|base| {
            let moved = RayCylinder::new(g, r.side(), base, r.parameter());
            MassCheck::new(
                ray_cylinder_mass(pd, &moved).value,
                mass,
                serde_json::json!({ "ray": ray_config(g, r), "moved": ray_config(g, &moved) }),
            )
        });
    ConformalityReport { shifted, transport }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::ShiftPoint;

    fn golden() -> Graph {
        Graph::from_json(
            r#"{"vertices":["1","2"],"edges":[{"id":"a","from":"1","to":"1"},
            {"id":"b","from":"1","to":"2"},{"id":"c","from":"2","to":"1"}]}"#,
        )
        .unwrap()
    }

    fn period_two() -> Graph {
        Graph::from_json(
            r#"{"vertices":["1","2"],"edges":[{"id":"p","from":"1","to":"2"},
            {"id":"q","from":"1","to":"2"},{"id":"r","from":"2","to":"1"},
            {"id":"s","from":"2","to":"1"}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn cylinder_examples() {
        let g = Graph::full_shift(2);
        let pd = PerronData::compute(&g).unwrap();
        for e in CenteredCylinder::all(&g, 1) {
            assert_eq!(centered_cylinder_mass(&pd, &e).value, 0.25);
        }

        let g = golden();
        let pd = PerronData::compute(&g).unwrap();
        let aa = CenteredCylinder::from_names(&g, &["a", "a"]).unwrap();
        let m = centered_cylinder_mass(&pd, &aa);
        // frequency of "aa" at a fixed window among paths of length 60
        assert!((m.value - 0.27639320225002106).abs() < 1e-12);
        assert_eq!(
            m.exact,
            Some(MassForm {
                lambda_power: 2,
                left: Some(0),
                right: Some(0)
            })
        );

        let g = period_two();
        let pd = PerronData::compute(&g).unwrap();
        let pr = CenteredCylinder::from_names(&g, &["p", "r"]).unwrap();
        assert!((centered_cylinder_mass(&pd, &pr).value - 0.125).abs() < 1e-15);
    }

    #[test]
    fn ray_examples() {
        let g = Graph::full_shift(2);
        let pd = PerronData::compute(&g).unwrap();
        let x = ShiftPoint::periodic(&g, vec![0]).unwrap();
        assert_eq!(
            ray_cylinder_mass(&pd, &RayCylinder::unstable(&g, x, 0)).value,
            1.0
        );

        let g = golden();
        let pd = PerronData::compute(&g).unwrap();
        let x = ShiftPoint::from_names(&g, &["a"], &[], &["a"], 0).unwrap();
        let u = ray_cylinder_mass(&pd, &RayCylinder::unstable(&g, x.clone(), 2));
        assert!((u.value - 0.23606797749978972).abs() < 1e-12);
        let s = ray_cylinder_mass(&pd, &RayCylinder::stable(&g, x, 0));
        assert!((s.value - 1.1708203932499368).abs() < 1e-12);
    }

    #[test]
    fn product_examples() {
        let g = Graph::full_shift(2);
        let pd = PerronData::compute(&g).unwrap();
        let x = ShiftPoint::periodic(&g, vec![0]).unwrap();
        let p = ProductSet::new(
            &g,
            &RayCylinder::unstable(&g, x.clone(), 0),
            &RayCylinder::stable(&g, x, 0),
        )
        .unwrap();
        let r = product_mass_check(&g, &pd, &p).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));

        let g = period_two();
        let pd = PerronData::compute(&g).unwrap();
        let x = ShiftPoint::from_names(&g, &["p", "r"], &[], &["p", "r"], 0).unwrap();
        let p = ProductSet::new(
            &g,
            &RayCylinder::unstable(&g, x.clone(), 0),
            &RayCylinder::stable(&g, x, 0),
        )
        .unwrap();
        let r = product_mass_check(&g, &pd, &p).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-14 && (r.rhs - 0.5).abs() < 1e-14);

        let g = golden();
        let pd = PerronData::compute(&g).unwrap();
        let x = ShiftPoint::from_names(&g, &["a"], &[], &["a"], 0).unwrap();
        let p = ProductSet::new(
            &g,
            &RayCylinder::unstable(&g, x.clone(), 0),
            &RayCylinder::stable(&g, x, 0),
        )
        .unwrap();
        let r = product_mass_check(&g, &pd, &p).unwrap();
        assert!((r.rhs - 0.7236067977499789).abs() < 1e-12);
        assert!(r.holds(1e-12));
    }

    #[test]
    fn conformality_examples() {
        let g = golden();
        let pd = PerronData::compute(&g).unwrap();
        let x = ShiftPoint::from_names(&g, &["a"], &[], &["a"], 0).unwrap();
        let ray = RayCylinder::unstable(&g, x.clone(), 2);
        assert_eq!(ray.shifted(&g, 1).parameter(), 1);
        assert_eq!(ray.shifted(&g, 1).anchor(), ray.anchor());
        let rep = conformality_report(&g, &pd, &ray, None);
        assert!(rep.shifted.holds(1e-12));

        // x'_0 = c ends at vertex 1, like x_0 = a
        let other = ShiftPoint::from_names(&g, &["b", "c"], &[], &["b", "c"], -1).unwrap();
        assert_eq!(other.coordinate(0), g.edge_id("c").unwrap());
        let rep = conformality_report(&g, &pd, &RayCylinder::unstable(&g, x, 0), Some(&other));
        assert!(rep.transport.expect("bracket defined").holds(1e-12));

        let g = Graph::full_shift(2);
        let pd = PerronData::compute(&g).unwrap();
        let y = ShiftPoint::periodic(&g, vec![1]).unwrap();
        let rep = conformality_report(&g, &pd, &RayCylinder::stable(&g, y, 3), None);
        assert_eq!(rep.shifted.lhs, 1.0 / 16.0);
        assert_eq!(rep.shifted.rhs, 0.5 / 8.0);
    }

    #[test]
    fn normalization_and_additivity() {
        for g in [golden(), period_two(), Graph::full_shift(3)] {
            let pd = PerronData::compute(&g).unwrap();
            for l in 1..=4 {
                assert!((total_mass(&g, &pd, l) - 1.0).abs() < 1e-10);
            }
            for e in CenteredCylinder::all(&g, 2) {
                let m = centered_cylinder_mass(&pd, &e).value;
                let split: f64 = e
                    .refinements(&g)
                    .iter()
                    .map(|r| centered_cylinder_mass(&pd, r).value)
                    .sum();
                let pre: f64 = e
                    .shift_preimage(&g)
                    .iter()
                    .map(|r| centered_cylinder_mass(&pd, r).value)
                    .sum();
                assert!((m - split).abs() < 1e-12);
                assert!((m - pre).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn products_ignore_rescaling() {
        let g = golden();
        let pd = PerronData::compute(&g).unwrap();
        let scaled = pd.rescaled(7.0);
        let x = ShiftPoint::from_names(&g, &["a"], &["b"], &["c", "b"], -1).unwrap();
        let y = ShiftPoint::from_names(&g, &["b", "c"], &[], &["a"], 1).unwrap();
        let p = ProductSet::new(
            &g,
            &RayCylinder::unstable(&g, x, 1),
            &RayCylinder::stable(&g, y, 2),
        )
        .unwrap();
        let a = product_mass_check(&g, &pd, &p).unwrap();
        let b = product_mass_check(&g, &scaled, &p).unwrap();
        assert!((a.lhs - b.lhs).abs() < 1e-14 && (a.rhs - b.rhs).abs() < 1e-14);
        for e in CenteredCylinder::all(&g, 2) {
            let d =
                centered_cylinder_mass(&pd, &e).value - centered_cylinder_mass(&scaled, &e).value;
            assert!(d.abs() < 1e-15);
        }
    }
}
