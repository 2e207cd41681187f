use std::path::Path;

use serde_json::{json, Value};
use smale::factor::{self, OneBlockCode};
use smale::graph::Graph;
use smale::hetero::{self, irreducible, HeteroSpec};
use smale::parry::{self, MassCheck};
use smale::periodic;
use smale::perron::PerronData;
use smale::shift::{CenteredCylinder, RayCylinder, ShiftPoint};

use crate::report::{count, float, Cell, Table};
use crate::{CapArg, Command, Failure, RayArgs};

type Run = Result<Table, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Graph::from_json(&read(path)?).map_err(|e| in_file(path, e))
}

fn load_point(g: &Graph, path: &Path) -> Result<ShiftPoint, Failure> {
    ShiftPoint::from_json(g, &read(path)?).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, e: smale::Error) -> Failure {
    match Failure::from(e) {
        Failure::Validation(s) => Failure::Validation(format!("{}: {s}", path.display())),
        other => other,
    }
}

fn show(p: &Path) -> String {
    p.display().to_string()
}

/// One parameter per point; an empty list means 0 and a single value is shared.
fn per_point(values: &[i64], points: usize, flag: &str) -> Result<Vec<i64>, Failure> {
    match values.len() {
        0 => Ok(vec![0; points]),
        1 => Ok(vec![values[0]; points]),
        l if l == points => Ok(values.to_vec()),
        l => Err(Failure::Validation(format!(
            "{l} values of -{flag} for {points} points"
        ))),
    }
}

struct Rays {
    spec: HeteroSpec,
    meta: Value,
}

fn build_rays(g: &Graph, args: &RayArgs) -> Result<Rays, Failure> {
    if args.x.is_empty() || args.y.is_empty() {
        return Err(Failure::Validation(
            "at least one --x and one --y are required".into(),
        ));
    }
    let ns = per_point(&args.n, args.x.len(), "n")?;
    let ms = per_point(&args.m, args.y.len(), "m")?;
    let mut unstable = Vec::new();
    for (p, &n) in args.x.iter().zip(&ns) {
        unstable.push(RayCylinder::unstable(g, load_point(g, p)?, n));
    }
    let mut stable = Vec::new();
    for (p, &m) in args.y.iter().zip(&ms) {
        stable.push(RayCylinder::stable(g, load_point(g, p)?, m));
    }
    let spec = HeteroSpec::union(unstable, stable)?;
    let meta = json!({
        "x": args.x.iter().map(|p| show(p)).collect::<Vec<_>>(),
        "n": ns,
        "y": args.y.iter().map(|p| show(p)).collect::<Vec<_>>(),
        "m": ms,
        "spec": spec.to_json(g),
    });
    Ok(Rays { spec, meta })
}

fn cap_or(cap: &CapArg, default: u64) -> u64 {
    cap.cap.unwrap_or(default)
}

fn check_json(c: &MassCheck) -> Value {
    json!({
        "lhs": float(c.lhs),
        "rhs": float(c.rhs),
        "abs_err": float(c.abs_err),
        "config": c.config,
    })
}

pub fn run(command: &Command) -> Run {
    match command {
        Command::Analyze(a) => analyze(&a.graph),
        Command::Perron(a) => perron(&a.graph),
        Command::Parry { graph, word, l_max } => {
            parry_masses(&graph.graph, word.as_deref(), *l_max)
        }
        Command::HeteroCount {
            graph,
            rays,
            k,
            points,
            cap,
        } => hetero_count(&graph.graph, rays, *k, *points, cap),
        Command::HeteroSeries { graph, rays, k_max } => hetero_series(&graph.graph, rays, *k_max),
        Command::WeakStar {
            graph,
            rays,
            k,
            l_max,
        } => weak_star(&graph.graph, rays, *k, *l_max),
        Command::IrreducibleSeries { graph, rays, k_max } => {
            irreducible_series(&graph.graph, rays, *k_max)
        }
        Command::Periodic {
            graph,
            max_period,
            l_max,
            cap,
        } => periodic_measure(&graph.graph, *max_period, *l_max, cap),
        Command::Compare {
            graph,
            rays,
            k,
            max_period,
            l_max,
            cap,
        } => compare(&graph.graph, rays, *k, *max_period, *l_max, cap),
        Command::CodeCheck {
            code,
            period_bound,
            cap,
        } => code_check(code, *period_bound, cap),
        Command::Pushforward { code, l_max, rays } => pushforward(code, *l_max, rays),
    }
}

fn analyze(path: &Path) -> Run {
    let g = load_graph(path)?;
    let decomp = g.structure_analysis();
    let pd = decomp
        .irreducible
        .then(|| PerronData::compute(&g))
        .transpose()?;
    let meta = json!({
        "command": "analyze",
        "graph": show(path),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "irreducible": decomp.irreducible,
        "period": decomp.period(),
        "primitive": decomp.is_primitive(),
        "lambda": pd.as_ref().map(|p| float(p.lambda)),
        "entropy": pd.as_ref().map(|p| float(p.entropy())),
    });
    let mut t = Table::new(&["vertex", "class", "right", "left"], meta);
    for v in 0..g.vertex_count() {
        t.push(vec![
            g.vertex_name(v).into(),
            decomp.class_of(v).map_or(Cell::Missing, count),
            pd.as_ref().map(|p| p.right_at(v)).into(),
            pd.as_ref().map(|p| p.left_at(v)).into(),
        ]);
    }
    Ok(t)
}

fn perron(path: &Path) -> Run {
    let g = load_graph(path)?;
    let pd = PerronData::compute(&g)?;
    let meta = json!({
        "command": "perron",
        "graph": show(path),
        "lambda": float(pd.lambda),
        "entropy": float(pd.entropy()),
        "right_sum": float(pd.right.iter().sum()),
        "left_dot_right": float(pd.left.iter().zip(&pd.right).map(|(l, r)| l * r).sum()),
    });
    let mut t = Table::new(&["vertex", "right", "left"], meta);
    for v in 0..g.vertex_count() {
        t.push(vec![
            g.vertex_name(v).into(),
            pd.right_at(v).into(),
            pd.left_at(v).into(),
        ]);
    }
    Ok(t)
}

fn parry_masses(path: &Path, word: Option<&str>, l_max: usize) -> Run {
    let g = load_graph(path)?;
    let pd = PerronData::compute(&g)?;
    let cylinders = match word {
        Some(w) => {
            let names: Vec<&str> = w.split(',').map(str::trim).collect();
            vec![CenteredCylinder::from_names(&g, &names)?]
        }
        None => {
            if l_max == 0 {
                return Err(Failure::Validation("--l-max must be at least 1".into()));
            }
            (1..=l_max)
                .flat_map(|l| CenteredCylinder::all(&g, l))
                .collect()
        }
    };
    let totals: Vec<Value> = match word {
        Some(_) => Vec::new(),
        None => (1..=l_max)
            .map(|l| float(parry::total_mass(&g, &pd, l)))
            .collect(),
    };
    let meta = json!({
        "command": "parry",
        "graph": show(path),
        "word": word,
        "l_max": word.is_none().then_some(l_max),
        "lambda": float(pd.lambda),
        "total_by_halfwidth": totals,
    });
    let mut t = Table::new(&["cylinder", "halfwidth", "mass"], meta);
    for e in &cylinders {
        t.push(vec![
            e.display(&g).into(),
            count(e.halfwidth()),
            parry::centered_cylinder_mass(&pd, e).value.into(),
        ]);
    }
    Ok(t)
}

fn hetero_count(path: &Path, args: &RayArgs, k: u64, points: bool, cap: &CapArg) -> Run {
    let g = load_graph(path)?;
    let rays = build_rays(&g, args)?;
    let total = hetero::hetero_count(&g, &rays.spec, k)?;
    let cap = cap_or(cap, hetero::DEFAULT_CAP);
    let meta = json!({
        "command": "hetero-count",
        "graph": show(path),
        "rays": rays.meta,
        "k": k,
        "points": points,
        "cap": points.then_some(cap),
        "count": total.to_string(),
    });
    if !points {
        let mut t = Table::new(&["k", "count"], meta);
        t.push(vec![count(k), count(&total)]);
        return Ok(t);
    }
    let listing = hetero::hetero_enumerate(&g, &rays.spec, k, cap)?;
    let reach = rays
        .spec
        .unstable()
        .iter()
        .chain(rays.spec.stable())
        .map(|r| r.parameter().abs())
        .max()
        .unwrap_or(0);
    let (lo, hi) = (1 - k as i64 - reach, k as i64 + reach);
    let mut t = Table::new(&["index", "unstable", "stable", "window"], meta);
    let mut zs = listing.points(&g, &rays.spec).into_iter();
    let mut index = 0u64;
    for piece in &listing.pieces {
        for _ in &piece.middle_paths {
            let z = zs.next().expect("one point per middle path");
            t.push(vec![
                count(index),
                count(piece.unstable_index),
                count(piece.stable_index),
                g.word_names(&z.window(lo, hi)).join(" ").into(),
            ]);
            index += 1;
        }
    }
    Ok(t)
}

fn hetero_series(path: &Path, args: &RayArgs, k_max: u64) -> Run {
    let g = load_graph(path)?;
    let pd = PerronData::compute(&g)?;
    let rays = build_rays(&g, args)?;
    let series = hetero::ratio_and_entropy_series(&g, &pd, &rays.spec, k_max)?;
    if series.all_empty() {
        return Err(Failure::Empty(format!(
            "heteroclinic set is empty for every k <= {k_max}"
        )));
    }
    let meta = json!({
        "command": "hetero-series",
        "graph": show(path),
        "rays": rays.meta,
        "k_max": k_max,
        "lambda": float(series.lambda),
        "entropy": float(series.entropy),
    });
    let mut t = Table::new(
        &["k", "count", "scaled", "target", "abs_err", "entropy_est"],
        meta,
    );
    for r in &series.rows {
        t.push(vec![
            count(r.k),
            count(&r.count),
            r.scaled.into(),
            r.target.into(),
            r.abs_err.into(),
            r.entropy_est.into(),
        ]);
    }
    Ok(t)
}

fn weak_star(path: &Path, args: &RayArgs, k: u64, l_max: usize) -> Run {
    let g = load_graph(path)?;
    let pd = PerronData::compute(&g)?;
    let rays = build_rays(&g, args)?;
    let decomp = g.structure_analysis();
    let period = decomp.period().unwrap_or(1);
    let (rows, total, sup, weights) = if period > 1 {
        let r = irreducible::irreducible_weak_star_report(&g, &pd, &rays.spec, k, l_max, &decomp)?;
        (r.rows, r.count, r.sup_deviation, Some(r.piece_weights))
    } else {
        let r = hetero::weak_star_report(&g, &pd, &rays.spec, k, l_max)?;
        (r.rows, r.count, r.sup_deviation, None)
    };
    let meta = json!({
        "command": "weak-star",
        "graph": show(path),
        "rays": rays.meta,
        "k": k,
        "l_max": l_max,
        "period": period,
        "count": total.to_string(),
        "piece_weights": weights,
        "sup_deviation": float(sup),
    });
    let mut t = Table::new(&["cylinder", "empirical", "parry", "abs_err"], meta);
    for r in rows {
        t.push(vec![
            r.cylinder.into(),
            r.empirical.into(),
            r.parry.into(),
            r.abs_err.into(),
        ]);
    }
    Ok(t)
}

fn irreducible_series(path: &Path, args: &RayArgs, k_max: u64) -> Run {
    let g = load_graph(path)?;
    let pd = PerronData::compute(&g)?;
    let rays = build_rays(&g, args)?;
    let decomp = g.structure_analysis();
    let s = irreducible::irreducible_series(&g, &pd, &rays.spec, k_max, &decomp)?;
    if s.rows.iter().all(|r| r.entropy_est.is_none()) {
        return Err(Failure::Empty(format!(
            "heteroclinic set is empty for every k <= {k_max}"
        )));
    }
    let meta = json!({
        "command": "irreducible-series",
        "graph": show(path),
        "rays": rays.meta,
        "k_max": k_max,
        "period": s.period,
        "lambda": float(s.lambda),
        "component_product": float(s.component_product),
        "x_level_product": float(s.x_level_product),
        "target_component": float(s.target_component),
        "target_x_level": float(s.target_x_level),
        "target_x_level_squared": float(s.target_x_level_squared),
        "discrepancy_factor": float(s.discrepancy_factor),
    });
    let mut t = Table::new(
        &["k", "count", "scaled", "target", "abs_err", "entropy_est"],
        meta,
    );
    for r in &s.rows {
        t.push(vec![
            count(r.k),
            count(&r.count),
            r.scaled.into(),
            r.target.into(),
            r.abs_err.into(),
            r.entropy_est.into(),
        ]);
    }
    Ok(t)
}

fn periodic_measure(path: &Path, max_period: usize, l_max: usize, cap: &CapArg) -> Run {
    let g = load_graph(path)?;
    let pd = PerronData::compute(&g)?;
    if max_period == 0 || l_max == 0 {
        return Err(Failure::Validation(
            "--max-period and --l-max must be at least 1".into(),
        ));
    }
    let cap = cap_or(cap, periodic::DEFAULT_CAP);
    let ens = periodic::enumerate_periodic(&g, max_period, cap)?;
    let mut rows = Vec::new();
    for l in 1..=l_max {
        for e in CenteredCylinder::all(&g, l) {
            let mu = periodic::periodic_hits(&ens, &e) as f64 / ens.total as f64;
            let parry = parry::centered_cylinder_mass(&pd, &e).value;
            rows.push((e.display(&g), mu, parry));
        }
    }
    let sup = rows.iter().map(|r| (r.1 - r.2).abs()).fold(0.0, f64::max);
    let meta = json!({
        "command": "periodic",
        "graph": show(path),
        "max_period": max_period,
        "l_max": l_max,
        "cap": cap,
        "ensemble_size": ens.total,
        "mobius_count": periodic::mobius_count(&g, max_period).to_string(),
        "trace_bound": periodic::estimated_size(&g, max_period).to_string(),
        "orbits_by_period": ens.orbit_histogram(),
        "sup_deviation": float(sup),
    });
    let mut t = Table::new(&["cylinder", "periodic", "parry", "abs_err"], meta);
    for (c, mu, parry) in rows {
        t.push(vec![
            c.into(),
            mu.into(),
            parry.into(),
            (mu - parry).abs().into(),
        ]);
    }
    Ok(t)
}

fn compare(
    path: &Path,
    args: &RayArgs,
    k: u64,
    max_period: usize,
    l_max: usize,
    cap: &CapArg,
) -> Run {
    let g = load_graph(path)?;
    let pd = PerronData::compute(&g)?;
    let rays = build_rays(&g, args)?;
    let cap = cap_or(cap, periodic::DEFAULT_CAP);
    let ens = periodic::enumerate_periodic(&g, max_period, cap)?;
    let r = periodic::compare_constructions(&g, &pd, &rays.spec, k, &ens, l_max)?;
    let meta = json!({
        "command": "compare",
        "graph": show(path),
        "rays": rays.meta,
        "k": k,
        "max_period": max_period,
        "l_max": l_max,
        "cap": cap,
        "ensemble_size": r.ensemble_size,
        "sup_periodic_parry": float(r.sup_periodic_parry),
        "sup_hetero_parry": float(r.sup_hetero_parry),
        "sup_periodic_hetero": float(r.sup_periodic_hetero),
    });
    let mut t = Table::new(&["cylinder", "periodic", "hetero", "parry"], meta);
    for row in r.rows {
        t.push(vec![
            row.cylinder.into(),
            row.periodic.into(),
            row.hetero.into(),
            row.parry.into(),
        ]);
    }
    Ok(t)
}

fn load_code(path: &Path) -> Result<OneBlockCode, Failure> {
    OneBlockCode::load(path).map_err(|e| in_file(path, e))
}

fn code_check(path: &Path, period_bound: usize, cap: &CapArg) -> Run {
    let code = load_code(path)?;
    let kind = code.resolving_type();
    let cap = cap_or(cap, periodic::DEFAULT_CAP);
    let probe = factor::almost_one_to_one_probe(&code, period_bound, cap)?;
    let meta = json!({
        "command": "code-check",
        "code": show(path),
        "period_bound": period_bound,
        "cap": cap,
        "domain": { "vertices": code.domain().vertex_count(), "edges": code.domain().edge_count() },
        "codomain": { "vertices": code.codomain().vertex_count(), "edges": code.codomain().edge_count() },
        "left_resolving": kind.left_resolving,
        "right_resolving": kind.right_resolving,
        "orbits": probe.orbits,
        "points": probe.points,
        "min_fiber": probe.min_fiber,
        "almost_one_to_one_evidence": probe.almost_one_to_one_evidence,
        "note": "fiber sizes over periodic points only; this is evidence, not a degree computation",
    });
    let mut t = Table::new(&["fiber_size", "points"], meta);
    for (size, n) in &probe.histogram {
        t.push(vec![size.as_str().into(), count(n)]);
    }
    Ok(t)
}

fn pushforward(path: &Path, l_max: usize, args: &RayArgs) -> Run {
    if l_max == 0 {
        return Err(Failure::Validation("--l-max must be at least 1".into()));
    }
    let code = load_code(path)?;
    let cod = code.codomain();
    let pd_cod = PerronData::compute(cod)?;
    let pd_dom = factor::pulled_back_perron(&code, &pd_cod)?;
    let su = if args.x.is_empty() && args.y.is_empty() {
        None
    } else {
        if args.x.len() != 1 || args.y.len() != 1 || args.n.len() > 1 || args.m.len() > 1 {
            return Err(Failure::Validation(
                "pushforward takes exactly one --x and one --y".into(),
            ));
        }
        let n = args.n.first().copied().unwrap_or(0);
        let m = args.m.first().copied().unwrap_or(0);
        let b = RayCylinder::unstable(cod, load_point(cod, &args.x[0])?, n);
        let c = RayCylinder::stable(cod, load_point(cod, &args.y[0])?, m);
        let r = factor::pushforward_su_measures(&code, &pd_cod, &b, &c)?;
        Some(json!({
            "n": n,
            "m": m,
            "stable": check_json(&r.stable),
            "unstable": check_json(&r.unstable),
            "components": r.components,
            "bound": r.bound,
        }))
    };
    let checks: Vec<MassCheck> = (1..=l_max)
        .flat_map(|l| CenteredCylinder::all(cod, l))
        .map(|e| factor::pushforward_check(&code, &pd_dom, &pd_cod, &e))
        .collect();
    let sup = checks.iter().map(|c| c.abs_err).fold(0.0, f64::max);
    let kind = code.resolving_type();
    let meta = json!({
        "command": "pushforward",
        "code": show(path),
        "l_max": l_max,
        "left_resolving": kind.left_resolving,
        "right_resolving": kind.right_resolving,
        "sup_deviation": float(sup),
        "su_measures": su,
    });
    let mut t = Table::new(&["cylinder", "codomain", "preimage_sum", "abs_err"], meta);
    for c in checks {
        let name = c.config["cylinder"]
            .as_str()
            .unwrap_or_default()
            .to_string();
        t.push(vec![
            name.into(),
            c.lhs.into(),
            c.rhs.into(),
            c.abs_err.into(),
        ]);
    }
    Ok(t)
}
