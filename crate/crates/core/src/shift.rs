//! Points of an edge shift, the shift action, the bracket, and cylinders.
//!
//! Index conventions used throughout the crate:
//!
//! * `(shift z)_t = z_{t+1}`;
//! * a centered cylinder of halfwidth `l` fixes coordinates `-l+1 ..= l`;
//! * the unstable ray `Σ^u_n(x)` fixes `z_t = x_t` for every `t <= n`;
//! * the stable ray `Σ^s_m(y)` fixes `z_t = y_t` for every `t >= -m+1`;
//! * the bracket glues at the boundary between coordinates 0 and 1.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

/// JSON form of a point: edge ids for the three words plus `core_start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSpec {
    pub left_cycle: Vec<String>,
    #[serde(default)]
    pub core: Vec<String>,
    pub right_cycle: Vec<String>,
    #[serde(default)]
    pub core_start: i64,
}

/// An eventually periodic bi-infinite edge path.
///
/// Coordinate `t` holds `core[t - core_start]` on the core window, the left
/// cycle repeated (ending at `core_start - 1`) before it, and the right cycle
/// repeated (starting at the end of the core) after it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftPoint {
    left_cycle: Vec<EdgeId>,
    core: Vec<EdgeId>,
    right_cycle: Vec<EdgeId>,
    core_start: i64,
}

impl ShiftPoint {
    pub fn new(
        g: &Graph,
        left_cycle: Vec<EdgeId>,
        core: Vec<EdgeId>,
        right_cycle: Vec<EdgeId>,
        core_start: i64,
    ) -> Result<ShiftPoint> {
        if left_cycle.is_empty() || right_cycle.is_empty() {
            return Err(Error::EmptyWord);
        }
        // one period of each cycle, wrapped, plus the junctions
        for cycle in [&left_cycle, &right_cycle] {
            let mut closed = cycle.clone();
            closed.push(cycle[0]);
            g.check_path(&closed)?;
        }
        let mut line = vec![*left_cycle.last().expect("nonempty")];
        line.extend(&core);
        line.push(right_cycle[0]);
        g.check_path(&line)?;
        Ok(ShiftPoint {
            left_cycle,
            core,
            right_cycle,
            core_start,
        })
    }

    /// Builds a point from edge ids.
    pub fn from_names(
        g: &Graph,
        left_cycle: &[&str],
        core: &[&str],
        right_cycle: &[&str],
        core_start: i64,
    ) -> Result<ShiftPoint> {
        ShiftPoint::new(
            g,
            g.word(left_cycle)?,
            g.word(core)?,
            g.word(right_cycle)?,
            core_start,
        )
    }

    /// The periodic point `(word)^∞` with `z_0 = word[0]`.
    pub fn periodic(g: &Graph, word: Vec<EdgeId>) -> Result<ShiftPoint> {
        ShiftPoint::new(g, word.clone(), Vec::new(), word, 0)
    }

    pub fn from_spec(g: &Graph, spec: &PointSpec) -> Result<ShiftPoint> {
        let names =
            |w: &[String]| -> Result<Vec<EdgeId>> { w.iter().map(|n| g.edge_id(n)).collect() };
        ShiftPoint::new(
            g,
            names(&spec.left_cycle)?,
            names(&spec.core)?,
            names(&spec.right_cycle)?,
            spec.core_start,
        )
    }

    pub fn from_json(g: &Graph, text: &str) -> Result<ShiftPoint> {
        let spec: PointSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        ShiftPoint::from_spec(g, &spec)
    }

    pub fn to_spec(&self, g: &Graph) -> PointSpec {
        PointSpec {
            left_cycle: g.word_names(&self.left_cycle),
            core: g.word_names(&self.core),
            right_cycle: g.word_names(&self.right_cycle),
            core_start: self.core_start,
        }
    }

    pub fn core_start(&self) -> i64 {
        self.core_start
    }

    /// First coordinate of the right-cycle region.
    pub fn core_end(&self) -> i64 {
        self.core_start + self.core.len() as i64
    }

    pub fn left_cycle(&self) -> &[EdgeId] {
        &self.left_cycle
    }

    pub fn core(&self) -> &[EdgeId] {
        &self.core
    }

    pub fn right_cycle(&self) -> &[EdgeId] {
        &self.right_cycle
    }

    /// The edge at coordinate `t`.
    pub fn coordinate(&self, t: i64) -> EdgeId {
        if t < self.core_start {
            let len = self.left_cycle.len() as i64;
            self.left_cycle[(t - self.core_start).rem_euclid(len) as usize]
        } else if t < self.core_end() {
            self.core[(t - self.core_start) as usize]
        } else {
            let len = self.right_cycle.len() as i64;
            self.right_cycle[(t - self.core_end()).rem_euclid(len) as usize]
        }
    }

    /// Coordinates `lo ..= hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<EdgeId> {
        (lo..=hi).map(|t| self.coordinate(t)).collect()
    }

    /// `shift^s` applied to the point: `result_t = self_{t+s}`.
    pub fn shifted(&self, s: i64) -> ShiftPoint {
        ShiftPoint {
            core_start: self.core_start - s,
            ..self.clone()
        }
    }

    pub fn agrees_on(&self, other: &ShiftPoint, lo: i64, hi: i64) -> bool {
        (lo..=hi).all(|t| self.coordinate(t) == other.coordinate(t))
    }

    /// Agreement at every `t <= hi`.
    pub fn agrees_left_of(&self, other: &ShiftPoint, hi: i64) -> bool {
        let period = self.left_cycle.len().lcm(&other.left_cycle.len()) as i64;
        let lo = self.core_start.min(other.core_start).min(hi + 1) - period;
        self.agrees_on(other, lo, hi)
    }

    /// Agreement at every `t >= lo`.
    pub fn agrees_right_of(&self, other: &ShiftPoint, lo: i64) -> bool {
        let period = self.right_cycle.len().lcm(&other.right_cycle.len()) as i64;
        let hi = self.core_end().max(other.core_end()).max(lo - 1) + period;
        self.agrees_on(other, lo, hi)
    }

    /// Coordinatewise equality of the bi-infinite sequences.
    pub fn same_sequence(&self, other: &ShiftPoint) -> bool {
        self.agrees_left_of(other, 0) && self.agrees_right_of(other, 1)
    }

    /// Glues `past` (coordinates `t <= past_end`), then `middle`, then
    /// `future` (every later coordinate). `None` if the result is not a path.
    pub fn splice(
        g: &Graph,
        past: &ShiftPoint,
        past_end: i64,
        middle: &[EdgeId],
        future: &ShiftPoint,
    ) -> Option<ShiftPoint> {
        let future_from = past_end + middle.len() as i64 + 1;
        let lo = past.core_start.min(past_end + 1);
        let hi = future.core_end().max(future_from);
        let core = (lo..hi)
            .map(|t| {
                if t <= past_end {
                    past.coordinate(t)
                } else if t < future_from {
                    middle[(t - past_end - 1) as usize]
                } else {
                    future.coordinate(t)
                }
            })
            .collect();
        let left = rotate(&past.left_cycle, lo - past.core_start);
        let right = rotate(&future.right_cycle, hi - future.core_end());
        ShiftPoint::new(g, left, core, right, lo).ok()
    }

    /// Source vertex of the edge at coordinate 0.
    pub fn base_vertex(&self, g: &Graph) -> VertexId {
        g.source(self.coordinate(0))
    }
}

fn rotate(cycle: &[EdgeId], offset: i64) -> Vec<EdgeId> {
    let len = cycle.len() as i64;
    (0..len)
        .map(|i| cycle[(i + offset).rem_euclid(len) as usize])
        .collect()
}

/// `[x, y]`: the point with `y`'s coordinates at `t <= 0` and `x`'s at
/// `t >= 1`. Defined when the target of `y_0` is the source of `x_1`.
pub fn bracket(g: &Graph, x: &ShiftPoint, y: &ShiftPoint) -> Option<ShiftPoint> {
    if g.target(y.coordinate(0)) != g.source(x.coordinate(1)) {
        return None;
    }
    ShiftPoint::splice(g, y, 0, &[], x)
}

/// The cylinder fixing coordinates `-l+1 ..= l` to a path `word` of length `2l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CenteredCylinder {
    word: Vec<EdgeId>,
    left_anchor: VertexId,
    right_anchor: VertexId,
}

impl CenteredCylinder {
    pub fn new(g: &Graph, word: Vec<EdgeId>) -> Result<CenteredCylinder> {
        if word.is_empty() || !word.len().is_multiple_of(2) {
            return Err(Error::BadHalfwidth(word.len()));
        }
        g.check_path(&word)?;
        Ok(CenteredCylinder {
            left_anchor: g.source(word[0]),
            right_anchor: g.target(*word.last().expect("nonempty")),
            word,
        })
    }

    pub fn from_names(g: &Graph, names: &[&str]) -> Result<CenteredCylinder> {
        CenteredCylinder::new(g, g.word(names)?)
    }

    /// Every centered cylinder of halfwidth `l`.
    pub fn all(g: &Graph, l: usize) -> Vec<CenteredCylinder> {
        g.all_words(2 * l)
            .into_iter()
            .map(|w| CenteredCylinder::new(g, w).expect("path words"))
            .collect()
    }

    pub fn halfwidth(&self) -> usize {
        self.word.len() / 2
    }

    pub fn word(&self) -> &[EdgeId] {
        &self.word
    }

    /// Source of the edge at coordinate `-l+1`.
    pub fn left_anchor(&self) -> VertexId {
        self.left_anchor
    }

    /// Target of the edge at coordinate `l`.
    pub fn right_anchor(&self) -> VertexId {
        self.right_anchor
    }

    /// First fixed coordinate, `-l+1`.
    pub fn first_coordinate(&self) -> i64 {
        1 - self.halfwidth() as i64
    }

    pub fn edge_at(&self, t: i64) -> Option<EdgeId> {
        let idx = t - self.first_coordinate();
        (0..self.word.len() as i64)
            .contains(&idx)
            .then(|| self.word[idx as usize])
    }

    pub fn contains(&self, z: &ShiftPoint) -> bool {
        let lo = self.first_coordinate();
        self.word
            .iter()
            .enumerate()
            .all(|(k, &e)| z.coordinate(lo + k as i64) == e)
    }

    /// Matches against a function giving coordinates.
    pub fn matches<F: Fn(i64) -> EdgeId>(&self, coordinate: F) -> bool {
        let lo = self.first_coordinate();
        self.word
            .iter()
            .enumerate()
            .all(|(k, &e)| coordinate(lo + k as i64) == e)
    }

    /// Refinements of halfwidth `l + 1`: one edge added on each side.
    pub fn refinements(&self, g: &Graph) -> Vec<CenteredCylinder> {
        let mut out = Vec::new();
        for &before in g.in_edges(self.left_anchor) {
            for &after in g.out_edges(self.right_anchor) {
                let mut w = Vec::with_capacity(self.word.len() + 2);
                w.push(before);
                w.extend(&self.word);
                w.push(after);
                out.push(CenteredCylinder::new(g, w).expect("extends a path"));
            }
        }
        out
    }

    /// `shift^-1(E)` as cylinders of halfwidth `l + 1`: the word moves one
    /// place right and the two leftmost coordinates are free.
    pub fn shift_preimage(&self, g: &Graph) -> Vec<CenteredCylinder> {
        let mut out = Vec::new();
        for &second in g.in_edges(self.left_anchor) {
            for &first in g.in_edges(g.source(second)) {
                let mut w = vec![first, second];
                w.extend(&self.word);
                out.push(CenteredCylinder::new(g, w).expect("extends a path"));
            }
        }
        out
    }

    pub fn display(&self, g: &Graph) -> String {
        g.word_names(&self.word).join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Unstable,
    Stable,
}

/// `Σ^u_n(x)` or `Σ^s_m(y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RayCylinder {
    side: Side,
    base: ShiftPoint,
    parameter: i64,
    anchor: VertexId,
}

impl RayCylinder {
    pub fn new(g: &Graph, side: Side, base: ShiftPoint, parameter: i64) -> RayCylinder {
        let anchor = match side {
            Side::Unstable => g.target(base.coordinate(parameter)),
            Side::Stable => g.source(base.coordinate(1 - parameter)),
        };
        RayCylinder {
            side,
            base,
            parameter,
            anchor,
        }
    }

    pub fn unstable(g: &Graph, base: ShiftPoint, n: i64) -> RayCylinder {
        RayCylinder::new(g, Side::Unstable, base, n)
    }

    pub fn stable(g: &Graph, base: ShiftPoint, m: i64) -> RayCylinder {
        RayCylinder::new(g, Side::Stable, base, m)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn base(&self) -> &ShiftPoint {
        &self.base
    }

    pub fn parameter(&self) -> i64 {
        self.parameter
    }

    /// `target(x_n)` for unstable rays, `source(y_{-m+1})` for stable ones.
    pub fn anchor(&self) -> VertexId {
        self.anchor
    }

    /// The image of the ray under `shift^s`.
    pub fn shifted(&self, g: &Graph, s: i64) -> RayCylinder {
        let parameter = match self.side {
            Side::Unstable => self.parameter - s,
            Side::Stable => self.parameter + s,
        };
        RayCylinder::new(g, self.side, self.base.shifted(s), parameter)
    }

    pub fn contains(&self, z: &ShiftPoint) -> bool {
        match self.side {
            Side::Unstable => z.agrees_left_of(&self.base, self.parameter),
            Side::Stable => z.agrees_right_of(&self.base, 1 - self.parameter),
        }
    }

    /// Two rays on the same side are either nested or disjoint.
    pub fn is_disjoint_from(&self, other: &RayCylinder) -> bool {
        assert_eq!(self.side, other.side, "rays on different sides");
        match self.side {
            Side::Unstable => !self
                .base
                .agrees_left_of(&other.base, self.parameter.min(other.parameter)),
            Side::Stable => !self
                .base
                .agrees_right_of(&other.base, 1 - self.parameter.min(other.parameter)),
        }
    }
}

/// The local product `[B, C]` of an unstable ray `B = Σ^u_n(x)` and a stable
/// ray `C = Σ^s_m(y)` with `n, m >= 0`: the points whose coordinates
/// `-m+1 ..= 0` follow `y` and whose coordinates `1 ..= n` follow `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSet {
    unstable: RayCylinder,
    stable: RayCylinder,
    /// `y_{-m+1} .. y_0` followed by `x_1 .. x_n`, when the junctions meet.
    constraint: Option<Vec<EdgeId>>,
}

impl ProductSet {
    pub fn new(g: &Graph, unstable: &RayCylinder, stable: &RayCylinder) -> Result<ProductSet> {
        if unstable.side != Side::Unstable || stable.side != Side::Stable {
            return Err(Error::WrongSide);
        }
        let (n, m) = (unstable.parameter, stable.parameter);
        if n < 0 || m < 0 {
            return Err(Error::Invalid(
                "local product needs nonnegative ray parameters".into(),
            ));
        }
        let junction_ok =
            g.target(stable.base.coordinate(0)) == g.target(unstable.base.coordinate(0));
        let constraint = junction_ok.then(|| {
            let mut w = stable.base.window(1 - m, 0);
            w.extend(unstable.base.window(1, n));
            w
        });
        Ok(ProductSet {
            unstable: unstable.clone(),
            stable: stable.clone(),
            constraint,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.constraint.is_none()
    }

    pub fn unstable(&self) -> &RayCylinder {
        &self.unstable
    }

    pub fn stable(&self) -> &RayCylinder {
        &self.stable
    }

    /// `[B, C]` as a disjoint union of centered cylinders of halfwidth
    /// `max(n, m, 1)`.
    pub fn cylinders(&self, g: &Graph) -> Vec<CenteredCylinder> {
        let Some(fixed) = &self.constraint else {
            return Vec::new();
        };
        let (n, m) = (self.unstable.parameter, self.stable.parameter);
        let l = n.max(m).max(1);
        let pattern: Vec<Option<EdgeId>> = (1 - l..=l)
            .map(|t| {
                (1 - m..=n)
                    .contains(&t)
                    .then(|| fixed[(t + m - 1) as usize])
            })
            .collect();
        // coordinate 0 sits at index l-1 of the word and must end at the junction
        let junction = g.target(self.unstable.base.coordinate(0));
        words_matching(g, &pattern)
            .into_iter()
            .filter(|w| g.target(w[(l - 1) as usize]) == junction)
            .map(|w| CenteredCylinder::new(g, w).expect("matched words are paths"))
            .collect()
    }
}

/// Every path word agreeing with `pattern` where it is `Some`.
pub fn words_matching(g: &Graph, pattern: &[Option<EdgeId>]) -> Vec<Vec<EdgeId>> {
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(pattern.len());
    fn go(
        g: &Graph,
        pattern: &[Option<EdgeId>],
        word: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        let pos = word.len();
        if pos == pattern.len() {
            out.push(word.clone());
            return;
        }
        let prev = word.last().copied();
        let fits = |e: EdgeId| prev.is_none_or(|p| g.target(p) == g.source(e));
        let candidates: Vec<EdgeId> = match pattern[pos] {
            Some(e) => vec![e],
            None => (0..g.edge_count()).collect(),
        };
        for e in candidates {
            if fits(e) {
                word.push(e);
                go(g, pattern, word, out);
                word.pop();
            }
        }
    }
    go(g, pattern, &mut word, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn make_point_examples() {
        let g = golden();
        let a = g.edge_id("a").unwrap();
        let (b, c) = (g.edge_id("b").unwrap(), g.edge_id("c").unwrap());
        let fixed = ShiftPoint::from_names(&g, &["a"], &[], &["a"], 0).unwrap();
        assert_eq!(fixed.coordinate(-1_000_000), a);
        let two = ShiftPoint::from_names(&g, &["b", "c"], &[], &["b", "c"], 0).unwrap();
        assert_eq!(two.coordinate(0), b);
        assert_eq!(two.coordinate(3), c);
        assert_eq!(two.coordinate(-1), c);
        assert!(matches!(
            ShiftPoint::from_names(&g, &["a"], &["b", "b"], &["a"], 1),
            Err(Error::InconsistentWord(..))
        ));
        let single = ShiftPoint::from_names(&g, &["c", "b"], &["a", "b"], &["c", "a"], 0);
        assert!(single.is_err(), "c a does not close");
        let with_core = ShiftPoint::from_names(&g, &["a"], &["b"], &["c", "b"], 0).unwrap();
        assert_eq!(with_core.coordinate(0), b);
        assert!(ShiftPoint::from_names(&g, &[], &[], &["a"], 0).is_err());
    }

    #[test]
    fn point_json() {
        let g = golden();
        let p = ShiftPoint::from_json(
            &g,
            r#"{"left_cycle":["a"],"core":[],"right_cycle":["a"],"core_start":0}"#,
        )
        .unwrap();
        assert_eq!(ShiftPoint::from_spec(&g, &p.to_spec(&g)).unwrap(), p);
    }

    #[test]
    fn shift_examples() {
        let g = golden();
        let fixed = ShiftPoint::from_names(&g, &["a"], &[], &["a"], 0).unwrap();
        assert!(fixed.shifted(5).same_sequence(&fixed));
        let two = ShiftPoint::from_names(&g, &["b", "c"], &[], &["b", "c"], 0).unwrap();
        assert_eq!(two.shifted(1).coordinate(0), g.edge_id("c").unwrap());
        assert!(two.shifted(3).shifted(-3).same_sequence(&two));
        assert!(!two.shifted(1).same_sequence(&two));
    }

    #[test]
    fn bracket_examples() {
        let g = golden();
        let x = ShiftPoint::from_names(&g, &["a"], &[], &["a"], 0).unwrap();
        let y_c = ShiftPoint::from_names(&g, &["c", "b"], &[], &["c", "b"], 0).unwrap();
        let z = bracket(&g, &x, &y_c).unwrap();
        for t in 1..20 {
            assert_eq!(z.coordinate(t), x.coordinate(t));
        }
        for t in -20..=0 {
            assert_eq!(z.coordinate(t), y_c.coordinate(t));
        }
        assert!(bracket(&g, &x, &x).unwrap().same_sequence(&x));
        let y_b = y_c.shifted(1);
        assert_eq!(y_b.coordinate(0), g.edge_id("b").unwrap());
        assert!(bracket(&g, &x, &y_b).is_none());
    }

    #[test]
    fn cylinder_anchors() {
        let g = golden();
        let e = CenteredCylinder::from_names(&g, &["a", "a"]).unwrap();
        assert_eq!((e.left_anchor(), e.right_anchor()), (0, 0));
        assert_eq!(e.halfwidth(), 1);
        assert!(CenteredCylinder::from_names(&g, &["a"]).is_err());
        assert!(CenteredCylinder::from_names(&g, &["b", "b"]).is_err());

        let fixed = ShiftPoint::from_names(&g, &["a"], &[], &["a"], 0).unwrap();
        assert_eq!(RayCylinder::unstable(&g, fixed, 0).anchor(), 0);
        // y_1 = c
        let y = ShiftPoint::from_names(&g, &["b", "c"], &[], &["b", "c"], 0).unwrap();
        let ray = RayCylinder::stable(&g, y, 0);
        assert_eq!(ray.anchor(), 1);
    }

    #[test]
    fn product_set_examples() {
        let g = Graph::full_shift(2);
        let x = ShiftPoint::from_names(&g, &["0"], &[], &["1"], 0).unwrap();
        let p = ProductSet::new(
            &g,
            &RayCylinder::unstable(&g, x.clone(), 0),
            &RayCylinder::stable(&g, x, 0),
        )
        .unwrap();
        assert_eq!(p.cylinders(&g).len(), 4, "whole space = all 2-words");

        let g = period_two();
        let x = ShiftPoint::from_names(&g, &["p", "r"], &[], &["p", "r"], 0).unwrap();
        let p = ProductSet::new(
            &g,
            &RayCylinder::unstable(&g, x.clone(), 0),
            &RayCylinder::stable(&g, x, 0),
        )
        .unwrap();
        let cyl = p.cylinders(&g);
        assert_eq!(cyl.len(), 4);
        assert!(cyl.iter().all(|c| g.target(c.word()[0]) == 1));

        let g = golden();
        let x = ShiftPoint::from_names(&g, &["a"], &[], &["a"], 0).unwrap();
        let y = ShiftPoint::from_names(&g, &["b", "c"], &[], &["b", "c"], 0).unwrap();
        let b = RayCylinder::unstable(&g, x, 0);
        let c = RayCylinder::stable(&g, y, 0);
        assert_eq!(b.anchor(), 0);
        assert_eq!(c.anchor(), 1);
        assert!(ProductSet::new(&g, &b, &c).unwrap().is_empty());
        assert!(ProductSet::new(&g, &c, &b).is_err());
    }

    #[test]
    fn refinements_extend_both_sides() {
        let g = golden();
        let e = CenteredCylinder::from_names(&g, &["a", "b"]).unwrap();
        let r = e.refinements(&g);
        // in-edges of 1: a, c ; out-edges of 2: c
        assert_eq!(r.len(), 2);
        assert!(r
            .iter()
            .all(|x| x.halfwidth() == 2 && &x.word()[1..3] == e.word()));
    }
}
