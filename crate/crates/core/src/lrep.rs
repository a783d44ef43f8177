//! L-representations with exact rational coordinates.
//!
//! An L-shape is a vertical leg rising from its bend to the top endpoint and
//! a horizontal leg running right from the bend to the right endpoint. In a
//! representation the top endpoint of every non-base shape touches the
//! horizontal leg of its red parent and its right endpoint touches the
//! vertical leg of its blue parent.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::PlaneGraph;
use crate::labeling::{embed_from_order, try_step, two_canonical_from_labeling, validate_labeling, EdgeLabeling, TwoCanonicalOrder};
use crate::rational::{format_q, half, one, q, zero, Q};
use crate::report::Report;
use crate::schnyder::{boundary_path, delete_green, validate_realizer, Arc, Color, SchnyderRealizer};

pub type Point = [Q; 2];

fn fmt_p(p: &Point) -> String {
    format!("({}, {})", format_q(&p[0]), format_q(&p[1]))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LShape {
    pub top: Point,
    pub right: Point,
}

/// Where a point sits on a closed L-shape.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spot {
    Top,
    Right,
    Bend,
    /// Relative interior of the vertical leg.
    Vertical,
    /// Relative interior of the horizontal leg.
    Horizontal,
}

impl Spot {
    pub fn is_endpoint(self) -> bool {
        matches!(self, Spot::Top | Spot::Right)
    }

    pub fn is_interior(self) -> bool {
        matches!(self, Spot::Vertical | Spot::Horizontal)
    }
}

impl LShape {
    pub fn new(top: Point, right: Point) -> Self {
        Self { top, right }
    }

    pub fn from_ints(top: [i64; 2], right: [i64; 2]) -> Self {
        Self::new([q(top[0]), q(top[1])], [q(right[0]), q(right[1])])
    }

    pub fn bend(&self) -> Point {
        [self.top[0].clone(), self.right[1].clone()]
    }

    pub fn vertical_len(&self) -> Q {
        &self.top[1] - &self.right[1]
    }

    pub fn horizontal_len(&self) -> Q {
        &self.right[0] - &self.top[0]
    }

    pub fn is_equilateral(&self) -> bool {
        self.vertical_len() == self.horizontal_len()
    }

    /// Leg length of an equilateral shape.
    pub fn leg(&self) -> Option<Q> {
        self.is_equilateral().then(|| self.vertical_len())
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.top[0] < self.right[0] && self.right[1] < self.top[1]
    }

    pub fn locate(&self, p: &Point) -> Option<Spot> {
        let [x, y] = p;
        let [tx, ty] = &self.top;
        let [rx, ry] = &self.right;
        if x == tx && y == ty {
            Some(Spot::Top)
        } else if x == rx && y == ry {
            Some(Spot::Right)
        } else if x == tx && y == ry {
            Some(Spot::Bend)
        } else if x == tx && ry < y && y < ty {
            Some(Spot::Vertical)
        } else if y == ry && tx < x && x < rx {
            Some(Spot::Horizontal)
        } else {
            None
        }
    }

    fn scaled(&self, f: &Q) -> LShape {
        LShape::new(
            [&self.top[0] * f, &self.top[1] * f],
            [&self.right[0] * f, &self.right[1] * f],
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LRepresentation {
    host: PlaneGraph,
    base_edge: [usize; 2],
    shapes: Vec<LShape>,
}

impl LRepresentation {
    pub fn new(host: PlaneGraph, base_edge: [usize; 2], shapes: Vec<LShape>) -> Result<Self> {
        if shapes.len() != host.n() {
            return Err(Error::MalformedInput(format!(
                "{} shapes for {} vertices",
                shapes.len(),
                host.n()
            )));
        }
        if !host.has_edge(base_edge[0], base_edge[1]) {
            return Err(Error::MalformedInput(format!("base edge {base_edge:?} is not an edge")));
        }
        Ok(Self { host, base_edge, shapes })
    }

    pub fn host(&self) -> &PlaneGraph {
        &self.host
    }

    pub fn base_edge(&self) -> [usize; 2] {
        self.base_edge
    }

    pub fn shapes(&self) -> &[LShape] {
        &self.shapes
    }

    pub fn shape(&self, v: usize) -> &LShape {
        &self.shapes[v]
    }

    /// All coordinates multiplied by `f > 0`.
    pub fn scaled(&self, f: &Q) -> LRepresentation {
        LRepresentation {
            host: self.host.clone(),
            base_edge: self.base_edge,
            shapes: self.shapes.iter().map(|s| s.scaled(f)).collect(),
        }
    }

    /// The contact point between path neighbours `a` (earlier) and `b`.
    fn path_contact(&self, a: usize, b: usize) -> Option<Point> {
        let (sa, sb) = (&self.shapes[a], &self.shapes[b]);
        if sa.locate(&sb.top) == Some(Spot::Horizontal) {
            Some(sb.top.clone())
        } else if sb.locate(&sa.right) == Some(Spot::Vertical) {
            Some(sa.right.clone())
        } else {
            None
        }
    }

    /// Corner list of the outer staircase: top of v1, then alternating bends
    /// and contacts along the outer path, ending at the right endpoint of v2.
    pub fn staircase(&self) -> Option<Vec<Point>> {
        let [v1, v2] = self.base_edge;
        let path = boundary_path(&self.host, &vec![true; self.host.n()], v1, v2)?;
        let mut pts = vec![self.shapes[v1].top.clone()];
        for w in path.windows(2) {
            pts.push(self.shapes[w[0]].bend());
            pts.push(self.path_contact(w[0], w[1])?);
        }
        pts.push(self.shapes[v2].bend());
        pts.push(self.shapes[v2].right.clone());
        Some(pts)
    }
}

/// Paper base shapes: v1 top (1,2) right (4,−1); v2 top (3,−1) right (5,−3).
pub fn base_shapes() -> [LShape; 2] {
    [LShape::from_ints([1, 2], [4, -1]), LShape::from_ints([3, -1], [5, -3])]
}

/// Level `c` of the invariant line `x + y = c` used with [`base_shapes`].
pub fn base_level() -> Q {
    one()
}

/// Incremental staircase used by both builders. Segment `k` of the outer
/// path vertex `path[k]`: vertical from the contact above (or the top of v1)
/// down to its bend, horizontal from its bend to the contact on its right
/// (or the right endpoint of v2).
struct Stair {
    path: Vec<usize>,
    contacts: Vec<Point>,
    shapes: Vec<Option<LShape>>,
}

impl Stair {
    fn new(n: usize, v1: usize, v2: usize) -> Self {
        let [s1, s2] = base_shapes();
        let mut shapes = vec![None; n];
        let c = s2.top.clone();
        shapes[v1] = Some(s1);
        shapes[v2] = Some(s2);
        Self {
            path: vec![v1, v2],
            contacts: vec![c],
            shapes,
        }
    }

    fn sh(&self, v: usize) -> &LShape {
        self.shapes[v].as_ref().expect("placed shape")
    }

    /// Horizontal staircase segment at path index `i` as (left, right).
    fn hseg(&self, i: usize) -> (Point, Point) {
        let s = self.sh(self.path[i]);
        let end = if i + 1 < self.path.len() { self.contacts[i].clone() } else { s.right.clone() };
        (s.bend(), end)
    }

    /// Vertical staircase segment at path index `i` as (bottom, top).
    fn vseg(&self, i: usize) -> (Point, Point) {
        let s = self.sh(self.path[i]);
        let start = if i > 0 { self.contacts[i - 1].clone() } else { s.top.clone() };
        (s.bend(), start)
    }

    fn insert(&mut self, w: usize, li: usize, ri: usize, shape: LShape) {
        let (t, r) = (shape.top.clone(), shape.right.clone());
        self.shapes[w] = Some(shape);
        self.path.splice(li + 1..ri, [w]);
        self.contacts.splice(li..ri, [t, r]);
    }

    /// Every staircase segment has its ends strictly on both sides of
    /// `x + y = c`.
    fn crossed_by(&self, c: &Q) -> bool {
        let sum = |p: &Point| &p[0] + &p[1];
        (0..self.path.len()).all(|i| {
            let (b, t) = self.vseg(i);
            let (l, r) = self.hseg(i);
            sum(&b) < *c && *c < sum(&t) && sum(&l) < *c && *c < sum(&r)
        })
    }
}

fn midpoint(a: &Point, b: &Point) -> Point {
    [half(&(&a[0] + &b[0])), half(&(&a[1] + &b[1]))]
}

fn run_builder<F>(g: &PlaneGraph, o: &TwoCanonicalOrder, mut place: F, mut after: impl FnMut(&Stair)) -> Result<LRepresentation>
where
    F: FnMut(&Stair, usize, usize) -> LShape,
{
    let host = embed_from_order(g, o)?;
    let n = host.n();
    let [v1, v2] = o.base_edge;
    let mut st = Stair::new(n, v1, v2);
    let mut placed = vec![false; n];
    placed[v1] = true;
    placed[v2] = true;
    after(&st);
    for &w in &o.order[2..] {
        let step = try_step(&host, &st.path, &placed, w).map_err(Error::InvalidOrder)?;
        let shape = place(&st, step.li, step.ri);
        st.insert(w, step.li, step.ri, shape);
        placed[w] = true;
        after(&st);
    }
    let shapes = st.shapes.into_iter().map(|s| s.expect("every vertex placed")).collect();
    LRepresentation::new(host, [v1, v2], shapes)
}

/// Incremental construction along a 2-canonical order; each new shape puts
/// its endpoints at the midpoints of the two staircase segments it touches.
pub fn build_lrep(g: &PlaneGraph, o: &TwoCanonicalOrder) -> Result<LRepresentation> {
    let rep = run_builder(
        g,
        o,
        |st, li, ri| {
            let (l, r) = st.hseg(li);
            let (b, t) = st.vseg(ri);
            LShape::new(midpoint(&l, &r), midpoint(&b, &t))
        },
        |_| {},
    )?;
    let report = validate_lrep(&rep);
    if !report.is_ok() {
        return Err(Error::InvalidOrder(format!("constructed representation is invalid: {report}")));
    }
    Ok(rep)
}

/// The labeling read off the contacts: the shape touched by the top endpoint
/// is the red parent, the one touched by the right endpoint the blue parent.
pub fn induced_labeling(rep: &LRepresentation) -> Result<EdgeLabeling> {
    let [v1, v2] = rep.base_edge;
    let n = rep.shapes.len();
    let toucher = |w: usize, p: &Point, what: &str| -> Result<Option<usize>> {
        let hits: Vec<(usize, Spot)> = (0..n)
            .filter(|&u| u != w)
            .filter_map(|u| rep.shapes[u].locate(p).map(|s| (u, s)))
            .collect();
        match hits.as_slice() {
            [] => Ok(None),
            [(u, s)] if s.is_interior() => Ok(Some(*u)),
            _ => Err(Error::DegenerateContact(format!(
                "{what} endpoint {} of {w} touches {hits:?}",
                fmt_p(p)
            ))),
        }
    };
    let mut arcs = Vec::new();
    for w in 0..n {
        let s = &rep.shapes[w];
        match toucher(w, &s.top, "top")? {
            Some(u) if !(w == v2 && u == v1) => arcs.push(Arc { tail: w, head: u, color: Color::Red }),
            Some(_) => {}
            None if w == v1 => {}
            None => return Err(Error::DegenerateContact(format!("top endpoint of {w} touches nothing"))),
        }
        match toucher(w, &s.right, "right")? {
            Some(u) => arcs.push(Arc { tail: w, head: u, color: Color::Blue }),
            None if w == v1 || w == v2 => {}
            None => return Err(Error::DegenerateContact(format!("right endpoint of {w} touches nothing"))),
        }
    }
    let el = EdgeLabeling::from_arcs(rep.host.clone(), rep.base_edge, &arcs)?;
    let r = validate_labeling(&el);
    if !r.is_ok() {
        return Err(Error::InvalidLabeling(r.to_string()));
    }
    Ok(el)
}

/// Intersection of two closed axis-parallel segments given by their ends.
enum Meet {
    None,
    Point(Point),
    Overlap(Point, Point),
}

fn meet(a: &(Point, Point), b: &(Point, Point)) -> Meet {
    let lo = |s: &(Point, Point), k: usize| s.0[k].clone().min(s.1[k].clone());
    let hi = |s: &(Point, Point), k: usize| s.0[k].clone().max(s.1[k].clone());
    let x0 = lo(a, 0).max(lo(b, 0));
    let x1 = hi(a, 0).min(hi(b, 0));
    let y0 = lo(a, 1).max(lo(b, 1));
    let y1 = hi(a, 1).min(hi(b, 1));
    if x0 > x1 || y0 > y1 {
        Meet::None
    } else if x0 == x1 && y0 == y1 {
        Meet::Point([x0, y0])
    } else {
        Meet::Overlap([x0, y0], [x1, y1])
    }
}

fn legs(s: &LShape) -> [(Point, Point); 2] {
    [(s.bend(), s.top.clone()), (s.bend(), s.right.clone())]
}

/// Exact checks: non-degenerate legs, interiors pairwise disjoint, contact
/// graph equal to the host, v1 topmost and v2 rightmost, and an outer
/// staircase along the outer path. Contacts in which an endpoint meets a bend
/// or another endpoint are reported under `degenerate`; they count as
/// contacts under the closed reading and not under the interior reading.
pub fn validate_lrep(rep: &LRepresentation) -> Report {
    let mut out = Report::new();
    let g = &rep.host;
    let n = g.n();
    if rep.shapes.len() != n {
        out.fail("shape-count", format!("{} shapes for {n} vertices", rep.shapes.len()));
        return out;
    }
    for (v, s) in rep.shapes.iter().enumerate() {
        if !s.is_nondegenerate() {
            out.fail("legs", format!("shape {v} has a leg of non-positive length"));
        }
    }
    if !out.is_ok() {
        return out;
    }
    let mut touching: BTreeSet<(usize, usize)> = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            let (su, sv) = (&rep.shapes[u], &rep.shapes[v]);
            let mut pts: Vec<Point> = Vec::new();
            for a in &legs(su) {
                for b in &legs(sv) {
                    match meet(a, b) {
                        Meet::None => {}
                        Meet::Point(p) => {
                            if !pts.contains(&p) {
                                pts.push(p);
                            }
                        }
                        Meet::Overlap(p, r) => {
                            out.fail("overlap", format!("{u} and {v} share the segment {}–{}", fmt_p(&p), fmt_p(&r)))
                        }
                    }
                }
            }
            for p in pts {
                let a = su.locate(&p).expect("point lies on u");
                let b = sv.locate(&p).expect("point lies on v");
                let contact = (a.is_endpoint() && b.is_interior()) || (b.is_endpoint() && a.is_interior());
                if contact {
                    touching.insert((u, v));
                } else if a.is_endpoint() || b.is_endpoint() {
                    touching.insert((u, v));
                    out.fail(
                        "degenerate",
                        format!("{u} ({a:?}) meets {v} ({b:?}) at {}; a contact only under the closed reading", fmt_p(&p)),
                    );
                } else {
                    out.fail("overlap", format!("{u} and {v} cross at {}", fmt_p(&p)));
                }
            }
        }
    }
    for &[u, v] in g.edges() {
        if !touching.contains(&(u.min(v), u.max(v))) {
            out.fail("missing-edge", format!("{u}-{v} has no contact"));
        }
    }
    for &(u, v) in &touching {
        if !g.has_edge(u, v) {
            out.fail("extra-contact", format!("{u} and {v} touch but are not adjacent"));
        }
    }
    let [v1, v2] = rep.base_edge;
    for w in 0..n {
        if w != v1 && rep.shapes[w].right[1] >= rep.shapes[v1].right[1] {
            out.fail("base-top", format!("horizontal leg of {w} is not below that of v1={v1}"));
        }
        if w != v2 && rep.shapes[w].top[0] >= rep.shapes[v2].top[0] {
            out.fail("base-right", format!("vertical leg of {w} is not left of that of v2={v2}"));
        }
    }
    match rep.staircase() {
        None => out.fail("staircase", "outer path vertices do not form a staircase"),
        Some(pts) => {
            // Alternating down and right moves, each of positive length.
            for (i, w) in pts.windows(2).enumerate() {
                let ok = if i % 2 == 0 {
                    w[0][0] == w[1][0] && w[0][1] > w[1][1]
                } else {
                    w[0][1] == w[1][1] && w[0][0] < w[1][0]
                };
                if !ok {
                    out.fail("staircase", format!("step {} from {} to {}", i, fmt_p(&w[0]), fmt_p(&w[1])));
                }
            }
        }
    }
    out
}

/// Equivalent equilateral representation. Shapes are rebuilt along a
/// 2-canonical order of the induced labeling, starting from [`base_shapes`];
/// the line `x + y = c` with `c = 1` crosses every staircase segment in its
/// interior throughout. A new shape puts both endpoints on `x + y = c + δ`
/// with `δ` half of the largest value that keeps the endpoints interior to
/// their segments and the bend below the line.
pub fn equilateralize(rep: &LRepresentation) -> Result<LRepresentation> {
    equilateralize_stepwise(rep).map(|(r, _)| r)
}

/// As [`equilateralize`], also reporting after every insertion whether the
/// line crossed all staircase segments in their interiors.
pub fn equilateralize_stepwise(rep: &LRepresentation) -> Result<(LRepresentation, Vec<bool>)> {
    let el = induced_labeling(rep)?;
    let o = two_canonical_from_labeling(&el)?;
    let c = base_level();
    let mut steps = Vec::new();
    let out = run_builder(
        &rep.host,
        &o,
        |st, li, ri| {
            let (_, hr) = st.hseg(li);
            let (_, vt) = st.vseg(ri);
            let ya = &hr[1];
            let xb = &vt[0];
            let sup = (&hr[0] + ya - &c)
                .min(&vt[1] + xb - &c)
                .min(half(&(ya + xb - &c)));
            let d = half(&sup);
            let lvl = &c + &d;
            LShape::new([&lvl - ya, ya.clone()], [xb.clone(), &lvl - xb])
        },
        |st| steps.push(st.crossed_by(&c)),
    )?;
    let again = induced_labeling(&out)?;
    if !again.same_arcs(&el) {
        return Err(Error::InvalidLabeling("equilateral rebuild changed the labeling".into()));
    }
    Ok((out, steps))
}

/// Which vertical leg the leftward extension of `w`'s horizontal leg hits
/// first; `None` means it runs past every shape.
fn extension_target(rep: &LRepresentation, w: usize) -> Result<Option<usize>> {
    let b = rep.shapes[w].bend();
    let mut best: Option<usize> = None;
    for (u, s) in rep.shapes.iter().enumerate() {
        if u == w || s.top[0] >= b[0] || b[1] < s.right[1] || b[1] > s.top[1] {
            continue;
        }
        if best.is_none_or(|x| rep.shapes[x].top[0] < s.top[0]) {
            best = Some(u);
        }
    }
    if let Some(u) = best {
        let s = &rep.shapes[u];
        if b[1] == s.right[1] || b[1] == s.top[1] {
            return Err(Error::DegenerateRep(format!("extension of {w} ends at an end of {u}'s vertical leg")));
        }
    }
    Ok(best)
}

/// Adds the shape of a new vertex vn (id `n`) below-left of everything and
/// extends every horizontal leg leftwards to the first vertical leg. The
/// extensions are the green edges; the result is a triangulation with outer
/// face (v1, v2, vn) and a validated realizer whose red and blue trees are
/// the induced labeling.
pub fn complete_to_triangulation(rep: &LRepresentation) -> Result<(PlaneGraph, SchnyderRealizer)> {
    let el = induced_labeling(rep).map_err(|e| Error::DegenerateRep(e.to_string()))?;
    let n = rep.shapes.len();
    let vn = n;
    let [v1, v2] = rep.base_edge;
    // (slot, key, neighbour); slots follow the clockwise order around a shape
    // starting at its top endpoint.
    let mut slots: Vec<Vec<(u8, Q, usize)>> = vec![Vec::new(); n + 1];
    let mut arcs = Vec::new();
    for a in el.arcs() {
        let s = &rep.shapes[a.tail];
        match a.color {
            Color::Red => {
                slots[a.tail].push((0, zero(), a.head));
                slots[a.head].push((3, -s.top[0].clone(), a.tail));
            }
            _ => {
                slots[a.tail].push((2, zero(), a.head));
                slots[a.head].push((5, s.right[1].clone(), a.tail));
            }
        }
        arcs.push(a);
    }
    slots[v2].push((0, zero(), v1));
    slots[v1].push((3, -rep.shapes[v2].top[0].clone(), v2));
    let mut greens = Vec::new();
    for w in 0..n {
        let t = extension_target(rep, w)?;
        if (w == v1 || w == v2) && t.is_some() {
            return Err(Error::DegenerateRep(format!("extension of outer vertex {w} hits {t:?}")));
        }
        let z = t.unwrap_or(vn);
        let y = rep.shapes[w].right[1].clone();
        slots[w].push((4, zero(), z));
        if z == vn {
            greens.push((-y.clone(), w));
        } else {
            slots[z].push((1, -y, w));
        }
        if w != v1 && w != v2 {
            arcs.push(Arc { tail: w, head: z, color: Color::Green });
        }
    }
    greens.sort();
    let mut rot: Vec<Vec<usize>> = slots[..n]
        .iter()
        .map(|list| {
            let mut l = list.clone();
            l.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
            l.into_iter().map(|(_, _, u)| u).collect()
        })
        .collect();
    let mut last = vec![v1];
    last.extend(greens.iter().filter(|(_, w)| *w != v1 && *w != v2).map(|(_, w)| *w));
    last.push(v2);
    rot.push(last);
    let h = PlaneGraph::from_rotation(rot, Some(vec![v1, v2, vn]))
        .map_err(|e| Error::DegenerateRep(format!("completion is not a plane triangulation: {e}")))?;
    let h = match rep.host.labels() {
        Some(l) => {
            let mut l = l.to_vec();
            l.push("vn".into());
            h.with_labels(Some(l))?
        }
        None => h,
    };
    let r = SchnyderRealizer::from_arcs(h.clone(), [v1, v2, vn], &arcs)?;
    let report = validate_realizer(&r);
    if !report.is_ok() || !h.is_triangulation() {
        return Err(Error::DegenerateRep(format!("completion is not a realizer: {report}")));
    }
    if !delete_green(&r).same_embedding(&rep.host) {
        return Err(Error::DegenerateRep("completion does not restrict to the input graph".into()));
    }
    Ok((h, r))
}
