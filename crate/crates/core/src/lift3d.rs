//! Cuboids over an L-representation: the box of `v` spans its L-shape in the
//! plane and runs from the height of its green parent to its own height.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::PlaneGraph;
use crate::lrep::{complete_to_triangulation, LRepresentation, LShape};
use crate::rational::{format_q, q, zero, Q};
use crate::report::Report;
use crate::schnyder::{
    canonical_order_from_realizer, delete_green, host_id, CanonicalOrder, Color, SchnyderRealizer,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeightKind {
    /// `h(v_i) = −i` along a canonical order.
    Canonical,
    /// `h(v) = h(σn(v)) + |L_v|` with the dummy at 0.
    Cubic,
    /// As `Cubic`, but v1 and v2 stand on vn instead of on the dummy.
    Anchored,
}

/// Heights of the host vertices plus the dummy green root above vn, v1, v2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightAssignment {
    pub h: Vec<Q>,
    pub dummy: Q,
    pub kind: HeightKind,
}

impl HeightAssignment {
    /// Height of the green parent; the dummy for outer vertices.
    pub fn below(&self, r: &SchnyderRealizer, v: usize) -> Q {
        if self.kind == HeightKind::Anchored && (v == r.v1() || v == r.v2()) {
            return self.h[r.vn()].clone();
        }
        r.sigma(Color::Green, v).map_or_else(|| self.dummy.clone(), |p| self.h[p].clone())
    }
}

pub fn heights_from_canonical(co: &CanonicalOrder) -> HeightAssignment {
    let n = co.order.len();
    let mut h = vec![zero(); n];
    for (i, &v) in co.order.iter().enumerate() {
        h[v] = q(-(i as i64 + 1));
    }
    HeightAssignment {
        h,
        dummy: q(-(n as i64 + 1)),
        kind: HeightKind::Canonical,
    }
}

/// Monotonicity conditions: the dummy lies below vn, and every inner vertex
/// sits at or below its red and blue parents and strictly above its green
/// parent.
pub fn validate_heights(r: &SchnyderRealizer, h: &HeightAssignment) -> Report {
    let mut rep = Report::new();
    if h.h.len() != r.host().n() {
        rep.fail("size", format!("{} heights for {} vertices", h.h.len(), r.host().n()));
        return rep;
    }
    if h.dummy >= h.h[r.vn()] {
        rep.fail("dummy", "dummy is not below vn");
    }
    let [red, blue, green] = r.parents();
    for v in (0..r.host().n()).filter(|&v| !r.is_outer(v)) {
        for (c, p) in [("red", &red), ("blue", &blue)] {
            if let Some(p) = p[v] {
                if h.h[p] < h.h[v] {
                    rep.fail("monotone", format!("{c} parent {p} of {v} lies lower"));
                }
            }
        }
        if let Some(p) = green[v] {
            if h.h[p] >= h.h[v] {
                rep.fail("green-below", format!("green parent {p} of {v} is not below it"));
            }
        }
    }
    rep
}

/// Axis-aligned box `[x0,x1]×[y0,y1]×[z0,z1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Box3 {
    pub x: [Q; 2],
    pub y: [Q; 2],
    pub z: [Q; 2],
}

impl Box3 {
    pub fn axes(&self) -> [&[Q; 2]; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn is_cube(&self) -> bool {
        let e: Vec<Q> = self.axes().iter().map(|a| &a[1] - &a[0]).collect();
        e[0] == e[1] && e[1] == e[2]
    }

    pub fn has_square_base(&self) -> bool {
        &self.x[1] - &self.x[0] == &self.y[1] - &self.y[0]
    }
}

/// How two closed boxes meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Touch {
    Disjoint,
    /// Positive-area rectangle.
    Face,
    /// A segment or a point.
    Lower,
    /// Interiors intersect.
    Overlap,
}

pub fn classify(a: &Box3, b: &Box3) -> Touch {
    let mut positive = 0;
    for (p, r) in a.axes().iter().zip(b.axes()) {
        let lo = (&p[0]).max(&r[0]);
        let hi = (&p[1]).min(&r[1]);
        if lo > hi {
            return Touch::Disjoint;
        }
        if lo < hi {
            positive += 1;
        }
    }
    match positive {
        3 => Touch::Overlap,
        2 => Touch::Face,
        _ => Touch::Lower,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuboidRepresentation {
    host: PlaneGraph,
    boxes: Vec<Box3>,
    proper: bool,
}

impl CuboidRepresentation {
    /// Wraps boxes and computes the `proper` flag from the host's edges.
    pub fn new(host: PlaneGraph, boxes: Vec<Box3>) -> Result<Self> {
        if boxes.len() != host.n() {
            return Err(Error::MalformedInput(format!("{} boxes for {} vertices", boxes.len(), host.n())));
        }
        let proper = host.edges().iter().all(|&[u, v]| classify(&boxes[u], &boxes[v]) == Touch::Face);
        Ok(Self { host, boxes, proper })
    }

    pub fn host(&self) -> &PlaneGraph {
        &self.host
    }

    pub fn boxes(&self) -> &[Box3] {
        &self.boxes
    }

    pub fn proper(&self) -> bool {
        self.proper
    }
}

/// The shape of vn: from the bend of v1 down to the level of v2's bend and
/// right to that bend.
pub fn synthesize_vn(rep: &LRepresentation) -> LShape {
    let [v1, v2] = rep.base_edge();
    LShape::new(rep.shape(v1).bend(), rep.shape(v2).bend())
}

/// Shapes indexed by host id, including the synthesized vn.
pub fn host_shapes(rep: &LRepresentation, r: &SchnyderRealizer) -> Result<Vec<LShape>> {
    let vn = r.vn();
    let g = delete_green(r);
    if !g.same_edge_set(rep.host()) || [host_id(vn, rep.base_edge()[0]), host_id(vn, rep.base_edge()[1])] != [r.v1(), r.v2()] {
        return Err(Error::InconsistentInputs("representation is not of the realizer's H∖Sn".into()));
    }
    let mut shapes = vec![synthesize_vn(rep); r.host().n()];
    for (v, s) in rep.shapes().iter().enumerate() {
        shapes[host_id(vn, v)] = s.clone();
    }
    Ok(shapes)
}

/// `Q_v = [x^t, x^r] × [y^r, y^t] × [h(σn(v)), h(v)]`, validated.
pub fn lift_cuboids(rep: &LRepresentation, r: &SchnyderRealizer, h: &HeightAssignment) -> Result<CuboidRepresentation> {
    let shapes = host_shapes(rep, r)?;
    if h.h.len() != r.host().n() {
        return Err(Error::InconsistentInputs(format!("{} heights for {} vertices", h.h.len(), r.host().n())));
    }
    let boxes = shapes
        .iter()
        .enumerate()
        .map(|(v, s)| Box3 {
            x: [s.top[0].clone(), s.right[0].clone()],
            y: [s.right[1].clone(), s.top[1].clone()],
            z: [h.below(r, v), h.h[v].clone()],
        })
        .collect();
    let cr = CuboidRepresentation::new(r.host().clone(), boxes)?;
    let report = validate_cuboids(&cr);
    if !report.is_ok() {
        return Err(Error::InconsistentInputs(format!("lifted boxes are not a contact representation: {report}")));
    }
    Ok(cr)
}

/// Completes `rep` to a triangulation and lifts it with `h(v_i) = −i` along
/// the canonical order of the completed realizer.
pub fn canonical_lift(rep: &LRepresentation) -> Result<(CuboidRepresentation, SchnyderRealizer)> {
    let (_, r) = complete_to_triangulation(rep)?;
    let h = heights_from_canonical(&canonical_order_from_realizer(&r));
    Ok((lift_cuboids(rep, &r, &h)?, r))
}

/// Exact pairwise classification compared with the host: adjacent boxes
/// touch, non-adjacent boxes are disjoint, interiors never meet.
pub fn validate_cuboids(cr: &CuboidRepresentation) -> Report {
    let n = cr.boxes.len();
    let mut rep = Report::new();
    for (v, b) in cr.boxes.iter().enumerate() {
        if b.axes().iter().any(|a| a[0] >= a[1]) {
            rep.fail("flat-box", format!("box {v} has an empty extent"));
        }
    }
    let found: Vec<(usize, usize, Touch)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            (u + 1..n).map(move |v| (u, v, classify(&cr.boxes[u], &cr.boxes[v])))
        })
        .collect();
    let mut proper = true;
    for (u, v, t) in found {
        let adj = cr.host.has_edge(u, v);
        match (t, adj) {
            (Touch::Overlap, _) => rep.fail("overlap", format!("boxes {u} and {v} share interior points")),
            (Touch::Disjoint, true) => rep.fail("missing-contact", format!("adjacent boxes {u} and {v} do not touch")),
            (Touch::Face | Touch::Lower, false) => {
                rep.fail("extra-contact", format!("boxes {u} and {v} touch but are not adjacent"))
            }
            (Touch::Lower, true) => proper = false,
            _ => {}
        }
    }
    if rep.is_ok() && proper != cr.proper {
        rep.fail("proper-flag", format!("flag says {} but contacts say {proper}", cr.proper));
    }
    rep
}

/// Cubic heights over an equilateral representation.
pub fn cubic_heights(rep: &LRepresentation, r: &SchnyderRealizer) -> Result<HeightAssignment> {
    heights_by_legs(rep, r, HeightKind::Cubic)
}

/// Cubic heights in which v1 and v2 rest on top of vn. Their bends lie on
/// the hypotenuse of vn, so every height is the level of the shape's
/// hypotenuse up to one common shift.
pub fn anchored_cubic_heights(rep: &LRepresentation, r: &SchnyderRealizer) -> Result<HeightAssignment> {
    heights_by_legs(rep, r, HeightKind::Anchored)
}

fn heights_by_legs(rep: &LRepresentation, r: &SchnyderRealizer, kind: HeightKind) -> Result<HeightAssignment> {
    let shapes = host_shapes(rep, r)?;
    let legs: Vec<Q> = shapes
        .iter()
        .enumerate()
        .map(|(v, s)| s.leg().ok_or_else(|| Error::NotSL(format!("shape of {v} is not equilateral"))))
        .collect::<Result<_>>()?;
    let mut parent = r.parents()[Color::Green.index()].clone();
    if kind == HeightKind::Anchored {
        parent[r.v1()] = Some(r.vn());
        parent[r.v2()] = Some(r.vn());
    }
    let n = shapes.len();
    let mut h: Vec<Option<Q>> = vec![None; n];
    fn get(v: usize, parent: &[Option<usize>], legs: &[Q], h: &mut Vec<Option<Q>>) -> Q {
        if let Some(x) = &h[v] {
            return x.clone();
        }
        let base = parent[v].map_or_else(zero, |p| get(p, parent, legs, h));
        let x = base + &legs[v];
        h[v] = Some(x.clone());
        x
    }
    for v in 0..n {
        get(v, &parent, &legs, &mut h);
    }
    Ok(HeightAssignment {
        h: h.into_iter().map(|x| x.expect("every height set")).collect(),
        dummy: zero(),
        kind,
    })
}

/// Human-readable box, used in reports.
pub fn describe(b: &Box3) -> String {
    let f = |a: &[Q; 2]| format!("[{}, {}]", format_q(&a[0]), format_q(&a[1]));
    format!("{}×{}×{}", f(&b.x), f(&b.y), f(&b.z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labeling::{labeling_from_realizer, two_canonical_from_labeling, TwoCanonicalOrder};
    use crate::lrep::{build_lrep, equilateralize, complete_to_triangulation};
    use crate::schnyder::{canonical_order_from_realizer, compute_realizer};
    use crate::graph::random_triangulation;

    fn qq(a: i64, b: i64) -> [Q; 2] {
        [q(a), q(b)]
    }

    #[test]
    fn worked_triangle_lift() {
        let g = PlaneGraph::from_edges(2, &[[0, 1]]).unwrap();
        let rep = build_lrep(&g, &TwoCanonicalOrder { order: vec![0, 1], base_edge: [0, 1] }).unwrap();
        let (_, r) = complete_to_triangulation(&rep).unwrap();
        let co = canonical_order_from_realizer(&r);
        assert_eq!(co.order, vec![0, 1, 2]);
        let h = heights_from_canonical(&co);
        assert_eq!(h.h, vec![q(-1), q(-2), q(-3)]);
        assert_eq!(h.dummy, q(-4));
        let vn = synthesize_vn(&rep);
        assert_eq!(vn, LShape::from_ints([1, -1], [3, -3]));
        assert_eq!(vn.leg(), Some(q(2)));
        let cr = lift_cuboids(&rep, &r, &h).unwrap();
        let want = [
            Box3 { x: qq(1, 4), y: qq(-1, 2), z: qq(-4, -1) },
            Box3 { x: qq(3, 5), y: qq(-3, -1), z: qq(-4, -2) },
            Box3 { x: qq(1, 3), y: qq(-3, -1), z: qq(-4, -3) },
        ];
        assert_eq!(cr.boxes(), &want);
        assert!(cr.proper());
        assert!(validate_cuboids(&cr).is_ok());
    }

    #[test]
    fn overlap_is_witnessed() {
        let g = PlaneGraph::from_edges(2, &[[0, 1]]).unwrap();
        let boxes = vec![
            Box3 { x: qq(0, 2), y: qq(0, 2), z: qq(0, 2) },
            Box3 { x: qq(1, 3), y: qq(1, 3), z: qq(1, 3) },
        ];
        let cr = CuboidRepresentation::new(g, boxes).unwrap();
        assert!(validate_cuboids(&cr).has("overlap"));
    }

    #[test]
    fn corpus_lifts_are_proper_square_based() {
        for seed in 0..6 {
            let n = 5 + seed as usize * 5;
            let r = compute_realizer(&random_triangulation(n, seed), [0, 1, n - 1]).unwrap();
            let el = labeling_from_realizer(&r).unwrap();
            let o = two_canonical_from_labeling(&el).unwrap();
            let rep = equilateralize(&build_lrep(el.host(), &o).unwrap()).unwrap();
            let co = canonical_order_from_realizer(&r);
            let h = heights_from_canonical(&co);
            assert!(validate_heights(&r, &h).is_ok());
            let cr = lift_cuboids(&rep, &r, &h).unwrap();
            assert!(cr.proper(), "seed {seed}");
            assert!(cr.boxes().iter().all(Box3::has_square_base));
        }
    }
}
