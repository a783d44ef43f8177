//! JSON documents, SVG rendering and OBJ export.
//!
//! Rationals travel as exact `p/q` strings. Floats appear only in the SVG and
//! OBJ output.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::PlaneGraph;
use crate::labeling::{EdgeLabeling, TwoCanonicalOrder};
use crate::lift3d::{Box3, CuboidRepresentation};
use crate::lrep::{LRepresentation, LShape, Point};
use crate::rational::{format_q, parse_q, q, to_f64, Q};
use crate::schnyder::{Arc, Color, SchnyderRealizer};
use crate::sl::{TraceEntry, Triangle, TriangleRepresentation};

fn malformed(e: serde_json::Error) -> Error {
    Error::MalformedInput(e.to_string())
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(malformed)
}

// ---------------------------------------------------------------- graphs

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    /// Clockwise edge indices around each vertex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_face: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_edge: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GraphDoc {
    pub fn from_graph(g: &PlaneGraph) -> Self {
        GraphDoc {
            n: g.n(),
            edges: g.edges().to_vec(),
            rotation: Some(g.rotation_edge_indices()),
            outer_face: Some(g.outer_face().to_vec()),
            base_edge: g.base_edge(),
            labels: g.labels().map(<[String]>::to_vec),
        }
    }

    pub fn to_graph(&self) -> Result<PlaneGraph> {
        let rotation = match &self.rotation {
            None => None,
            Some(rot) => {
                if rot.len() != self.n {
                    return Err(Error::InconsistentRotation(format!(
                        "{} rotation lists for {} vertices",
                        rot.len(),
                        self.n
                    )));
                }
                let mut out = Vec::with_capacity(self.n);
                for (v, list) in rot.iter().enumerate() {
                    let mut nb = Vec::with_capacity(list.len());
                    for &e in list {
                        let [a, b] = *self.edges.get(e).ok_or_else(|| {
                            Error::InconsistentRotation(format!("vertex {v} lists unknown edge {e}"))
                        })?;
                        nb.push(match v {
                            _ if a == v => b,
                            _ if b == v => a,
                            _ => {
                                return Err(Error::InconsistentRotation(format!(
                                    "edge {e} ({a},{b}) listed at vertex {v}"
                                )))
                            }
                        });
                    }
                    out.push(nb);
                }
                Some(out)
            }
        };
        PlaneGraph::assemble(self.n, self.edges.clone(), rotation, self.outer_face.clone(), self.base_edge)?
            .with_labels(self.labels.clone())
    }
}

/// Parses the graph input schema; computes an embedding when no rotation
/// is supplied.
pub fn load_graph(text: &str) -> Result<PlaneGraph> {
    from_json::<GraphDoc>(text)?.to_graph()
}

pub fn graph_json(g: &PlaneGraph) -> String {
    to_json(&GraphDoc::from_graph(g))
}

// ------------------------------------------------------- colored arcs

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Uv,
    Vu,
}

/// An undirected edge `u < v` with a color and the direction of its arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcDoc {
    pub u: usize,
    pub v: usize,
    pub color: Color,
    pub dir: Dir,
}

impl ArcDoc {
    fn from_arc(a: Arc) -> Self {
        let (u, v, dir) = if a.tail < a.head {
            (a.tail, a.head, Dir::Uv)
        } else {
            (a.head, a.tail, Dir::Vu)
        };
        ArcDoc { u, v, color: a.color, dir }
    }

    fn to_arc(&self) -> Arc {
        let (tail, head) = match self.dir {
            Dir::Uv => (self.u, self.v),
            Dir::Vu => (self.v, self.u),
        };
        Arc { tail, head, color: self.color }
    }
}

fn sorted_arcs(arcs: impl Iterator<Item = Arc>) -> Vec<ArcDoc> {
    let mut out: Vec<ArcDoc> = arcs.map(ArcDoc::from_arc).collect();
    out.sort_by_key(|a| (a.u, a.v));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizerDoc {
    pub outer: [usize; 3],
    pub edges: Vec<ArcDoc>,
    /// The host with its embedding. When absent the host is the unique
    /// triangulation on the listed edges with `outer` as its outer face.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
}

impl RealizerDoc {
    pub fn from_realizer(r: &SchnyderRealizer) -> Self {
        RealizerDoc {
            outer: r.outer(),
            edges: sorted_arcs(r.arcs()),
            graph: Some(GraphDoc::from_graph(r.host())),
        }
    }

    pub fn to_realizer(&self) -> Result<SchnyderRealizer> {
        let host = match &self.graph {
            Some(g) => g.to_graph()?,
            None => {
                let [a, b, c] = self.outer;
                let mut edges = vec![[a.min(b), a.max(b)], [b.min(c), b.max(c)], [a.min(c), a.max(c)]];
                edges.extend(self.edges.iter().map(|e| [e.u, e.v]));
                let n = edges.iter().flatten().max().map_or(0, |&m| m + 1);
                PlaneGraph::assemble(n, edges, None, Some(self.outer.to_vec()), None)?
            }
        };
        let arcs: Vec<Arc> = self.edges.iter().map(ArcDoc::to_arc).collect();
        SchnyderRealizer::from_arcs(host, self.outer, &arcs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingDoc {
    pub base_edge: [usize; 2],
    pub edges: Vec<ArcDoc>,
    /// The host with its embedding; when absent one is computed with the
    /// face left of the base edge as outer face.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
}

impl LabelingDoc {
    pub fn from_labeling(el: &EdgeLabeling) -> Self {
        LabelingDoc {
            base_edge: el.base_edge(),
            edges: sorted_arcs(el.arcs()),
            graph: Some(GraphDoc::from_graph(el.host())),
        }
    }

    pub fn to_labeling(&self) -> Result<EdgeLabeling> {
        let host = match &self.graph {
            Some(g) => g.to_graph()?,
            None => {
                let [a, b] = self.base_edge;
                let mut edges = vec![[a.min(b), a.max(b)]];
                edges.extend(self.edges.iter().map(|e| [e.u, e.v]));
                let n = edges.iter().flatten().max().map_or(0, |&m| m + 1);
                PlaneGraph::assemble(n, edges, None, None, Some(self.base_edge))?
            }
        };
        let arcs: Vec<Arc> = self.edges.iter().map(ArcDoc::to_arc).collect();
        EdgeLabeling::from_arcs(host, self.base_edge, &arcs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderDoc {
    pub graph: GraphDoc,
    pub order: Vec<usize>,
    pub base_edge: [usize; 2],
}

impl OrderDoc {
    pub fn new(g: &PlaneGraph, o: &TwoCanonicalOrder) -> Self {
        OrderDoc {
            graph: GraphDoc::from_graph(g),
            order: o.order.clone(),
            base_edge: o.base_edge,
        }
    }

    pub fn split(&self) -> Result<(PlaneGraph, TwoCanonicalOrder)> {
        Ok((
            self.graph.to_graph()?,
            TwoCanonicalOrder {
                order: self.order.clone(),
                base_edge: self.base_edge,
            },
        ))
    }
}

// ------------------------------------------------------ geometry

fn qs(p: &Point) -> [String; 2] {
    [format_q(&p[0]), format_q(&p[1])]
}

fn pq(p: &[String; 2]) -> Result<Point> {
    Ok([parse_q(&p[0])?, parse_q(&p[1])?])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeDoc {
    pub v: usize,
    pub top: [String; 2],
    pub right: [String; 2],
}

fn shape_docs<'a>(pairs: impl Iterator<Item = (&'a Point, &'a Point)>) -> Vec<ShapeDoc> {
    pairs
        .enumerate()
        .map(|(v, (t, r))| ShapeDoc { v, top: qs(t), right: qs(r) })
        .collect()
}

/// Endpoints indexed by `v`; every vertex must appear exactly once.
fn shapes_by_vertex(n: usize, docs: &[ShapeDoc]) -> Result<Vec<(Point, Point)>> {
    let mut out: Vec<Option<(Point, Point)>> = vec![None; n];
    for d in docs {
        let slot = out
            .get_mut(d.v)
            .ok_or_else(|| Error::MalformedInput(format!("shape for unknown vertex {}", d.v)))?;
        if slot.replace((pq(&d.top)?, pq(&d.right)?)).is_some() {
            return Err(Error::MalformedInput(format!("vertex {} has two shapes", d.v)));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(v, s)| s.ok_or_else(|| Error::MalformedInput(format!("vertex {v} has no shape"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepDoc {
    pub graph: GraphDoc,
    pub base_edge: [usize; 2],
    pub shapes: Vec<ShapeDoc>,
}

impl RepDoc {
    pub fn from_rep(rep: &LRepresentation) -> Self {
        RepDoc {
            graph: GraphDoc::from_graph(rep.host()),
            base_edge: rep.base_edge(),
            shapes: shape_docs(rep.shapes().iter().map(|s| (&s.top, &s.right))),
        }
    }

    pub fn to_rep(&self) -> Result<LRepresentation> {
        let g = self.graph.to_graph()?;
        let shapes = shapes_by_vertex(g.n(), &self.shapes)?
            .into_iter()
            .map(|(t, r)| LShape::new(t, r))
            .collect();
        LRepresentation::new(g, self.base_edge, shapes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrianglesDoc {
    pub realizer: RealizerDoc,
    /// The bend of each triangle is `(top.x, right.y)`.
    pub triangles: Vec<ShapeDoc>,
}

impl TrianglesDoc {
    pub fn new(tr: &TriangleRepresentation, r: &SchnyderRealizer) -> Self {
        TrianglesDoc {
            realizer: RealizerDoc::from_realizer(r),
            triangles: shape_docs(tr.triangles().iter().map(|t| (&t.top, &t.right))),
        }
    }

    pub fn split(&self) -> Result<(TriangleRepresentation, SchnyderRealizer)> {
        let r = self.realizer.to_realizer()?;
        let triangles = shapes_by_vertex(r.host().n(), &self.triangles)?
            .into_iter()
            .map(|(top, right)| Triangle {
                bend: [top[0].clone(), right[1].clone()],
                top,
                right,
            })
            .collect();
        Ok((TriangleRepresentation::new(r.host().clone(), triangles)?, r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxDoc {
    pub v: usize,
    pub x: [String; 2],
    pub y: [String; 2],
    pub z: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxesDoc {
    pub graph: GraphDoc,
    pub proper: bool,
    pub boxes: Vec<BoxDoc>,
}

impl BoxesDoc {
    pub fn from_cuboids(cr: &CuboidRepresentation) -> Self {
        BoxesDoc {
            graph: GraphDoc::from_graph(cr.host()),
            proper: cr.proper(),
            boxes: cr
                .boxes()
                .iter()
                .enumerate()
                .map(|(v, b)| BoxDoc { v, x: qs(&b.x), y: qs(&b.y), z: qs(&b.z) })
                .collect(),
        }
    }

    /// The `proper` flag is recomputed, not trusted.
    pub fn to_cuboids(&self) -> Result<CuboidRepresentation> {
        let g = self.graph.to_graph()?;
        let mut boxes: Vec<Option<Box3>> = vec![None; g.n()];
        for d in &self.boxes {
            let b = Box3 { x: pq(&d.x)?, y: pq(&d.y)?, z: pq(&d.z)? };
            let slot = boxes
                .get_mut(d.v)
                .ok_or_else(|| Error::MalformedInput(format!("box for unknown vertex {}", d.v)))?;
            if slot.replace(b).is_some() {
                return Err(Error::MalformedInput(format!("vertex {} has two boxes", d.v)));
            }
        }
        let boxes = boxes
            .into_iter()
            .enumerate()
            .map(|(v, b)| b.ok_or_else(|| Error::MalformedInput(format!("vertex {v} has no box"))))
            .collect::<Result<_>>()?;
        CuboidRepresentation::new(g, boxes)
    }
}

/// Output of an SL run. The geometric parts are present only when the run
/// converged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlDoc {
    pub converged: bool,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realizer: Option<RealizerDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<RepDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangles: Option<TrianglesDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubes: Option<BoxesDoc>,
    pub trace: Vec<TraceDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub iteration: usize,
    pub realizer_hash: String,
    pub sign_pattern: String,
    pub min_entry: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flipped: Option<[usize; 3]>,
}

impl From<&TraceEntry> for TraceDoc {
    fn from(t: &TraceEntry) -> Self {
        TraceDoc {
            iteration: t.iteration,
            realizer_hash: t.realizer_hash.clone(),
            sign_pattern: t.sign_pattern.clone(),
            min_entry: t.min_entry.clone(),
            flipped: t.flipped,
        }
    }
}

/// What a JSON document holds, decided by its keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocKind {
    Graph,
    Realizer,
    Labeling,
    Order,
    Rep,
    Triangles,
    Boxes,
    Sl,
}

impl DocKind {
    pub fn name(self) -> &'static str {
        match self {
            DocKind::Graph => "graph",
            DocKind::Realizer => "realizer",
            DocKind::Labeling => "labeling",
            DocKind::Order => "order",
            DocKind::Rep => "rep",
            DocKind::Triangles => "triangles",
            DocKind::Boxes => "boxes",
            DocKind::Sl => "sl",
        }
    }
}

pub fn sniff(text: &str) -> Result<DocKind> {
    let v: Value = serde_json::from_str(text).map_err(malformed)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::MalformedInput("top-level JSON value must be an object".into()))?;
    let has = |k: &str| obj.contains_key(k);
    Ok(if has("converged") {
        DocKind::Sl
    } else if has("boxes") {
        DocKind::Boxes
    } else if has("triangles") {
        DocKind::Triangles
    } else if has("shapes") {
        DocKind::Rep
    } else if has("order") {
        DocKind::Order
    } else if has("outer") {
        DocKind::Realizer
    } else if has("n") {
        DocKind::Graph
    } else if has("edges") && has("base_edge") {
        DocKind::Labeling
    } else {
        return Err(Error::MalformedInput("unrecognized document".into()));
    })
}

// ------------------------------------------------------------------ SVG

const VIEW: i64 = 1000;
const MARGIN: i64 = 40;

/// Exact map from the plane into the viewport: uniform scale, y flipped.
struct Frame {
    min_x: Q,
    max_y: Q,
    scale: Q,
}

impl Frame {
    fn fit<'a>(pts: impl Iterator<Item = &'a Point>) -> Frame {
        let pts: Vec<&Point> = pts.collect();
        if pts.is_empty() {
            return Frame { min_x: q(0), max_y: q(0), scale: q(1) };
        }
        let min_x = pts.iter().map(|p| &p[0]).min().unwrap().clone();
        let max_x = pts.iter().map(|p| &p[0]).max().unwrap().clone();
        let min_y = pts.iter().map(|p| &p[1]).min().unwrap().clone();
        let max_y = pts.iter().map(|p| &p[1]).max().unwrap().clone();
        let span = (&max_x - &min_x).max(&max_y - &min_y);
        let scale = if span > q(0) { q(VIEW - 2 * MARGIN) / span } else { q(1) };
        Frame { min_x, max_y, scale }
    }

    fn map(&self, p: &Point) -> (f64, f64) {
        let x = (&p[0] - &self.min_x) * &self.scale + q(MARGIN);
        let y = (&self.max_y - &p[1]) * &self.scale + q(MARGIN);
        (to_f64(&x), to_f64(&y))
    }

    fn points(&self, pts: &[&Point]) -> String {
        pts.iter()
            .map(|p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn svg_open(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {VIEW} {VIEW}" width="{VIEW}" height="{VIEW}">"#
    );
    let _ = writeln!(out, r#"<rect width="{VIEW}" height="{VIEW}" fill="white"/>"#);
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One polyline per L-shape, v1 and v2 drawn heavier, labels at the bends.
/// With `overlay_staircase` one more polyline follows the outer staircase.
pub fn render_lrep_svg(rep: &LRepresentation, overlay_staircase: bool) -> String {
    let g = rep.host();
    let bends: Vec<Point> = rep.shapes().iter().map(LShape::bend).collect();
    let frame = Frame::fit(rep.shapes().iter().flat_map(|s| [&s.top, &s.right]));
    let [v1, v2] = rep.base_edge();
    let mut out = String::new();
    svg_open(&mut out);
    for (v, s) in rep.shapes().iter().enumerate() {
        let (stroke, width) = if v == v1 || v == v2 { ("#c0392b", 5) } else { ("#1f3a93", 3) };
        let _ = writeln!(
            out,
            r##"<polyline class="shape" data-v="{v}" points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"##,
            frame.points(&[&s.top, &bends[v], &s.right])
        );
    }
    if overlay_staircase {
        if let Some(pts) = rep.staircase() {
            let refs: Vec<&Point> = pts.iter().collect();
            let _ = writeln!(
                out,
                r##"<polyline class="staircase" points="{}" fill="none" stroke="#27ae60" stroke-width="2" stroke-dasharray="8 4"/>"##,
                frame.points(&refs)
            );
        }
    }
    for (v, b) in bends.iter().enumerate() {
        let (x, y) = frame.map(b);
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-size="16" font-family="sans-serif">{}</text>"#,
            x + 4.0,
            y - 4.0,
            escape(&g.label(v))
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One filled polygon per triangle.
pub fn render_triangles_svg(tr: &TriangleRepresentation) -> String {
    let g = tr.host();
    let frame = Frame::fit(tr.triangles().iter().flat_map(|t| [&t.top, &t.right, &t.bend]));
    let mut out = String::new();
    svg_open(&mut out);
    for (v, t) in tr.triangles().iter().enumerate() {
        let hue = (v * 137) % 360;
        let _ = writeln!(
            out,
            r#"<polygon class="triangle" data-v="{v}" points="{}" fill="hsl({hue},60%,75%)" stroke="black" stroke-width="1.5"/>"#,
            frame.points(&[&t.bend, &t.top, &t.right])
        );
    }
    for (v, t) in tr.triangles().iter().enumerate() {
        let (x, y) = frame.map(&t.bend);
        let _ = writeln!(
            out,
            r#"<text x="{:.3}" y="{:.3}" font-size="16" font-family="sans-serif">{}</text>"#,
            x + 4.0,
            y - 4.0,
            escape(&g.label(v))
        );
    }
    out.push_str("</svg>\n");
    out
}

// ------------------------------------------------------------------ OBJ

/// One named group per box: 8 vertices and 6 quadrilateral faces.
pub fn export_obj(cr: &CuboidRepresentation) -> String {
    let names: Vec<String> = (0..cr.host().n()).map(|v| cr.host().label(v)).collect();
    export_boxes_obj(&names, cr.boxes())
}

pub fn export_boxes_obj(names: &[String], boxes: &[Box3]) -> String {
    let mut out = String::from("# cuboid contact representation\n");
    for (v, (name, b)) in names.iter().zip(boxes).enumerate() {
        let _ = writeln!(out, "g {}", name.replace(char::is_whitespace, "_"));
        let [x, y, z] = b.axes().map(|a| [to_f64(&a[0]), to_f64(&a[1])]);
        for i in 0..8 {
            let _ = writeln!(out, "v {} {} {}", x[i & 1], y[(i >> 1) & 1], z[(i >> 2) & 1]);
        }
        let o = 8 * v + 1;
        // Corner index bits are (x, y, z); faces wind outward.
        for f in [[0, 2, 3, 1], [4, 5, 7, 6], [0, 1, 5, 4], [2, 6, 7, 3], [0, 4, 6, 2], [1, 3, 7, 5]] {
            let _ = writeln!(out, "f {} {} {} {}", o + f[0], o + f[1], o + f[2], o + f[3]);
        }
    }
    out
}
