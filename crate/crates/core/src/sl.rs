//! Square-L representations: every contact pairs a horizontal and a vertical
//! segment of equal length. Covers the segment-length system, the iterative
//! realizer search, homothetic triangles, cubes and the flow diagnostic.
//!
//! The system lives on `G = H∖Sn` (ids as in [`delete_green`]). Along the
//! horizontal leg of `a` the in-red tails of `a` are listed left to right;
//! along the vertical leg of `b` its in-blue tails top to bottom. Each leg is
//! cut into one more segment than it has contacts.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use nalgebra::{DMatrix, DVector};
use num_traits::{FromPrimitive, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::PlaneGraph;
use crate::labeling::labeling_from_realizer;
use crate::lift3d::{anchored_cubic_heights, host_shapes, lift_cuboids, CuboidRepresentation};
use crate::lrep::{validate_lrep, LRepresentation, LShape, Point, Spot};
use crate::rational::{format_q, one, to_f64, zero, Q};
use crate::report::Report;
use crate::schnyder::{host_id, sub_id, validate_realizer, Color, SchnyderRealizer};

/// Above this many host vertices the solver switches to floating point.
pub const EXACT_MAX_N: usize = 200;
/// Largest residual accepted from the floating-point solver.
pub const FLOAT_RESIDUAL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Leg {
    Horizontal,
    Vertical,
}

/// Segment `index` of one leg of the shape of `owner` (an id of `G`),
/// counted left to right or top to bottom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub owner: usize,
    pub leg: Leg,
    pub index: usize,
}

impl std::fmt::Display for Segment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let l = match self.leg {
            Leg::Horizontal => 'h',
            Leg::Vertical => 'v',
        };
        write!(f, "{l}{}[{}]", self.owner, self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqKind {
    /// Paired segments at a contact point.
    Paired,
    /// Staircase of an inner vertex against its own legs.
    Closure,
    /// Equal legs for v1 and v2.
    Equilateral,
    /// The vertical leg of v1 has length 1.
    Normalization,
    /// The part of v1's horizontal leg right of v2 equals the top segment of v2.
    OuterStub,
}

/// `Σ coeff·x[var] = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub kind: EqKind,
    pub terms: Vec<(usize, i64)>,
    pub rhs: i64,
}

/// A contact of `G`: an endpoint of `tail` on a leg of `head`. `h` is the
/// horizontal segment whose right end is the contact point and `v` the
/// vertical segment whose top end it is. `pocket` is the host vertex whose
/// staircase turns at this point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Contact {
    pub tail: usize,
    pub head: usize,
    pub leg: Leg,
    pub h: usize,
    pub v: usize,
    pub pocket: usize,
}

/// The staircase under a host vertex: segments walked from its top endpoint
/// to its right endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Staircase {
    pub owner: usize,
    pub horizontal: Vec<usize>,
    pub vertical: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SegmentSystem {
    realizer: SchnyderRealizer,
    sub: PlaneGraph,
    base: [usize; 2],
    pub ltr: Vec<Vec<usize>>,
    pub ttb: Vec<Vec<usize>>,
    pub horiz: Vec<Vec<usize>>,
    pub vert: Vec<Vec<usize>>,
    pub segments: Vec<Segment>,
    pub equations: Vec<Equation>,
    pub contacts: Vec<Contact>,
    /// Inner vertices of `G` first, then vn.
    pub staircases: Vec<Staircase>,
}

impl SegmentSystem {
    pub fn realizer(&self) -> &SchnyderRealizer {
        &self.realizer
    }

    /// `H∖Sn`, the graph whose shapes the segments belong to.
    pub fn sub(&self) -> &PlaneGraph {
        &self.sub
    }

    pub fn base_edge(&self) -> [usize; 2] {
        self.base
    }

    pub fn unknowns(&self) -> usize {
        self.segments.len()
    }
}

struct Walker<'a> {
    s: &'a SegmentSystem,
    blue: &'a [Option<usize>],
    red_contact: &'a [Vec<usize>],
    blue_contact: &'a [Vec<usize>],
}

impl Walker<'_> {
    /// Walks right and down from horizontal segment `k` of `a`, turning down
    /// at every contact and right at every bend. Stops at the right endpoint
    /// of `z`, or for vn (`z = None`) at the bend of v2.
    fn walk(&self, mut a: usize, mut k: usize, z: Option<usize>) -> Result<(Staircase, Vec<usize>)> {
        let s = self.s;
        let [_, v2] = s.base;
        let mut st = Staircase {
            owner: 0,
            horizontal: Vec::new(),
            vertical: Vec::new(),
        };
        let mut corners = Vec::new();
        let bad = |what: String| Error::InconsistentInputs(format!("staircase walk: {what}"));
        for _ in 0..=s.segments.len() {
            st.horizontal.push(s.horiz[a][k]);
            let (b, j) = if k < s.ltr[a].len() {
                let w = s.ltr[a][k];
                corners.push(self.red_contact[a][k]);
                (w, 0)
            } else {
                let b = self.blue[a].ok_or_else(|| bad(format!("ran off the free end of {a}")))?;
                let j = s.ttb[b].iter().position(|&x| x == a).expect("blue tail listed");
                corners.push(self.blue_contact[b][j]);
                (b, j + 1)
            };
            st.vertical.push(s.vert[b][j]);
            if j < s.ttb[b].len() {
                let w = s.ttb[b][j];
                if Some(w) == z {
                    return Ok((st, corners));
                }
                return Err(bad(format!("blocked by the right endpoint of {w}")));
            }
            if z.is_none() && b == v2 {
                return Ok((st, corners));
            }
            if b == v2 {
                return Err(bad("reached the bend of v2".into()));
            }
            a = b;
            k = 0;
        }
        Err(bad("does not close".into()))
    }
}

/// The segment system of the L-representation structure fixed by `r`.
pub fn build_segment_system(h: &PlaneGraph, r: &SchnyderRealizer) -> Result<SegmentSystem> {
    if !h.is_triangulation() {
        return Err(Error::NotTriangulation(format!("{} vertices, {} edges", h.n(), h.m())));
    }
    if !h.same_embedding(r.host()) {
        return Err(Error::InconsistentInputs("realizer lives on a different embedding".into()));
    }
    let report = validate_realizer(r);
    if !report.is_ok() {
        return Err(Error::InvalidRealizer(report.to_string()));
    }
    let el = labeling_from_realizer(r)?;
    let g = el.host().clone();
    let n = g.n();
    let [v1, v2] = el.base_edge();
    let mut ltr = vec![Vec::new(); n];
    let mut ttb = vec![Vec::new(); n];
    let mut blue = vec![None; n];
    for a in 0..n {
        blue[a] = el.out(a, Color::Blue);
        let anchor = if a == v1 {
            v2
        } else if a == v2 {
            v1
        } else {
            blue[a].expect("inner vertex has a blue parent")
        };
        let nb = g.neighbors(a);
        let p = g.rotation_pos(a, anchor);
        let (mut reds, mut blues) = (Vec::new(), Vec::new());
        for i in 1..nb.len() {
            let u = nb[(p + i) % nb.len()];
            match el.arc_between(u, a) {
                Some(x) if x.head == a && x.color == Color::Red => reds.push(u),
                Some(x) if x.head == a && x.color == Color::Blue => blues.push(u),
                _ => {}
            }
        }
        reds.reverse();
        blues.reverse();
        if a == v1 {
            reds.push(v2);
        }
        ltr[a] = reds;
        ttb[a] = blues;
    }
    let mut segments = Vec::new();
    let mut horiz = vec![Vec::new(); n];
    let mut vert = vec![Vec::new(); n];
    for a in 0..n {
        for index in 0..=ltr[a].len() {
            horiz[a].push(segments.len());
            segments.push(Segment { owner: a, leg: Leg::Horizontal, index });
        }
        for index in 0..=ttb[a].len() {
            vert[a].push(segments.len());
            segments.push(Segment { owner: a, leg: Leg::Vertical, index });
        }
    }
    let mut contacts = Vec::new();
    let mut red_contact = vec![Vec::new(); n];
    let mut blue_contact = vec![Vec::new(); n];
    for a in 0..n {
        for (k, &w) in ltr[a].iter().enumerate() {
            red_contact[a].push(contacts.len());
            contacts.push(Contact { tail: w, head: a, leg: Leg::Horizontal, h: horiz[a][k], v: vert[w][0], pocket: usize::MAX });
        }
    }
    for b in 0..n {
        for (j, &w) in ttb[b].iter().enumerate() {
            blue_contact[b].push(contacts.len());
            let h = *horiz[w].last().expect("leg has a segment");
            contacts.push(Contact { tail: w, head: b, leg: Leg::Vertical, h, v: vert[b][j + 1], pocket: usize::MAX });
        }
    }
    let mut s = SegmentSystem {
        realizer: r.clone(),
        sub: g,
        base: [v1, v2],
        ltr,
        ttb,
        horiz,
        vert,
        segments,
        equations: Vec::new(),
        contacts,
        staircases: Vec::new(),
    };
    let vn = r.vn();
    let mut owners = vec![usize::MAX; s.contacts.len()];
    let mut staircases = Vec::new();
    {
        let wk = Walker { s: &s, blue: &blue, red_contact: &red_contact, blue_contact: &blue_contact };
        let mut red_parent = vec![None; n];
        for a in 0..n {
            for (k, &w) in s.ltr[a].iter().enumerate() {
                red_parent[w] = Some((a, k));
            }
        }
        let mut runs = Vec::new();
        for z in (0..n).filter(|&z| z != v1 && z != v2) {
            let (u, k) = red_parent[z].expect("inner vertex has a red parent");
            runs.push((host_id(vn, z), wk.walk(u, k + 1, Some(z))?));
        }
        runs.push((vn, wk.walk(v1, 0, None)?));
        for (owner, (mut st, corners)) in runs {
            st.owner = owner;
            for c in corners {
                if owners[c] != usize::MAX {
                    return Err(Error::InconsistentInputs(format!("contact {c} turns two staircases")));
                }
                owners[c] = owner;
            }
            staircases.push(st);
        }
    }
    if let Some(c) = owners.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InconsistentInputs(format!("contact {c} lies on no staircase")));
    }
    for (c, o) in s.contacts.iter_mut().zip(owners) {
        c.pocket = o;
    }
    let mut eqs = Vec::new();
    for c in &s.contacts {
        eqs.push(Equation { kind: EqKind::Paired, terms: vec![(c.h, 1), (c.v, -1)], rhs: 0 });
    }
    for st in staircases.iter().filter(|st| st.owner != vn) {
        let z = sub_id(vn, st.owner);
        for (run, own) in [(&st.horizontal, &s.horiz[z]), (&st.vertical, &s.vert[z])] {
            let mut t: BTreeMap<usize, i64> = BTreeMap::new();
            for &x in run {
                *t.entry(x).or_default() += 1;
            }
            for &x in own {
                *t.entry(x).or_default() -= 1;
            }
            eqs.push(Equation { kind: EqKind::Closure, terms: t.into_iter().filter(|e| e.1 != 0).collect(), rhs: 0 });
        }
    }
    for a in [v1, v2] {
        let mut terms: Vec<(usize, i64)> = s.horiz[a].iter().map(|&x| (x, 1)).collect();
        terms.extend(s.vert[a].iter().map(|&x| (x, -1)));
        eqs.push(Equation { kind: EqKind::Equilateral, terms, rhs: 0 });
    }
    eqs.push(Equation { kind: EqKind::Normalization, terms: s.vert[v1].iter().map(|&x| (x, 1)).collect(), rhs: 1 });
    eqs.push(Equation {
        kind: EqKind::OuterStub,
        terms: vec![(*s.horiz[v1].last().unwrap(), 1), (s.vert[v2][0], -1)],
        rhs: 0,
    });
    s.equations = eqs;
    s.staircases = staircases;
    Ok(s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub values: Vec<Q>,
    /// False when the floating-point fallback produced the values.
    pub exact: bool,
    pub residual: f64,
}

impl Solution {
    pub fn all_positive(&self) -> bool {
        self.values.iter().all(Signed::is_positive)
    }

    pub fn sign_pattern(&self) -> String {
        self.values
            .iter()
            .map(|x| if x.is_positive() { '+' } else if x.is_negative() { '-' } else { '0' })
            .collect()
    }

    pub fn min_entry(&self) -> Q {
        self.values.iter().min().cloned().unwrap_or_else(zero)
    }

    /// Non-positive entries with their segments.
    pub fn non_positive(&self, s: &SegmentSystem) -> Vec<(Segment, Q)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_positive())
            .map(|(i, x)| (s.segments[i], x.clone()))
            .collect()
    }
}

/// Exact sparse Gauss–Jordan elimination; pivots on the shortest row.
pub fn solve_exact(s: &SegmentSystem) -> Result<Solution> {
    let m = s.unknowns();
    let mut rows: Vec<BTreeMap<usize, Q>> = s
        .equations
        .iter()
        .map(|e| e.terms.iter().map(|&(v, c)| (v, Q::from_integer(c.into()))).collect())
        .collect();
    let mut rhs: Vec<Q> = s.equations.iter().map(|e| Q::from_integer(e.rhs.into())).collect();
    let mut used = vec![false; rows.len()];
    let mut pivot_of = vec![usize::MAX; m];
    for col in 0..m {
        let Some(p) = (0..rows.len())
            .filter(|&i| !used[i] && rows[i].contains_key(&col))
            .min_by_key(|&i| rows[i].len())
        else {
            let rank = pivot_of.iter().filter(|&&p| p != usize::MAX).count();
            return Err(Error::SingularSystem { rank, unknowns: m });
        };
        used[p] = true;
        pivot_of[col] = p;
        let inv = one() / &rows[p][&col];
        for x in rows[p].values_mut() {
            *x *= &inv;
        }
        rhs[p] *= &inv;
        let prow = rows[p].clone();
        let pr = rhs[p].clone();
        for i in 0..rows.len() {
            if i == p {
                continue;
            }
            let Some(f) = rows[i].get(&col).cloned() else { continue };
            for (&c, x) in &prow {
                let e = rows[i].entry(c).or_insert_with(zero);
                *e -= &f * x;
                if e.is_zero() {
                    rows[i].remove(&c);
                }
            }
            rhs[i] -= &f * &pr;
        }
    }
    if (0..rows.len()).any(|i| !used[i] && !rhs[i].is_zero()) {
        return Err(Error::SingularSystem { rank: m, unknowns: m });
    }
    let values = pivot_of.iter().map(|&p| rhs[p].clone()).collect();
    Ok(Solution { values, exact: true, residual: 0.0 })
}

/// Dense LU in `f64`; the values are converted back to rationals and the
/// residual is recorded.
pub fn solve_float(s: &SegmentSystem) -> Result<Solution> {
    let m = s.unknowns();
    if s.equations.len() != m {
        return Err(Error::SingularSystem { rank: s.equations.len().min(m), unknowns: m });
    }
    let mut a = DMatrix::<f64>::zeros(m, m);
    let mut b = DVector::<f64>::zeros(m);
    for (i, e) in s.equations.iter().enumerate() {
        for &(v, c) in &e.terms {
            a[(i, v)] += c as f64;
        }
        b[i] = e.rhs as f64;
    }
    let x = a.clone().lu().solve(&b).ok_or(Error::SingularSystem { rank: m.saturating_sub(1), unknowns: m })?;
    let residual = (&a * &x - &b).amax();
    if residual.is_nan() || residual > FLOAT_RESIDUAL {
        return Err(Error::SingularSystem { rank: m.saturating_sub(1), unknowns: m });
    }
    let values = x.iter().map(|&f| Q::from_f64(f).unwrap_or_else(zero)).collect();
    Ok(Solution { values, exact: false, residual })
}

/// Exact up to [`EXACT_MAX_N`] host vertices, floating point above.
pub fn solve_segment_system(s: &SegmentSystem) -> Result<Solution> {
    if s.realizer.host().n() > EXACT_MAX_N {
        solve_float(s)
    } else {
        solve_exact(s)
    }
}

/// Coordinates from segment lengths: v1's bend at the origin, every other
/// shape hung from its red parent.
pub fn realize(s: &SegmentSystem, x: &[Q]) -> Result<LRepresentation> {
    let n = s.sub.n();
    let total = |v: &[usize]| v.iter().fold(zero(), |acc, &i| acc + &x[i]);
    let [v1, _] = s.base;
    let mut shapes: Vec<Option<LShape>> = vec![None; n];
    shapes[v1] = Some(LShape::new([zero(), total(&s.vert[v1])], [total(&s.horiz[v1]), zero()]));
    let mut stack = vec![v1];
    while let Some(a) = stack.pop() {
        let bend = shapes[a].as_ref().expect("placed").bend();
        let mut run = bend[0].clone();
        for (k, &w) in s.ltr[a].iter().enumerate() {
            run += &x[s.horiz[a][k]];
            let top: Point = [run.clone(), bend[1].clone()];
            let y = &top[1] - total(&s.vert[w]);
            let right: Point = [&top[0] + total(&s.horiz[w]), y];
            shapes[w] = Some(LShape::new(top, right));
            stack.push(w);
        }
    }
    let shapes = shapes
        .into_iter()
        .enumerate()
        .map(|(v, sh)| sh.ok_or_else(|| Error::InconsistentInputs(format!("vertex {v} is not under v1 in the red tree"))))
        .collect::<Result<Vec<_>>>()?;
    LRepresentation::new(s.sub.clone(), s.base, shapes)
}

fn sum(p: &Point) -> Q {
    &p[0] + &p[1]
}

/// Every shape has equal legs.
pub fn equilateral_report(rep: &LRepresentation) -> Report {
    let mut out = Report::new();
    for (v, s) in rep.shapes().iter().enumerate() {
        if !s.is_equilateral() {
            out.fail("equilateral", format!("shape {v} has legs {} and {}", format_q(&s.vertical_len()), format_q(&s.horizontal_len())));
        }
    }
    out
}

/// For every host vertex `v`: the endpoints of `L_v` and the bends of its
/// green children lie on one line of slope −1. vn uses its synthesized shape.
pub fn collinearity_report(rep: &LRepresentation, r: &SchnyderRealizer) -> Report {
    let mut out = Report::new();
    let shapes = match host_shapes(rep, r) {
        Ok(s) => s,
        Err(e) => {
            out.fail("inputs", e.to_string());
            return out;
        }
    };
    let children = r.green_children();
    for (v, s) in shapes.iter().enumerate() {
        let c = sum(&s.top);
        if sum(&s.right) != c {
            out.fail("collinear", format!("endpoints of {v} are not on a slope −1 line"));
            continue;
        }
        for &w in &children[v] {
            if sum(&shapes[w].bend()) != c {
                out.fail("collinear", format!("bend of {w} is off the line of its green parent {v}"));
            }
        }
    }
    out
}

/// Points of the representation lying on one leg of `s`, ends included,
/// sorted left to right or top to bottom, as the varying coordinate.
fn cuts(rep: &LRepresentation, v: usize, leg: Leg) -> Vec<Q> {
    let s = rep.shape(v);
    let (want, k) = match leg {
        Leg::Horizontal => (Spot::Horizontal, 0),
        Leg::Vertical => (Spot::Vertical, 1),
    };
    let mut c: Vec<Q> = vec![s.bend()[k].clone()];
    c.push(if k == 0 { s.right[0].clone() } else { s.top[1].clone() });
    for (u, o) in rep.shapes().iter().enumerate() {
        if u == v {
            continue;
        }
        for p in [&o.top, &o.right, &o.bend()] {
            if s.locate(p) == Some(want) {
                c.push(p[k].clone());
            }
        }
    }
    c.sort();
    c.dedup();
    if k == 1 {
        c.reverse();
    }
    c
}

/// Per contact point `p`: the horizontal segment whose right end is `p` and
/// the vertical segment whose top end is `p` have equal length.
pub fn paired_segment_report(rep: &LRepresentation) -> Report {
    let mut out = Report::new();
    let n = rep.shapes().len();
    let hcuts: Vec<Vec<Q>> = (0..n).map(|v| cuts(rep, v, Leg::Horizontal)).collect();
    let vcuts: Vec<Vec<Q>> = (0..n).map(|v| cuts(rep, v, Leg::Vertical)).collect();
    let before = |c: &[Q], x: &Q| -> Q {
        let i = c.iter().position(|y| y == x).expect("cut listed");
        x - &c[i - 1]
    };
    let below = |c: &[Q], y: &Q| -> Q {
        let i = c.iter().position(|z| z == y).expect("cut listed");
        y - &c[i + 1]
    };
    for w in 0..n {
        let s = rep.shape(w);
        for u in (0..n).filter(|&u| u != w) {
            let o = rep.shape(u);
            if o.locate(&s.top) == Some(Spot::Horizontal) {
                let h = before(&hcuts[u], &s.top[0]);
                let v = below(&vcuts[w], &s.top[1]);
                if h != v {
                    out.fail("paired-segments", format!("top of {w} on {u}: {} vs {}", format_q(&h), format_q(&v)));
                }
            }
            if o.locate(&s.right) == Some(Spot::Vertical) {
                let h = before(&hcuts[w], &s.right[0]);
                let v = below(&vcuts[u], &s.right[1]);
                if h != v {
                    out.fail("paired-segments", format!("right of {w} on {u}: {} vs {}", format_q(&h), format_q(&v)));
                }
            }
        }
    }
    out
}

/// Equal legs, the per-vertex collinearity criterion and the per-contact
/// segment equalities.
pub fn validate_sl(rep: &LRepresentation, r: &SchnyderRealizer) -> Report {
    let mut out = equilateral_report(rep);
    out.merge(collinearity_report(rep, r));
    out.merge(paired_segment_report(rep));
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub realizer_hash: String,
    pub sign_pattern: String,
    pub min_entry: String,
    /// The face flipped after this iteration, if any.
    pub flipped: Option<[usize; 3]>,
}

pub fn realizer_hash(r: &SchnyderRealizer) -> u64 {
    let mut arcs: Vec<(usize, usize, usize)> = r.arcs().map(|a| (a.tail, a.head, a.color.index())).collect();
    arcs.sort_unstable();
    let mut h = DefaultHasher::new();
    arcs.hash(&mut h);
    h.finish()
}

#[derive(Clone, Debug)]
pub struct SLRun {
    pub realizer: SchnyderRealizer,
    pub system: SegmentSystem,
    pub solution: Solution,
    /// Shapes of `H∖Sn` in its own ids.
    pub rep: LRepresentation,
    pub trace: Vec<TraceEntry>,
}

#[derive(Clone, Debug)]
pub enum SLOutcome {
    Converged(Box<SLRun>),
    NonTermination { trace: Vec<TraceEntry> },
}

impl SLOutcome {
    pub fn trace(&self) -> &[TraceEntry] {
        match self {
            SLOutcome::Converged(run) => &run.trace,
            SLOutcome::NonTermination { trace } => trace,
        }
    }
}

/// Value of every inner face of the host: the length of the paired segments
/// at the contact that turns inside it. Keys are sorted vertex triples.
pub fn face_values(s: &SegmentSystem, x: &[Q]) -> BTreeMap<[usize; 3], Q> {
    let vn = s.realizer.vn();
    s.contacts
        .iter()
        .map(|c| {
            let mut f = [host_id(vn, c.tail), host_id(vn, c.head), c.pocket];
            f.sort_unstable();
            (f, x[c.h].clone())
        })
        .collect()
}

/// The directed face of smallest value, ties by position in
/// [`PlaneGraph::faces`], and the realizer after flipping it.
pub fn choose_flip(s: &SegmentSystem, x: &[Q]) -> Option<([usize; 3], SchnyderRealizer)> {
    choose_flip_avoiding(s, x, &HashSet::new())
}

/// As [`choose_flip`], skipping flips that lead to a realizer whose hash is
/// in `seen`.
pub fn choose_flip_avoiding(s: &SegmentSystem, x: &[Q], seen: &HashSet<u64>) -> Option<([usize; 3], SchnyderRealizer)> {
    let vals = face_values(s, x);
    let r = &s.realizer;
    let mut best: Option<(Q, usize, [usize; 3], SchnyderRealizer)> = None;
    for (i, f) in r.host().faces().into_iter().enumerate() {
        let [a, b, c] = f[..] else { continue };
        let mut key = [a, b, c];
        key.sort_unstable();
        let Some(v) = vals.get(&key) else { continue };
        if best.as_ref().is_some_and(|(bv, _, _, _)| bv <= v) {
            continue;
        }
        if let Some(r2) = r.flip_cycle([a, b, c]).filter(|r2| !seen.contains(&realizer_hash(r2))) {
            best = Some((v.clone(), i, [a, b, c], r2));
        }
    }
    best.map(|(_, _, f, r2)| (f, r2))
}

/// Solve, and while some segment length is not positive flip a directed
/// face and solve again. Returns the first positive solution realized and
/// validated, or the trace after `max_iters` flips.
pub fn felsner_iterate(h: &PlaneGraph, r0: &SchnyderRealizer, max_iters: usize) -> Result<SLOutcome> {
    let mut r = r0.clone();
    let mut trace = Vec::new();
    let mut seen = HashSet::new();
    for it in 0..=max_iters {
        seen.insert(realizer_hash(&r));
        let s = build_segment_system(h, &r)?;
        let sol = solve_segment_system(&s)?;
        trace.push(TraceEntry {
            iteration: it,
            realizer_hash: format!("{:016x}", realizer_hash(&r)),
            sign_pattern: sol.sign_pattern(),
            min_entry: format_q(&sol.min_entry()),
            flipped: None,
        });
        if sol.all_positive() {
            let rep = realize(&s, &sol.values)?;
            if sol.exact {
                let mut report = validate_lrep(&rep);
                report.merge(validate_sl(&rep, &r));
                if !report.is_ok() {
                    return Err(Error::InconsistentInputs(format!("positive solution does not realize: {report}")));
                }
            }
            return Ok(SLOutcome::Converged(Box::new(SLRun { realizer: r, system: s, solution: sol, rep, trace })));
        }
        if it == max_iters {
            break;
        }
        match choose_flip_avoiding(&s, &sol.values, &seen) {
            Some((f, r2)) => {
                trace.last_mut().expect("entry pushed").flipped = Some(f);
                r = r2;
            }
            None => break,
        }
    }
    Ok(SLOutcome::NonTermination { trace })
}

/// Right isosceles triangle with legs along the axes: `bend`, `bend + (0,t)`,
/// `bend + (t,0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangle {
    pub bend: Point,
    pub top: Point,
    pub right: Point,
}

impl Triangle {
    pub fn size(&self) -> Q {
        &self.top[1] - &self.bend[1]
    }

    /// Level of the hypotenuse `x + y = c`.
    pub fn level(&self) -> Q {
        sum(&self.top)
    }

    pub fn contains(&self, p: &Point) -> bool {
        p[0] >= self.bend[0] && p[1] >= self.bend[1] && sum(p) <= self.level()
    }

    pub fn is_homothetic_copy(&self) -> bool {
        let t = self.size();
        t.is_positive()
            && self.top[0] == self.bend[0]
            && self.right[1] == self.bend[1]
            && &self.right[0] - &self.bend[0] == t
    }
}

/// How two closed triangles meet: `None` if disjoint, `Some(false)` if they
/// only touch, `Some(true)` if their interiors overlap.
pub fn triangle_meet(a: &Triangle, b: &Triangle) -> Option<bool> {
    let x = (&a.bend[0]).max(&b.bend[0]);
    let y = (&a.bend[1]).max(&b.bend[1]);
    let c = a.level().min(b.level());
    let s = x + y;
    if s > c {
        None
    } else {
        Some(s < c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleRepresentation {
    host: PlaneGraph,
    triangles: Vec<Triangle>,
}

impl TriangleRepresentation {
    pub fn new(host: PlaneGraph, triangles: Vec<Triangle>) -> Result<Self> {
        if triangles.len() != host.n() {
            return Err(Error::MalformedInput(format!("{} triangles for {} vertices", triangles.len(), host.n())));
        }
        Ok(Self { host, triangles })
    }

    pub fn host(&self) -> &PlaneGraph {
        &self.host
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }
}

/// Homothety, pairwise interior-disjointness, contact graph equal to the
/// host, and the corner incidences of the realizer: the top (right) corner
/// of an inner vertex lies on the triangle of its red (blue) parent.
pub fn validate_triangles(tr: &TriangleRepresentation, r: &SchnyderRealizer) -> Report {
    let mut out = Report::new();
    let t = &tr.triangles;
    for (v, x) in t.iter().enumerate() {
        if !x.is_homothetic_copy() {
            out.fail("homothety", format!("triangle {v} is not a positive copy of the model"));
        }
    }
    if !out.is_ok() {
        return out;
    }
    for u in 0..t.len() {
        for v in u + 1..t.len() {
            match (triangle_meet(&t[u], &t[v]), tr.host.has_edge(u, v)) {
                (Some(true), _) => out.fail("overlap", format!("triangles {u} and {v} share interior points")),
                (None, true) => out.fail("missing-contact", format!("triangles {u} and {v} do not touch")),
                (Some(false), false) => out.fail("extra-contact", format!("triangles {u} and {v} touch but are not adjacent")),
                _ => {}
            }
        }
    }
    let [red, blue, _] = r.parents();
    for w in 0..t.len() {
        if let Some(p) = red[w] {
            if !t[p].contains(&t[w].top) {
                out.fail("corner", format!("top corner of {w} is off its red parent {p}"));
            }
        }
        if let Some(p) = blue[w] {
            if !t[p].contains(&t[w].right) {
                out.fail("corner", format!("right corner of {w} is off its blue parent {p}"));
            }
        }
    }
    if !t[r.v1()].contains(&t[r.v2()].top) {
        out.fail("corner", "top corner of v2 is off v1");
    }
    out
}

/// Convex hulls of the shapes, with vn's synthesized shape, as a contact
/// representation of the host triangulation.
pub fn homothetic_triangles(rep: &LRepresentation, r: &SchnyderRealizer) -> Result<TriangleRepresentation> {
    let report = validate_sl(rep, r);
    if !report.is_ok() {
        return Err(Error::NotSL(report.to_string()));
    }
    let triangles = host_shapes(rep, r)?
        .into_iter()
        .map(|s| Triangle { bend: s.bend(), top: s.top, right: s.right })
        .collect();
    let tr = TriangleRepresentation::new(r.host().clone(), triangles)?;
    let report = validate_triangles(&tr, r);
    if !report.is_ok() {
        return Err(Error::NotSL(format!("triangles do not form a contact representation: {report}")));
    }
    Ok(tr)
}

/// Boxes over the shapes with cubic heights, v1 and v2 standing on vn;
/// every box is an exact cube.
pub fn cubes_from_sl(rep: &LRepresentation, r: &SchnyderRealizer) -> Result<CuboidRepresentation> {
    let report = validate_sl(rep, r);
    if !report.is_ok() {
        return Err(Error::NotSL(report.to_string()));
    }
    let h = anchored_cubic_heights(rep, r)?;
    let cr = lift_cuboids(rep, r, &h)?;
    if let Some(v) = cr.boxes().iter().position(|b| !b.is_cube()) {
        return Err(Error::NotSL(format!("box {v} is not a cube")));
    }
    Ok(cr)
}

/// A region of the plane in the flow graphs: the pocket of an inner vertex
/// (host id), the region inside vn's shape, or everything beyond v1 and v2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Pocket(usize),
    Source,
    Sink,
}

/// Segment `var` seen as an edge from the region below (left of) it to the
/// region above (right of) it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FlowEdge {
    pub var: usize,
    pub from: Region,
    pub to: Region,
}

/// The visibility graphs: horizontal segments in `gh`, vertical in `gv`,
/// with their corresponding pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowGraphs {
    pub gh: Vec<FlowEdge>,
    pub gv: Vec<FlowEdge>,
    pub pairs: Vec<(usize, usize)>,
}

pub fn flow_graphs(s: &SegmentSystem) -> FlowGraphs {
    let vn = s.realizer.vn();
    let [v1, v2] = s.base;
    let mut side: HashMap<usize, Region> = HashMap::new();
    for st in &s.staircases {
        let reg = if st.owner == vn { Region::Source } else { Region::Pocket(st.owner) };
        for &x in st.horizontal.iter().chain(&st.vertical) {
            side.insert(x, reg);
        }
    }
    let own = |a: usize| if a == v1 || a == v2 { Region::Sink } else { Region::Pocket(host_id(vn, a)) };
    let mut gh = Vec::new();
    let mut gv = Vec::new();
    for (var, seg) in s.segments.iter().enumerate() {
        let e = FlowEdge { var, from: side.get(&var).copied().unwrap_or(Region::Sink), to: own(seg.owner) };
        match seg.leg {
            Leg::Horizontal => gh.push(e),
            Leg::Vertical => gv.push(e),
        }
    }
    let pairs = s.contacts.iter().map(|c| (c.h, c.v)).collect();
    FlowGraphs { gh, gv, pairs }
}

/// Lengths as flows: conservation at every pocket in both graphs and equal
/// values on corresponding edges.
pub fn visibility_flow_check(s: &SegmentSystem, x: &[Q]) -> Report {
    let fg = flow_graphs(s);
    let mut out = Report::new();
    for (name, edges) in [("G_h", &fg.gh), ("G_v", &fg.gv)] {
        let mut bal: BTreeMap<Region, Q> = BTreeMap::new();
        for e in edges.iter() {
            *bal.entry(e.from).or_insert_with(zero) -= &x[e.var];
            *bal.entry(e.to).or_insert_with(zero) += &x[e.var];
        }
        for (reg, b) in bal {
            if let Region::Pocket(z) = reg {
                if !b.is_zero() {
                    out.fail("conservation", format!("{name} pocket {z} has excess {}", format_q(&b)));
                }
            }
        }
    }
    for &(h, v) in &fg.pairs {
        if x[h] != x[v] {
            out.fail("pairing", format!("{} = {} but {} = {}", s.segments[h], format_q(&x[h]), s.segments[v], format_q(&x[v])));
        }
    }
    out
}

/// Largest absolute residual of `x` in floating point.
pub fn residual(s: &SegmentSystem, x: &[Q]) -> f64 {
    s.equations
        .iter()
        .map(|e| {
            let lhs: f64 = e.terms.iter().map(|&(v, c)| c as f64 * to_f64(&x[v])).sum();
            (lhs - e.rhs as f64).abs()
        })
        .fold(0.0, f64::max)
}

/// The host vertex of a segment's owner.
pub fn owner_in_host(s: &SegmentSystem, seg: &Segment) -> usize {
    host_id(s.realizer.vn(), seg.owner)
}
