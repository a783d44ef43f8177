//! Schnyder realizers of maximally planar graphs and canonical orders.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{articulation_points, cyclic_eq, is_connected, PlaneGraph};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
    Green,
}

impl Color {
    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Blue => "blue",
            Color::Green => "green",
        }
    }

    pub fn index(self) -> usize {
        match self {
            Color::Red => 0,
            Color::Blue => 1,
            Color::Green => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchnyderRealizer {
    host: PlaneGraph,
    outer: [usize; 3],
    /// Indexed by host edge index; `None` on the three outer edges.
    arcs: Vec<Option<Arc>>,
}

impl SchnyderRealizer {
    /// Wraps colored arcs without checking them; see [`validate_realizer`].
    pub fn from_arcs(host: PlaneGraph, outer: [usize; 3], arcs: &[Arc]) -> Result<Self> {
        let mut slots = vec![None; host.m()];
        for a in arcs {
            let e = host.edge_index(a.tail, a.head).ok_or_else(|| {
                Error::InvalidRealizer(format!("arc {}→{} is not an edge", a.tail, a.head))
            })?;
            if slots[e].is_some() {
                return Err(Error::InvalidRealizer(format!("edge {}-{} colored twice", a.tail, a.head)));
            }
            slots[e] = Some(*a);
        }
        Ok(Self {
            host,
            outer,
            arcs: slots,
        })
    }

    pub fn host(&self) -> &PlaneGraph {
        &self.host
    }

    pub fn outer(&self) -> [usize; 3] {
        self.outer
    }

    pub fn v1(&self) -> usize {
        self.outer[0]
    }

    pub fn v2(&self) -> usize {
        self.outer[1]
    }

    pub fn vn(&self) -> usize {
        self.outer[2]
    }

    pub fn is_outer(&self, v: usize) -> bool {
        self.outer.contains(&v)
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.arcs.iter().flatten().copied()
    }

    pub fn arc_between(&self, u: usize, v: usize) -> Option<Arc> {
        self.host.edge_index(u, v).and_then(|e| self.arcs[e])
    }

    /// Outgoing neighbour of `v` in the tree of `color`. `None` for outer
    /// vertices, whose green parent is the dummy vertex.
    pub fn sigma(&self, color: Color, v: usize) -> Option<usize> {
        self.host
            .neighbors(v)
            .iter()
            .filter_map(|&u| self.arc_between(v, u))
            .find(|a| a.tail == v && a.color == color)
            .map(|a| a.head)
    }

    /// All parent maps at once: `parents[c][v]`.
    pub fn parents(&self) -> [Vec<Option<usize>>; 3] {
        let n = self.host.n();
        let mut p = [vec![None; n], vec![None; n], vec![None; n]];
        for a in self.arcs() {
            p[a.color.index()][a.tail] = Some(a.head);
        }
        p
    }

    /// Children of every vertex in the green tree.
    pub fn green_children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.host.n()];
        for a in self.arcs() {
            if a.color == Color::Green {
                ch[a.head].push(a.tail);
            }
        }
        ch
    }

    /// Same host edges and identical colored arcs.
    pub fn same_arcs(&self, other: &SchnyderRealizer) -> bool {
        let a: BTreeSet<(usize, usize, Color)> = self.arcs().map(|a| (a.tail, a.head, a.color)).collect();
        let b: BTreeSet<(usize, usize, Color)> = other.arcs().map(|a| (a.tail, a.head, a.color)).collect();
        a == b
    }

    /// Reverses a directed triangle and recolors by middle paths. Returns
    /// `None` if the three edges do not form a directed cycle.
    pub fn flip_cycle(&self, tri: [usize; 3]) -> Option<SchnyderRealizer> {
        let [a, b, c] = tri;
        let pairs = [(a, b), (b, c), (c, a)];
        let arcs: Vec<Arc> = pairs.iter().filter_map(|&(x, y)| self.arc_between(x, y)).collect();
        if arcs.len() != 3 {
            return None;
        }
        let forward = pairs.iter().zip(&arcs).all(|(&(x, _), a)| a.tail == x);
        let backward = pairs.iter().zip(&arcs).all(|(&(_, y), a)| a.tail == y);
        if !forward && !backward {
            return None;
        }
        let mut dirs: Vec<Option<(usize, usize)>> =
            self.arcs.iter().map(|a| a.map(|a| (a.tail, a.head))).collect();
        for a in &arcs {
            let e = self.host.edge_index(a.tail, a.head).unwrap();
            dirs[e] = Some((a.head, a.tail));
        }
        recolor(&self.host, self.outer, &dirs).ok()
    }
}

/// Colors a 3-orientation: the color of `u→w` is the outer vertex reached by
/// always leaving through the middle of the three outgoing edges.
pub fn recolor(h: &PlaneGraph, outer: [usize; 3], dirs: &[Option<(usize, usize)>]) -> Result<SchnyderRealizer> {
    let n = h.n();
    let is_out = |v: usize, u: usize| -> bool {
        h.edge_index(v, u)
            .and_then(|e| dirs[e])
            .is_some_and(|(t, _)| t == v)
    };
    let mut memo: HashMap<(usize, usize), Color> = HashMap::new();
    let mut arcs = Vec::new();
    for &(t0, h0) in dirs.iter().flatten() {
        let mut trail = Vec::new();
        let (mut u, mut w) = (t0, h0);
        let color = loop {
            if let Some(&c) = memo.get(&(u, w)) {
                break c;
            }
            if let Some(i) = outer.iter().position(|&o| o == w) {
                break [Color::Red, Color::Blue, Color::Green][i];
            }
            trail.push((u, w));
            if trail.len() > 3 * n {
                return Err(Error::InvalidRealizer("middle path does not terminate".into()));
            }
            // Outgoing edges of w in clockwise order starting after u.
            let rot = h.neighbors(w);
            let start = h.rotation_pos(w, u);
            let seq: Vec<usize> = (1..rot.len())
                .map(|i| rot[(start + i) % rot.len()])
                .filter(|&x| is_out(w, x))
                .collect();
            if seq.len() != 3 {
                return Err(Error::InvalidRealizer(format!("vertex {w} has out-degree {}", seq.len())));
            }
            u = w;
            w = seq[1];
        };
        for key in trail {
            memo.insert(key, color);
        }
        memo.insert((t0, h0), color);
        arcs.push(Arc {
            tail: t0,
            head: h0,
            color,
        });
    }
    SchnyderRealizer::from_arcs(h.clone(), outer, &arcs)
}

fn outer_edges(outer: [usize; 3]) -> [(usize, usize); 3] {
    [(outer[0], outer[1]), (outer[1], outer[2]), (outer[2], outer[0])]
}

/// Checks the local rule, the outer-vertex rule, the spanning-tree property
/// and acyclicity of S1 ∪ S2 ∪ Sn⁻¹.
pub fn validate_realizer(r: &SchnyderRealizer) -> Report {
    let mut rep = Report::new();
    let h = &r.host;
    let n = h.n();
    if !cyclic_eq(h.outer_face(), &r.outer) {
        rep.fail(
            "outer-face",
            format!("outer {:?} is not the host outer face {:?}", r.outer, h.outer_face()),
        );
    }
    let outer_set = outer_edges(r.outer);
    for (e, &[u, v]) in h.edges().iter().enumerate() {
        let is_outer_edge = outer_set.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u));
        match (is_outer_edge, r.arcs[e]) {
            (true, Some(_)) => rep.fail("outer-edge-colored", format!("{u}-{v}")),
            (false, None) => rep.fail("inner-edge-uncolored", format!("{u}-{v}")),
            _ => {}
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    for v in 0..n {
        let toks: Vec<(bool, Color)> = h
            .neighbors(v)
            .iter()
            .filter_map(|&u| r.arc_between(v, u).map(|a| (a.tail == v, a.color)))
            .collect();
        if let Some(i) = r.outer.iter().position(|&o| o == v) {
            let want = [Color::Red, Color::Blue, Color::Green][i];
            if toks.iter().any(|&(out, c)| out || c != want) {
                rep.fail("outer-vertex", format!("vertex {v} has an edge that is not incoming {}", want.name()));
            }
            continue;
        }
        if !local_rule(&toks) {
            rep.fail("clockwise-rule", format!("vertex {v}: {}", describe(&toks)));
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    let parents = r.parents();
    for (ci, c) in [Color::Red, Color::Blue, Color::Green].iter().enumerate() {
        let root = r.outer[ci];
        for v in 0..n {
            if r.is_outer(v) {
                continue;
            }
            let mut x = v;
            let mut steps = 0;
            while let Some(p) = parents[ci][x] {
                x = p;
                steps += 1;
                if steps > n {
                    break;
                }
            }
            if x != root {
                rep.fail("spanning-tree", format!("{} path from {v} does not reach {root}", c.name()));
            }
        }
    }
    if let Some(cycle) = find_cycle(n, &combined_digraph(r)) {
        rep.fail("acyclic", format!("directed cycle {cycle:?} in S1 ∪ S2 ∪ Sn⁻¹"));
    }
    rep
}

fn describe(toks: &[(bool, Color)]) -> String {
    toks.iter()
        .map(|&(out, c)| format!("{}{}", if out { "out-" } else { "in-" }, c.name()))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Clockwise: out-red, in-green*, out-blue, in-red*, out-green, in-blue*.
fn local_rule(toks: &[(bool, Color)]) -> bool {
    let outs: Vec<usize> = (0..toks.len()).filter(|&i| toks[i].0).collect();
    if outs.len() != 3 {
        return false;
    }
    let Some(start) = toks.iter().position(|&t| t == (true, Color::Red)) else {
        return false;
    };
    let seq: Vec<(bool, Color)> = (0..toks.len()).map(|i| toks[(start + i) % toks.len()]).collect();
    let mut phase = 0;
    let expected = [
        (true, Color::Red),
        (false, Color::Green),
        (true, Color::Blue),
        (false, Color::Red),
        (true, Color::Green),
        (false, Color::Blue),
    ];
    for t in seq {
        // Advance to the first phase at or after the current one accepting t.
        while phase < 6 && expected[phase] != t {
            if expected[phase].0 {
                return false;
            }
            phase += 1;
        }
        if phase == 6 {
            return false;
        }
        if expected[phase].0 {
            phase += 1;
        }
    }
    phase >= 5
}

/// Edges of S1 ∪ S2 ∪ Sn⁻¹ as adjacency lists.
fn combined_digraph(r: &SchnyderRealizer) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); r.host.n()];
    for a in r.arcs() {
        match a.color {
            Color::Green => adj[a.head].push(a.tail),
            _ => adj[a.tail].push(a.head),
        }
    }
    adj
}

/// Some directed cycle, if one exists.
pub(crate) fn find_cycle(n: usize, adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut state = vec![0u8; n];
    let mut parent = vec![usize::MAX; n];
    for s in 0..n {
        if state[s] != 0 {
            continue;
        }
        let mut stack = vec![(s, 0usize)];
        state[s] = 1;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let u = adj[v][*i];
                *i += 1;
                if state[u] == 1 {
                    let mut cyc = vec![u];
                    let mut x = v;
                    while x != u {
                        cyc.push(x);
                        x = parent[x];
                    }
                    cyc.reverse();
                    cyc.rotate_right(1);
                    return Some(cyc);
                }
                if state[u] == 0 {
                    state[u] = 1;
                    parent[u] = v;
                    stack.push((u, 0));
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalOrder {
    pub order: Vec<usize>,
    pub base_edge: [usize; 2],
}

fn require_triangulation(h: &PlaneGraph) -> Result<()> {
    if !h.is_triangulation() {
        return Err(Error::NotTriangulation(format!(
            "n={} m={} (expected {})",
            h.n(),
            h.m(),
            3 * h.n().max(3) - 6
        )));
    }
    Ok(())
}

/// Re-roots `h` so that `outer` is its outer face.
fn rooted(h: &PlaneGraph, outer: [usize; 3]) -> Result<PlaneGraph> {
    if cyclic_eq(h.outer_face(), &outer) {
        return Ok(h.clone());
    }
    h.clone()
        .with_outer_face(outer.to_vec())
        .map_err(|_| Error::InconsistentInputs(format!("{outer:?} is not a clockwise face of the host")))
}

/// A realizer obtained from a canonical order computed by shelling from vn.
pub fn compute_realizer(h: &PlaneGraph, outer: [usize; 3]) -> Result<SchnyderRealizer> {
    require_triangulation(h)?;
    let h = rooted(h, outer)?;
    let co = shelling_order(&h, outer);
    realizer_from_canonical_order(&h, &co)
}

/// Reverse shelling: repeatedly remove the lowest-id chord-free vertex of
/// the boundary path between v1 and v2.
fn shelling_order(h: &PlaneGraph, outer: [usize; 3]) -> CanonicalOrder {
    let n = h.n();
    let [v1, v2, vn] = outer;
    let mut alive = vec![true; n];
    let mut on_path = vec![false; n];
    let mut path = vec![v1, vn, v2];
    for &v in &path {
        on_path[v] = true;
    }
    // Number of alive neighbours currently on the path.
    let mut pc: Vec<usize> = (0..n)
        .map(|v| h.neighbors(v).iter().filter(|&&u| on_path[u]).count())
        .collect();
    let mut removed = Vec::with_capacity(n);
    while path.len() > 2 {
        let i = (1..path.len() - 1)
            .filter(|&i| pc[path[i]] == 2)
            .min_by_key(|&i| path[i])
            .expect("a triangulation always has a removable boundary vertex");
        let v = path[i];
        let (a, b) = (path[i - 1], path[i + 1]);
        alive[v] = false;
        on_path[v] = false;
        for &u in h.neighbors(v) {
            pc[u] -= 1;
        }
        let view = h.view(&alive);
        let mut fresh = Vec::new();
        let mut x = view.cw_next(v, a);
        // cw_next on a dead centre still walks v's rotation, skipping dead ones.
        while x != b {
            fresh.push(x);
            x = view.cw_next(v, x);
        }
        for &x in &fresh {
            on_path[x] = true;
            for &u in h.neighbors(x) {
                pc[u] += 1;
            }
        }
        path.splice(i..=i, fresh);
        removed.push(v);
    }
    let mut order = vec![v1, v2];
    order.extend(removed.iter().rev());
    CanonicalOrder {
        order,
        base_edge: [v1, v2],
    }
}

/// Colors edges while replaying the order: the new vertex sends red to its
/// leftmost earlier neighbour, blue to its rightmost, and receives green from
/// the boundary vertices it covers.
pub fn realizer_from_canonical_order(h: &PlaneGraph, co: &CanonicalOrder) -> Result<SchnyderRealizer> {
    require_triangulation(h)?;
    let n = h.n();
    if co.order.len() != n {
        return Err(Error::InvalidOrder(format!("order has {} vertices, host has {n}", co.order.len())));
    }
    let [v1, v2] = co.base_edge;
    if co.order[0] != v1 || co.order[1] != v2 {
        return Err(Error::InvalidOrder("order must start with the base edge".into()));
    }
    let vn = co.order[n - 1];
    let outer = [v1, v2, vn];
    let h = rooted(h, outer)?;
    let mut placed = vec![false; n];
    let mut path = vec![v1, v2];
    placed[v1] = true;
    placed[v2] = true;
    let mut arcs = Vec::new();
    for (k, &v) in co.order.iter().enumerate().skip(2) {
        if placed[v] {
            return Err(Error::InvalidOrder(format!("vertex {v} repeated")));
        }
        let (l, r) = attach_span(&h, &path, &placed, v)
            .ok_or_else(|| Error::InvalidOrder(format!("step {k}: earlier neighbours of {v} are not a boundary subpath")))?;
        if k == n - 1 && (l != 0 || r != path.len() - 1) {
            return Err(Error::InvalidOrder("last vertex must see the whole boundary".into()));
        }
        // vn's edges to v1 and v2 are outer edges and stay uncolored.
        if k < n - 1 {
            arcs.push(Arc { tail: v, head: path[l], color: Color::Red });
            arcs.push(Arc { tail: v, head: path[r], color: Color::Blue });
        }
        for &c in &path[l + 1..r] {
            arcs.push(Arc { tail: c, head: v, color: Color::Green });
        }
        placed[v] = true;
        path.splice(l + 1..r, [v]);
    }
    let r = SchnyderRealizer::from_arcs(h, outer, &arcs)?;
    let rep = validate_realizer(&r);
    if !rep.is_ok() {
        return Err(Error::InvalidOrder(format!("coloring is not a realizer: {rep}")));
    }
    if !is_topological(&r, &co.order) {
        return Err(Error::InvalidOrder("order is not topological for its own realizer".into()));
    }
    Ok(r)
}

/// Positions (l, r), l < r, such that the placed neighbours of `v` are exactly
/// `path[l..=r]`.
pub(crate) fn attach_span(h: &PlaneGraph, path: &[usize], placed: &[bool], v: usize) -> Option<(usize, usize)> {
    let idx: Vec<usize> = path
        .iter()
        .enumerate()
        .filter(|(_, &p)| h.has_edge(p, v))
        .map(|(i, _)| i)
        .collect();
    let earlier = h.neighbors(v).iter().filter(|&&u| placed[u]).count();
    if idx.len() < 2 || idx.len() != earlier {
        return None;
    }
    let (l, r) = (idx[0], idx[idx.len() - 1]);
    (r - l + 1 == idx.len()).then_some((l, r))
}

/// Every red or blue arc points to an earlier vertex, every green arc to a
/// later one.
pub fn is_topological(r: &SchnyderRealizer, order: &[usize]) -> bool {
    let n = r.host.n();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    if pos.contains(&usize::MAX) {
        return false;
    }
    r.arcs().all(|a| match a.color {
        Color::Green => pos[a.tail] < pos[a.head],
        _ => pos[a.head] < pos[a.tail],
    })
}

/// Kahn's algorithm on S1 ∪ S2 ∪ Sn⁻¹ with v1, v2 first, vn last and the
/// lowest available id in between.
pub fn canonical_order_from_realizer(r: &SchnyderRealizer) -> CanonicalOrder {
    let n = r.host.n();
    let [v1, v2, vn] = r.outer;
    let mut indeg = vec![0usize; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in r.arcs() {
        let (before, after) = match a.color {
            Color::Green => (a.tail, a.head),
            _ => (a.head, a.tail),
        };
        succ[before].push(after);
        indeg[after] += 1;
    }
    let mut order = vec![v1, v2];
    let mut ready: BTreeSet<usize> = BTreeSet::new();
    let release = |v: usize, ready: &mut BTreeSet<usize>, indeg: &mut Vec<usize>| {
        for &u in &succ[v] {
            indeg[u] -= 1;
            if indeg[u] == 0 && u != vn {
                ready.insert(u);
            }
        }
    };
    release(v1, &mut ready, &mut indeg);
    release(v2, &mut ready, &mut indeg);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        release(v, &mut ready, &mut indeg);
    }
    order.push(vn);
    CanonicalOrder {
        order,
        base_edge: [v1, v2],
    }
}

/// Id of host vertex `v` in `H∖Sn`, where vn is dropped and later ids shift down.
pub fn sub_id(vn: usize, v: usize) -> usize {
    if v > vn {
        v - 1
    } else {
        v
    }
}

/// Inverse of [`sub_id`].
pub fn host_id(vn: usize, g: usize) -> usize {
    if g >= vn {
        g + 1
    } else {
        g
    }
}

/// `H∖Sn`: vn and all green edges removed, embedding inherited, base edge
/// v1v2 marked, outer face left of v1→v2. Ids above vn shift down by one.
pub fn delete_green(r: &SchnyderRealizer) -> PlaneGraph {
    let h = &r.host;
    let vn = r.vn();
    let rot: Vec<Vec<usize>> = (0..h.n())
        .filter(|&v| v != vn)
        .map(|v| {
            h.neighbors(v)
                .iter()
                .filter(|&&u| u != vn && r.arc_between(v, u).is_none_or(|a| a.color != Color::Green))
                .map(|&u| sub_id(vn, u))
                .collect()
        })
        .collect();
    let (a, b) = (sub_id(vn, r.v1()), sub_id(vn, r.v2()));
    let g = PlaneGraph::from_rotation(rot, None).expect("H∖Sn inherits a valid embedding");
    let face = g.face_left_of(a, b);
    let labels = h.labels().map(|l| {
        (0..h.n()).filter(|&v| v != vn).map(|v| l[v].clone()).collect::<Vec<_>>()
    });
    g.with_outer_face(face)
        .and_then(|g| g.with_labels(labels))
        .expect("face of the same embedding")
        .with_base_edge(Some([a, b]))
}

/// Boundary path v1 … v2 of the alive subgraph's outer face (the face left of
/// v1→v2), or `None` if that face is not a simple cycle.
pub(crate) fn boundary_path(h: &PlaneGraph, alive: &[bool], v1: usize, v2: usize) -> Option<Vec<usize>> {
    let face = h.view(alive).face_left_of(v1, v2);
    let mut seen = BTreeSet::new();
    if !face.iter().all(|&v| seen.insert(v)) {
        return None;
    }
    let mut path = vec![v1];
    path.extend(face[2..].iter().rev());
    path.push(v2);
    Some(path)
}

/// Checks Definition-2 conditions prefix by prefix. Condition (ii) is checked
/// in two readings: the new vertex's earlier neighbours are consecutive on the
/// previous boundary (`subpath`), and the new boundary is the previous one
/// with the covered part replaced by the new vertex (`boundary-update`).
pub fn validate_canonical_order(h: &PlaneGraph, co: &CanonicalOrder) -> Report {
    let mut rep = Report::new();
    let n = h.n();
    let mut seen = vec![false; n];
    if co.order.len() != n || !co.order.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true)) {
        rep.fail("permutation", "order is not a permutation of the vertices");
        return rep;
    }
    let [v1, v2] = co.base_edge;
    if co.order[0] != v1 || co.order[1] != v2 || !h.has_edge(v1, v2) {
        rep.fail("base-edge", format!("order must start with the edge {v1}-{v2}"));
        return rep;
    }
    let adj = h.adjacency();
    let mut alive = vec![false; n];
    alive[v1] = true;
    alive[v2] = true;
    let mut path = vec![v1, v2];
    for (k, &v) in co.order.iter().enumerate().skip(2) {
        let span = attach_span(h, &path, &alive, v);
        if span.is_none() {
            rep.fail("subpath", format!("step {}: earlier neighbours of {v} are not consecutive on C_{}", k + 1, k));
        }
        alive[v] = true;
        if !is_connected(&adj, Some(&alive)) || !articulation_points(&adj, Some(&alive)).is_empty() {
            rep.fail("biconnected", format!("G_{} is not biconnected", k + 1));
            return rep;
        }
        match boundary_path(h, &alive, v1, v2) {
            None => {
                rep.fail("outer-cycle", format!("outer face of G_{} is not a cycle through {v1}-{v2}", k + 1));
                return rep;
            }
            Some(next) => {
                if let Some((l, r)) = span {
                    let mut expect = path[..=l].to_vec();
                    expect.push(v);
                    expect.extend(&path[r..]);
                    if expect != next {
                        rep.fail("boundary-update", format!("step {}: C_{} is {next:?}, expected {expect:?}", k + 1, k + 1));
                    }
                }
                path = next;
            }
        }
    }
    rep
}
