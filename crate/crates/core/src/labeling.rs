//! Red/blue edge labelings and 2-canonical orders.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{articulation_points, cyclic_eq, is_connected, PlaneGraph};
use crate::report::Report;
use crate::schnyder::{boundary_path, delete_green, find_cycle, sub_id, Arc, Color, SchnyderRealizer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeLabeling {
    host: PlaneGraph,
    base_edge: [usize; 2],
    /// Indexed by host edge index; `None` on the base edge.
    arcs: Vec<Option<Arc>>,
}

impl EdgeLabeling {
    pub fn from_arcs(host: PlaneGraph, base_edge: [usize; 2], arcs: &[Arc]) -> Result<Self> {
        let mut slots = vec![None; host.m()];
        for a in arcs {
            if a.color == Color::Green {
                return Err(Error::InvalidLabeling("labelings use red and blue only".into()));
            }
            let e = host
                .edge_index(a.tail, a.head)
                .ok_or_else(|| Error::InvalidLabeling(format!("arc {}→{} is not an edge", a.tail, a.head)))?;
            if slots[e].replace(*a).is_some() {
                return Err(Error::InvalidLabeling(format!("edge {}-{} labeled twice", a.tail, a.head)));
            }
        }
        Ok(Self { host, base_edge, arcs: slots })
    }

    pub fn host(&self) -> &PlaneGraph {
        &self.host
    }

    pub fn base_edge(&self) -> [usize; 2] {
        self.base_edge
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.arcs.iter().flatten().copied()
    }

    pub fn arc_between(&self, u: usize, v: usize) -> Option<Arc> {
        self.host.edge_index(u, v).and_then(|e| self.arcs[e])
    }

    pub fn out(&self, v: usize, color: Color) -> Option<usize> {
        self.host
            .neighbors(v)
            .iter()
            .filter_map(|&u| self.arc_between(v, u))
            .find(|a| a.tail == v && a.color == color)
            .map(|a| a.head)
    }

    /// Edge-for-edge equality of the colored arcs.
    pub fn same_arcs(&self, other: &EdgeLabeling) -> bool {
        let mut a: Vec<Arc> = self.arcs().collect();
        let mut b: Vec<Arc> = other.arcs().collect();
        a.sort_by_key(|x| (x.tail, x.head));
        b.sort_by_key(|x| (x.tail, x.head));
        self.base_edge == other.base_edge && a == b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoCanonicalOrder {
    pub order: Vec<usize>,
    pub base_edge: [usize; 2],
}

/// Restriction of the red and blue trees to `H∖Sn`.
pub fn labeling_from_realizer(r: &SchnyderRealizer) -> Result<EdgeLabeling> {
    let g = delete_green(r);
    let vn = r.vn();
    let arcs: Vec<Arc> = r
        .arcs()
        .filter(|a| a.color != Color::Green)
        .map(|a| Arc {
            tail: sub_id(vn, a.tail),
            head: sub_id(vn, a.head),
            color: a.color,
        })
        .collect();
    let base = [sub_id(vn, r.v1()), sub_id(vn, r.v2())];
    let el = EdgeLabeling::from_arcs(g, base, &arcs)?;
    let rep = validate_labeling(&el);
    if !rep.is_ok() {
        return Err(Error::InvalidLabeling(rep.to_string()));
    }
    Ok(el)
}

/// Clockwise: out-red, out-blue, in-red*, in-blue*.
fn local_rule(toks: &[(bool, Color)]) -> bool {
    let outs = toks.iter().filter(|t| t.0).count();
    let Some(s) = toks.iter().position(|&t| t == (true, Color::Red)) else {
        return false;
    };
    if outs != 2 {
        return false;
    }
    let seq: Vec<(bool, Color)> = (0..toks.len()).map(|i| toks[(s + i) % toks.len()]).collect();
    if seq.len() < 2 || seq[1] != (true, Color::Blue) {
        return false;
    }
    let rest = &seq[2..];
    let reds = rest.iter().take_while(|&&t| t == (false, Color::Red)).count();
    rest[reds..].iter().all(|&t| t == (false, Color::Blue))
}

/// Checks the local rule, the rule at v1 and v2, and acyclicity after
/// reversing every red edge.
pub fn validate_labeling(el: &EdgeLabeling) -> Report {
    let mut rep = Report::new();
    let g = &el.host;
    let [v1, v2] = el.base_edge;
    if !g.has_edge(v1, v2) {
        rep.fail("base-edge", format!("{v1}-{v2} is not an edge"));
        return rep;
    }
    for (e, &[u, v]) in g.edges().iter().enumerate() {
        let base = (u, v) == (v1, v2) || (u, v) == (v2, v1);
        match (base, el.arcs[e]) {
            (true, Some(_)) => rep.fail("base-colored", format!("{u}-{v}")),
            (false, None) => rep.fail("uncolored", format!("{u}-{v}")),
            _ => {}
        }
    }
    if !rep.is_ok() {
        return rep;
    }
    for v in 0..g.n() {
        let toks: Vec<(bool, Color)> = g
            .neighbors(v)
            .iter()
            .filter_map(|&u| el.arc_between(v, u).map(|a| (a.tail == v, a.color)))
            .collect();
        if v == v1 || v == v2 {
            let want = if v == v1 { Color::Red } else { Color::Blue };
            if toks.iter().any(|&(out, c)| out || c != want) {
                rep.fail("outer-rule", format!("vertex {v}: every non-base edge must be incoming {}", want.name()));
            }
        } else if !local_rule(&toks) {
            let d: Vec<String> = toks
                .iter()
                .map(|&(o, c)| format!("{}-{}", if o { "out" } else { "in" }, c.name()))
                .collect();
            rep.fail("clockwise-rule", format!("vertex {v}: {}", d.join(", ")));
        }
    }
    let mut adj = vec![Vec::new(); g.n()];
    for a in el.arcs() {
        match a.color {
            Color::Red => adj[a.head].push(a.tail),
            _ => adj[a.tail].push(a.head),
        }
    }
    if let Some(c) = find_cycle(g.n(), &adj) {
        rep.fail("acyclic", format!("cycle {c:?} after reversing red edges"));
    }
    rep
}

/// Ear peeling: repeatedly remove the first outer-path vertex whose two path
/// edges leave it (red towards v1, blue towards v2) and which has no incoming
/// edge left. The order is the reversed peel sequence after v1, v2.
pub fn two_canonical_from_labeling(el: &EdgeLabeling) -> Result<TwoCanonicalOrder> {
    let g = &el.host;
    let n = g.n();
    let [v1, v2] = el.base_edge;
    let mut alive = vec![true; n];
    let mut peeled = Vec::with_capacity(n.saturating_sub(2));
    for _ in 2..n {
        let path = boundary_path(g, &alive, v1, v2)
            .ok_or_else(|| Error::NoEar("outer face is not a simple cycle".into()))?;
        let is_out = |x: usize, y: usize, c: Color| {
            el.arc_between(x, y).is_some_and(|a| a.tail == x && a.color == c)
        };
        let i = (1..path.len() - 1)
            .find(|&i| is_out(path[i], path[i - 1], Color::Red) && is_out(path[i], path[i + 1], Color::Blue))
            .ok_or_else(|| Error::NoEar(format!("outer path {path:?}")))?;
        let x = path[i];
        let extra: Vec<usize> = g
            .neighbors(x)
            .iter()
            .copied()
            .filter(|&u| alive[u] && u != path[i - 1] && u != path[i + 1])
            .collect();
        if !extra.is_empty() {
            return Err(Error::InvalidLabeling(format!("ear {x} still has incoming edges from {extra:?}")));
        }
        check_disjoint_paths(el, &alive, x)?;
        alive[x] = false;
        peeled.push(x);
    }
    let mut order = vec![v1, v2];
    order.extend(peeled.iter().rev());
    let o = TwoCanonicalOrder {
        order,
        base_edge: [v1, v2],
    };
    let rep = validate_two_canonical(g, &o);
    if !rep.is_ok() {
        return Err(Error::InvalidOrder(rep.to_string()));
    }
    Ok(o)
}

/// The red path from `x` to v1 and the blue path from `x` to v2 share only `x`.
fn check_disjoint_paths(el: &EdgeLabeling, alive: &[bool], x: usize) -> Result<()> {
    let [v1, v2] = el.base_edge;
    let walk = |c: Color, target: usize| -> Result<Vec<usize>> {
        let mut p = vec![x];
        let mut y = x;
        while y != target {
            y = el
                .out(y, c)
                .filter(|&z| alive[z])
                .ok_or_else(|| Error::InvalidLabeling(format!("{} path from {x} breaks at {y}", c.name())))?;
            p.push(y);
            if p.len() > alive.len() {
                return Err(Error::InvalidLabeling(format!("{} path from {x} cycles", c.name())));
            }
        }
        Ok(p)
    };
    let red = walk(Color::Red, v1)?;
    let blue = walk(Color::Blue, v2)?;
    if let Some(c) = red[1..].iter().find(|v| blue[1..].contains(v)) {
        return Err(Error::InvalidLabeling(format!("red and blue paths from {x} meet at {c}")));
    }
    Ok(())
}

/// One insertion step of a 2-canonical order on the abstract boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Step {
    pub left: usize,
    pub right: usize,
    pub li: usize,
    pub ri: usize,
}

/// Checks whether `v` can be inserted next: exactly two placed neighbours,
/// both on the boundary, with every boundary vertex strictly between them
/// already complete.
pub(crate) fn try_step(g: &PlaneGraph, path: &[usize], placed: &[bool], v: usize) -> std::result::Result<Step, String> {
    let earlier: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| placed[u]).collect();
    if earlier.len() != 2 {
        return Err(format!("{v} has {} earlier neighbours {earlier:?}", earlier.len()));
    }
    let pos = |u: usize| path.iter().position(|&x| x == u);
    let (Some(a), Some(b)) = (pos(earlier[0]), pos(earlier[1])) else {
        return Err(format!("earlier neighbours {earlier:?} of {v} are not both on the boundary {path:?}"));
    };
    let (li, ri) = if a < b { (a, b) } else { (b, a) };
    for &c in &path[li + 1..ri] {
        if let Some(&u) = g.neighbors(c).iter().find(|&&u| !placed[u] && u != v) {
            return Err(format!("{v} covers {c}, which still has the later neighbour {u}"));
        }
    }
    Ok(Step {
        left: path[li],
        right: path[ri],
        li,
        ri,
    })
}

/// Checks the order ignoring the embedding of `g`.
pub fn validate_two_canonical_abstract(g: &PlaneGraph, o: &TwoCanonicalOrder) -> Report {
    simulate(g, o, false)
}

/// Checks the order and additionally that the embedding it induces is the
/// embedding of `g` with outer face left of v1→v2.
pub fn validate_two_canonical(g: &PlaneGraph, o: &TwoCanonicalOrder) -> Report {
    simulate(g, o, true)
}

fn simulate(g: &PlaneGraph, o: &TwoCanonicalOrder, embedded: bool) -> Report {
    let mut rep = Report::new();
    let n = g.n();
    let mut seen = vec![false; n];
    if o.order.len() != n || !o.order.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true)) {
        rep.fail("permutation", "order is not a permutation of the vertices");
        return rep;
    }
    let [v1, v2] = o.base_edge;
    if n < 2 || o.order[0] != v1 || o.order[1] != v2 || !g.has_edge(v1, v2) {
        rep.fail("base-edge", format!("order must start with the edge {v1}-{v2}"));
        return rep;
    }
    let adj = g.adjacency();
    let mut placed = vec![false; n];
    placed[v1] = true;
    placed[v2] = true;
    let mut path = vec![v1, v2];
    for (k, &v) in o.order.iter().enumerate().skip(2) {
        match try_step(g, &path, &placed, v) {
            Ok(s) => {
                placed[v] = true;
                path.splice(s.li + 1..s.ri, [v]);
            }
            Err(w) => {
                rep.fail("insertion", format!("step {}: {w}", k + 1));
                return rep;
            }
        }
        if !is_connected(&adj, Some(&placed)) || !articulation_points(&adj, Some(&placed)).is_empty() {
            rep.fail("biconnected", format!("G_{} has a cut vertex", k + 1));
        }
    }
    if embedded && rep.is_ok() {
        match embed_from_order(g, o) {
            Ok(e) => {
                let bad: Vec<usize> = (0..n).filter(|&v| !cyclic_eq(e.neighbors(v), g.neighbors(v))).collect();
                if !bad.is_empty() {
                    rep.fail("embedding", format!("induced rotation differs at {bad:?}"));
                } else if !cyclic_eq(e.outer_face(), g.outer_face()) {
                    rep.fail("embedding", format!("outer face {:?}, expected {:?}", g.outer_face(), e.outer_face()));
                }
            }
            Err(err) => rep.fail("embedding", err.to_string()),
        }
    }
    rep
}

/// The embedding a 2-canonical order induces: each new vertex goes into the
/// free boundary angle of its two predecessors; the outer face is left of
/// v1→v2.
pub fn embed_from_order(g: &PlaneGraph, o: &TwoCanonicalOrder) -> Result<PlaneGraph> {
    let n = g.n();
    let [v1, v2] = o.base_edge;
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
    rot[v1].push(v2);
    rot[v2].push(v1);
    let mut placed = vec![false; n];
    placed[v1] = true;
    placed[v2] = true;
    let mut path = vec![v1, v2];
    for &v in &o.order[2..] {
        let s = try_step(g, &path, &placed, v).map_err(Error::InvalidOrder)?;
        for i in [s.li, s.ri] {
            let next = if i + 1 < path.len() { path[i + 1] } else { v1 };
            let list = &mut rot[path[i]];
            let at = list.iter().position(|&u| u == next).expect("boundary successor is a neighbour") + 1;
            list.insert(at, v);
        }
        rot[v] = vec![s.left, s.right];
        placed[v] = true;
        path.splice(s.li + 1..s.ri, [v]);
    }
    let e = PlaneGraph::from_rotation(rot, None)?;
    let face = e.face_left_of(v1, v2);
    e.with_outer_face(face)?.with_labels(g.labels().map(|l| l.to_vec())).map(|e| e.with_base_edge(Some([v1, v2])))
}

/// The labeling a 2-canonical order induces: red to the predecessor nearer
/// v1 on the boundary, blue to the other.
pub fn labeling_from_order(g: &PlaneGraph, o: &TwoCanonicalOrder) -> Result<EdgeLabeling> {
    let n = g.n();
    let [v1, v2] = o.base_edge;
    let mut placed = vec![false; n];
    placed[v1] = true;
    placed[v2] = true;
    let mut path = vec![v1, v2];
    let mut arcs = Vec::new();
    for &v in &o.order[2..] {
        let s = try_step(g, &path, &placed, v).map_err(Error::InvalidOrder)?;
        arcs.push(Arc { tail: v, head: s.left, color: Color::Red });
        arcs.push(Arc { tail: v, head: s.right, color: Color::Blue });
        placed[v] = true;
        path.splice(s.li + 1..s.ri, [v]);
    }
    EdgeLabeling::from_arcs(g.clone(), [v1, v2], &arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_triangulation;
    use crate::schnyder::compute_realizer;

    pub(crate) fn diamond() -> PlaneGraph {
        // 2 and 3 both stacked on the base edge 0-1; 3 is outside.
        PlaneGraph::assemble(4, vec![[0, 1], [0, 2], [1, 2], [0, 3], [1, 3]], None, Some(vec![0, 1, 3]), Some([0, 1]))
            .unwrap()
    }

    #[test]
    fn k4_restricts_to_triangle() {
        let r = compute_realizer(&random_triangulation(4, 0), [0, 1, 3]).unwrap();
        let el = labeling_from_realizer(&r).unwrap();
        assert_eq!(el.host().n(), 3);
        assert_eq!(el.out(2, Color::Red), Some(0));
        assert_eq!(el.out(2, Color::Blue), Some(1));
        let o = two_canonical_from_labeling(&el).unwrap();
        assert_eq!(o.order, vec![0, 1, 2]);
    }

    #[test]
    fn diamond_orders() {
        let g = diamond();
        let o = TwoCanonicalOrder { order: vec![0, 1, 2, 3], base_edge: [0, 1] };
        assert!(validate_two_canonical(&g, &o).is_ok());
        let el = labeling_from_order(&g, &o).unwrap();
        assert!(validate_labeling(&el).is_ok());
        let back = two_canonical_from_labeling(&el).unwrap();
        assert!(back.order == vec![0, 1, 2, 3] || back.order == vec![0, 1, 3, 2]);
        // 3 is outside, so inserting it first contradicts the embedding.
        let swapped = TwoCanonicalOrder { order: vec![0, 1, 3, 2], base_edge: [0, 1] };
        assert!(validate_two_canonical_abstract(&g, &swapped).is_ok());
        assert!(validate_two_canonical(&g, &swapped).has("embedding"));
    }

    #[test]
    fn k4_order_has_three_earlier_neighbours() {
        let g = random_triangulation(4, 0);
        let o = TwoCanonicalOrder { order: vec![0, 1, 2, 3], base_edge: [0, 1] };
        assert!(validate_two_canonical(&g, &o).has("insertion"));
    }

    #[test]
    fn non_boundary_predecessors_are_witnessed() {
        // 2 on (0,1); 3 on (0,2) covers nothing; 4 on (0,1) covers 3 and 2
        // fine; 5 on (2,3) needs 2, which is now covered.
        let g = PlaneGraph::from_edges(
            6,
            &[[0, 1], [0, 2], [1, 2], [0, 3], [2, 3], [0, 4], [1, 4], [2, 5], [3, 5]],
        )
        .unwrap();
        let o = TwoCanonicalOrder { order: vec![0, 1, 2, 3, 4, 5], base_edge: [0, 1] };
        let rep = validate_two_canonical_abstract(&g, &o);
        assert!(rep.has("insertion"), "{rep}");
    }

    #[test]
    fn two_outgoing_reds_violate_local_rule() {
        let r = compute_realizer(&random_triangulation(8, 1), [0, 1, 7]).unwrap();
        let el = labeling_from_realizer(&r).unwrap();
        let v = (2..7).find(|&v| el.host().degree(v) >= 3).unwrap();
        let arcs: Vec<Arc> = el
            .arcs()
            .map(|a| if a.tail == v && a.color == Color::Blue { Arc { color: Color::Red, ..a } } else { a })
            .collect();
        let bad = EdgeLabeling::from_arcs(el.host().clone(), el.base_edge(), &arcs).unwrap();
        assert!(validate_labeling(&bad).has("clockwise-rule"));
    }

    #[test]
    fn red_reversal_cycle_is_found() {
        let g = PlaneGraph::assemble(
            4,
            vec![[0, 1], [0, 2], [1, 2], [2, 3], [1, 3]],
            None,
            Some(vec![0, 1, 3, 2]),
            Some([0, 1]),
        )
        .unwrap();
        let clash = [
            Arc { tail: 3, head: 2, color: Color::Red },
            Arc { tail: 2, head: 3, color: Color::Blue },
        ];
        assert!(EdgeLabeling::from_arcs(g.clone(), [0, 1], &clash).is_err());
        // Blue 2 → 3 → 1 → 2 is a directed cycle.
        let arcs = [
            Arc { tail: 2, head: 0, color: Color::Red },
            Arc { tail: 2, head: 3, color: Color::Blue },
            Arc { tail: 3, head: 1, color: Color::Blue },
            Arc { tail: 1, head: 2, color: Color::Blue },
        ];
        let el = EdgeLabeling::from_arcs(g, [0, 1], &arcs).unwrap();
        assert!(validate_labeling(&el).has("acyclic"));
    }

    #[test]
    fn corpus_labelings_peel_fully() {
        for seed in 0..20 {
            let n = 5 + (seed as usize * 11) % 50;
            let r = compute_realizer(&random_triangulation(n, seed), [0, 1, n - 1]).unwrap();
            let el = labeling_from_realizer(&r).unwrap();
            let o = two_canonical_from_labeling(&el).unwrap();
            assert_eq!(o.order.len(), n - 1);
            let back = labeling_from_order(el.host(), &o).unwrap();
            assert!(back.same_arcs(&el), "seed {seed}");
        }
    }
}
