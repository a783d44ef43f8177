//! Recognition of maximal L-graphs: precedence orientation, the per-base-edge
//! test with stacked siblings solved recursively, and an exhaustive oracle.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{degeneracy_order, DegeneracyOrder, PlaneGraph};
use crate::labeling::{validate_two_canonical_abstract, TwoCanonicalOrder};
use crate::lrep::{build_lrep, validate_lrep};

/// Largest graph the oracle accepts.
pub const ORACLE_MAX_N: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrecedenceOrientation {
    pub base_edge: [usize; 2],
    /// Sorted predecessors of every non-base vertex.
    pub pred: Vec<Option<[usize; 2]>>,
    pub order_found: DegeneracyOrder,
}

/// Step at which a base edge was refused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refusal {
    pub step: String,
}

impl std::fmt::Display for Refusal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.step)
    }
}

fn refuse<T>(step: impl Into<String>) -> std::result::Result<T, Refusal> {
    Err(Refusal { step: step.into() })
}

/// Predecessor pair per vertex.
type Preds = Vec<Option<[usize; 2]>>;

/// Marking propagation restricted to `alive`: starting from the base pair,
/// repeatedly mark the lowest unmarked vertex with exactly two marked
/// neighbours. Returns predecessors and the marking sequence.
fn propagate(adj: &[Vec<usize>], alive: &[bool], v1: usize, v2: usize) -> Option<(Preds, Vec<usize>)> {
    let n = adj.len();
    let mut marked = vec![false; n];
    let mut count = vec![0usize; n];
    let mut pred = vec![None; n];
    let mut seq = vec![v1, v2];
    let mut ready = std::collections::BTreeSet::new();
    let total = alive.iter().filter(|&&a| a).count();
    let mark = |v: usize, marked: &mut Vec<bool>, count: &mut Vec<usize>, ready: &mut std::collections::BTreeSet<usize>| {
        marked[v] = true;
        for &u in &adj[v] {
            if alive[u] && !marked[u] {
                count[u] += 1;
                match count[u] {
                    2 => {
                        ready.insert(u);
                    }
                    3 => return false,
                    _ => {}
                }
            }
        }
        true
    };
    if !mark(v1, &mut marked, &mut count, &mut ready) || !mark(v2, &mut marked, &mut count, &mut ready) {
        return None;
    }
    while let Some(v) = ready.pop_first() {
        let mut p: Vec<usize> = adj[v].iter().copied().filter(|&u| alive[u] && marked[u]).collect();
        p.sort_unstable();
        pred[v] = Some([p[0], p[1]]);
        seq.push(v);
        if !mark(v, &mut marked, &mut count, &mut ready) {
            return None;
        }
    }
    (seq.len() == total).then_some((pred, seq))
}

/// The orientation of `g` by precedence from the ordered edge `e`, or `None`
/// if some vertex sees three marked neighbours or marking stalls.
pub fn precedence_orientation(g: &PlaneGraph, e: [usize; 2]) -> Option<PrecedenceOrientation> {
    if !g.has_edge(e[0], e[1]) {
        return None;
    }
    let (pred, seq) = propagate(&g.adjacency(), &vec![true; g.n()], e[0], e[1])?;
    let mut order_found = DegeneracyOrder { order: seq, k: 2, maximal: false };
    order_found.maximal = order_found.recount(g).1;
    Some(PrecedenceOrientation { base_edge: e, pred, order_found })
}

/// Vertices of the component of `alive ∖ {x, y}` containing `s`.
fn component(adj: &[Vec<usize>], alive: &[bool], x: usize, y: usize, s: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    seen[s] = true;
    let mut stack = vec![s];
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if alive[u] && u != x && u != y && !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen
}

/// Abstract boundary of a partial order: inserts `v` between its two placed
/// neighbours if both lie on the path and everything between is complete.
struct Boundary<'a> {
    adj: &'a [Vec<usize>],
    alive: &'a [bool],
    path: Vec<usize>,
    placed: Vec<bool>,
    order: Vec<usize>,
}

impl<'a> Boundary<'a> {
    fn new(adj: &'a [Vec<usize>], alive: &'a [bool], v1: usize, v2: usize) -> Self {
        let mut placed = vec![false; adj.len()];
        placed[v1] = true;
        placed[v2] = true;
        Self { adj, alive, path: vec![v1, v2], placed, order: Vec::new() }
    }

    /// Positions of `x` and `y` on the path in increasing order, if `v` with
    /// these predecessors can go in now.
    fn span(&self, v: usize, x: usize, y: usize) -> Option<(usize, usize)> {
        let a = self.path.iter().position(|&u| u == x)?;
        let b = self.path.iter().position(|&u| u == y)?;
        let (l, r) = (a.min(b), a.max(b));
        let complete = self.path[l + 1..r]
            .iter()
            .all(|&c| self.adj[c].iter().all(|&u| !self.alive[u] || self.placed[u] || u == v));
        complete.then_some((l, r))
    }

    fn insert(&mut self, v: usize, x: usize, y: usize) -> std::result::Result<(), Refusal> {
        let Some((l, r)) = self.span(v, x, y) else {
            return refuse(format!("{v} cannot be inserted between {x} and {y} on {:?}", self.path));
        };
        self.path.splice(l + 1..r, [v]);
        self.placed[v] = true;
        self.order.push(v);
        Ok(())
    }
}

/// Solves the subgraph `alive` with base (v1, v2); returns the non-base
/// vertices in insertion order.
fn solve(adj: &[Vec<usize>], alive: &[bool], v1: usize, v2: usize) -> std::result::Result<Vec<usize>, Refusal> {
    let Some((pred, _)) = propagate(adj, alive, v1, v2) else {
        return refuse(format!("no 2-degenerate order of the block on {} vertices starting at {v1}-{v2}", alive.iter().filter(|&&a| a).count()));
    };
    let mut b = Boundary::new(adj, alive, v1, v2);
    let total = alive.iter().filter(|&&a| a).count();
    while b.order.len() + 2 < total {
        // Admissible vertices grouped by their predecessor pair.
        let mut groups: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
        for v in (0..adj.len()).filter(|&v| alive[v] && !b.placed[v]) {
            let [x, y] = pred[v].expect("non-base vertex has predecessors");
            if b.placed[x] && b.placed[y] {
                groups.entry([x, y]).or_default().push(v);
            }
        }
        let Some((&[x, y], sibs)) = groups.iter().find(|(&[x, y], sibs)| b.span(sibs[0], x, y).is_some()) else {
            return refuse(format!("no admissible group fits the boundary {:?}", b.path));
        };
        let comps: Vec<Vec<bool>> = sibs.iter().map(|&u| component(adj, alive, x, y, u)).collect();
        for i in 0..sibs.len() {
            for j in i + 1..sibs.len() {
                if comps[i][sibs[j]] {
                    return refuse(format!("{} and {} stack on {x}-{y} but share a component", sibs[i], sibs[j]));
                }
            }
        }
        // A sibling is anchored if its component reaches a placed vertex, or
        // if it is everything that is left.
        let anchored: Vec<usize> = (0..sibs.len())
            .filter(|&i| {
                (0..adj.len()).any(|v| comps[i][v] && b.placed[v])
                    || (0..adj.len()).all(|v| !alive[v] || v == x || v == y || comps[i][v])
            })
            .collect();
        if anchored.len() > 1 {
            return refuse(format!(
                "{} and {} on {x}-{y} both connect to the rest of the graph",
                sibs[anchored[0]], sibs[anchored[1]]
            ));
        }
        for (i, &u) in sibs.iter().enumerate() {
            if anchored.contains(&i) {
                continue;
            }
            let mut sub = comps[i].clone();
            sub[x] = true;
            sub[y] = true;
            let (l, r) = b.span(u, x, y).ok_or_else(|| Refusal { step: format!("{u} cannot reach {x}-{y}") })?;
            let (left, right) = (b.path[l], b.path[r]);
            let inner = solve(adj, &sub, left, right)?;
            for w in inner {
                let [p, q] = pred[w].expect("predecessors");
                b.insert(w, p, q)?;
            }
        }
        if let Some(&i) = anchored.first() {
            b.insert(sibs[i], x, y)?;
        }
    }
    Ok(b.order)
}

/// Decides whether `g` has a 2-canonical order starting with the ordered edge
/// `e`. A found order is checked abstractly and by building and validating
/// its L-representation.
pub fn test_base_edge(g: &PlaneGraph, e: [usize; 2]) -> std::result::Result<TwoCanonicalOrder, Refusal> {
    let [v1, v2] = e;
    if !g.has_edge(v1, v2) {
        return refuse(format!("{v1}-{v2} is not an edge"));
    }
    let adj = g.adjacency();
    let rest = solve(&adj, &vec![true; g.n()], v1, v2)?;
    let mut order = vec![v1, v2];
    order.extend(rest);
    let o = TwoCanonicalOrder { order, base_edge: e };
    let rep = validate_two_canonical_abstract(g, &o);
    if !rep.is_ok() {
        return refuse(format!("final order fails validation: {rep}"));
    }
    match build_lrep(g, &o) {
        Ok(r) if validate_lrep(&r).is_ok() => Ok(o),
        Ok(r) => refuse(format!("representation fails validation: {}", validate_lrep(&r))),
        Err(err) => refuse(format!("representation could not be built: {err}")),
    }
}

/// Planar maximal 2-degenerate filter followed by [`test_base_edge`] on both
/// orientations of every edge; the first success by edge index wins.
pub fn recognize(g: &PlaneGraph) -> Option<TwoCanonicalOrder> {
    if g.n() < 2 {
        return None;
    }
    if !degeneracy_order(g, 2).is_some_and(|o| o.maximal) {
        return None;
    }
    let tries: Vec<[usize; 2]> = g.edges().iter().flat_map(|&[u, v]| [[u, v], [v, u]]).collect();
    tries.par_iter().find_map_first(|&e| test_base_edge(g, e).ok())
}

fn check_oracle_size(g: &PlaneGraph) -> Result<()> {
    if g.n() > ORACLE_MAX_N {
        return Err(Error::TooLarge { n: g.n(), max: ORACLE_MAX_N });
    }
    Ok(())
}

struct Search<'a> {
    adj: Vec<Vec<usize>>,
    g: &'a PlaneGraph,
    path: Vec<usize>,
    placed: Vec<bool>,
    order: Vec<usize>,
}

impl Search<'_> {
    fn new(g: &PlaneGraph, e: [usize; 2]) -> Search<'_> {
        let mut placed = vec![false; g.n()];
        placed[e[0]] = true;
        placed[e[1]] = true;
        Search { adj: g.adjacency(), g, path: e.to_vec(), placed, order: e.to_vec() }
    }

    /// Candidates that may go next, with the boundary span they replace.
    fn moves(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for v in 0..self.g.n() {
            if self.placed[v] {
                continue;
            }
            let earlier: Vec<usize> = self.adj[v].iter().copied().filter(|&u| self.placed[u]).collect();
            if earlier.len() != 2 {
                continue;
            }
            let (Some(a), Some(b)) = (
                self.path.iter().position(|&u| u == earlier[0]),
                self.path.iter().position(|&u| u == earlier[1]),
            ) else {
                continue;
            };
            let (l, r) = (a.min(b), a.max(b));
            if self.path[l + 1..r].iter().all(|&c| self.adj[c].iter().all(|&u| self.placed[u] || u == v)) {
                out.push((v, l, r));
            }
        }
        out
    }

    fn walk(&mut self, found: &mut dyn FnMut(&[usize])) {
        if self.order.len() == self.g.n() {
            found(&self.order);
            return;
        }
        for (v, l, r) in self.moves() {
            let old: Vec<usize> = self.path.splice(l + 1..r, [v]).collect();
            self.placed[v] = true;
            self.order.push(v);
            self.walk(found);
            self.order.pop();
            self.placed[v] = false;
            self.path.splice(l + 1..l + 2, old);
        }
    }

    /// Placed set plus boundary; the outcome of the rest depends only on these.
    fn path_key(&self) -> Vec<usize> {
        let mut k: Vec<usize> = (0..self.g.n()).filter(|&v| self.placed[v]).collect();
        k.push(usize::MAX);
        k.extend(&self.path);
        k
    }
}

/// Every 2-canonical order of `g` starting with `e`, by exhaustive search.
pub fn oracle_two_canonical(g: &PlaneGraph, e: [usize; 2]) -> Result<Vec<TwoCanonicalOrder>> {
    check_oracle_size(g)?;
    if !g.has_edge(e[0], e[1]) {
        return Ok(Vec::new());
    }
    let mut all = Vec::new();
    Search::new(g, e).walk(&mut |o| all.push(TwoCanonicalOrder { order: o.to_vec(), base_edge: e }));
    Ok(all)
}

/// Whether any 2-canonical order starts with `e`; failed states are memoised.
pub fn oracle_exists(g: &PlaneGraph, e: [usize; 2]) -> Result<bool> {
    check_oracle_size(g)?;
    if !g.has_edge(e[0], e[1]) {
        return Ok(false);
    }
    Ok(exists_from(&mut Search::new(g, e), &mut HashSet::new()))
}

fn exists_from(s: &mut Search<'_>, dead: &mut HashSet<Vec<usize>>) -> bool {
    if s.order.len() == s.g.n() {
        return true;
    }
    let key = s.path_key();
    if dead.contains(&key) {
        return false;
    }
    for (v, l, r) in s.moves() {
        let old: Vec<usize> = s.path.splice(l + 1..r, [v]).collect();
        s.placed[v] = true;
        s.order.push(v);
        let ok = exists_from(s, dead);
        s.order.pop();
        s.placed[v] = false;
        s.path.splice(l + 1..l + 2, old);
        if ok {
            return true;
        }
    }
    dead.insert(key);
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[[usize; 2]]) -> PlaneGraph {
        PlaneGraph::from_edges(n, e).unwrap()
    }

    fn diamond() -> PlaneGraph {
        g(4, &[[0, 1], [0, 2], [1, 2], [0, 3], [1, 3]])
    }

    fn k4() -> PlaneGraph {
        g(4, &[[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]])
    }

    #[test]
    fn diamond_precedence() {
        let p = precedence_orientation(&diamond(), [0, 1]).unwrap();
        assert_eq!(p.pred[2], Some([0, 1]));
        assert_eq!(p.pred[3], Some([0, 1]));
        let p = precedence_orientation(&diamond(), [0, 2]).unwrap();
        assert_eq!(p.pred[1], Some([0, 2]));
        assert_eq!(p.pred[3], Some([0, 1]));
        assert!(p.order_found.maximal);
        assert!(precedence_orientation(&k4(), [0, 1]).is_none());
    }

    #[test]
    fn small_cases() {
        let t = g(3, &[[0, 1], [0, 2], [1, 2]]);
        assert_eq!(test_base_edge(&t, [0, 1]).unwrap().order, vec![0, 1, 2]);
        let o = test_base_edge(&diamond(), [0, 1]).unwrap();
        assert!(o.order == vec![0, 1, 2, 3] || o.order == vec![0, 1, 3, 2]);
        assert!(recognize(&k4()).is_none());
        assert!(recognize(&diamond()).is_some());
    }

    #[test]
    fn oracle_counts() {
        let t = g(3, &[[0, 1], [0, 2], [1, 2]]);
        assert_eq!(oracle_two_canonical(&t, [0, 1]).unwrap().len(), 1);
        let all = oracle_two_canonical(&diamond(), [0, 1]).unwrap();
        let mut orders: Vec<Vec<usize>> = all.into_iter().map(|o| o.order).collect();
        orders.sort();
        assert_eq!(orders, vec![vec![0, 1, 2, 3], vec![0, 1, 3, 2]]);
        assert!(oracle_two_canonical(&k4(), [0, 1]).unwrap().is_empty());
        assert!(oracle_exists(&diamond(), [0, 1]).unwrap());
        let big = crate::graph::random_triangulation(13, 0);
        assert!(matches!(oracle_exists(&big, [0, 1]), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn siblings_sharing_a_component_are_refused() {
        // 2 and 3 both stack on 0-1, and 4 joins them, so they lie in one
        // component of G − {0, 1}.
        let h = g(5, &[[0, 1], [0, 2], [1, 2], [0, 3], [1, 3], [2, 4], [3, 4]]);
        let r = test_base_edge(&h, [0, 1]).unwrap_err();
        assert!(r.step.contains("share a component"), "{r}");
        assert!(!oracle_exists(&h, [0, 1]).unwrap());
    }

    #[test]
    fn agrees_with_oracle_on_small_graphs() {
        use crate::graph::all_stacking_graphs;
        let mut negatives = 0;
        for n in 3..=7 {
            for h in all_stacking_graphs(n) {
                for &[u, v] in h.edges() {
                    for e in [[u, v], [v, u]] {
                        let fast = test_base_edge(&h, e).is_ok();
                        let slow = oracle_exists(&h, e).unwrap();
                        assert_eq!(fast, slow, "n={n} e={e:?} edges={:?}", h.edges());
                    }
                }
                if recognize(&h).is_none() {
                    negatives += 1;
                }
            }
        }
        assert!(negatives > 0);
    }
}
