//! Combinatorial plane graphs.
//!
//! Rotations list neighbours in clockwise order. Faces are the orbits of the
//! dart map `u→v ↦ v→cw_next(v, u)`, so every face keeps itself on the left of
//! its darts. Under this convention the outer face reads clockwise around the
//! drawing.

mod connectivity;
mod degeneracy;
mod embed;
mod random;
mod stacking;

pub use connectivity::{articulation_points, is_biconnected, is_connected};
pub use degeneracy::{degeneracy_order, DegeneracyOrder};
pub use random::{random_planar_3tree, random_triangulation};
pub use stacking::{all_stacking_graphs, random_stacking_graph, stacking_edges};

use std::collections::HashMap;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
    rot: Vec<Vec<usize>>,
    outer_face: Vec<usize>,
    base_edge: Option<[usize; 2]>,
    labels: Option<Vec<String>>,
    index: HashMap<(usize, usize), usize>,
    pos: Vec<HashMap<usize, usize>>,
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn check_simple(n: usize, edges: &[[usize; 2]]) -> Result<HashMap<(usize, usize), usize>> {
    let mut index = HashMap::with_capacity(edges.len());
    for (i, &[u, v]) in edges.iter().enumerate() {
        if u >= n || v >= n {
            return Err(Error::MalformedInput(format!("edge {i} ({u},{v}) out of range for n={n}")));
        }
        if u == v {
            return Err(Error::MalformedInput(format!("self-loop at {u}")));
        }
        if index.insert(key(u, v), i).is_some() {
            return Err(Error::MalformedInput(format!("parallel edge {u}-{v}")));
        }
    }
    Ok(index)
}

fn adjacency(n: usize, edges: &[[usize; 2]]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &[u, v] in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

impl PlaneGraph {
    /// Builds a plane graph from an edge list, computing an embedding.
    /// The outer face is the face left of the first edge's dart.
    pub fn from_edges(n: usize, edges: &[[usize; 2]]) -> Result<Self> {
        Self::assemble(n, edges.to_vec(), None, None, None)
    }

    /// Builds a plane graph from clockwise neighbour lists. Edges are listed in
    /// order of their smaller endpoint, then by rotation position.
    pub fn from_rotation(rot: Vec<Vec<usize>>, outer_face: Option<Vec<usize>>) -> Result<Self> {
        let n = rot.len();
        let mut edges = Vec::new();
        for (u, nb) in rot.iter().enumerate() {
            for &v in nb {
                if u < v {
                    edges.push([u, v]);
                }
            }
        }
        Self::assemble(n, edges, Some(rot), outer_face, None)
    }

    /// General constructor used by the JSON loader. `rotation` holds clockwise
    /// neighbour lists; when absent an embedding is computed. When `outer_face`
    /// is absent the face left of `base_edge` (or of the first edge) is used.
    pub fn assemble(
        n: usize,
        edges: Vec<[usize; 2]>,
        rotation: Option<Vec<Vec<usize>>>,
        outer_face: Option<Vec<usize>>,
        base_edge: Option<[usize; 2]>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedInput("graph has no vertices".into()));
        }
        let index = check_simple(n, &edges)?;
        let adj = adjacency(n, &edges);
        if !is_connected(&adj, None) {
            return Err(Error::MalformedInput("graph must be connected".into()));
        }
        if let Some([a, b]) = base_edge {
            if !index.contains_key(&key(a, b)) {
                return Err(Error::MalformedInput(format!("base edge ({a},{b}) is not an edge")));
            }
        }
        let supplied = rotation.is_some();
        let rot = match rotation {
            Some(r) => {
                check_rotation(n, &adj, &r)?;
                r
            }
            None => match &outer_face {
                Some(face) if face.len() >= 3 => embed::embed_with_face(n, &adj, face)?,
                _ => embed::embed(n, &adj)?,
            },
        };
        let mut g = PlaneGraph {
            n,
            edges,
            pos: rot
                .iter()
                .map(|nb| nb.iter().enumerate().map(|(i, &u)| (u, i)).collect())
                .collect(),
            rot,
            outer_face: Vec::new(),
            base_edge,
            labels: None,
            index,
        };
        let f = g.faces().len();
        if n >= 2 && n as i64 - g.edges.len() as i64 + f as i64 != 2 {
            return Err(Error::InconsistentRotation(format!(
                "Euler check failed: V={} E={} F={f}",
                n,
                g.edges.len()
            )));
        }
        g.outer_face = match outer_face {
            Some(face) => {
                if g.is_face(&face) {
                    face
                } else if !supplied && g.is_face(&face.iter().rev().copied().collect::<Vec<_>>()) {
                    g = g.mirror();
                    face
                } else {
                    return Err(Error::InconsistentRotation(format!(
                        "outer face {face:?} is not a face of the embedding"
                    )));
                }
            }
            None if n == 1 => vec![0],
            None => {
                let [a, b] = base_edge.unwrap_or(g.edges[0]);
                g.face_left_of(a, b)
            }
        };
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn outer_face(&self) -> &[usize] {
        &self.outer_face
    }

    pub fn base_edge(&self) -> Option<[usize; 2]> {
        self.base_edge
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn with_base_edge(mut self, e: Option<[usize; 2]>) -> Self {
        self.base_edge = e;
        self
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.n {
                return Err(Error::MalformedInput(format!(
                    "{} labels for {} vertices",
                    l.len(),
                    self.n
                )));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    /// Replaces the outer face; it must be a face of the rotation system.
    pub fn with_outer_face(mut self, face: Vec<usize>) -> Result<Self> {
        if !self.is_face(&face) {
            return Err(Error::InconsistentRotation(format!("{face:?} is not a face")));
        }
        self.outer_face = face;
        Ok(self)
    }

    /// Clockwise neighbour list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.index.contains_key(&key(u, v))
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&key(u, v)).copied()
    }

    /// Position of `u` in the rotation of `v`.
    pub fn rotation_pos(&self, v: usize, u: usize) -> usize {
        self.pos[v][&u]
    }

    pub fn cw_next(&self, v: usize, u: usize) -> usize {
        let r = &self.rot[v];
        r[(self.pos[v][&u] + 1) % r.len()]
    }

    pub fn cw_prev(&self, v: usize, u: usize) -> usize {
        let r = &self.rot[v];
        r[(self.pos[v][&u] + r.len() - 1) % r.len()]
    }

    /// Rotation as edge indices, the form used in the JSON schema.
    pub fn rotation_edge_indices(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|v| self.rot[v].iter().map(|&u| self.index[&key(u, v)]).collect())
            .collect()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.rot.clone()
    }

    /// The face to the left of dart `u→v`, listed by dart tails.
    pub fn face_left_of(&self, u: usize, v: usize) -> Vec<usize> {
        let mut seq = vec![u];
        let (mut a, mut b) = (u, v);
        loop {
            let c = self.cw_next(b, a);
            a = b;
            b = c;
            if (a, b) == (u, v) {
                return seq;
            }
            seq.push(a);
        }
    }

    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut seen: Vec<Vec<bool>> = self.rot.iter().map(|r| vec![false; r.len()]).collect();
        let mut out = Vec::new();
        for u in 0..self.n {
            for i in 0..self.rot[u].len() {
                if seen[u][i] {
                    continue;
                }
                let v = self.rot[u][i];
                let face = self.face_left_of(u, v);
                for k in 0..face.len() {
                    let (a, b) = (face[k], face[(k + 1) % face.len()]);
                    seen[a][self.pos[a][&b]] = true;
                }
                out.push(face);
            }
        }
        out
    }

    /// True if `face` is a face in exactly the given cyclic orientation.
    pub fn is_face(&self, face: &[usize]) -> bool {
        if self.n == 1 {
            return face == [0];
        }
        if face.len() < 2 || !face.windows(2).all(|w| self.has_edge(w[0], w[1])) {
            return false;
        }
        if !self.has_edge(face[face.len() - 1], face[0]) {
            return false;
        }
        self.face_left_of(face[0], face[1]) == face
    }

    /// Mirror image: all rotations reversed, outer face reversed.
    pub fn mirror(&self) -> Self {
        let rot: Vec<Vec<usize>> = self.rot.iter().map(|r| r.iter().rev().copied().collect()).collect();
        let mut g = self.clone();
        g.pos = rot
            .iter()
            .map(|nb| nb.iter().enumerate().map(|(i, &u)| (u, i)).collect())
            .collect();
        g.rot = rot;
        g.outer_face = self.outer_face.iter().rev().copied().collect();
        g
    }

    /// Applies the vertex permutation `perm` (old id → new id).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let mut rot = vec![Vec::new(); self.n];
        for v in 0..self.n {
            rot[perm[v]] = self.rot[v].iter().map(|&u| perm[u]).collect();
        }
        let edges = self.edges.iter().map(|&[u, v]| [perm[u], perm[v]]).collect();
        let outer = self.outer_face.iter().map(|&v| perm[v]).collect();
        let base = self.base_edge.map(|[a, b]| [perm[a], perm[b]]);
        let g = Self::assemble(self.n, edges, Some(rot), Some(outer), base)?;
        let labels = self.labels.as_ref().map(|l| {
            let mut out = vec![String::new(); self.n];
            for v in 0..self.n {
                out[perm[v]] = l[v].clone();
            }
            out
        });
        g.with_labels(labels)
    }

    /// Same vertex set, same edges, and identical cyclic rotations.
    pub fn same_embedding(&self, other: &PlaneGraph) -> bool {
        if self.n != other.n || self.m() != other.m() {
            return false;
        }
        (0..self.n).all(|v| cyclic_eq(&self.rot[v], &other.rot[v]))
    }

    pub fn same_edge_set(&self, other: &PlaneGraph) -> bool {
        self.n == other.n
            && self.m() == other.m()
            && self.edges.iter().all(|&[u, v]| other.has_edge(u, v))
    }

    /// Every face, the outer one included, is a triangle and |E| = 3|V| − 6.
    pub fn is_triangulation(&self) -> bool {
        self.n >= 3 && self.m() == 3 * self.n - 6 && self.faces().iter().all(|f| f.len() == 3)
    }

    pub fn view<'a>(&'a self, alive: &'a [bool]) -> SubView<'a> {
        SubView { g: self, alive }
    }
}

pub(crate) fn cyclic_eq(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    match b.iter().position(|&x| x == a[0]) {
        Some(s) => (0..a.len()).all(|i| a[i] == b[(s + i) % b.len()]),
        None => false,
    }
}

fn check_rotation(n: usize, adj: &[Vec<usize>], rot: &[Vec<usize>]) -> Result<()> {
    if rot.len() != n {
        return Err(Error::InconsistentRotation(format!("{} rotation lists for n={n}", rot.len())));
    }
    for v in 0..n {
        let mut a = adj[v].clone();
        let mut b = rot[v].clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::InconsistentRotation(format!(
                "rotation at {v} is not a permutation of its incident edges"
            )));
        }
    }
    Ok(())
}

/// The subgraph induced by the `alive` vertices, with the inherited embedding.
#[derive(Clone, Copy)]
pub struct SubView<'a> {
    g: &'a PlaneGraph,
    alive: &'a [bool],
}

impl<'a> SubView<'a> {
    pub fn graph(&self) -> &'a PlaneGraph {
        self.g
    }

    pub fn contains(&self, v: usize) -> bool {
        self.alive[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + 'a {
        let alive = self.alive;
        self.g.rot[v].iter().copied().filter(move |&u| alive[u])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    pub fn cw_next(&self, v: usize, u: usize) -> usize {
        let r = &self.g.rot[v];
        let mut i = self.g.pos[v][&u];
        loop {
            i = (i + 1) % r.len();
            if self.alive[r[i]] {
                return r[i];
            }
        }
    }

    pub fn face_left_of(&self, u: usize, v: usize) -> Vec<usize> {
        let mut seq = vec![u];
        let (mut a, mut b) = (u, v);
        loop {
            let c = self.cw_next(b, a);
            a = b;
            b = c;
            if (a, b) == (u, v) {
                return seq;
            }
            seq.push(a);
        }
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.g.n)
            .map(|v| if self.alive[v] { self.neighbors(v).collect() } else { Vec::new() })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> PlaneGraph {
        PlaneGraph::from_edges(4, &[[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]).unwrap()
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = PlaneGraph::from_edges(3, &[[0, 1], [0, 2], [1, 2]]).unwrap();
        assert_eq!(g.faces().len(), 2);
        assert!(g.is_triangulation());
    }

    #[test]
    fn k4_has_four_faces() {
        let g = k4();
        assert_eq!(g.faces().len(), 4);
        assert!(g.is_face(g.outer_face()));
    }

    #[test]
    fn k5_is_rejected() {
        let mut e = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                e.push([u, v]);
            }
        }
        assert_eq!(PlaneGraph::from_edges(5, &e).unwrap_err(), Error::NotPlanar);
    }

    #[test]
    fn k33_is_rejected() {
        let mut e = Vec::new();
        for u in 0..3 {
            for v in 3..6 {
                e.push([u, v]);
            }
        }
        assert_eq!(PlaneGraph::from_edges(6, &e).unwrap_err(), Error::NotPlanar);
    }

    #[test]
    fn loops_and_parallels_rejected() {
        assert!(matches!(
            PlaneGraph::from_edges(2, &[[0, 0]]),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            PlaneGraph::from_edges(2, &[[0, 1], [1, 0]]),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn bad_rotation_fails_euler() {
        // K4 with one rotation flipped has fewer faces than Euler demands.
        let g = k4();
        let mut rot = g.adjacency();
        rot[0].swap(0, 1);
        let err = PlaneGraph::assemble(4, g.edges().to_vec(), Some(rot), None, None).unwrap_err();
        assert!(matches!(err, Error::InconsistentRotation(_)));
    }

    #[test]
    fn supplied_outer_face_is_honoured() {
        // A 6-cycle with a chord: either side may be outer.
        let e = [[0, 1], [1, 2], [2, 3], [3, 4], [4, 5], [5, 0], [0, 3]];
        let g = PlaneGraph::assemble(6, e.to_vec(), None, Some(vec![0, 1, 2, 3]), None).unwrap();
        assert_eq!(g.outer_face(), &[0, 1, 2, 3]);
        let g = PlaneGraph::assemble(6, e.to_vec(), None, Some(vec![3, 2, 1, 0]), None).unwrap();
        assert_eq!(g.outer_face(), &[3, 2, 1, 0]);
    }

    #[test]
    fn tree_has_one_face() {
        let g = PlaneGraph::from_edges(4, &[[0, 1], [1, 2], [1, 3]]).unwrap();
        assert_eq!(g.faces().len(), 1);
        assert_eq!(g.outer_face().len(), 6);
    }

    #[test]
    fn relabel_keeps_faces() {
        let g = k4();
        let h = g.relabel(&[2, 0, 3, 1]).unwrap();
        assert_eq!(h.faces().len(), 4);
        assert!(h.has_edge(2, 0));
    }
}
