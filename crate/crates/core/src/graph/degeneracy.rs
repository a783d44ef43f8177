use serde::Serialize;

use super::PlaneGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegeneracyOrder {
    pub order: Vec<usize>,
    pub k: usize,
    /// Every vertex has exactly min(i, k) earlier neighbours (0-based i).
    pub maximal: bool,
}

impl DegeneracyOrder {
    /// Recounts earlier neighbours directly. Returns (bounded by k, maximal).
    pub fn recount(&self, g: &PlaneGraph) -> (bool, bool) {
        let mut rank = vec![usize::MAX; g.n()];
        for (i, &v) in self.order.iter().enumerate() {
            rank[v] = i;
        }
        let mut bounded = self.order.len() == g.n();
        let mut maximal = bounded;
        for (i, &v) in self.order.iter().enumerate() {
            let earlier = g.neighbors(v).iter().filter(|&&u| rank[u] < i).count();
            bounded &= earlier <= self.k;
            maximal &= earlier == i.min(self.k);
        }
        (bounded, bounded && maximal)
    }
}

/// Smallest-degree peeling with a bucket queue; ties go to the lowest id.
/// The order is the reverse removal sequence. `None` if some removal has
/// degree above `k`.
pub fn degeneracy_order(g: &PlaneGraph, k: usize) -> Option<DegeneracyOrder> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let maxd = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); maxd + 1];
    for v in 0..n {
        buckets[deg[v]].insert(v);
    }
    let mut removed = vec![false; n];
    let mut seq = Vec::with_capacity(n);
    let mut lo = 0;
    for _ in 0..n {
        lo = lo.min(maxd);
        while buckets[lo].is_empty() {
            lo += 1;
        }
        let v = buckets[lo].pop_first().unwrap();
        if lo > k {
            return None;
        }
        removed[v] = true;
        seq.push(v);
        for &u in g.neighbors(v) {
            if !removed[u] {
                buckets[deg[u]].remove(&u);
                deg[u] -= 1;
                buckets[deg[u]].insert(u);
            }
        }
        lo = lo.saturating_sub(1);
    }
    seq.reverse();
    let mut out = DegeneracyOrder {
        order: seq,
        k,
        maximal: false,
    };
    out.maximal = out.recount(g).1;
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_not_2_degenerate() {
        let g = PlaneGraph::from_edges(4, &[[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]).unwrap();
        assert!(degeneracy_order(&g, 2).is_none());
        assert!(degeneracy_order(&g, 3).unwrap().maximal);
    }

    #[test]
    fn triangle_is_maximal() {
        let g = PlaneGraph::from_edges(3, &[[0, 1], [0, 2], [1, 2]]).unwrap();
        let o = degeneracy_order(&g, 2).unwrap();
        assert!(o.maximal);
        assert_eq!(o.recount(&g), (true, true));
    }

    #[test]
    fn diamond_by_hand() {
        // Peeling removes 2 (degree 2), then 0 (now degree 2), then 1 and 3.
        let g = PlaneGraph::from_edges(4, &[[0, 1], [0, 2], [1, 2], [0, 3], [1, 3]]).unwrap();
        let o = degeneracy_order(&g, 2).unwrap();
        assert_eq!(o.order, vec![3, 1, 0, 2]);
        assert!(o.maximal);
    }

    #[test]
    fn path_is_1_degenerate_but_not_maximal_for_2() {
        let g = PlaneGraph::from_edges(3, &[[0, 1], [1, 2]]).unwrap();
        assert!(degeneracy_order(&g, 1).unwrap().maximal);
        assert!(!degeneracy_order(&g, 2).unwrap().maximal);
    }
}
