//! Seeded generators for the test corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PlaneGraph;

fn insert_after(list: &mut Vec<usize>, anchor: usize, x: usize) {
    let i = list.iter().position(|&u| u == anchor).expect("anchor in rotation");
    list.insert(i + 1, x);
}

/// A random maximally planar graph on `n ≥ 3` vertices.
///
/// Vertices are inserted in id order below a boundary path from 0 to 1, each
/// one attached to a random subpath (short spans are favoured so the boundary
/// keeps growing). The last vertex takes the whole path, so the outer face is
/// `[0, 1, n-1]`.
pub fn random_triangulation(n: usize, seed: u64) -> PlaneGraph {
    assert!(n >= 3, "a triangulation needs three vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
    rot[0].push(1);
    rot[1].push(0);
    let mut path = vec![0usize, 1];
    for w in 2..n {
        let len = path.len();
        let (l, r) = if w == n - 1 {
            (0, len - 1)
        } else {
            let mut span = 1;
            while span < len - 1 && rng.gen_bool(0.5) {
                span += 1;
            }
            let l = rng.gen_range(0..len - span);
            (l, l + span)
        };
        rot[w] = path[l..=r].to_vec();
        // The free angle of a boundary vertex starts right after its successor
        // towards 1; vertex 1 itself treats 0 as its successor.
        for i in l..=r {
            let next = if i + 1 < len { path[i + 1] } else { 0 };
            insert_after(&mut rot[path[i]], next, w);
        }
        path.splice(l + 1..r, [w]);
    }
    PlaneGraph::from_rotation(rot, Some(vec![0, 1, n - 1])).expect("generator keeps a valid embedding")
}

/// A random planar 3-tree: start from the triangle `[0, 1, n-1]` and stack
/// vertices 2..n-1 into uniformly chosen inner faces.
pub fn random_planar_3tree(n: usize, seed: u64) -> PlaneGraph {
    assert!(n >= 3, "a 3-tree needs three vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = n - 1;
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
    rot[t] = vec![0, 1];
    rot[0] = vec![1, t];
    rot[1] = vec![0, t];
    let mut faces: Vec<[usize; 3]> = vec![[0, t, 1]];
    for x in 2..t {
        let k = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(k);
        insert_after(&mut rot[b], a, x);
        insert_after(&mut rot[c], b, x);
        insert_after(&mut rot[a], c, x);
        rot[x] = vec![a, c, b];
        faces.extend([[a, b, x], [b, c, x], [c, a, x]]);
    }
    PlaneGraph::from_rotation(rot, Some(vec![0, 1, t])).expect("generator keeps a valid embedding")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases_are_unique() {
        let g = random_triangulation(3, 1);
        assert_eq!(g.m(), 3);
        let g = random_triangulation(4, 9);
        assert_eq!(g.m(), 6);
        assert!(g.is_triangulation());
    }

    #[test]
    fn fifty_vertices_seed_seven() {
        let g = random_triangulation(50, 7);
        assert_eq!(g.m(), 144);
        assert!(g.is_triangulation());
        assert_eq!(g.outer_face(), &[0, 1, 49]);
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(random_triangulation(30, 5), random_triangulation(30, 5));
        assert_ne!(random_triangulation(30, 5), random_triangulation(30, 6));
    }

    #[test]
    fn three_trees_are_triangulations() {
        for seed in 0..20 {
            let g = random_planar_3tree(12, seed);
            assert!(g.is_triangulation());
            assert_eq!(g.outer_face(), &[0, 1, 11]);
        }
    }
}
