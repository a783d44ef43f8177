//! Maximal 2-degenerate graphs: every vertex after the first edge is stacked
//! onto two earlier vertices.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PlaneGraph;
use crate::error::Error;

/// Vertex `i + 2` is joined to both entries of `pairs[i]`.
pub fn stacking_edges(pairs: &[[usize; 2]]) -> Vec<[usize; 2]> {
    let mut e = vec![[0, 1]];
    for (i, &[a, b]) in pairs.iter().enumerate() {
        e.push([a, i + 2]);
        e.push([b, i + 2]);
    }
    e
}

fn planar(n: usize, e: &[[usize; 2]]) -> Option<PlaneGraph> {
    match PlaneGraph::from_edges(n, e) {
        Ok(g) => Some(g),
        Err(Error::NotPlanar) => None,
        Err(err) => panic!("stacked graph rejected: {err}"),
    }
}

/// Canonical adjacency code, minimised over the permutations that respect a
/// colour refinement. Only meant for small `n`.
fn canonical_code(n: usize, e: &[[usize; 2]]) -> Vec<bool> {
    let mut adj = vec![vec![false; n]; n];
    for &[u, v] in e {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let mut color: Vec<usize> = (0..n).map(|v| adj[v].iter().filter(|&&b| b).count()).collect();
    for _ in 0..n {
        let sig: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut s: Vec<usize> = (0..n).filter(|&u| adj[v][u]).map(|u| color[u]).collect();
                s.sort_unstable();
                (color[v], s)
            })
            .collect();
        let keys: Vec<_> = sig.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let next: Vec<usize> = sig.iter().map(|s| keys.binary_search(s).unwrap()).collect();
        if next == color {
            break;
        }
        color = next;
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut cs: Vec<usize> = color.clone();
    cs.sort_unstable();
    cs.dedup();
    for c in cs {
        classes.push((0..n).filter(|&v| color[v] == c).collect());
    }
    let mut best: Option<Vec<bool>> = None;
    let mut perm = Vec::with_capacity(n);
    fn rec(
        classes: &mut [Vec<usize>],
        ci: usize,
        perm: &mut Vec<usize>,
        adj: &[Vec<bool>],
        best: &mut Option<Vec<bool>>,
    ) {
        if ci == classes.len() {
            let n = perm.len();
            let mut code = Vec::with_capacity(n * n / 2);
            for i in 0..n {
                for j in i + 1..n {
                    code.push(adj[perm[i]][perm[j]]);
                }
            }
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        }
        let k = classes[ci].len();
        permute(classes, ci, 0, k, perm, adj, best);
    }
    fn permute(
        classes: &mut [Vec<usize>],
        ci: usize,
        i: usize,
        k: usize,
        perm: &mut Vec<usize>,
        adj: &[Vec<bool>],
        best: &mut Option<Vec<bool>>,
    ) {
        if i == k {
            let len = perm.len();
            perm.extend(classes[ci].clone());
            rec(classes, ci + 1, perm, adj, best);
            perm.truncate(len);
            return;
        }
        for j in i..k {
            classes[ci].swap(i, j);
            permute(classes, ci, i + 1, k, perm, adj, best);
            classes[ci].swap(i, j);
        }
    }
    rec(&mut classes, 0, &mut perm, &adj, &mut best);
    best.unwrap_or_default()
}

/// All planar maximal 2-degenerate graphs on `n` vertices, one per
/// isomorphism class, from every stacking sequence.
pub fn all_stacking_graphs(n: usize) -> Vec<PlaneGraph> {
    assert!(n >= 2);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut pairs: Vec<[usize; 2]> = Vec::new();
    fn rec(n: usize, pairs: &mut Vec<[usize; 2]>, seen: &mut BTreeSet<Vec<bool>>, out: &mut Vec<PlaneGraph>) {
        let v = pairs.len() + 2;
        if v == n {
            let e = stacking_edges(pairs);
            if seen.insert(canonical_code(n, &e)) {
                if let Some(g) = planar(n, &e) {
                    out.push(g);
                }
            }
            return;
        }
        for a in 0..v {
            for b in a + 1..v {
                pairs.push([a, b]);
                rec(n, pairs, seen, out);
                pairs.pop();
            }
        }
    }
    rec(n, &mut pairs, &mut seen, &mut out);
    out
}

/// A random planar maximal 2-degenerate graph. Each new vertex picks a
/// uniform pair of earlier vertices; a pair that breaks planarity is redrawn.
pub fn random_stacking_graph(n: usize, seed: u64) -> PlaneGraph {
    assert!(n >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<[usize; 2]> = Vec::with_capacity(n - 2);
    for v in 2..n {
        loop {
            let a = rng.gen_range(0..v);
            let mut b = rng.gen_range(0..v - 1);
            if b >= a {
                b += 1;
            }
            pairs.push([a.min(b), a.max(b)]);
            if planar(v + 1, &stacking_edges(&pairs)).is_some() {
                break;
            }
            pairs.pop();
        }
    }
    planar(n, &stacking_edges(&pairs)).expect("every prefix is planar")
}
