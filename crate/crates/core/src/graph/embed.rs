//! Quadratic incremental planar embedding (Demoucron–Malgrange–Pertuiset).
//!
//! Each block is embedded by repeatedly drawing a path of some fragment into
//! an admissible face, preferring fragments with a single admissible face.
//! Block rotations are concatenated at cut vertices.

use std::collections::{HashMap, HashSet, VecDeque};

use super::connectivity::blocks;
use crate::error::{Error, Result};

/// Clockwise neighbour lists for a connected simple planar graph.
pub(crate) fn embed(n: usize, adj: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let mut rot = vec![Vec::new(); n];
    for block in blocks(adj) {
        let part = if block.len() == 1 {
            let [u, v] = block[0];
            HashMap::from([(u, vec![v]), (v, vec![u])])
        } else {
            embed_block(&block)?
        };
        for (v, list) in part {
            rot[v].extend(list);
        }
    }
    Ok(rot)
}

/// Embeds so that the cycle `face` bounds a face: an apex joined to every
/// cycle vertex is embedded and then removed.
pub(crate) fn embed_with_face(n: usize, adj: &[Vec<usize>], face: &[usize]) -> Result<Vec<Vec<usize>>> {
    let mut seen = HashSet::new();
    for (i, &v) in face.iter().enumerate() {
        let w = face[(i + 1) % face.len()];
        if v >= n || !seen.insert(v) || !adj[v].contains(&w) {
            return Err(Error::InconsistentRotation(format!("outer face {face:?} is not a simple cycle")));
        }
    }
    let mut ext: Vec<Vec<usize>> = adj.to_vec();
    ext.push(face.to_vec());
    for &v in face {
        ext[v].push(n);
    }
    let mut rot = embed(n + 1, &ext)?;
    rot.pop();
    for r in rot.iter_mut() {
        r.retain(|&u| u != n);
    }
    Ok(rot)
}

struct Fragment {
    attachments: Vec<usize>,
    /// Interior vertices (empty for a single chord).
    inner: Vec<usize>,
}

fn embed_block(block: &[[usize; 2]]) -> Result<HashMap<usize, Vec<usize>>> {
    let mut badj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &[u, v] in block {
        badj.entry(u).or_default().push(v);
        badj.entry(v).or_default().push(u);
    }
    let mut verts: Vec<usize> = badj.keys().copied().collect();
    verts.sort_unstable();
    for list in badj.values_mut() {
        list.sort_unstable();
    }

    let cycle = find_cycle(&badj, verts[0]);
    let mut placed: HashSet<usize> = cycle.iter().copied().collect();
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    for i in 0..cycle.len() {
        used.insert(ek(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];

    while used.len() < block.len() {
        let frags = fragments(&badj, &verts, &placed, &used);
        let face_sets: Vec<HashSet<usize>> = faces.iter().map(|f| f.iter().copied().collect()).collect();
        let mut best: Option<(usize, usize, usize)> = None; // (count, fragment, face)
        for (fi, fr) in frags.iter().enumerate() {
            let adm: Vec<usize> = (0..faces.len())
                .filter(|&k| fr.attachments.iter().all(|a| face_sets[k].contains(a)))
                .collect();
            if adm.is_empty() {
                return Err(Error::NotPlanar);
            }
            if best.is_none_or(|(c, _, _)| adm.len() < c) {
                best = Some((adm.len(), fi, adm[0]));
                if adm.len() == 1 {
                    break;
                }
            }
        }
        let (_, fi, face_idx) = best.expect("a fragment exists while edges remain");
        let path = fragment_path(&badj, &frags[fi], &placed);
        for w in path.windows(2) {
            used.insert(ek(w[0], w[1]));
        }
        for &v in &path[1..path.len() - 1] {
            placed.insert(v);
        }
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }

    // Consecutive darts u→v→w in a face give cw_next(v, u) = w.
    let mut succ: HashMap<usize, HashMap<usize, usize>> = HashMap::new();
    for f in &faces {
        let k = f.len();
        for i in 0..k {
            let (u, v, w) = (f[i], f[(i + 1) % k], f[(i + 2) % k]);
            succ.entry(v).or_default().insert(u, w);
        }
    }
    let mut rot = HashMap::new();
    for &v in &verts {
        let s = &succ[&v];
        let start = badj[&v][0];
        let mut list = vec![start];
        let mut cur = s[&start];
        while cur != start {
            list.push(cur);
            cur = s[&cur];
        }
        if list.len() != badj[&v].len() {
            return Err(Error::NotPlanar);
        }
        rot.insert(v, list);
    }
    Ok(rot)
}

fn ek(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Any cycle through the block, found by DFS back edge.
fn find_cycle(badj: &HashMap<usize, Vec<usize>>, start: usize) -> Vec<usize> {
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut depth: HashMap<usize, usize> = HashMap::from([(start, 0)]);
    let mut stack = vec![(start, usize::MAX, 0usize)];
    while let Some(&mut (v, p, ref mut i)) = stack.last_mut() {
        let nb = &badj[&v];
        if *i == nb.len() {
            stack.pop();
            continue;
        }
        let u = nb[*i];
        *i += 1;
        if u == p {
            continue;
        }
        if let Some(&du) = depth.get(&u) {
            if du < depth[&v] {
                let mut cyc = vec![v];
                let mut x = v;
                while x != u {
                    x = parent[&x];
                    cyc.push(x);
                }
                return cyc;
            }
            continue;
        }
        parent.insert(u, v);
        depth.insert(u, depth[&v] + 1);
        stack.push((u, v, 0));
    }
    unreachable!("a block with two or more edges contains a cycle")
}

fn fragments(
    badj: &HashMap<usize, Vec<usize>>,
    verts: &[usize],
    placed: &HashSet<usize>,
    used: &HashSet<(usize, usize)>,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &u in verts {
        if !placed.contains(&u) {
            continue;
        }
        for &v in &badj[&u] {
            if u < v && placed.contains(&v) && !used.contains(&ek(u, v)) {
                out.push(Fragment {
                    attachments: vec![u, v],
                    inner: Vec::new(),
                });
            }
        }
    }
    let mut seen: HashSet<usize> = HashSet::new();
    for &s in verts {
        if placed.contains(&s) || seen.contains(&s) {
            continue;
        }
        let mut inner = vec![s];
        let mut att: Vec<usize> = Vec::new();
        seen.insert(s);
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &u in &badj[&v] {
                if placed.contains(&u) {
                    if !att.contains(&u) {
                        att.push(u);
                    }
                } else if seen.insert(u) {
                    inner.push(u);
                    q.push_back(u);
                }
            }
        }
        att.sort_unstable();
        out.push(Fragment { attachments: att, inner });
    }
    out
}

/// A path between two distinct attachments through the fragment.
fn fragment_path(badj: &HashMap<usize, Vec<usize>>, fr: &Fragment, placed: &HashSet<usize>) -> Vec<usize> {
    if fr.inner.is_empty() {
        return fr.attachments.clone();
    }
    let a = fr.attachments[0];
    let inner: HashSet<usize> = fr.inner.iter().copied().collect();
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut q = VecDeque::new();
    for &u in &badj[&a] {
        if inner.contains(&u) && !prev.contains_key(&u) {
            prev.insert(u, a);
            q.push_back(u);
        }
    }
    while let Some(v) = q.pop_front() {
        for &u in &badj[&v] {
            if placed.contains(&u) && u != a {
                let mut path = vec![u, v];
                let mut x = v;
                while prev[&x] != a {
                    x = prev[&x];
                    path.push(x);
                }
                path.push(a);
                path.reverse();
                return path;
            }
            if inner.contains(&u) && !prev.contains_key(&u) {
                prev.insert(u, v);
                q.push_back(u);
            }
        }
    }
    unreachable!("fragments of a block have at least two attachments")
}

/// Splits the face cycle by `path`, whose ends lie on the face.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = face.len();
    let a = path[0];
    let b = *path.last().unwrap();
    let i = face.iter().position(|&x| x == a).unwrap();
    let j = face.iter().position(|&x| x == b).unwrap();
    let inner = &path[1..path.len() - 1];
    let mut f1 = Vec::new();
    let mut t = i;
    loop {
        f1.push(face[t]);
        if t == j {
            break;
        }
        t = (t + 1) % k;
    }
    f1.extend(inner.iter().rev());
    let mut f2 = Vec::new();
    let mut t = j;
    loop {
        f2.push(face[t]);
        if t == i {
            break;
        }
        t = (t + 1) % k;
    }
    f2.extend(inner.iter());
    (f1, f2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj(n: usize, e: &[[usize; 2]]) -> Vec<Vec<usize>> {
        let mut a = vec![Vec::new(); n];
        for &[u, v] in e {
            a[u].push(v);
            a[v].push(u);
        }
        a
    }

    #[test]
    fn octahedron_embeds() {
        let mut e = Vec::new();
        for u in 0..6 {
            for v in u + 1..6 {
                if v != u + 3 {
                    e.push([u, v]);
                }
            }
        }
        let rot = embed(6, &adj(6, &e)).unwrap();
        assert!(rot.iter().all(|r| r.len() == 4));
    }

    #[test]
    fn petersen_is_not_planar() {
        let e = [
            [0, 1], [1, 2], [2, 3], [3, 4], [4, 0],
            [0, 5], [1, 6], [2, 7], [3, 8], [4, 9],
            [5, 7], [7, 9], [9, 6], [6, 8], [8, 5],
        ];
        assert_eq!(embed(10, &adj(10, &e)).unwrap_err(), Error::NotPlanar);
    }

    #[test]
    fn split_keeps_dart_balance() {
        let (f1, f2) = split_face(&[0, 1, 2, 3], &[1, 9, 3]);
        assert_eq!(f1, vec![1, 2, 3, 9]);
        assert_eq!(f2, vec![3, 0, 1, 9]);
    }
}
