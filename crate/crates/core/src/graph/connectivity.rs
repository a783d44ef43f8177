//! Connectivity, cut vertices and blocks over plain adjacency lists.

fn alive_at(alive: Option<&[bool]>, v: usize) -> bool {
    alive.is_none_or(|a| a[v])
}

pub fn is_connected(adj: &[Vec<usize>], alive: Option<&[bool]>) -> bool {
    let Some(start) = (0..adj.len()).find(|&v| alive_at(alive, v)) else {
        return true;
    };
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if alive_at(alive, u) && !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == (0..adj.len()).filter(|&v| alive_at(alive, v)).count()
}

struct Dfs {
    disc: Vec<usize>,
    low: Vec<usize>,
    cut: Vec<bool>,
    blocks: Vec<Vec<[usize; 2]>>,
}

/// Iterative Hopcroft–Tarjan over the alive vertices.
fn dfs(adj: &[Vec<usize>], alive: Option<&[bool]>) -> Dfs {
    let n = adj.len();
    let mut d = Dfs {
        disc: vec![usize::MAX; n],
        low: vec![0; n],
        cut: vec![false; n],
        blocks: Vec::new(),
    };
    let mut time = 0;
    let mut estack: Vec<[usize; 2]> = Vec::new();
    for root in 0..n {
        if !alive_at(alive, root) || d.disc[root] != usize::MAX {
            continue;
        }
        d.disc[root] = time;
        d.low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbour index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, parent, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let u = adj[v][*i];
                *i += 1;
                if !alive_at(alive, u) || u == parent {
                    continue;
                }
                if d.disc[u] == usize::MAX {
                    estack.push([v, u]);
                    d.disc[u] = time;
                    d.low[u] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((u, v, 0));
                } else if d.disc[u] < d.disc[v] {
                    estack.push([v, u]);
                    d.low[v] = d.low[v].min(d.disc[u]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    d.low[parent] = d.low[parent].min(d.low[v]);
                    if d.low[v] >= d.disc[parent] {
                        if parent != root {
                            d.cut[parent] = true;
                        }
                        let mut block = Vec::new();
                        while let Some(e) = estack.pop() {
                            block.push(e);
                            if e == [parent, v] {
                                break;
                            }
                        }
                        d.blocks.push(block);
                    }
                }
            }
        }
        if root_children > 1 {
            d.cut[root] = true;
        }
    }
    d
}

pub fn articulation_points(adj: &[Vec<usize>], alive: Option<&[bool]>) -> Vec<usize> {
    let d = dfs(adj, alive);
    (0..adj.len()).filter(|&v| d.cut[v]).collect()
}

/// Connected with no cut vertex. Graphs on at most two vertices only need
/// to be connected.
pub fn is_biconnected(adj: &[Vec<usize>], alive: Option<&[bool]>) -> bool {
    is_connected(adj, alive) && articulation_points(adj, alive).is_empty()
}

/// Edge sets of the biconnected blocks.
pub(crate) fn blocks(adj: &[Vec<usize>]) -> Vec<Vec<[usize; 2]>> {
    dfs(adj, None).blocks
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
    fn bowtie_has_one_cut_vertex_and_two_blocks() {
        let a = adj(5, &[[0, 1], [1, 2], [2, 0], [2, 3], [3, 4], [4, 2]]);
        assert_eq!(articulation_points(&a, None), vec![2]);
        assert_eq!(blocks(&a).len(), 2);
        assert!(!is_biconnected(&a, None));
    }

    #[test]
    fn masked_path_is_disconnected() {
        let a = adj(3, &[[0, 1], [1, 2]]);
        assert!(!is_connected(&a, Some(&[true, false, true])));
        assert!(is_biconnected(&a, Some(&[true, true, false])));
    }

    #[test]
    fn cycle_is_biconnected() {
        let a = adj(4, &[[0, 1], [1, 2], [2, 3], [3, 0]]);
        assert!(is_biconnected(&a, None));
        assert_eq!(blocks(&a).len(), 1);
    }
}
