//! Recognition of small graphs, cross-checked with the exhaustive oracle.

use lgraph::graph::{all_stacking_graphs, PlaneGraph};
use lgraph::recognition::{oracle_exists, recognize};

fn main() {
    let diamond = PlaneGraph::from_edges(4, &[[0, 1], [0, 2], [1, 2], [0, 3], [1, 3]]).unwrap();
    let k4 = PlaneGraph::from_edges(4, &[[0, 1], [1, 2], [0, 2], [0, 3], [1, 3], [2, 3]]).unwrap();
    println!("diamond: {:?}", recognize(&diamond).map(|o| o.order));
    println!("K4: {:?}", recognize(&k4).map(|o| o.order));

    for n in 5..=7 {
        let family = all_stacking_graphs(n);
        let positive = family.iter().filter(|g| recognize(g).is_some()).count();
        let negative: Vec<&PlaneGraph> = family.iter().filter(|g| recognize(g).is_none()).collect();
        println!("n={n}: {} graphs, {positive} L-graphs", family.len());
        if let Some(g) = negative.first() {
            let refuted = g
                .edges()
                .iter()
                .flat_map(|&[u, v]| [[u, v], [v, u]])
                .all(|e| !oracle_exists(g, e).unwrap());
            println!("  first negative {:?}, oracle agrees: {refuted}", g.edges());
        }
    }
}
