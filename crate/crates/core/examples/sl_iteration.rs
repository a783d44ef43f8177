//! The flip iteration towards an SL-representation, with homothetic
//! triangles and cubes on success.

use lgraph::graph::{random_planar_3tree, random_triangulation};
use lgraph::rational::format_q;
use lgraph::schnyder::compute_realizer;
use lgraph::sl::{cubes_from_sl, felsner_iterate, homothetic_triangles, SLOutcome, Triangle};

fn main() {
    for (name, h) in [("3-tree", random_planar_3tree(10, 1)), ("triangulation", random_triangulation(10, 4))] {
        let n = h.n();
        let r = compute_realizer(&h, [0, 1, n - 1]).unwrap();
        match felsner_iterate(&h, &r, 50).unwrap() {
            SLOutcome::Converged(run) => {
                let tr = homothetic_triangles(&run.rep, &run.realizer).unwrap();
                let sizes: Vec<String> = tr.triangles().iter().map(|t: &Triangle| format_q(&t.size())).collect();
                let cubes = cubes_from_sl(&run.rep, &run.realizer).unwrap();
                println!("{name}: converged after {} solves", run.trace.len());
                println!("  triangle sizes {sizes:?}");
                println!("  {} cubes, proper contacts: {}", cubes.boxes().len(), cubes.proper());
            }
            SLOutcome::NonTermination { trace } => {
                println!("{name}: no positive solution within the budget");
                for t in trace.iter().take(5) {
                    println!("  {} {} min {}", t.iteration, t.sign_pattern, t.min_entry);
                }
            }
        }
    }
}
