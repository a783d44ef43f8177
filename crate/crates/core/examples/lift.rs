//! Cuboids over an equilateral L-representation, exported as OBJ.
//!
//! `cargo run --example lift -- out.obj` writes the boxes.

use lgraph::graph::random_stacking_graph;
use lgraph::io::export_obj;
use lgraph::lift3d::{canonical_lift, describe, validate_cuboids};
use lgraph::lrep::{build_lrep, equilateralize};
use lgraph::recognition::recognize;

fn main() {
    let g = (0..).map(|s| random_stacking_graph(8, s)).find(|g| recognize(g).is_some()).unwrap();
    let o = recognize(&g).unwrap();
    let rep = equilateralize(&build_lrep(&g, &o).unwrap()).unwrap();
    let (cr, _) = canonical_lift(&rep).unwrap();
    for (v, b) in cr.boxes().iter().enumerate() {
        println!("  {v}: {}", describe(b));
    }
    println!("valid: {}, proper: {}", validate_cuboids(&cr).is_ok(), cr.proper());
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, export_obj(&cr)).unwrap();
        println!("wrote {path}");
    }
}
