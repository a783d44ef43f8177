//! Triangulation to L-representation: labeling, 2-canonical order, shapes,
//! then the equilateral version rendered as SVG.
//!
//! `cargo run --example representation -- out.svg` writes the drawing.

use lgraph::graph::random_triangulation;
use lgraph::io::render_lrep_svg;
use lgraph::labeling::{labeling_from_realizer, two_canonical_from_labeling};
use lgraph::lrep::{build_lrep, equilateralize, induced_labeling, validate_lrep};
use lgraph::rational::format_q;
use lgraph::schnyder::compute_realizer;

fn main() {
    let n = 9;
    let r = compute_realizer(&random_triangulation(n, 2), [0, 1, n - 1]).unwrap();
    let el = labeling_from_realizer(&r).unwrap();
    let o = two_canonical_from_labeling(&el).unwrap();
    println!("2-canonical order {:?}", o.order);
    let rep = build_lrep(el.host(), &o).unwrap();
    println!("valid: {}, labeling reproduced: {}", validate_lrep(&rep).is_ok(), induced_labeling(&rep).unwrap().same_arcs(&el));
    let eq = equilateralize(&rep).unwrap();
    for (v, s) in eq.shapes().iter().enumerate() {
        println!("  {v}: leg {}", format_q(&s.leg().expect("equilateral")));
    }
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, render_lrep_svg(&eq, true)).unwrap();
        println!("wrote {path}");
    }
}
