//! Schnyder realizer of a random triangulation and its canonical order.

use lgraph::graph::random_triangulation;
use lgraph::schnyder::{canonical_order_from_realizer, compute_realizer, is_topological, validate_realizer, Color};

fn main() {
    let n = 12;
    let h = random_triangulation(n, 7);
    let r = compute_realizer(&h, [0, 1, n - 1]).unwrap();
    println!("realizer valid: {}", validate_realizer(&r).is_ok());
    for v in 0..n {
        let p: Vec<_> = [Color::Red, Color::Blue, Color::Green].iter().map(|&c| r.sigma(c, v)).collect();
        println!("  {v}: red {:?} blue {:?} green {:?}", p[0], p[1], p[2]);
    }
    let co = canonical_order_from_realizer(&r);
    println!("canonical order {:?}", co.order);
    println!("topological on S1 ∪ S2 ∪ Sn⁻¹: {}", is_topological(&r, &co.order));
}
