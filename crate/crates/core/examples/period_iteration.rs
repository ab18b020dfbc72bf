//! Successive periods of y* approach y° geometrically.

use lugre_loops::lab::{period_iteration, ExampleScenario};

fn main() {
    let s = ExampleScenario::Example3;
    let p = s.params();
    let u = s.input();
    let ratio = (-p.limit_rate() * u.variation_per_period()).exp();
    let d = period_iteration(&p, &u, 8);
    println!("expected ratio {ratio:.6}");
    for w in d.windows(2) {
        println!("k = {}: distance {:.3e}, ratio {:.6}", w[1].0, w[1].1, w[1].1 / w[0].1);
    }
}
