//! Dahl model driven by a sine: the loop obtained by slowing the input down.

use lugre_loops::geometry::hausdorff_distance;
use lugre_loops::integrator::{simulate_example1, IntegratorConfig};
use lugre_loops::lab::example1_limit;

fn main() -> lugre_loops::Result<()> {
    let limit = example1_limit()?;
    let cfg = IntegratorConfig::default();
    let limit_graph: Vec<(f64, f64)> = (0..=4000)
        .map(|k| {
            let t = k as f64 / 4000.0;
            (limit.signal().value(t), limit.eval(t))
        })
        .collect();
    for gamma in [20.0, 200.0, 2000.0] {
        let traj = simulate_example1(gamma, 8, &cfg)?;
        let mut graph: Vec<(f64, f64)> = traj.last_period().iter().map(|s| (s.u, s.y)).collect();
        // close the loop
        graph.push(graph[0]);
        println!("gamma = {gamma:>6}: Hausdorff distance to the limit loop {:.3e}", hausdorff_distance(&graph, &limit_graph));
    }
    Ok(())
}
