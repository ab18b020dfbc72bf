//! Simulate Example 3 at a few time scales and write the trajectories.

use lugre_loops::integrator::{simulate_lugre, steady_state_periods, IntegratorConfig};
use lugre_loops::lab::ExampleScenario;

fn main() -> lugre_loops::Result<()> {
    let s = ExampleScenario::Example3;
    let (p, u) = (s.params(), s.input());
    let cfg = IntegratorConfig::default();
    let dir = std::env::temp_dir().join("lugre-loops-simulate");
    std::fs::create_dir_all(&dir)?;
    for gamma in [1.0, 10.0, 100.0] {
        let traj = simulate_lugre(&p, &u, gamma, 10, &cfg)?;
        let steady = steady_state_periods(&traj, traj.period, 1e-6)?;
        let path = dir.join(format!("traj_gamma{gamma}.csv"));
        traj.write_csv(std::io::BufWriter::new(std::fs::File::create(&path)?))?;
        println!(
            "gamma = {gamma:>5}: {} samples, max |y| = {:.4}, steady after {:?} periods -> {}",
            traj.samples.len(),
            traj.max_abs_output(),
            steady.period(),
            path.display()
        );
    }
    Ok(())
}
