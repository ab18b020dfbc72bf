//! Distance of the steady simulated output to `y*` as the input slows down.

use lugre_loops::integrator::IntegratorConfig;
use lugre_loops::lab::{example1_sweep, gamma_sweep, ExampleScenario, SweepReference};

fn main() -> lugre_loops::Result<()> {
    let cfg = IntegratorConfig::default();
    for s in [ExampleScenario::Example2, ExampleScenario::Example3] {
        let r = gamma_sweep(&s.params(), &s.input(), &s.gammas(), &cfg, SweepReference::Star)?;
        println!("{s}");
        for ((g, d), k) in r.gammas.iter().zip(&r.distances).zip(&r.periods_to_steady) {
            println!("  gamma = {g:>6}  sup |y - y*| = {d:.3e}  steady after {k:?} periods");
        }
    }
    let r = example1_sweep(&ExampleScenario::Example1.gammas(), &cfg)?;
    println!("Example1 (distance to the Dahl loop at equal phase)");
    for (g, d) in r.gammas.iter().zip(&r.distances) {
        println!("  gamma = {g:>6}  {d:.3e}");
    }
    Ok(())
}
