//! How the minor loop changes with sigma0 and the inner minimum.

use lugre_loops::analytic::{extract_minor_loop, loop_closed_form};
use lugre_loops::lab::ExampleScenario;

fn main() -> lugre_loops::Result<()> {
    println!("{:<20} {:>12} {:>12} {:>12} {:>10}", "variant", "major area", "minor area", "closure gap", "psi span");
    for (label, p, n) in ExampleScenario::Example4.loop_variants() {
        let curve = loop_closed_form(&p, &n.expect("bimodal"));
        let minor = extract_minor_loop(&curve)?;
        println!(
            "{label:<20} {:>12.6} {:>12.6} {:>12.3e} {:>4}..{}",
            curve.area()?,
            minor.area()?,
            minor.closure_gap,
            minor.psi_span.0,
            minor.psi_span.1
        );
    }
    Ok(())
}
