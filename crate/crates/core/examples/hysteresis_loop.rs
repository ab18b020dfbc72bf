//! Closed-form loop for Example 3, checked against quadrature.

use lugre_loops::analytic::{loop_closed_form, loop_summary, y_circle};
use lugre_loops::lab::ExampleScenario;
use lugre_loops::signal::NormalizedInput;

fn main() -> lugre_loops::Result<()> {
    let s = ExampleScenario::Example3;
    let spec = s.bimodal().expect("bimodal");
    let curve = loop_closed_form(&s.params(), &NormalizedInput::from_spec(&spec));
    let quad = y_circle(&s.params(), &s.input());
    let gap = curve
        .samples
        .iter()
        .fold(0.0f64, |m, q| m.max((q.y - quad.eval(q.rho)).abs()));
    let summary = loop_summary(&curve)?;
    println!("{}", serde_json::to_string_pretty(&summary).expect("serializable"));
    println!("closed form vs quadrature: {gap:.2e}");
    curve.write_csv(std::io::stdout().lock())?;
    Ok(())
}
