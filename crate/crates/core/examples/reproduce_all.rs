//! Write every example scenario under a directory (default `results`).

use lugre_loops::lab::{run_examples, ExampleScenario};

fn main() -> lugre_loops::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "results".into());
    for (s, files) in run_examples(&ExampleScenario::ALL, out.as_ref())? {
        println!("{s}: {} files", files.len());
    }
    Ok(())
}
