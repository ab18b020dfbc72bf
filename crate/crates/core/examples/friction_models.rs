//! Stribeck curve, a tabulated velocity map and the Dahl-to-LuGre mapping.

use lugre_loops::model::{dahl_to_lugre, DahlParams, MacroDamping, VelocityMap};

fn main() -> lugre_loops::Result<()> {
    let g = MacroDamping::stribeck(1.0, 2.0, 1.0, 1.0)?;
    let f = VelocityMap::table(vec![-1.0, 0.0, 1.0], vec![-0.5, 0.0, 0.5])?;
    println!("{:>6} {:>10} {:>10}", "nu", "g(nu)", "f(nu)");
    for k in -4..=4 {
        let nu = k as f64 * 0.5;
        println!("{nu:>6.2} {:>10.6} {:>10.6}", g.eval(nu), f.eval(nu));
    }
    println!("g at rest = {}", g.at_rest());

    let dahl = DahlParams::new(2.0, 0.8, 0.25)?;
    let p = dahl_to_lugre(&dahl);
    println!(
        "Dahl rho = {}, Fc = {}, w0 = {} -> sigma0 = {}, sigma1 = {}, x0 = {}",
        dahl.rho(),
        dahl.f_c(),
        dahl.w0(),
        p.sigma0(),
        p.sigma1(),
        p.x0()
    );
    Ok(())
}
