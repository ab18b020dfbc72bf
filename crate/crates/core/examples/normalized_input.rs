//! Total variation and the unit-slope normalized input of a bimodal signal.

use lugre_loops::signal::{build_bimodal, normalize, variation, BimodalInputSpec, BimodalShape};

fn main() -> lugre_loops::Result<()> {
    let spec = BimodalInputSpec::new(0.0, 0.2, 1.0, 1.5, Some([0.5, 1.5, 2.0, 4.0]), BimodalShape::PiecewiseLinear)?;
    let u = build_bimodal(&spec)?;
    let n = normalize(&u)?;
    println!("rho  = {:?}", n.rho);
    println!("rho5 = {}", n.rho5);
    println!("{:>6} {:>8} {:>8} {:>8}", "t", "u(t)", "rho(t)", "psi");
    for k in 0..=16 {
        let t = k as f64 * 0.25;
        let r = variation(&u, t);
        println!("{t:>6.2} {:>8.4} {r:>8.4} {:>8.4}", u.value(t), n.psi(r));
    }
    Ok(())
}
