//! LuGre and Dahl dry-friction models.
//!
//! The LuGre model relates a relative displacement `u` to a friction force
//! through an internal bristle deflection `x`:
//!
//! ```text
//! x' = -sigma0 |u'| / g(u') x + u'
//! F  =  sigma0 x + sigma1 x' + f(u')
//! ```
//!
//! The Dahl model is the special case `g` constant, `sigma1 = 0`, `f = 0`.
//! Simulation works with the time-rescaled form in which the input is slowed
//! down by a factor `gamma`: `g` and `f` then see the velocity `u' / gamma` and
//! the damping contribution is `sigma1 / gamma`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;

/// Parameters of the Stribeck curve
/// `g(v) = Fc + (Fs - Fc) exp(-|v / vs|^beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStribeck", into = "RawStribeck")]
pub struct StribeckParams {
    f_c: f64,
    f_s: f64,
    v_s: f64,
    beta: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawStribeck {
    #[serde(rename = "Fc")]
    f_c: f64,
    #[serde(rename = "Fs")]
    f_s: f64,
    vs: f64,
    beta: f64,
}

impl TryFrom<RawStribeck> for StribeckParams {
    type Error = Error;
    fn try_from(r: RawStribeck) -> Result<Self> {
        StribeckParams::new(r.f_c, r.f_s, r.vs, r.beta)
    }
}

impl From<StribeckParams> for RawStribeck {
    fn from(p: StribeckParams) -> Self {
        RawStribeck {
            f_c: p.f_c,
            f_s: p.f_s,
            vs: p.v_s,
            beta: p.beta,
        }
    }
}

impl StribeckParams {
    pub fn new(f_c: f64, f_s: f64, v_s: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("Fc", f_c), ("Fs", f_s), ("vs", v_s), ("beta", beta)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "Stribeck {name} must be positive and finite, got {v}"
                )));
            }
        }
        // g ranges over the closed interval between Fc and Fs, both positive
        Ok(Self { f_c, f_s, v_s, beta })
    }

    pub fn f_c(&self) -> f64 {
        self.f_c
    }
    pub fn f_s(&self) -> f64 {
        self.f_s
    }
    pub fn v_s(&self) -> f64 {
        self.v_s
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `Fc + (Fs - Fc) exp(-|nu / vs|^beta)`, arranged so that `g(0)` is
    /// exactly `Fs`.
    pub fn eval(&self, nu: f64) -> f64 {
        self.f_s + (self.f_s - self.f_c) * (-(nu / self.v_s).abs().powf(self.beta)).exp_m1()
    }
}

/// Macrodamping function `g`, continuous and strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MacroDamping {
    Constant { level: f64 },
    Stribeck(StribeckParams),
    /// Tabulated `g(v)`; `x` holds velocities and `y` the (positive) values.
    Table(MonotoneCubic),
}

impl MacroDamping {
    pub fn constant(level: f64) -> Result<Self> {
        let g = MacroDamping::Constant { level };
        g.validate()?;
        Ok(g)
    }

    pub fn stribeck(f_c: f64, f_s: f64, v_s: f64, beta: f64) -> Result<Self> {
        Ok(MacroDamping::Stribeck(StribeckParams::new(f_c, f_s, v_s, beta)?))
    }

    pub fn table(velocities: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let g = MacroDamping::Table(MonotoneCubic::new(velocities, values)?);
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MacroDamping::Constant { level } => {
                if !(level.is_finite() && *level > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "constant g must be positive, got {level}"
                    )));
                }
            }
            MacroDamping::Stribeck(s) => {
                StribeckParams::new(s.f_c, s.f_s, s.v_s, s.beta)?;
            }
            MacroDamping::Table(t) => {
                for nu in t.validation_grid() {
                    let v = t.eval(nu);
                    if !(v > 0.0) {
                        return Err(Error::InvalidParameter(format!(
                            "tabulated g is not positive at velocity {nu} (value {v})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, nu: f64) -> f64 {
        match self {
            MacroDamping::Constant { level } => *level,
            MacroDamping::Stribeck(s) => s.eval(nu),
            MacroDamping::Table(t) => t.eval(nu),
        }
    }

    /// The only value of `g` that enters the slow-input hysteresis loop.
    pub fn at_rest(&self) -> f64 {
        self.eval(0.0)
    }
}

/// Velocity-dependent force term `f` with `f(0) = 0`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VelocityMap {
    #[default]
    Zero,
    Table(MonotoneCubic),
}

impl VelocityMap {
    pub fn table(velocities: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let f = VelocityMap::Table(MonotoneCubic::new(velocities, values)?);
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if let VelocityMap::Table(t) = self {
            let (xs, ys) = t.nodes();
            let zero_node = xs.iter().position(|&x| x == 0.0);
            match zero_node {
                Some(i) if ys[i] == 0.0 => {}
                _ => {
                    return Err(Error::InvalidParameter(
                        "tabulated f must contain the node (0, 0)".into(),
                    ))
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, nu: f64) -> f64 {
        match self {
            VelocityMap::Zero => 0.0,
            VelocityMap::Table(t) => t.eval(nu),
        }
    }
}

/// Full LuGre parameterization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    sigma0: f64,
    #[serde(default)]
    sigma1: f64,
    g: MacroDamping,
    #[serde(default)]
    f: VelocityMap,
    #[serde(default)]
    x0: f64,
}

impl ModelParams {
    pub fn new(sigma0: f64, sigma1: f64, g: MacroDamping, f: VelocityMap, x0: f64) -> Result<Self> {
        let p = Self {
            sigma0,
            sigma1,
            g,
            f,
            x0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma0.is_finite() && self.sigma0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma0 must be positive, got {}",
                self.sigma0
            )));
        }
        if !(self.sigma1.is_finite() && self.sigma1 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma1 must be non-negative, got {}",
                self.sigma1
            )));
        }
        if !self.x0.is_finite() {
            return Err(Error::InvalidParameter("x0 must be finite".into()));
        }
        self.g.validate()?;
        self.f.validate()
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }
    pub fn sigma1(&self) -> f64 {
        self.sigma1
    }
    pub fn g(&self) -> &MacroDamping {
        &self.g
    }
    pub fn f(&self) -> &VelocityMap {
        &self.f
    }
    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn with_sigma0(mut self, sigma0: f64) -> Result<Self> {
        self.sigma0 = sigma0;
        self.validate()?;
        Ok(self)
    }

    pub fn with_sigma1(mut self, sigma1: f64) -> Result<Self> {
        self.sigma1 = sigma1;
        self.validate()?;
        Ok(self)
    }

    pub fn with_g(mut self, g: MacroDamping) -> Result<Self> {
        self.g = g;
        self.validate()?;
        Ok(self)
    }

    pub fn with_f(mut self, f: VelocityMap) -> Result<Self> {
        self.f = f;
        self.validate()?;
        Ok(self)
    }

    pub fn with_x0(mut self, x0: f64) -> Result<Self> {
        self.x0 = x0;
        self.validate()?;
        Ok(self)
    }

    /// `sigma0 / g(0)`, the decay rate per unit of input variation in the
    /// slow-input limit.
    pub fn limit_rate(&self) -> f64 {
        self.sigma0 / self.g.at_rest()
    }
}

/// Dahl model `y = Fc w`, `w' = rho (u' - |u'| w)`, `-1 <= w(0) <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDahl", into = "RawDahl")]
pub struct DahlParams {
    rho: f64,
    f_c: f64,
    w0: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawDahl {
    rho: f64,
    #[serde(rename = "Fc")]
    f_c: f64,
    #[serde(default)]
    w0: f64,
}

impl TryFrom<RawDahl> for DahlParams {
    type Error = Error;
    fn try_from(r: RawDahl) -> Result<Self> {
        DahlParams::new(r.rho, r.f_c, r.w0)
    }
}

impl From<DahlParams> for RawDahl {
    fn from(d: DahlParams) -> Self {
        RawDahl {
            rho: d.rho,
            f_c: d.f_c,
            w0: d.w0,
        }
    }
}

impl DahlParams {
    pub fn new(rho: f64, f_c: f64, w0: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::InvalidParameter(format!("Dahl rho must be positive, got {rho}")));
        }
        if !(f_c.is_finite() && f_c > 0.0) {
            return Err(Error::InvalidParameter(format!("Dahl Fc must be positive, got {f_c}")));
        }
        if !(-1.0..=1.0).contains(&w0) {
            return Err(Error::InvalidParameter(format!(
                "Dahl w0 must lie in [-1, 1], got {w0}"
            )));
        }
        Ok(Self { rho, f_c, w0 })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn f_c(&self) -> f64 {
        self.f_c
    }
    pub fn w0(&self) -> f64 {
        self.w0
    }
}

/// Evaluates the macrodamping function at velocity `nu`.
pub fn eval_g(g: &MacroDamping, nu: f64) -> f64 {
    g.eval(nu)
}

/// Right-hand side of the rescaled state equation.
///
/// `g` is evaluated at the rescaled velocity `udot / gamma`.
pub fn lugre_rhs(p: &ModelParams, gamma: f64, z: f64, udot: f64) -> f64 {
    -p.sigma0 * udot.abs() / p.g.eval(udot / gamma) * z + udot
}

/// Rescaled friction force `sigma0 z + (sigma1 / gamma) z' + f(udot / gamma)`.
pub fn lugre_output(p: &ModelParams, gamma: f64, z: f64, zdot: f64, udot: f64) -> f64 {
    p.sigma0 * z + p.sigma1 / gamma * zdot + p.f.eval(udot / gamma)
}

/// Dahl model as a LuGre parameter set: `sigma0 = rho Fc`, `g = Fc`,
/// `sigma1 = 0`, `f = 0`, and `x0 = Fc w0 / sigma0` so that `sigma0 x = Fc w`.
pub fn dahl_to_lugre(d: &DahlParams) -> ModelParams {
    let sigma0 = d.rho * d.f_c;
    ModelParams {
        sigma0,
        sigma1: 0.0,
        g: MacroDamping::Constant { level: d.f_c },
        f: VelocityMap::Zero,
        x0: d.f_c * d.w0 / sigma0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stribeck_example() -> MacroDamping {
        MacroDamping::stribeck(1.0, 2.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn eval_g_examples() {
        let g = stribeck_example();
        assert_eq!(eval_g(&g, 0.0), 2.0);
        assert_eq!(eval_g(&MacroDamping::constant(1.0).unwrap(), 5.0), 1.0);
        let expected = 1.0 + (-1.0f64).exp();
        assert!((eval_g(&g, 1.0) - expected).abs() < 1e-15);
        // symmetric in velocity
        assert_eq!(eval_g(&g, -1.0), eval_g(&g, 1.0));
    }

    #[test]
    fn g_positive_on_dense_grid() {
        let gs = [
            stribeck_example(),
            MacroDamping::stribeck(3.0, 0.5, 0.1, 2.0).unwrap(),
            MacroDamping::constant(0.25).unwrap(),
            MacroDamping::table(vec![-2.0, 0.0, 2.0], vec![0.1, 1.0, 0.1]).unwrap(),
        ];
        for g in &gs {
            for k in -4000..=4000 {
                let nu = k as f64 * 0.01;
                assert!(g.eval(nu) > 0.0);
            }
        }
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(MacroDamping::stribeck(0.0, 2.0, 1.0, 1.0).is_err());
        assert!(MacroDamping::stribeck(1.0, -2.0, 1.0, 1.0).is_err());
        assert!(MacroDamping::stribeck(1.0, 2.0, 0.0, 1.0).is_err());
        assert!(MacroDamping::stribeck(1.0, 2.0, 1.0, 0.0).is_err());
        assert!(MacroDamping::constant(0.0).is_err());
        assert!(MacroDamping::table(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
        assert!(VelocityMap::table(vec![-1.0, 1.0], vec![-1.0, 1.0]).is_err());
        assert!(VelocityMap::table(vec![-1.0, 0.0, 1.0], vec![-1.0, 0.1, 1.0]).is_err());
        let g = stribeck_example();
        assert!(ModelParams::new(0.0, 1.0, g.clone(), VelocityMap::Zero, 0.0).is_err());
        assert!(ModelParams::new(1.0, -1.0, g.clone(), VelocityMap::Zero, 0.0).is_err());
        assert!(ModelParams::new(1.0, 0.0, g, VelocityMap::Zero, 0.0).is_ok());
    }

    #[test]
    fn rhs_examples() {
        let p = ModelParams::new(1.0, 0.0, MacroDamping::constant(2.0).unwrap(), VelocityMap::Zero, 0.0).unwrap();
        assert_eq!(lugre_rhs(&p, 1.0, 0.0, 1.0), 1.0);
        for gamma in [0.1, 1.0, 10.0, 1e6] {
            assert_eq!(lugre_rhs(&p, gamma, 2.0, 1.0), 0.0);
        }
        let p = ModelParams::new(1.0, 0.0, stribeck_example(), VelocityMap::Zero, 0.0).unwrap();
        let expected = 1.0 - 1.0 / (1.0 + (-0.1f64).exp());
        assert!((lugre_rhs(&p, 10.0, 1.0, 1.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn output_examples() {
        let f = VelocityMap::table(vec![-1.0, 0.0, 1.0], vec![-0.3, 0.0, 0.3]).unwrap();
        let p = ModelParams::new(2.0, 5.0, stribeck_example(), f, 0.0).unwrap();
        assert_eq!(lugre_output(&p, 3.0, 0.0, 0.0, 0.0), 0.0);
        // f-zero consistency
        for z in [-1.5, 0.0, 0.7] {
            assert_eq!(lugre_output(&p, 3.0, z, 0.0, 0.0), 2.0 * z);
        }
        let p = ModelParams::new(1.0, 1.0, stribeck_example(), VelocityMap::Zero, 0.0).unwrap();
        assert!((lugre_output(&p, 10.0, 0.5, 0.2, 1.0) - 0.52).abs() < 1e-15);
        let p = p.with_sigma0(6.0).unwrap();
        assert!((lugre_output(&p, 1e300, 0.5, 0.2, 1.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn dahl_mapping() {
        let m = dahl_to_lugre(&DahlParams::new(1.0, 1.0, 0.0).unwrap());
        assert_eq!(m.sigma0(), 1.0);
        assert_eq!(m.sigma1(), 0.0);
        assert_eq!(m.g(), &MacroDamping::Constant { level: 1.0 });
        assert_eq!(m.f(), &VelocityMap::Zero);
        assert_eq!(m.x0(), 0.0);

        let m = dahl_to_lugre(&DahlParams::new(2.0, 3.0, 1.0).unwrap());
        assert_eq!(m.sigma0(), 6.0);
        assert_eq!(m.g().at_rest(), 3.0);
        assert_eq!(m.x0(), 0.5);

        assert!(DahlParams::new(1.0, 1.0, 2.0).is_err());
        assert!(DahlParams::new(0.0, 1.0, 0.0).is_err());
        assert!(DahlParams::new(1.0, 0.0, 0.0).is_err());
    }
}
