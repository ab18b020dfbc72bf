//! Slow-input limits of the LuGre model and the closed-form hysteresis loop.
//!
//! With `a = sigma0 / g(0)` the limit output `y*` of the rescaled system
//! obeys, between times `s <= t`,
//!
//! ```text
//! y*(t) = exp(-a (rho(t) - rho(s))) y*(s)
//!         + sigma0 int_s^t exp(-a (rho(t) - rho(tau))) u'(tau) d tau
//! ```
//!
//! where `rho` is the variation of the input. Every exponential is taken
//! relative to the start of the current piece, so nothing overflows however
//! large `a rho(T)` gets. The periodic limit `y°` is the same flow started
//! from the fixed point of the one-period map.
//!
//! On the normalized input `psi_u` each monotone segment is one exponential
//! arc towards `+g(0)` (rising) or `-g(0)` (falling). Neither `sigma1` nor `f`
//! enter, and `g` only through `g(0)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::geometry::loop_area;
use crate::model::ModelParams;
use crate::quadrature;
use crate::signal::{NormalizedInput, NormalizedPath, PeriodicSignal, Piece, Profile};

/// Absolute tolerance for the per-piece quadratures.
pub const QUADRATURE_TOL: f64 = 1e-13;

/// Dense samples per loop segment.
pub const SAMPLES_PER_SEGMENT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitKind {
    /// `y*`, the slow-input limit from `x0`, defined for `t >= 0`.
    Star,
    /// `y°`, its periodic steady state, defined on `[0, T]`.
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    /// Closed form on linear pieces, quadrature on the rest.
    Auto,
    Quadrature,
}

/// `sigma0 int_{t0}^{t} exp(-a (rho(t) - rho(tau))) u'(tau) d tau` on one piece
/// (`t0 = piece.t_start`, times local to the period).
fn piece_response(piece: &Piece, sigma0: f64, g0: f64, a: f64, t: f64, rule: Rule) -> f64 {
    if t <= piece.t_start || piece.direction() == 0.0 {
        return 0.0;
    }
    let d = piece.direction();
    let u_t = piece.value(t);
    match (rule, &piece.profile) {
        (Rule::Auto, Profile::Linear) => {
            let drho = (u_t - piece.u_start).abs();
            -d * g0 * (-a * drho).exp_m1()
        }
        _ => {
            let integrand = |tau: f64| {
                let drho = (u_t - piece.value(tau)).abs();
                (-a * drho).exp() * piece.rate(tau)
            };
            sigma0 * quadrature::integrate(integrand, piece.t_start, t, QUADRATURE_TOL / sigma0.max(1.0))
        }
    }
}

/// Limit output `y*` or `y°` of a LuGre model driven by `u`.
#[derive(Debug, Clone)]
pub struct LimitOutput {
    pub kind: LimitKind,
    pub g0: f64,
    pub sigma0: f64,
    signal: PeriodicSignal,
    rule: Rule,
    rate: f64,
    /// Per piece: decay factor across the piece and zero-start response.
    decay: Vec<f64>,
    response: Vec<f64>,
    /// Value at the start of each piece of the first period, plus the end.
    starts: Vec<f64>,
}

impl LimitOutput {
    fn build(p: &ModelParams, u: &PeriodicSignal, kind: LimitKind, rule: Rule) -> Self {
        let sigma0 = p.sigma0();
        let g0 = p.g().at_rest();
        let a = sigma0 / g0;
        let pieces = u.pieces();
        let decay: Vec<f64> = pieces.iter().map(|pc| (-a * pc.increment()).exp()).collect();
        let response: Vec<f64> = pieces
            .iter()
            .map(|pc| piece_response(pc, sigma0, g0, a, pc.t_end, rule))
            .collect();
        let chain = |y0: f64| {
            let mut starts = Vec::with_capacity(pieces.len() + 1);
            let mut y = y0;
            starts.push(y);
            for (e, c) in decay.iter().zip(&response) {
                y = e * y + c;
                starts.push(y);
            }
            starts
        };
        let y0 = match kind {
            LimitKind::Star => sigma0 * p.x0(),
            LimitKind::Circle => {
                // fixed point of the one-period map y -> exp(-a rho(T)) y + C
                let zero_start = *chain(0.0).last().unwrap();
                let total = u.variation_per_period();
                if total == 0.0 {
                    0.0
                } else {
                    zero_start / -(-a * total).exp_m1()
                }
            }
        };
        let starts = chain(y0);
        Self {
            kind,
            g0,
            sigma0,
            signal: u.clone(),
            rule,
            rate: a,
            decay,
            response,
            starts,
        }
    }

    pub fn signal(&self) -> &PeriodicSignal {
        &self.signal
    }

    /// Value at `t = 0`.
    pub fn initial_value(&self) -> f64 {
        self.starts[0]
    }

    /// Value obtained by chaining every piece through one full period.
    pub fn value_after_one_period(&self) -> f64 {
        *self.starts.last().unwrap()
    }

    /// Evaluates the limit. `y°` is extended periodically.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        let (k, i, local) = self.signal.locate(t);
        let mut y = self.starts[0];
        if self.kind == LimitKind::Star && k > 0 {
            let n = self.starts.len() - 1;
            // value at the start of period k
            for _ in 0..k {
                let mut v = y;
                for j in 0..n {
                    v = self.decay[j] * v + self.response[j];
                }
                y = v;
            }
            for j in 0..i {
                y = self.decay[j] * y + self.response[j];
            }
        } else {
            y = self.starts[i];
        }
        let piece = &self.signal.pieces()[i];
        let drho = (piece.value(local) - piece.u_start).abs();
        (-self.rate * drho).exp() * y + piece_response(piece, self.sigma0, self.g0, self.rate, local, self.rule)
    }
}

/// Slow-input limit `y*(t)` from `x0`.
pub fn y_star(p: &ModelParams, u: &PeriodicSignal, t: f64) -> f64 {
    LimitOutput::build(p, u, LimitKind::Star, Rule::Auto).eval(t)
}

/// Reusable evaluator for `y*`.
pub fn y_star_output(p: &ModelParams, u: &PeriodicSignal) -> LimitOutput {
    LimitOutput::build(p, u, LimitKind::Star, Rule::Auto)
}

/// Periodic limit `y°` computed by quadrature of the time-domain integral on
/// every piece; independent of the closed-form loop.
pub fn y_circle(p: &ModelParams, u: &PeriodicSignal) -> LimitOutput {
    LimitOutput::build(p, u, LimitKind::Circle, Rule::Quadrature)
}

/// One exponential arc of the loop over `[start, end]` in `varrho`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopSegment {
    pub start: f64,
    pub end: f64,
    pub start_value: f64,
    /// `+1` where `psi` rises, `-1` where it falls.
    pub direction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopSample {
    pub rho: f64,
    pub psi: f64,
    pub y: f64,
    pub segment: usize,
}

/// The parametrized hysteresis loop `{(psi_u(r), y°(r)) : r in [0, rho_N]}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopCurve {
    pub path: NormalizedPath,
    pub g0: f64,
    pub sigma0: f64,
    pub segments: Vec<LoopSegment>,
    /// `y°` at `rho_N`, obtained by chaining the last segment.
    pub end_value: f64,
    /// End of the minor loop for bimodal inputs.
    pub rho5: Option<f64>,
    pub samples: Vec<LoopSample>,
}

fn arc(start_value: f64, direction: f64, g0: f64, a: f64, drho: f64) -> f64 {
    (-a * drho).exp() * start_value - direction * g0 * (-a * drho).exp_m1()
}

impl LoopCurve {
    fn from_start(p: &ModelParams, path: NormalizedPath, y0: f64, rho5: Option<f64>) -> Self {
        let sigma0 = p.sigma0();
        let g0 = p.g().at_rest();
        let a = sigma0 / g0;
        let mut segments = Vec::with_capacity(path.segments());
        let mut y = y0;
        for i in 0..path.segments() {
            let (start, end) = (path.rho[i], path.rho[i + 1]);
            let direction = path.direction(i);
            segments.push(LoopSegment {
                start,
                end,
                start_value: y,
                direction,
            });
            y = arc(y, direction, g0, a, end - start);
        }
        let mut curve = Self {
            path,
            g0,
            sigma0,
            segments,
            end_value: y,
            rho5,
            samples: Vec::new(),
        };
        curve.samples = curve.dense_samples(SAMPLES_PER_SEGMENT);
        curve
    }

    pub fn rate(&self) -> f64 {
        self.sigma0 / self.g0
    }

    pub fn period(&self) -> f64 {
        self.path.period()
    }

    /// Breakpoints `rho_0..rho_N`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.path.rho
    }

    /// `y°` at each breakpoint, the last one from chaining.
    pub fn breakpoint_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.segments.iter().map(|s| s.start_value).collect();
        v.push(self.end_value);
        v
    }

    fn segment_for(&self, varrho: f64) -> usize {
        self.path.segment_at(varrho)
    }

    /// `y°(varrho)` for `varrho` in `[0, rho_N]`.
    pub fn eval(&self, varrho: f64) -> f64 {
        if varrho >= self.period() {
            return self.end_value;
        }
        let s = &self.segments[self.segment_for(varrho.max(0.0))];
        arc(s.start_value, s.direction, self.g0, self.rate(), varrho - s.start)
    }

    /// `d y° / d varrho = a (direction g(0) - y°)`, right derivative at knots.
    pub fn slope(&self, varrho: f64) -> f64 {
        let s = &self.segments[self.segment_for(varrho.max(0.0).min(self.period()))];
        self.rate() * (s.direction * self.g0 - self.eval(varrho))
    }

    pub fn psi(&self, varrho: f64) -> f64 {
        self.path.psi(varrho)
    }

    fn dense_samples(&self, per_segment: usize) -> Vec<LoopSample> {
        let mut out = Vec::with_capacity(self.segments.len() * per_segment + 2);
        for (i, s) in self.segments.iter().enumerate() {
            for j in 0..per_segment {
                let rho = s.start + (s.end - s.start) * j as f64 / per_segment as f64;
                if let Some(r5) = self.rho5 {
                    let prev = out.last().map_or(f64::NEG_INFINITY, |p: &LoopSample| p.rho);
                    if r5 > prev && r5 < rho {
                        out.push(self.sample_at(r5, i));
                    }
                }
                out.push(self.sample_at(rho, i));
            }
        }
        if let Some(r5) = self.rho5 {
            let prev = out.last().map_or(f64::NEG_INFINITY, |p| p.rho);
            if r5 > prev && r5 < self.period() {
                out.push(self.sample_at(r5, self.segments.len() - 1));
            }
        }
        let n = self.segments.len();
        out.push(LoopSample {
            rho: self.period(),
            psi: self.path.values[n],
            y: self.end_value,
            segment: n - 1,
        });
        out
    }

    fn sample_at(&self, rho: f64, segment: usize) -> LoopSample {
        let s = &self.segments[segment];
        let psi = self.path.values[segment] + s.direction * (rho - s.start);
        LoopSample {
            rho,
            psi,
            y: arc(s.start_value, s.direction, self.g0, self.rate(), rho - s.start),
            segment,
        }
    }

    /// Points `(psi, y)` of the dense samples.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.psi, s.y)).collect()
    }

    /// Enclosed area of the whole loop.
    pub fn area(&self) -> Result<f64> {
        loop_area(&self.samples, (0.0, self.period()))
    }

    /// CSV with columns `rho,psi,y,segment_index`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> std::io::Result<()> {
        write_loop_csv(w, &self.samples)
    }
}

pub(crate) fn write_loop_csv<W: std::io::Write>(mut w: W, samples: &[LoopSample]) -> std::io::Result<()> {
    writeln!(w, "rho,psi,y,segment_index")?;
    for s in samples {
        writeln!(w, "{},{},{},{}", fmt_f64(s.rho), fmt_f64(s.psi), fmt_f64(s.y), s.segment)?;
    }
    Ok(())
}

/// Loop of a general piecewise-monotone input, from the fixed point of the
/// one-period map of its normalized path.
pub fn loop_from_path(p: &ModelParams, path: &NormalizedPath) -> LoopCurve {
    let g0 = p.g().at_rest();
    let a = p.sigma0() / g0;
    let total = path.period();
    let mut zero_start = 0.0;
    for i in 0..path.segments() {
        let drho = path.rho[i + 1] - path.rho[i];
        zero_start = arc(zero_start, path.direction(i), g0, a, drho);
    }
    let y0 = zero_start / -(-a * total).exp_m1();
    LoopCurve::from_start(p, path.clone(), y0, None)
}

/// `y°(0)` of a bimodal loop:
/// `g(0) exp(-a r4) / (1 - exp(-a r4)) (2 e^{a r1} - 2 e^{a r2} + 2 e^{a r3} - e^{a r4} - 1)`,
/// with the global factor distributed into each term.
pub fn bimodal_loop_start(p: &ModelParams, n: &NormalizedInput) -> f64 {
    let g0 = p.g().at_rest();
    let a = p.sigma0() / g0;
    let [_, r1, r2, r3, r4] = n.rho;
    // the constant terms 2 - 2 + 2 - 1 - 1 cancel, leaving expm1 terms only
    let bracket = 2.0 * (-a * (r4 - r1)).exp_m1() - 2.0 * (-a * (r4 - r2)).exp_m1()
        + 2.0 * (-a * (r4 - r3)).exp_m1()
        - (-a * r4).exp_m1();
    g0 * bracket / -(-a * r4).exp_m1()
}

/// Closed-form hysteresis loop of a bimodal input.
pub fn loop_closed_form(p: &ModelParams, n: &NormalizedInput) -> LoopCurve {
    let y0 = bimodal_loop_start(p, n);
    LoopCurve::from_start(p, n.to_path(), y0, Some(n.rho5))
}

/// The minor loop: the arcs over `[rho_1, rho_2]` and `[rho_2, rho_5]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorLoop {
    pub rho1: f64,
    pub rho2: f64,
    pub rho5: f64,
    /// Descending arc, then ascending arc.
    pub arcs: [Vec<LoopSample>; 2],
    /// `|y°(rho_5) - y°(rho_1)|`.
    pub closure_gap: f64,
    /// `rho_5 = rho_3`: the minor loop ends where the major loop turns.
    pub degenerate: bool,
    pub psi_span: (f64, f64),
}

impl MinorLoop {
    /// Samples over `[rho_1, rho_5]` in order, with the shared knot once.
    pub fn samples(&self) -> Vec<LoopSample> {
        let mut s = self.arcs[0].clone();
        s.extend(self.arcs[1].iter().skip(1).copied());
        s
    }

    pub fn area(&self) -> Result<f64> {
        loop_area(&self.samples(), (self.rho1, self.rho5))
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> std::io::Result<()> {
        write_loop_csv(w, &self.samples())
    }
}

pub fn extract_minor_loop(c: &LoopCurve) -> Result<MinorLoop> {
    let rho5 = c
        .rho5
        .ok_or_else(|| Error::InvalidArgument("loop has no minor loop (input is not bimodal)".into()))?;
    if c.segments.len() != 4 {
        return Err(Error::InvalidArgument("minor loop needs a four-segment loop".into()));
    }
    let (rho1, rho2, rho3) = (c.path.rho[1], c.path.rho[2], c.path.rho[3]);
    let within = |lo: f64, hi: f64| -> Vec<LoopSample> {
        c.samples
            .iter()
            .filter(|s| s.rho >= lo && s.rho <= hi)
            .copied()
            .map(|mut s| {
                // knots belong to the arc being traversed
                if s.rho == rho2 && hi == rho2 {
                    s.segment = 1;
                    s.psi = c.path.values[2];
                }
                s
            })
            .collect()
    };
    let descending = within(rho1, rho2);
    let ascending = within(rho2, rho5);
    let y1 = c.eval(rho1);
    let y5 = c.eval(rho5);
    Ok(MinorLoop {
        rho1,
        rho2,
        rho5,
        arcs: [descending, ascending],
        closure_gap: (y5 - y1).abs(),
        degenerate: rho5 == rho3,
        psi_span: (c.path.values[2], c.path.values[1]),
    })
}

/// Breakpoints, values and areas of a bimodal loop, as written to JSON.
#[derive(Debug, Clone, Serialize)]
pub struct LoopSummary {
    pub rho: Vec<f64>,
    pub rho5: Option<f64>,
    pub y_at_breakpoints: Vec<f64>,
    pub y_at_rho5: Option<f64>,
    pub major_area: f64,
    pub minor_area: Option<f64>,
    pub closure_gap: Option<f64>,
    pub minor_degenerate: Option<bool>,
    pub minor_psi_span: Option<(f64, f64)>,
}

pub fn loop_summary(c: &LoopCurve) -> Result<LoopSummary> {
    let minor = c.rho5.map(|_| extract_minor_loop(c)).transpose()?;
    Ok(LoopSummary {
        rho: c.path.rho.clone(),
        rho5: c.rho5,
        y_at_breakpoints: c.breakpoint_values(),
        y_at_rho5: c.rho5.map(|r| c.eval(r)),
        major_area: c.area()?,
        minor_area: minor.as_ref().map(|m| m.area()).transpose()?,
        closure_gap: minor.as_ref().map(|m| m.closure_gap),
        minor_degenerate: minor.as_ref().map(|m| m.degenerate),
        minor_psi_span: minor.as_ref().map(|m| m.psi_span),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MacroDamping, VelocityMap};
    use crate::signal::{build_bimodal, BimodalInputSpec};

    fn lugre(sigma0: f64, x0: f64) -> ModelParams {
        ModelParams::new(sigma0, 1.0, MacroDamping::stribeck(1.0, 2.0, 1.0, 1.0).unwrap(), VelocityMap::Zero, x0).unwrap()
    }

    // independent evaluation of the bimodal formula with global exponentials
    fn y0_textbook(s0: f64, g0: f64, r: [f64; 5]) -> f64 {
        let a = s0 / g0;
        let e = f64::exp;
        g0 * e(-a * r[4]) / (1.0 - e(-a * r[4]))
            * (2.0 * e(a * r[1]) - 2.0 * e(a * r[2]) + 2.0 * e(a * r[3]) - e(a * r[4]) - 1.0)
    }

    #[test]
    fn y_star_examples() {
        let u = PeriodicSignal::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        let p = lugre(1.0, 0.0);
        assert_eq!(y_star(&p, &u, 0.0), 0.0);
        let expected = 2.0 * (1.0 - (-0.5f64).exp());
        assert!((y_star(&p, &u, 1.0) - expected).abs() < 1e-15);
        // oracle: quadrature of the textbook integral
        let q = quadrature::integrate(|tau: f64| (tau / 2.0).exp(), 0.0, 1.0, 1e-14);
        assert!((y_star(&p, &u, 1.0) - (-0.5f64).exp() * q).abs() < 1e-14);
    }

    #[test]
    fn y_star_is_frozen_on_a_plateau() {
        let u = PeriodicSignal::piecewise_linear(&[(0.0, 0.0), (1.0, 0.0), (2.0, 1.0), (3.0, 0.0)]).unwrap();
        let p = lugre(1.5, 0.4);
        for t in [0.0, 0.25, 0.5, 0.99, 1.0] {
            assert!((y_star(&p, &u, t) - 1.5 * 0.4).abs() < 1e-15);
        }
    }

    #[test]
    fn y_circle_closes_and_matches_formula() {
        let spec = BimodalInputSpec::linear(0.0, 0.2, 1.0, 1.5).unwrap();
        let u = build_bimodal(&spec).unwrap();
        let yc = y_circle(&lugre(1.0, 0.0), &u);
        assert!((yc.value_after_one_period() - yc.initial_value()).abs() < 1e-12);
        let y0 = y0_textbook(1.0, 2.0, [0.0, 1.0, 1.8, 3.1, 4.6]);
        assert!((yc.initial_value() - y0).abs() < 1e-12);
        assert!((y0 - -0.707_140_909_274_591_1).abs() < 1e-12);
    }

    #[test]
    fn triangle_loop_is_odd() {
        let u = PeriodicSignal::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        let yc = y_circle(&lugre(1.0, 0.0), &u);
        assert!((yc.eval(0.0) + yc.eval(1.0)).abs() < 1e-13);
        // closed form -g0 tanh(a / 2)
        assert!((yc.eval(0.0) + 2.0 * 0.25f64.tanh()).abs() < 1e-13);
    }

    #[test]
    fn closed_form_matches_general_engine_and_quadrature() {
        for (s0, ext) in [(1.0, (0.0, 0.2, 1.0, 1.5)), (6.0, (0.0, 0.5, 1.0, 1.5)), (1.0, (0.0, 0.5, 1.0, 1.5))] {
            let n = NormalizedInput::from_extrema(ext.0, ext.1, ext.2, ext.3).unwrap();
            let p = lugre(s0, 0.0);
            let c = loop_closed_form(&p, &n);
            let g = loop_from_path(&p, &n.to_path());
            assert!((c.segments[0].start_value - g.segments[0].start_value).abs() < 1e-13);
            assert!((c.end_value - c.segments[0].start_value).abs() < 1e-12);
            let u = build_bimodal(&BimodalInputSpec::linear(ext.0, ext.1, ext.2, ext.3).unwrap()).unwrap();
            let yc = y_circle(&p, &u);
            for s in &c.samples {
                assert!((yc.eval(s.rho) - s.y).abs() < 1e-10, "rho = {}", s.rho);
            }
        }
    }

    #[test]
    fn near_degenerate_approaches_triangle_loop() {
        let p = lugre(1.0, 0.0);
        let n = NormalizedInput::from_extrema(0.0, 1.0 - 1e-9, 1.0, 1.5).unwrap();
        let c = loop_closed_form(&p, &n);
        let tri = PeriodicSignal::piecewise_linear(&[(0.0, 0.0), (1.5, 1.5), (3.0, 0.0)]).unwrap();
        let single = loop_from_path(&p, &tri.normalized_path());
        // compare at equal psi on the major branches
        for k in 0..=100 {
            let psi = 1.5 * k as f64 / 100.0;
            let rising = single.eval(psi);
            let r = if psi <= 1.0 { psi } else { n.rho[2] + (psi - n.values[2]) };
            assert!((c.eval(r) - rising).abs() < 1e-6);
            let falling = single.eval(3.0 - psi);
            assert!((c.eval(n.rho[4] - psi) - falling).abs() < 1e-6);
        }
    }

    #[test]
    fn small_rate_loop_collapses() {
        let p = lugre(1e-6, 0.0);
        let n = NormalizedInput::from_extrema(0.0, 0.2, 1.0, 1.5).unwrap();
        let c = loop_closed_form(&p, &n);
        assert!(c.area().unwrap().abs() < 1e-3);
        for s in &c.samples {
            assert!(s.y.is_finite());
        }
        // y° rises with slope ~ sigma0 on the first segment
        let slope = (c.eval(1.0) - c.eval(0.0)) / 1.0;
        assert!((slope - 1e-6).abs() < 1e-9);
    }

    #[test]
    fn minor_loop_examples() {
        let p = lugre(1.0, 0.0);
        let c = loop_closed_form(&p, &NormalizedInput::from_extrema(0.0, 0.2, 1.0, 1.5).unwrap());
        let m = extract_minor_loop(&c).unwrap();
        assert_eq!(m.psi_span, (0.2, 1.0));
        assert_eq!((m.rho1, m.rho2, m.rho5), (1.0, 1.8, 2.6));
        assert!(!m.degenerate);
        let all = m.samples();
        assert_eq!(all.first().unwrap().rho, 1.0);
        assert_eq!(all.last().unwrap().rho, 2.6);
        assert!((all.first().unwrap().psi - 1.0).abs() < 1e-12);
        assert!((all.last().unwrap().psi - 1.0).abs() < 1e-12);
        assert!(m.area().unwrap() > 0.0);

        let deg = loop_closed_form(&p, &NormalizedInput::from_extrema(0.0, 0.2, 1.5, 1.5).unwrap());
        let m = extract_minor_loop(&deg).unwrap();
        assert!(m.degenerate);
        assert_eq!(m.rho5, deg.path.rho[3]);
    }

    #[test]
    fn sigma1_and_f_never_enter_the_loop() {
        let n = NormalizedInput::from_extrema(0.0, 0.2, 1.0, 1.5).unwrap();
        let base = loop_closed_form(&lugre(1.0, 0.0), &n);
        let f = VelocityMap::table(vec![-1.0, 0.0, 1.0], vec![-0.5, 0.0, 0.5]).unwrap();
        let other = lugre(1.0, 0.0).with_sigma1(10.0).unwrap().with_f(f).unwrap();
        assert_eq!(loop_closed_form(&other, &n), base);
        let constant = lugre(1.0, 0.0).with_g(MacroDamping::constant(2.0).unwrap()).unwrap();
        assert_eq!(loop_closed_form(&constant, &n), base);
    }

    #[test]
    fn segment_slopes_point_to_saturation() {
        let p = lugre(3.0, 0.0);
        let c = loop_closed_form(&p, &NormalizedInput::from_extrema(-0.4, 0.1, 0.9, 2.0).unwrap());
        for s in &c.samples[..c.samples.len() - 1] {
            let seg = &c.segments[s.segment];
            let d = c.slope(s.rho);
            if seg.direction > 0.0 && s.y < c.g0 {
                assert!(d > 0.0);
            }
            if seg.direction < 0.0 && s.y > -c.g0 {
                assert!(d < 0.0);
            }
        }
    }

    #[test]
    fn star_converges_to_circle_geometrically() {
        let u = build_bimodal(&BimodalInputSpec::linear(0.0, 0.2, 1.0, 1.5).unwrap()).unwrap();
        let p = lugre(1.0, 0.0);
        let star = y_star_output(&p, &u);
        let circle = y_circle(&p, &u);
        let d: Vec<f64> = (0..4).map(|k| (star.eval(k as f64 * 4.6) - circle.eval(0.0)).abs()).collect();
        for w in d.windows(2) {
            assert!((w[1] / w[0] - (-2.3f64).exp()).abs() < 1e-6);
        }
    }
}
