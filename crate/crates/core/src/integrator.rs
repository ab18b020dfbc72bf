//! Time integration of the rescaled LuGre system, the native Dahl model and
//! the Dahl-plus-low-pass cascade, over piecewise-monotone periodic inputs.
//!
//! `|u'|` has corners at every breakpoint of the input, so each monotone
//! piece is integrated as a separate smooth problem and the final state is
//! chained into the next piece. No error estimate ever straddles a corner.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::model::{dahl_to_lugre, lugre_output, lugre_rhs, DahlParams, ModelParams};
use crate::signal::{time_scale, PeriodicSignal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Dormand–Prince 5(4) with step-size control.
    #[default]
    AdaptiveEmbeddedRk,
    /// Classical RK4 with step `max_step` (or the sample spacing).
    FixedStepRk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the step; `None` leaves it to the error controller.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_step: Option<f64>,
    /// Output samples per monotone piece of the input.
    pub samples_per_piece: usize,
    pub scheme: Scheme,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_step: None,
            samples_per_piece: 64,
            scheme: Scheme::AdaptiveEmbeddedRk,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidArgument("integrator tolerances must be positive".into()));
        }
        if let Some(h) = self.max_step {
            if !(h > 0.0) {
                return Err(Error::InvalidArgument("max_step must be positive".into()));
            }
        }
        if self.samples_per_piece == 0 {
            return Err(Error::InvalidArgument("samples_per_piece must be at least 1".into()));
        }
        Ok(())
    }

    /// Same config with both tolerances scaled by `factor`.
    pub fn scaled_tolerances(mut self, factor: f64) -> Self {
        self.rel_tol *= factor;
        self.abs_tol *= factor;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub u: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct TrajectoryMeta {
    pub steps: u64,
    pub rejected_steps: u64,
    /// Largest local error estimate (absolute, any component) of an
    /// accepted step.
    pub max_error_estimate: f64,
}

impl TrajectoryMeta {
    fn merge(&mut self, other: &TrajectoryMeta) {
        self.steps += other.steps;
        self.rejected_steps += other.rejected_steps;
        self.max_error_estimate = self.max_error_estimate.max(other.max_error_estimate);
    }
}

/// Sampled `(t, u, x, y)` path. Every input breakpoint is a sample time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub gamma: f64,
    /// Period of the input in the trajectory's time axis.
    pub period: f64,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn from_samples(samples: Vec<Sample>, gamma: f64, period: f64) -> Result<Self> {
        if samples.windows(2).any(|w| w[1].t <= w[0].t) {
            return Err(Error::InvalidArgument("sample times must be strictly increasing".into()));
        }
        Ok(Self {
            samples,
            gamma,
            period,
            meta: TrajectoryMeta::default(),
        })
    }

    pub fn end_time(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    /// Samples grouped by period index `floor(t / period)`, complete periods
    /// only (a period is complete when a later sample exists).
    pub fn periods(&self) -> Vec<&[Sample]> {
        let mut groups = Vec::new();
        if self.samples.is_empty() {
            return groups;
        }
        let t0 = self.samples[0].t;
        let index = |t: f64| ((t - t0) / self.period + 1e-9).floor() as i64;
        let mut start = 0;
        for i in 1..self.samples.len() {
            if index(self.samples[i].t) != index(self.samples[start].t) {
                groups.push(&self.samples[start..i]);
                start = i;
            }
        }
        groups
    }

    /// Samples of the last complete period.
    pub fn last_period(&self) -> &[Sample] {
        self.periods().last().copied().unwrap_or(&[])
    }

    pub fn max_abs_output(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.y.abs()))
    }

    /// CSV with header `t,u,x,y`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,u,x,y")?;
        for s in &self.samples {
            writeln!(w, "{},{},{},{}", fmt_f64(s.t), fmt_f64(s.u), fmt_f64(s.x), fmt_f64(s.y))?;
        }
        Ok(())
    }

    pub fn meta_json(&self) -> serde_json::Value {
        serde_json::json!({
            "gamma": self.gamma,
            "period": self.period,
            "samples": self.samples.len(),
            "steps": self.meta.steps,
            "rejected_steps": self.meta.rejected_steps,
            "max_error_estimate": self.meta.max_error_estimate,
        })
    }
}

// Dormand–Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `t0` through each of `targets` (strictly
/// increasing, all `> t0`), calling `emit` at every target.
fn integrate_smooth<const N: usize, F, O>(
    f: &F,
    t0: f64,
    y0: [f64; N],
    targets: &[f64],
    cfg: &IntegratorConfig,
    meta: &mut TrajectoryMeta,
    mut emit: O,
) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    match cfg.scheme {
        Scheme::AdaptiveEmbeddedRk => dopri(f, t0, y0, targets, cfg, meta, &mut emit),
        Scheme::FixedStepRk4 => rk4(f, t0, y0, targets, cfg, meta, &mut emit),
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, ks: &[[f64; N]], coeffs: &[f64]) -> [f64; N] {
    let mut out = *y;
    for (k, &c) in ks.iter().zip(coeffs) {
        if c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

fn dopri<const N: usize, F, O>(
    f: &F,
    t0: f64,
    y0: [f64; N],
    targets: &[f64],
    cfg: &IntegratorConfig,
    meta: &mut TrajectoryMeta,
    emit: &mut O,
) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    let max_step = cfg.max_step.unwrap_or(f64::INFINITY);
    let scale = |y: &[f64; N], i: usize| cfg.abs_tol + cfg.rel_tol * y[i].abs();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);

    // initial step from the scaled size of y and y'
    let d0 = (0..N).map(|i| (y[i] / scale(&y, i)).abs()).fold(0.0, f64::max);
    let d1 = (0..N).map(|i| (k1[i] / scale(&y, i)).abs()).fold(0.0, f64::max);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    if d1 > 0.0 {
        h = h.max((1.0 / d1).powf(0.2) * 0.1);
    }
    h = h.min(max_step);

    for &target in targets {
        while t < target {
            let remaining = target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            if step <= 1e-13 * t.abs().max(1.0) && !last {
                return Err(Error::StepUnderflow { time: t });
            }
            let mut ks = [[0.0; N]; 7];
            ks[0] = k1;
            for s in 1..7 {
                let ys = axpy(&y, step, &ks[..s], &A[s][..s]);
                ks[s] = f(t + C[s] * step, &ys);
            }
            let y_new = axpy(&y, step, &ks[..6], &A[6]);
            let mut err = 0.0f64;
            let mut err_abs = 0.0f64;
            for i in 0..N {
                let e: f64 = (0..7).map(|s| E[s] * ks[s][i]).sum::<f64>() * step;
                let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
                err = err.max(e.abs() / sc);
                err_abs = err_abs.max(e.abs());
            }
            if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                meta.rejected_steps += 1;
                h = step * 0.2;
                if h <= 1e-13 * t.abs().max(1.0) {
                    return Err(Error::NonFinite { time: t });
                }
                continue;
            }
            if err <= 1.0 {
                t = if last { target } else { t + step };
                y = y_new;
                k1 = ks[6];
                meta.steps += 1;
                meta.max_error_estimate = meta.max_error_estimate.max(err_abs);
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // a shortened final step says nothing about the natural step
                if !last || fac < 1.0 {
                    h = (step * fac).min(max_step);
                }
            } else {
                meta.rejected_steps += 1;
                h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
                if h <= 1e-13 * t.abs().max(1.0) {
                    return Err(Error::StepUnderflow { time: t });
                }
            }
        }
        emit(t, &y);
    }
    Ok(y)
}

fn rk4<const N: usize, F, O>(
    f: &F,
    t0: f64,
    y0: [f64; N],
    targets: &[f64],
    cfg: &IntegratorConfig,
    meta: &mut TrajectoryMeta,
    emit: &mut O,
) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    let hmax = cfg.max_step.unwrap_or(f64::INFINITY);
    let mut t = t0;
    let mut y = y0;
    for &target in targets {
        let span = target - t;
        let n = (span / hmax).ceil().max(1.0) as usize;
        let h = span / n as f64;
        for j in 0..n {
            let k1 = f(t, &y);
            let k2 = f(t + 0.5 * h, &axpy(&y, h, &[k1], &[0.5]));
            let k3 = f(t + 0.5 * h, &axpy(&y, h, &[k2], &[0.5]));
            let k4 = f(t + h, &axpy(&y, h, &[k3], &[1.0]));
            y = axpy(&y, h, &[k1, k2, k3, k4], &[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0]);
            t = if j + 1 == n { target } else { t + h };
            meta.steps += 1;
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { time: t });
            }
        }
        emit(t, &y);
    }
    Ok(y)
}

/// Runs an autonomous-in-`u'` system `y' = rhs(u', y)` over `n_periods`
/// periods of `u`, restarting at every breakpoint. `observe(u', y, y')`
/// returns the `(x, y)` columns of a sample.
fn drive<const N: usize, R, O>(
    u: &PeriodicSignal,
    n_periods: usize,
    state0: [f64; N],
    cfg: &IntegratorConfig,
    rhs: R,
    observe: O,
) -> Result<(Vec<Sample>, TrajectoryMeta, [f64; N])>
where
    R: Fn(f64, &[f64; N]) -> [f64; N],
    O: Fn(f64, &[f64; N], &[f64; N]) -> (f64, f64),
{
    cfg.validate()?;
    let m = cfg.samples_per_piece;
    let pieces = u.pieces();
    let mut samples = Vec::with_capacity(n_periods * pieces.len() * m + 1);
    let mut meta = TrajectoryMeta::default();
    let mut state = state0;
    let mut prev_end: Option<f64> = None;
    let mut last_udot = 0.0;

    for k in 0..n_periods {
        let offset = k as f64 * u.period();
        for piece in pieces {
            let a = prev_end.unwrap_or(offset + piece.t_start);
            let b = offset + piece.t_end;
            let rate = |t: f64| piece.rate(t - offset);
            let value = |t: f64| piece.value(t - offset);

            let udot = rate(a);
            let d = rhs(udot, &state);
            let (x, y) = observe(udot, &state, &d);
            samples.push(Sample { t: a, u: value(a), x, y });

            let targets: Vec<f64> = (1..=m)
                .map(|j| if j == m { b } else { a + (b - a) * j as f64 / m as f64 })
                .collect();
            let f = |t: f64, s: &[f64; N]| rhs(rate(t), s);
            let mut emitted = Vec::with_capacity(m);
            state = integrate_smooth(&f, a, state, &targets, cfg, &mut meta, |t, s| {
                emitted.push((t, *s));
            })?;
            // interior samples; the piece end is the next piece's start
            for &(t, s) in &emitted[..emitted.len() - 1] {
                let udot = rate(t);
                let d = rhs(udot, &s);
                let (x, y) = observe(udot, &s, &d);
                samples.push(Sample { t, u: value(t), x, y });
            }
            last_udot = rate(b);
            prev_end = Some(b);
        }
    }
    // closing sample, left limit of the final piece
    if let Some(end) = prev_end {
        let d = rhs(last_udot, &state);
        let (x, y) = observe(last_udot, &state, &d);
        samples.push(Sample {
            t: end,
            u: u.pieces().last().unwrap().u_end,
            x,
            y,
        });
    }
    Ok((samples, meta, state))
}

fn check_run(gamma: f64, n_periods: usize) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument("gamma must be positive".into()));
    }
    if n_periods == 0 {
        return Err(Error::InvalidArgument("n_periods must be at least 1".into()));
    }
    Ok(())
}

/// Integrates the rescaled LuGre system from `z(0) = x0` over `n_periods`
/// periods of `u`. The output uses `z'` from the right-hand side.
pub fn simulate_lugre(
    p: &ModelParams,
    u: &PeriodicSignal,
    gamma: f64,
    n_periods: usize,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    simulate_lugre_from(p, u, gamma, n_periods, p.x0(), cfg).map(|(t, _)| t)
}

fn simulate_lugre_from(
    p: &ModelParams,
    u: &PeriodicSignal,
    gamma: f64,
    n_periods: usize,
    z0: f64,
    cfg: &IntegratorConfig,
) -> Result<(Trajectory, f64)> {
    check_run(gamma, n_periods)?;
    let (samples, meta, state) = drive(
        u,
        n_periods,
        [z0],
        cfg,
        |udot, z| [lugre_rhs(p, gamma, z[0], udot)],
        |udot, z, dz| (z[0], lugre_output(p, gamma, z[0], dz[0], udot)),
    )?;
    Ok((
        Trajectory {
            samples,
            gamma,
            period: u.period(),
            meta,
        },
        state[0],
    ))
}

/// Result of running a simulation period by period until it repeats.
#[derive(Debug, Clone)]
pub struct SteadyRun {
    /// Samples of the final (steady) period, in absolute time.
    pub last_period: Trajectory,
    /// Number of periods simulated.
    pub periods: usize,
    /// Sup distance between the last two periods.
    pub last_change: f64,
}

/// Simulates one period at a time until two consecutive periods differ by
/// less than `tol` in sup norm, or `max_periods` is reached.
pub fn simulate_lugre_steady(
    p: &ModelParams,
    u: &PeriodicSignal,
    gamma: f64,
    cfg: &IntegratorConfig,
    tol: f64,
    max_periods: usize,
) -> Result<SteadyRun> {
    check_run(gamma, max_periods)?;
    let mut z = p.x0();
    let mut meta = TrajectoryMeta::default();
    let mut previous: Option<Vec<f64>> = None;
    let mut periods = 0;
    loop {
        let (mut traj, z_end) = simulate_lugre_from(p, u, gamma, 1, z, cfg)?;
        periods += 1;
        meta.merge(&traj.meta);
        let ys: Vec<f64> = traj.samples.iter().map(|s| s.y).collect();
        let change = previous
            .as_ref()
            .map(|prev| sup_distance(prev, &ys))
            .unwrap_or(f64::INFINITY);
        if change < tol || periods >= max_periods {
            let shift = (periods - 1) as f64 * u.period();
            for s in &mut traj.samples {
                s.t += shift;
            }
            traj.meta = meta;
            return Ok(SteadyRun {
                last_period: traj,
                periods,
                last_change: change,
            });
        }
        previous = Some(ys);
        z = z_end;
    }
}

/// Native Dahl model `w' = rho (u' - |u'| w)`, `y = Fc w`; the `x` column
/// holds `w`.
pub fn simulate_dahl(
    d: &DahlParams,
    u: &PeriodicSignal,
    n_periods: usize,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    check_run(1.0, n_periods)?;
    let (rho, f_c) = (d.rho(), d.f_c());
    let (samples, meta, _) = drive(
        u,
        n_periods,
        [d.w0()],
        cfg,
        |udot, w| [rho * (udot - udot.abs() * w[0])],
        |_, w, _| (w[0], f_c * w[0]),
    )?;
    Ok(Trajectory {
        samples,
        gamma: 1.0,
        period: u.period(),
        meta,
    })
}

/// Same run through the LuGre form of the Dahl model.
pub fn simulate_dahl_as_lugre(
    d: &DahlParams,
    u: &PeriodicSignal,
    n_periods: usize,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    simulate_lugre(&dahl_to_lugre(d), u, 1.0, n_periods, cfg)
}

/// Dahl state followed by a unit low-pass filter:
/// `x' = u' - |u'| x`, `y' = -y + x`, `x(0) = y(0) = 0`,
/// driven by `u(t) = sin(2 pi t / gamma)`.
pub fn simulate_example1(gamma: f64, n_periods: usize, cfg: &IntegratorConfig) -> Result<Trajectory> {
    check_run(gamma, n_periods)?;
    let u = time_scale(&PeriodicSignal::sine(1.0, 1.0)?, gamma)?;
    let (samples, meta, _) = drive(
        &u,
        n_periods,
        [0.0, 0.0],
        cfg,
        |udot, s| [udot - udot.abs() * s[0], -s[1] + s[0]],
        |_, s, _| (s[0], s[1]),
    )?;
    Ok(Trajectory {
        samples,
        gamma,
        period: u.period(),
        meta,
    })
}

/// Outcome of [`steady_state_periods`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteadyState {
    /// Output over period `k` and `k + 1` agree within tolerance.
    Converged(usize),
    NotConverged,
}

impl SteadyState {
    pub fn period(self) -> Option<usize> {
        match self {
            SteadyState::Converged(k) => Some(k),
            SteadyState::NotConverged => None,
        }
    }
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn interpolate(samples: &[Sample], t: f64) -> f64 {
    let i = samples.partition_point(|s| s.t <= t);
    if i == 0 {
        return samples[0].y;
    }
    if i >= samples.len() {
        return samples[samples.len() - 1].y;
    }
    let (a, b) = (&samples[i - 1], &samples[i]);
    a.y + (b.y - a.y) * (t - a.t) / (b.t - a.t)
}

/// Smallest `k` such that the output over period `k` and period `k + 1`
/// differ by less than `tol` in sup norm.
pub fn steady_state_periods(traj: &Trajectory, period: f64, tol: f64) -> Result<SteadyState> {
    if !(period > 0.0) {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    let view = Trajectory {
        samples: traj.samples.clone(),
        gamma: traj.gamma,
        period,
        meta: traj.meta,
    };
    let groups = view.periods();
    if groups.len() < 2 {
        return Err(Error::InvalidArgument(
            "trajectory must span at least two periods".into(),
        ));
    }
    for k in 0..groups.len() - 1 {
        let (a, b) = (groups[k], groups[k + 1]);
        let dist = if a.len() == b.len() {
            a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x.y - y.y).abs()))
        } else {
            a.iter()
                .fold(0.0f64, |m, s| m.max((s.y - interpolate(b, s.t + period)).abs()))
        };
        if dist < tol {
            return Ok(SteadyState::Converged(k));
        }
    }
    Ok(SteadyState::NotConverged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MacroDamping, VelocityMap};
    use crate::signal::{build_bimodal, BimodalInputSpec};

    fn constant_g(level: f64) -> ModelParams {
        ModelParams::new(1.0, 0.0, MacroDamping::constant(level).unwrap(), VelocityMap::Zero, 0.0).unwrap()
    }

    #[test]
    fn rising_piece_matches_closed_form() {
        // one long rising ramp: z(t) = (g / sigma0)(1 - exp(-sigma0 t / g))
        let u = PeriodicSignal::piecewise_linear(&[(0.0, 0.0), (20.0, 20.0), (40.0, 0.0)]).unwrap();
        let p = constant_g(2.0);
        let traj = simulate_lugre(&p, &u, 1.0, 1, &IntegratorConfig::default()).unwrap();
        for s in traj.samples.iter().filter(|s| s.t <= 20.0) {
            let exact = 2.0 * (1.0 - (-s.t / 2.0).exp());
            assert!((s.x - exact).abs() < 1e-8, "t = {}", s.t);
        }
        let at_top = traj.samples.iter().find(|s| s.t == 20.0).unwrap();
        assert!((at_top.x - 2.0).abs() < 1e-4);
    }

    #[test]
    fn breakpoints_are_samples_and_times_increase() {
        let spec = BimodalInputSpec::linear(0.0, 0.2, 1.0, 1.5).unwrap().with_times([0.7, 1.1, 2.9, 4.0]).unwrap();
        let u = build_bimodal(&spec).unwrap();
        let p = constant_g(1.0);
        let traj = simulate_lugre(&p, &u, 10.0, 3, &IntegratorConfig::default()).unwrap();
        assert!(traj.samples.windows(2).all(|w| w[1].t > w[0].t));
        for k in 0..3 {
            for b in u.breakpoints() {
                let t = k as f64 * 4.0 + b;
                assert!(traj.samples.iter().any(|s| (s.t - t).abs() < 1e-12), "missing t = {t}");
            }
        }
        assert_eq!(traj.samples.len(), 3 * 4 * 64 + 1);
    }

    #[test]
    fn bounded_state_for_constant_g() {
        let spec = BimodalInputSpec::linear(-1.0, 0.0, 2.0, 3.0).unwrap();
        let u = build_bimodal(&spec).unwrap();
        for x0 in [-0.5, 0.0, 0.5] {
            let p = constant_g(0.5).with_sigma0(1.0).unwrap().with_x0(x0).unwrap();
            let traj = simulate_lugre(&p, &u, 1.0, 4, &IntegratorConfig::default()).unwrap();
            for s in &traj.samples {
                assert!(s.x.abs() <= 0.5 + 1e-8);
            }
        }
    }

    #[test]
    fn dahl_native_matches_lugre_form() {
        let u = PeriodicSignal::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        for d in [
            DahlParams::new(1.0, 1.0, 0.0).unwrap(),
            DahlParams::new(2.0, 3.0, 1.0).unwrap(),
            DahlParams::new(0.3, 0.5, -0.4).unwrap(),
        ] {
            let cfg = IntegratorConfig::default();
            let a = simulate_dahl(&d, &u, 3, &cfg).unwrap();
            let b = simulate_dahl_as_lugre(&d, &u, 3, &cfg).unwrap();
            assert_eq!(a.samples.len(), b.samples.len());
            for (x, y) in a.samples.iter().zip(&b.samples) {
                assert_eq!(x.t, y.t);
                assert!((x.y - y.y).abs() <= 10.0 * (cfg.abs_tol + cfg.rel_tol * x.y.abs()));
            }
        }
    }

    #[test]
    fn fixed_step_agrees_with_adaptive() {
        let u = build_bimodal(&BimodalInputSpec::linear(0.0, 0.2, 1.0, 1.5).unwrap()).unwrap();
        let p = ModelParams::new(1.0, 1.0, MacroDamping::stribeck(1.0, 2.0, 1.0, 1.0).unwrap(), VelocityMap::Zero, 0.0).unwrap();
        let a = simulate_lugre(&p, &u, 10.0, 2, &IntegratorConfig::default()).unwrap();
        let cfg = IntegratorConfig {
            scheme: Scheme::FixedStepRk4,
            max_step: Some(0.005),
            ..Default::default()
        };
        let b = simulate_lugre(&p, &u, 10.0, 2, &cfg).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert!((x.y - y.y).abs() < 1e-9);
        }
    }

    #[test]
    fn example1_starts_at_rest() {
        for gamma in [1.0, 20.0, 300.0] {
            let traj = simulate_example1(gamma, 1, &IntegratorConfig::default()).unwrap();
            assert_eq!(traj.samples[0].t, 0.0);
            assert_eq!(traj.samples[0].y, 0.0);
            assert_eq!(traj.samples[0].x, 0.0);
        }
    }

    #[test]
    fn steady_state_sentinels() {
        let periodic: Vec<Sample> = (0..=40)
            .map(|i| {
                let t = i as f64 * 0.25;
                Sample { t, u: 0.0, x: 0.0, y: (t * std::f64::consts::PI * 2.0 / 2.5).sin() }
            })
            .collect();
        let traj = Trajectory::from_samples(periodic, 1.0, 2.5).unwrap();
        assert_eq!(steady_state_periods(&traj, 2.5, 1e-9).unwrap(), SteadyState::Converged(0));

        // deterministic pseudo-noise
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let noisy: Vec<Sample> = (0..=400)
            .map(|i| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                Sample { t: i as f64 * 0.01, u: 0.0, x: 0.0, y: (state % 1000) as f64 / 1000.0 }
            })
            .collect();
        let traj = Trajectory::from_samples(noisy, 1.0, 1.0).unwrap();
        assert_eq!(steady_state_periods(&traj, 1.0, 1e-3).unwrap(), SteadyState::NotConverged);

        let short = Trajectory::from_samples(vec![Sample { t: 0.0, u: 0.0, x: 0.0, y: 0.0 }], 1.0, 1.0).unwrap();
        assert!(steady_state_periods(&short, 1.0, 1e-3).is_err());
    }

    #[test]
    fn rejects_bad_arguments() {
        let u = PeriodicSignal::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        let p = constant_g(1.0);
        let cfg = IntegratorConfig::default();
        assert!(simulate_lugre(&p, &u, 0.0, 1, &cfg).is_err());
        assert!(simulate_lugre(&p, &u, 1.0, 0, &cfg).is_err());
        let bad = IntegratorConfig { rel_tol: 0.0, ..cfg };
        assert!(simulate_lugre(&p, &u, 1.0, 1, &bad).is_err());
    }
}
