//! Convergence experiments: gamma sweeps towards `y*`, period iteration
//! towards `y°`, and the canned example runs that write data files.

use std::fmt;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{
    loop_closed_form, loop_from_path, loop_summary, y_circle, y_star_output, LimitOutput, LoopCurve, LoopSummary,
};
use crate::error::{Error, Result};
use crate::export::{write_csv_file, write_dir_atomically, write_json_file};
use crate::integrator::{simulate_example1, simulate_lugre, steady_state_periods, IntegratorConfig, Sample, Trajectory};
use crate::model::{dahl_to_lugre, DahlParams, MacroDamping, ModelParams, VelocityMap};
use crate::signal::{build_bimodal, BimodalInputSpec, NormalizedInput, PeriodicSignal};

/// Periods simulated per gamma before looking for the steady state.
pub const SWEEP_PERIODS: usize = 30;
/// Sup-norm change between consecutive periods that counts as steady.
pub const STEADY_TOL: f64 = 1e-8;
/// Periods always discarded as transient.
pub const MIN_DISCARD: usize = 3;
/// Default number of `y*` period slices in [`period_iteration`].
pub const PERIOD_SLICES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepReference {
    /// `y*` at the same absolute times.
    Star,
    /// `y°` at the same phase.
    Circle,
    /// The steady period of a simulation at this gamma.
    Simulation { gamma: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub gammas: Vec<f64>,
    pub distances: Vec<f64>,
    /// Smallest `k` with period `k` and `k + 1` within [`STEADY_TOL`];
    /// `None` if the run never settled.
    pub periods_to_steady: Vec<Option<usize>>,
    /// Index of the period that was compared.
    pub compared_period: Vec<usize>,
    pub reference: SweepReference,
}

impl SweepReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.distances.windows(2).all(|w| w[1] < w[0])
    }
}

fn check_gammas(gammas: &[f64]) -> Result<()> {
    if gammas.is_empty() {
        return Err(Error::InvalidArgument("gamma list is empty".into()));
    }
    if let Some(g) = gammas.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        return Err(Error::InvalidArgument(format!("gamma must be positive, got {g}")));
    }
    Ok(())
}

/// Steady period of a simulation: the first period after discarding
/// `max(MIN_DISCARD, steady index)` periods.
struct SteadySlice {
    samples: Vec<Sample>,
    index: usize,
    steady: Option<usize>,
}

fn steady_slice(traj: &Trajectory, period: f64) -> Result<SteadySlice> {
    let steady = steady_state_periods(traj, period, STEADY_TOL)?.period();
    let groups = traj.periods();
    let index = MIN_DISCARD.max(steady.unwrap_or(groups.len() - 1)).min(groups.len() - 1);
    Ok(SteadySlice {
        samples: groups[index].to_vec(),
        index,
        steady,
    })
}

fn lugre_slice(p: &ModelParams, u: &PeriodicSignal, gamma: f64, cfg: &IntegratorConfig) -> Result<SteadySlice> {
    let traj = simulate_lugre(p, u, gamma, SWEEP_PERIODS, cfg).map_err(|e| e.at_gamma(gamma))?;
    steady_slice(&traj, u.period()).map_err(|e| e.at_gamma(gamma))
}

fn sup_against(samples: &[Sample], reference: impl Fn(f64) -> f64) -> f64 {
    samples.iter().fold(0.0f64, |m, s| m.max((s.y - reference(s.t)).abs()))
}

/// Simulates at every gamma (in parallel), discards the transient and
/// measures the sup distance of the steady period to the reference.
pub fn gamma_sweep(
    p: &ModelParams,
    u: &PeriodicSignal,
    gammas: &[f64],
    cfg: &IntegratorConfig,
    reference: SweepReference,
) -> Result<SweepReport> {
    check_gammas(gammas)?;
    cfg.validate()?;
    let period = u.period();
    let star = y_star_output(p, u);
    let circle = y_circle(p, u);
    let own = match reference {
        SweepReference::Simulation { gamma } => {
            check_gammas(&[gamma])?;
            Some(lugre_slice(p, u, gamma, cfg)?)
        }
        _ => None,
    };
    let rows: Vec<(f64, Option<usize>, usize)> = gammas
        .par_iter()
        .map(|&gamma| {
            let slice = lugre_slice(p, u, gamma, cfg)?;
            let d = match (&reference, &own) {
                (SweepReference::Star, _) => sup_against(&slice.samples, |t| star.eval(t)),
                (SweepReference::Circle, _) => sup_against(&slice.samples, |t| circle.eval(t)),
                (SweepReference::Simulation { .. }, Some(r)) => {
                    let shift = (slice.index as f64 - r.index as f64) * period;
                    compare_sampled(&slice.samples, &r.samples, shift)
                }
                _ => unreachable!(),
            };
            Ok((d, slice.steady, slice.index))
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport {
        gammas: gammas.to_vec(),
        distances: rows.iter().map(|r| r.0).collect(),
        periods_to_steady: rows.iter().map(|r| r.1).collect(),
        compared_period: rows.iter().map(|r| r.2).collect(),
        reference,
    })
}

/// Sup distance between two sampled periods, `b` shifted by `shift` in time.
/// Equal sample grids are compared pointwise, others by interpolating `b`.
fn compare_sampled(a: &[Sample], b: &[Sample], shift: f64) -> f64 {
    if a.len() == b.len() {
        return a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x.y - y.y).abs()));
    }
    a.iter().fold(0.0f64, |m, s| {
        let t = s.t - shift;
        let i = b.partition_point(|q| q.t <= t).clamp(1, b.len() - 1);
        let (l, r) = (&b[i - 1], &b[i]);
        let y = l.y + (r.y - l.y) * (t - l.t) / (r.t - l.t);
        m.max((s.y - y).abs())
    })
}

/// Limit loop of the cascade: the Dahl loop with `rho = Fc = 1` on the
/// unit-period sine.
pub fn example1_limit() -> Result<LimitOutput> {
    let dahl = DahlParams::new(1.0, 1.0, 0.0)?;
    Ok(y_circle(&dahl_to_lugre(&dahl), &PeriodicSignal::sine(1.0, 1.0)?))
}

/// Gamma sweep of the Dahl/low-pass cascade against its limit loop, compared
/// at equal input phase.
pub fn example1_sweep(gammas: &[f64], cfg: &IntegratorConfig) -> Result<SweepReport> {
    check_gammas(gammas)?;
    cfg.validate()?;
    let limit = example1_limit()?;
    let rows: Vec<(f64, Option<usize>, usize)> = gammas
        .par_iter()
        .map(|&gamma| {
            let traj = simulate_example1(gamma, SWEEP_PERIODS, cfg).map_err(|e| e.at_gamma(gamma))?;
            let slice = steady_slice(&traj, gamma).map_err(|e| e.at_gamma(gamma))?;
            let d = sup_against(&slice.samples, |t| limit.eval((t / gamma).rem_euclid(1.0)));
            Ok((d, slice.steady, slice.index))
        })
        .collect::<Result<_>>()?;
    Ok(SweepReport {
        gammas: gammas.to_vec(),
        distances: rows.iter().map(|r| r.0).collect(),
        periods_to_steady: rows.iter().map(|r| r.1).collect(),
        compared_period: rows.iter().map(|r| r.2).collect(),
        reference: SweepReference::Circle,
    })
}

/// Evaluation grid of one period: every breakpoint plus `per_piece - 1`
/// interior points per piece.
pub fn period_grid(u: &PeriodicSignal, per_piece: usize) -> Vec<f64> {
    let mut ts = Vec::with_capacity(u.pieces().len() * per_piece + 1);
    for pc in u.pieces() {
        for j in 0..per_piece {
            ts.push(pc.t_start + pc.duration() * j as f64 / per_piece as f64);
        }
    }
    ts.push(u.period());
    ts
}

/// Sup distance of each slice `t -> y*(t + kT)`, `k = 0..=slices`, to `y°`.
pub fn period_iteration(p: &ModelParams, u: &PeriodicSignal, slices: usize) -> Vec<(usize, f64)> {
    let star = y_star_output(p, u);
    let circle = y_circle(p, u);
    let grid = period_grid(u, 256);
    let period = u.period();
    (0..=slices)
        .map(|k| {
            let shift = k as f64 * period;
            let d = grid
                .iter()
                .fold(0.0f64, |m, &t| m.max((star.eval(t + shift) - circle.eval(t)).abs()));
            (k, d)
        })
        .collect()
}

/// The example setups of the reproduction runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExampleScenario {
    /// Dahl state through a unit low-pass filter, sine input.
    Example1,
    /// LuGre with Stribeck `g`, triangular input.
    Example2,
    /// Bimodal input with extrema 0, 0.2, 1, 1.5.
    Example3,
    /// `sigma0 = 6`, extrema 0, 0.5, 1, 1.5, plus the `sigma0 = 1` and
    /// `sigma0 = 1, umin2 = 0.2` variants.
    Example4,
    /// The `sigma0 = 1, umin2 = 0.2` variant on its own.
    Example4b,
}

impl ExampleScenario {
    pub const ALL: [ExampleScenario; 5] = [
        ExampleScenario::Example1,
        ExampleScenario::Example2,
        ExampleScenario::Example3,
        ExampleScenario::Example4,
        ExampleScenario::Example4b,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ExampleScenario::Example1 => "Example1",
            ExampleScenario::Example2 => "Example2",
            ExampleScenario::Example3 => "Example3",
            ExampleScenario::Example4 => "Example4",
            ExampleScenario::Example4b => "Example4b",
        }
    }

    pub fn valid_ids() -> String {
        Self::ALL.iter().map(|s| s.id()).collect::<Vec<_>>().join(", ")
    }

    /// Gammas simulated for the trajectory files and the sweep.
    pub fn gammas(self) -> [f64; 3] {
        match self {
            ExampleScenario::Example1 => [20.0, 200.0, 2000.0],
            _ => [1.0, 10.0, 100.0],
        }
    }

    /// LuGre parameters (the Dahl mapping for Example 1).
    pub fn params(self) -> ModelParams {
        match self {
            ExampleScenario::Example1 => dahl_to_lugre(&DahlParams::new(1.0, 1.0, 0.0).expect("valid")),
            ExampleScenario::Example4 => example_lugre(6.0),
            _ => example_lugre(1.0),
        }
    }

    /// Input signal; Example 1 uses the unit-period sine before scaling.
    pub fn input(self) -> PeriodicSignal {
        match self {
            ExampleScenario::Example1 => PeriodicSignal::sine(1.0, 1.0),
            ExampleScenario::Example2 => PeriodicSignal::piecewise_linear(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]),
            _ => build_bimodal(&self.bimodal().expect("bimodal")),
        }
        .expect("valid example input")
    }

    pub fn bimodal(self) -> Option<BimodalInputSpec> {
        let umin2 = match self {
            ExampleScenario::Example3 | ExampleScenario::Example4b => 0.2,
            ExampleScenario::Example4 => 0.5,
            _ => return None,
        };
        Some(BimodalInputSpec::linear(0.0, umin2, 1.0, 1.5).expect("valid"))
    }

    /// Labelled loop configurations written for this scenario.
    pub fn loop_variants(self) -> Vec<(&'static str, ModelParams, Option<NormalizedInput>)> {
        let n = |umin2: f64| Some(NormalizedInput::from_extrema(0.0, umin2, 1.0, 1.5).expect("valid"));
        match self {
            ExampleScenario::Example1 | ExampleScenario::Example2 => vec![("main", self.params(), None)],
            ExampleScenario::Example3 | ExampleScenario::Example4b => vec![("main", self.params(), n(0.2))],
            ExampleScenario::Example4 => vec![
                ("main", example_lugre(6.0), n(0.5)),
                ("sigma0_1", example_lugre(1.0), n(0.5)),
                ("sigma0_1_umin2_0.2", example_lugre(1.0), n(0.2)),
            ],
        }
    }
}

impl fmt::Display for ExampleScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ExampleScenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|sc| sc.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown scenario `{s}` (valid: {}, all)",
                    Self::valid_ids()
                ))
            })
    }
}

/// `sigma0`, `sigma1 = 1`, Stribeck `g` with `Fc = 1, Fs = 2, vs = 1,
/// beta = 1`, `f = 0`, `x0 = 0`.
pub fn example_lugre(sigma0: f64) -> ModelParams {
    ModelParams::new(
        sigma0,
        1.0,
        MacroDamping::stribeck(1.0, 2.0, 1.0, 1.0).expect("valid"),
        VelocityMap::Zero,
        0.0,
    )
    .expect("valid")
}

/// Periods of the transient written to the trajectory and `y*` files.
const TRAJECTORY_PERIODS: usize = 6;

fn gamma_label(g: f64) -> String {
    format!("{g}")
}

fn loop_for(p: &ModelParams, n: &Option<NormalizedInput>, u: &PeriodicSignal) -> LoopCurve {
    match n {
        Some(n) => loop_closed_form(p, n),
        None => loop_from_path(p, &u.normalized_path()),
    }
}

#[derive(Serialize)]
struct LabelledSummary {
    label: &'static str,
    sigma0: f64,
    g0: f64,
    extrema: Option<[f64; 4]>,
    #[serde(flatten)]
    summary: LoopSummary,
}

/// Writes every data file of one scenario into `dir` (assumed empty).
fn fill_scenario(s: ExampleScenario, dir: &Path) -> Result<()> {
    let cfg = IntegratorConfig::default();
    let p = s.params();
    let u = s.input();
    let gammas = s.gammas();

    let grid = period_grid(&u, 64);
    write_csv_file(
        &dir.join("input.csv"),
        &["t", "u", "udot"],
        grid.iter().map(|&t| vec![t, u.value(t), u.rate(t)]),
    )?;

    let trajectories: Vec<Trajectory> = gammas
        .par_iter()
        .map(|&g| match s {
            ExampleScenario::Example1 => simulate_example1(g, SWEEP_PERIODS, &cfg),
            _ => simulate_lugre(&p, &u, g, SWEEP_PERIODS, &cfg),
        }
        .map_err(|e| e.at_gamma(g)))
        .collect::<Result<_>>()?;
    for (g, traj) in gammas.iter().zip(&trajectories) {
        let mut f = BufWriter::new(File::create(dir.join(format!("traj_gamma{}.csv", gamma_label(*g))))?);
        traj.write_csv(&mut f)?;
        std::io::Write::flush(&mut f)?;
    }

    let period = u.period();
    let star = y_star_output(&p, &u);
    let star_times: Vec<f64> = (0..TRAJECTORY_PERIODS)
        .flat_map(|k| grid[..grid.len() - 1].iter().map(move |&t| t + k as f64 * period))
        .chain(std::iter::once(TRAJECTORY_PERIODS as f64 * period))
        .collect();
    write_csv_file(
        &dir.join("ystar.csv"),
        &["t", "u", "y"],
        star_times.iter().map(|&t| vec![t, u.value(t), star.eval(t)]),
    )?;
    let circle = y_circle(&p, &u);
    write_csv_file(
        &dir.join("ycircle.csv"),
        &["t", "u", "y"],
        grid.iter().map(|&t| vec![t, u.value(t), circle.eval(t)]),
    )?;

    let mut summaries = Vec::new();
    for (label, vp, n) in s.loop_variants() {
        let curve = loop_for(&vp, &n, &u);
        let suffix = if label == "main" { String::new() } else { format!("_{label}") };
        let mut f = BufWriter::new(File::create(dir.join(format!("loop{suffix}.csv")))?);
        curve.write_csv(&mut f)?;
        std::io::Write::flush(&mut f)?;
        if curve.rho5.is_some() {
            let minor = crate::analytic::extract_minor_loop(&curve)?;
            let mut f = BufWriter::new(File::create(dir.join(format!("minor_loop{suffix}.csv")))?);
            minor.write_csv(&mut f)?;
            std::io::Write::flush(&mut f)?;
        }
        summaries.push(LabelledSummary {
            label,
            sigma0: vp.sigma0(),
            g0: vp.g().at_rest(),
            extrema: n.as_ref().map(|n| [n.values[0], n.values[2], n.values[1], n.values[3]]),
            summary: loop_summary(&curve)?,
        });
    }
    write_json_file(&dir.join("loop.json"), &summaries)?;

    let sweep = match s {
        ExampleScenario::Example1 => example1_sweep(&gammas, &cfg)?,
        _ => gamma_sweep(&p, &u, &gammas, &cfg, SweepReference::Star)?,
    };
    write_json_file(&dir.join("sweep.json"), &sweep)?;
    Ok(())
}

/// Writes the data files of `s` to `<outdir>/<scenario>/`. The directory is
/// assembled under a temporary name and only appears once complete.
pub fn run_example(s: ExampleScenario, outdir: &Path) -> Result<Vec<PathBuf>> {
    let dest = outdir.join(s.id());
    write_dir_atomically(&dest, |tmp| fill_scenario(s, tmp))?;
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dest)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.sort();
    Ok(files)
}

/// Runs several scenarios in parallel; the inventory keeps the given order.
pub fn run_examples(scenarios: &[ExampleScenario], outdir: &Path) -> Result<Vec<(ExampleScenario, Vec<PathBuf>)>> {
    scenarios
        .par_iter()
        .map(|&s| run_example(s, outdir).map(|f| (s, f)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_reference_is_zero() {
        let s = ExampleScenario::Example2;
        let r = gamma_sweep(
            &s.params(),
            &s.input(),
            &[7.0],
            &IntegratorConfig::default(),
            SweepReference::Simulation { gamma: 7.0 },
        )
        .unwrap();
        assert_eq!(r.distances, vec![0.0]);
    }

    #[test]
    fn bad_gammas_are_rejected() {
        let s = ExampleScenario::Example2;
        let cfg = IntegratorConfig::default();
        assert!(gamma_sweep(&s.params(), &s.input(), &[], &cfg, SweepReference::Star).is_err());
        assert!(gamma_sweep(&s.params(), &s.input(), &[1.0, 0.0], &cfg, SweepReference::Star).is_err());
    }

    #[test]
    fn period_iteration_on_the_cycle_is_flat() {
        let s = ExampleScenario::Example3;
        let (p, u) = (s.params(), s.input());
        let y0 = y_circle(&p, &u).initial_value();
        let x0 = y0 / p.sigma0();
        let p = p.with_x0(x0).unwrap();
        for (_, d) in period_iteration(&p, &u, PERIOD_SLICES) {
            assert!(d < 1e-13, "{d}");
        }
    }

    #[test]
    fn scenario_ids_round_trip() {
        for s in ExampleScenario::ALL {
            assert_eq!(s.id().parse::<ExampleScenario>().unwrap(), s);
        }
        let err = "Example9".parse::<ExampleScenario>().unwrap_err().to_string();
        assert!(err.contains("Example4b"));
    }
}
