//! Periodic piecewise-monotone inputs.
//!
//! A [`PeriodicSignal`] is a chain of pieces, each strictly monotone (or an
//! explicit hold), glued continuously and repeated with period `T`. The
//! variation function `rho_u(t) = int_0^t |u'|` of such a signal is exact:
//! on a monotone piece it is the absolute increment of `u`.
//!
//! A bimodal input (two maxima and two minima per period) is described by a
//! [`BimodalInputSpec`]; its normalized input `psi_u` is the slope `+-1`
//! sawtooth with the same extrema, parametrized by variation instead of time,
//! so that `psi_u(rho_u(t)) = u(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;

/// Shape of a piece on its local parameter `s in [0, 1]`.
///
/// `h(0) = 0`, `h(1) = 1` and `h` is strictly increasing, so the piece value
/// is `u_start + (u_end - u_start) h(s)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Linear,
    /// Tabulated profile, interpolated with a monotone cubic.
    Table(MonotoneCubic),
    /// Normalized arc of `sin(phi)` for `phi` between the two phases; the arc
    /// must not cross an extremum of the sine.
    SineArc { phase_start: f64, phase_end: f64 },
    /// Constant value (`u_start == u_end`); not monotone.
    Hold,
}

impl Profile {
    fn h(&self, s: f64) -> f64 {
        match self {
            Profile::Linear => s,
            Profile::Table(t) => t.eval(s),
            Profile::SineArc {
                phase_start,
                phase_end,
            } => {
                let a = phase_start.sin();
                let b = phase_end.sin();
                ((phase_start + (phase_end - phase_start) * s).sin() - a) / (b - a)
            }
            Profile::Hold => 0.0,
        }
    }

    fn dh(&self, s: f64) -> f64 {
        match self {
            Profile::Linear => 1.0,
            Profile::Table(t) => t.derivative(s),
            Profile::SineArc {
                phase_start,
                phase_end,
            } => {
                let a = phase_start.sin();
                let b = phase_end.sin();
                let dphi = phase_end - phase_start;
                (phase_start + dphi * s).cos() * dphi / (b - a)
            }
            Profile::Hold => 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Profile::Linear | Profile::Hold => Ok(()),
            Profile::Table(t) => {
                let (xs, ys) = t.nodes();
                if xs[0] != 0.0 || *xs.last().unwrap() != 1.0 || ys[0] != 0.0 || *ys.last().unwrap() != 1.0 {
                    return Err(Error::InvalidSignal(
                        "tabulated profile must run from (0, 0) to (1, 1)".into(),
                    ));
                }
                if ys.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidSignal(
                        "tabulated profile must be strictly increasing".into(),
                    ));
                }
                // the interpolant itself must stay strictly increasing
                let n = 64 * (xs.len() - 1);
                let mut prev = 0.0;
                for k in 1..=n {
                    let v = t.eval(k as f64 / n as f64);
                    if v <= prev {
                        return Err(Error::InvalidSignal(
                            "interpolated profile is not strictly increasing".into(),
                        ));
                    }
                    prev = v;
                }
                Ok(())
            }
            Profile::SineArc {
                phase_start,
                phase_end,
            } => {
                // cos(phi) must keep one sign strictly inside the arc
                let n = 64;
                let dphi = phase_end - phase_start;
                let signs: Vec<f64> = (1..n)
                    .map(|k| (phase_start + dphi * k as f64 / n as f64).cos().signum())
                    .collect();
                let (a, b) = (phase_start.sin(), phase_end.sin());
                if dphi == 0.0 || a == b || signs.iter().any(|&s| s != signs[0]) {
                    return Err(Error::InvalidSignal(
                        "sine arc must lie between two consecutive extrema".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// One monotone piece on `[t_start, t_end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub t_start: f64,
    pub t_end: f64,
    pub u_start: f64,
    pub u_end: f64,
    pub profile: Profile,
}

impl Piece {
    pub fn linear(t_start: f64, t_end: f64, u_start: f64, u_end: f64) -> Self {
        let profile = if u_start == u_end { Profile::Hold } else { Profile::Linear };
        Self {
            t_start,
            t_end,
            u_start,
            u_end,
            profile,
        }
    }

    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    /// `+1` rising, `-1` falling, `0` hold.
    pub fn direction(&self) -> f64 {
        if self.u_end > self.u_start {
            1.0
        } else if self.u_end < self.u_start {
            -1.0
        } else {
            0.0
        }
    }

    /// Total variation across the piece.
    pub fn increment(&self) -> f64 {
        (self.u_end - self.u_start).abs()
    }

    fn local(&self, t: f64) -> f64 {
        ((t - self.t_start) / self.duration()).clamp(0.0, 1.0)
    }

    /// Value at absolute time `t` in `[t_start, t_end]`.
    pub fn value(&self, t: f64) -> f64 {
        let s = self.local(t);
        if s == 1.0 {
            return self.u_end;
        }
        self.u_start + (self.u_end - self.u_start) * self.profile.h(s)
    }

    pub fn rate(&self, t: f64) -> f64 {
        (self.u_end - self.u_start) * self.profile.dh(self.local(t)) / self.duration()
    }
}

/// A `T`-periodic, continuous, piecewise-monotone input.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSignal {
    period: f64,
    pieces: Vec<Piece>,
    // variation accumulated before each piece, plus the total at the end
    rho_starts: Vec<f64>,
}

impl PeriodicSignal {
    pub fn from_pieces(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidSignal("signal needs at least one piece".into()));
        }
        if pieces[0].t_start != 0.0 {
            return Err(Error::InvalidSignal("first piece must start at t = 0".into()));
        }
        for (i, p) in pieces.iter().enumerate() {
            if !(p.t_end > p.t_start) || !p.t_end.is_finite() {
                return Err(Error::InvalidSignal(format!("piece {i} has non-positive duration")));
            }
            if !(p.u_start.is_finite() && p.u_end.is_finite()) {
                return Err(Error::InvalidSignal(format!("piece {i} has non-finite values")));
            }
            match p.profile {
                Profile::Hold if p.u_start != p.u_end => {
                    return Err(Error::InvalidSignal(format!("hold piece {i} changes value")));
                }
                Profile::Hold => {}
                _ if p.u_start == p.u_end => {
                    return Err(Error::InvalidSignal(format!(
                        "piece {i} is not strictly monotone"
                    )));
                }
                _ => {}
            }
            p.profile.validate()?;
        }
        for (i, w) in pieces.windows(2).enumerate() {
            if w[0].t_end != w[1].t_start {
                return Err(Error::InvalidSignal(format!(
                    "pieces {i} and {} are not contiguous in time",
                    i + 1
                )));
            }
            if w[0].u_end != w[1].u_start {
                return Err(Error::InvalidSignal(format!(
                    "signal is discontinuous between pieces {i} and {}",
                    i + 1
                )));
            }
        }
        let first = &pieces[0];
        let last = pieces.last().unwrap();
        if last.u_end != first.u_start {
            return Err(Error::InvalidSignal("u(T) must equal u(0)".into()));
        }
        let mut rho_starts = Vec::with_capacity(pieces.len() + 1);
        let mut acc = 0.0;
        rho_starts.push(acc);
        for p in &pieces {
            acc += p.increment();
            rho_starts.push(acc);
        }
        Ok(Self {
            period: last.t_end,
            pieces,
            rho_starts,
        })
    }

    /// Piecewise-linear signal through `(t, u)` knots; the first knot must be
    /// at `t = 0` and the last one closes the period with the same value.
    pub fn piecewise_linear(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidSignal("need at least two knots".into()));
        }
        let pieces = knots
            .windows(2)
            .map(|w| Piece::linear(w[0].0, w[1].0, w[0].1, w[1].1))
            .collect();
        Self::from_pieces(pieces)
    }

    /// `u(t) = amplitude * sin(2 pi t / period)`, split at its extrema.
    pub fn sine(amplitude: f64, period: f64) -> Result<Self> {
        use std::f64::consts::PI;
        if !(amplitude > 0.0 && period > 0.0) {
            return Err(Error::InvalidSignal("sine needs positive amplitude and period".into()));
        }
        let arc = |t0: f64, t1: f64, phi0: f64, phi1: f64, u0: f64, u1: f64| Piece {
            t_start: t0,
            t_end: t1,
            u_start: u0,
            u_end: u1,
            profile: Profile::SineArc {
                phase_start: phi0,
                phase_end: phi1,
            },
        };
        Self::from_pieces(vec![
            arc(0.0, 0.25 * period, 0.0, 0.5 * PI, 0.0, amplitude),
            arc(0.25 * period, 0.75 * period, 0.5 * PI, 1.5 * PI, amplitude, -amplitude),
            arc(0.75 * period, period, 1.5 * PI, 2.0 * PI, -amplitude, 0.0),
        ])
    }

    /// Constant signal; it has no monotone piece and zero variation.
    pub fn constant(value: f64, period: f64) -> Result<Self> {
        Self::piecewise_linear(&[(0.0, value), (period, value)])
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Variation over one period, `rho_u(T)`.
    pub fn variation_per_period(&self) -> f64 {
        *self.rho_starts.last().unwrap()
    }

    /// Variation accumulated before piece `i` (within one period).
    pub fn variation_before(&self, i: usize) -> f64 {
        self.rho_starts[i]
    }

    /// Splits `t >= 0` into (period index, piece index, time within period).
    /// At a breakpoint the piece starting there is returned.
    pub fn locate(&self, t: f64) -> (u64, usize, f64) {
        let mut k = (t / self.period).floor();
        let mut local = t - k * self.period;
        if local >= self.period {
            k += 1.0;
            local -= self.period;
        }
        if local < 0.0 {
            local = 0.0;
        }
        let idx = self
            .pieces
            .partition_point(|p| p.t_end <= local)
            .min(self.pieces.len() - 1);
        (k.max(0.0) as u64, idx, local)
    }

    pub fn value(&self, t: f64) -> f64 {
        let (_, i, local) = self.locate(t);
        self.pieces[i].value(local)
    }

    /// `u'(t)`, right-continuous at breakpoints.
    pub fn rate(&self, t: f64) -> f64 {
        let (_, i, local) = self.locate(t);
        self.pieces[i].rate(local)
    }

    /// Every breakpoint time in `[0, T]`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self.pieces.iter().map(|p| p.t_start).collect();
        b.push(self.period);
        b
    }

    /// Normalized path: the `+-1` slope signal `psi_u` over one period.
    pub fn normalized_path(&self) -> NormalizedPath {
        let mut rho = vec![0.0];
        let mut values = vec![self.pieces[0].u_start];
        for (i, p) in self.pieces.iter().enumerate() {
            if p.direction() == 0.0 {
                continue;
            }
            rho.push(self.rho_starts[i + 1]);
            values.push(p.u_end);
        }
        NormalizedPath { rho, values }
    }
}

/// `rho_u(t) = int_0^t |u'(tau)| d tau`.
pub fn variation(u: &PeriodicSignal, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let (k, i, local) = u.locate(t);
    let piece = &u.pieces[i];
    let partial = (piece.value(local) - piece.u_start).abs();
    k as f64 * u.variation_per_period() + u.rho_starts[i] + partial
}

/// The slowed-down signal `t -> u(t / gamma)`, with period `gamma T`.
pub fn time_scale(u: &PeriodicSignal, gamma: f64) -> Result<PeriodicSignal> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidArgument("gamma must be positive".into()));
    }
    if gamma == 1.0 {
        return Ok(u.clone());
    }
    let pieces = u
        .pieces
        .iter()
        .map(|p| Piece {
            t_start: p.t_start * gamma,
            t_end: p.t_end * gamma,
            ..p.clone()
        })
        .collect();
    PeriodicSignal::from_pieces(pieces)
}

/// General normalized input: piecewise linear with slopes `+-1`, knots at the
/// cumulative variation of each monotone piece.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizedPath {
    /// `0 = rho_0 < rho_1 < ... < rho_N`.
    pub rho: Vec<f64>,
    /// `psi` at each knot; first and last coincide.
    pub values: Vec<f64>,
}

impl NormalizedPath {
    pub fn period(&self) -> f64 {
        *self.rho.last().unwrap()
    }

    pub fn segments(&self) -> usize {
        self.rho.len() - 1
    }

    /// `+1` or `-1` for segment `i`.
    pub fn direction(&self, i: usize) -> f64 {
        if self.values[i + 1] > self.values[i] {
            1.0
        } else {
            -1.0
        }
    }

    /// Segment containing `varrho` within one period (the one starting there
    /// at a knot).
    pub fn segment_at(&self, varrho: f64) -> usize {
        self.rho[1..]
            .partition_point(|&r| r <= varrho)
            .min(self.segments() - 1)
    }

    /// `psi_u(varrho)` with `rho_N`-periodic extension.
    pub fn psi(&self, varrho: f64) -> f64 {
        let r = wrap(varrho, self.period());
        let i = self.segment_at(r);
        self.values[i] + self.direction(i) * (r - self.rho[i])
    }
}

fn wrap(x: f64, period: f64) -> f64 {
    let r = x.rem_euclid(period);
    if r >= period {
        0.0
    } else {
        r
    }
}

/// Shape of the four monotone pieces of a bimodal input.
#[derive(Debug, Clone, PartialEq)]
pub enum BimodalShape {
    PiecewiseLinear,
    /// Per-piece strictly increasing profiles `h` on `[0, 1]`, given as values
    /// on a uniform grid that starts at 0 and ends at 1.
    SmoothMonotone([Vec<f64>; 4]),
}

/// Extrema and switching times of a bimodal periodic input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBimodal", into = "RawBimodal")]
pub struct BimodalInputSpec {
    umin1: f64,
    umin2: f64,
    umax1: f64,
    umax2: f64,
    times: [f64; 4],
    shape: BimodalShape,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBimodal {
    umin1: f64,
    umin2: f64,
    umax1: f64,
    umax2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t3: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t4: Option<f64>,
    #[serde(default = "default_shape")]
    shape: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    profiles: Option<Vec<Vec<f64>>>,
}

fn default_shape() -> String {
    "linear".into()
}

impl TryFrom<RawBimodal> for BimodalInputSpec {
    type Error = Error;

    fn try_from(r: RawBimodal) -> Result<Self> {
        let times = match (r.t1, r.t2, r.t3, r.t4) {
            (None, None, None, None) => None,
            (Some(a), Some(b), Some(c), Some(d)) => Some([a, b, c, d]),
            _ => {
                return Err(Error::Config(
                    "switching times t1..t4 must be given all together or not at all".into(),
                ))
            }
        };
        let shape = match (r.shape.as_str(), r.profiles) {
            ("linear", None) => BimodalShape::PiecewiseLinear,
            ("linear", Some(_)) => {
                return Err(Error::Config("profiles are only allowed with shape = \"smooth\"".into()))
            }
            ("smooth", Some(p)) => {
                let arr: [Vec<f64>; 4] = p
                    .try_into()
                    .map_err(|_| Error::Config("smooth shape needs exactly four profiles".into()))?;
                BimodalShape::SmoothMonotone(arr)
            }
            ("smooth", None) => {
                return Err(Error::Config("smooth shape needs a `profiles` key".into()))
            }
            (other, _) => {
                return Err(Error::Config(format!(
                    "unknown shape `{other}` (expected \"linear\" or \"smooth\")"
                )))
            }
        };
        BimodalInputSpec::new(r.umin1, r.umin2, r.umax1, r.umax2, times, shape)
    }
}

impl From<BimodalInputSpec> for RawBimodal {
    fn from(s: BimodalInputSpec) -> Self {
        let (shape, profiles) = match s.shape {
            BimodalShape::PiecewiseLinear => ("linear".to_string(), None),
            BimodalShape::SmoothMonotone(p) => ("smooth".to_string(), Some(p.to_vec())),
        };
        RawBimodal {
            umin1: s.umin1,
            umin2: s.umin2,
            umax1: s.umax1,
            umax2: s.umax2,
            t1: Some(s.times[0]),
            t2: Some(s.times[1]),
            t3: Some(s.times[2]),
            t4: Some(s.times[3]),
            shape,
            profiles,
        }
    }
}

impl BimodalInputSpec {
    /// Validates the extrema ordering and switching times. Without explicit
    /// times every piece runs at unit speed, so the signal coincides with its
    /// normalized input.
    pub fn new(
        umin1: f64,
        umin2: f64,
        umax1: f64,
        umax2: f64,
        times: Option<[f64; 4]>,
        shape: BimodalShape,
    ) -> Result<Self> {
        let vals = [umin1, umin2, umax1, umax2];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal("extrema must be finite".into()));
        }
        if !(umin1 <= umin2) {
            return Err(Error::InvalidSignal(format!(
                "need umin1 <= umin2, got {umin1} > {umin2}"
            )));
        }
        if !(umin2 < umax1) {
            return Err(Error::InvalidSignal(format!(
                "need umin2 < umax1, got {umin2} >= {umax1}"
            )));
        }
        if !(umax1 <= umax2) {
            return Err(Error::InvalidSignal(format!(
                "need umax1 <= umax2, got {umax1} > {umax2}"
            )));
        }
        if umin1 == umin2 && umax1 == umax2 {
            return Err(Error::InvalidSignal(
                "degenerate bimodal input: need umin1 < umin2 or umax1 < umax2".into(),
            ));
        }
        let times = match times {
            Some(t) => t,
            None => {
                let n = NormalizedInput::from_extrema_unchecked(umin1, umin2, umax1, umax2);
                [n.rho[1], n.rho[2], n.rho[3], n.rho[4]]
            }
        };
        if times.iter().any(|t| !t.is_finite()) || !(0.0 < times[0] && times[0] < times[1] && times[1] < times[2] && times[2] < times[3]) {
            return Err(Error::InvalidSignal(format!(
                "need 0 < t1 < t2 < t3 < t4, got {times:?}"
            )));
        }
        if let BimodalShape::SmoothMonotone(profiles) = &shape {
            for p in profiles {
                profile_from_values(p)?;
            }
        }
        Ok(Self {
            umin1,
            umin2,
            umax1,
            umax2,
            times,
            shape,
        })
    }

    /// Piecewise-linear, unit-speed bimodal input.
    pub fn linear(umin1: f64, umin2: f64, umax1: f64, umax2: f64) -> Result<Self> {
        Self::new(umin1, umin2, umax1, umax2, None, BimodalShape::PiecewiseLinear)
    }

    pub fn extrema(&self) -> (f64, f64, f64, f64) {
        (self.umin1, self.umin2, self.umax1, self.umax2)
    }

    pub fn times(&self) -> [f64; 4] {
        self.times
    }

    pub fn shape(&self) -> &BimodalShape {
        &self.shape
    }

    pub fn with_times(self, times: [f64; 4]) -> Result<Self> {
        Self::new(self.umin1, self.umin2, self.umax1, self.umax2, Some(times), self.shape)
    }

    pub fn with_shape(self, shape: BimodalShape) -> Result<Self> {
        Self::new(self.umin1, self.umin2, self.umax1, self.umax2, Some(self.times), shape)
    }
}

fn profile_from_values(values: &[f64]) -> Result<Profile> {
    if values.len() < 2 {
        return Err(Error::InvalidSignal("profile needs at least two values".into()));
    }
    let n = values.len() - 1;
    let xs = (0..=n).map(|k| if k == n { 1.0 } else { k as f64 / n as f64 }).collect();
    let table = MonotoneCubic::new(xs, values.to_vec())?;
    let profile = if n == 1 { Profile::Linear } else { Profile::Table(table) };
    if n == 1 && (values[0] != 0.0 || values[1] != 1.0) {
        return Err(Error::InvalidSignal("profile must run from 0 to 1".into()));
    }
    profile.validate()?;
    Ok(profile)
}

/// Builds the periodic signal `u` with `u(0) = umin1`, `u(t1) = umax1`,
/// `u(t2) = umin2`, `u(t3) = umax2`, `u(t4) = u(0)`.
pub fn build_bimodal(spec: &BimodalInputSpec) -> Result<PeriodicSignal> {
    let [t1, t2, t3, t4] = spec.times;
    let knots = [
        (0.0, t1, spec.umin1, spec.umax1),
        (t1, t2, spec.umax1, spec.umin2),
        (t2, t3, spec.umin2, spec.umax2),
        (t3, t4, spec.umax2, spec.umin1),
    ];
    let pieces = knots
        .iter()
        .enumerate()
        .map(|(i, &(ts, te, us, ue))| {
            let profile = match &spec.shape {
                BimodalShape::PiecewiseLinear => Ok(Profile::Linear),
                BimodalShape::SmoothMonotone(p) => profile_from_values(&p[i]),
            }?;
            Ok(Piece {
                t_start: ts,
                t_end: te,
                u_start: us,
                u_end: ue,
                profile,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PeriodicSignal::from_pieces(pieces)
}

/// Normalized input of a bimodal signal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizedInput {
    /// `rho_0 = 0 < rho_1 < rho_2 < rho_3 < rho_4`.
    pub rho: [f64; 5],
    /// `psi` at the breakpoints: `umin1, umax1, umin2, umax2, umin1`.
    pub values: [f64; 5],
    /// First `varrho` in `(rho_2, rho_3]` where `psi = umax1`.
    pub rho5: f64,
}

impl NormalizedInput {
    pub fn from_extrema(umin1: f64, umin2: f64, umax1: f64, umax2: f64) -> Result<Self> {
        BimodalInputSpec::linear(umin1, umin2, umax1, umax2)?;
        Ok(Self::from_extrema_unchecked(umin1, umin2, umax1, umax2))
    }

    fn from_extrema_unchecked(umin1: f64, umin2: f64, umax1: f64, umax2: f64) -> Self {
        // each breakpoint adds the increment of one monotone piece
        let r1 = umax1 - umin1;
        let r2 = r1 + (umax1 - umin2);
        let r3 = r2 + (umax2 - umin2);
        let r4 = r3 + (umax2 - umin1);
        let r5 = r2 + (umax1 - umin2);
        Self {
            rho: [0.0, r1, r2, r3, r4],
            values: [umin1, umax1, umin2, umax2, umin1],
            rho5: r5,
        }
    }

    pub fn from_spec(spec: &BimodalInputSpec) -> Self {
        Self::from_extrema_unchecked(spec.umin1, spec.umin2, spec.umax1, spec.umax2)
    }

    pub fn period(&self) -> f64 {
        self.rho[4]
    }

    /// `true` when `rho5 = rho3`, i.e. `umax1 = umax2`.
    pub fn minor_loop_touches_major(&self) -> bool {
        self.rho5 == self.rho[3]
    }

    pub fn direction(&self, i: usize) -> f64 {
        if i.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Segment index in `0..4` for `varrho` in one period.
    pub fn segment_at(&self, varrho: f64) -> usize {
        self.rho[1..].partition_point(|&r| r <= varrho).min(3)
    }

    /// `psi_u(varrho)`, `rho_4`-periodic.
    pub fn psi(&self, varrho: f64) -> f64 {
        let r = wrap(varrho, self.period());
        let i = self.segment_at(r);
        self.values[i] + self.direction(i) * (r - self.rho[i])
    }

    /// Right derivative of `psi_u`; always `+1` or `-1`.
    pub fn psi_slope(&self, varrho: f64) -> f64 {
        self.direction(self.segment_at(wrap(varrho, self.period())))
    }

    pub fn to_path(&self) -> NormalizedPath {
        NormalizedPath {
            rho: self.rho.to_vec(),
            values: self.values.to_vec(),
        }
    }
}

/// Normalized input of a signal built from a bimodal spec.
pub fn normalize(u: &PeriodicSignal) -> Result<NormalizedInput> {
    let pieces: Vec<&Piece> = u.pieces.iter().filter(|p| p.direction() != 0.0).collect();
    if pieces.len() != 4 {
        return Err(Error::InvalidSignal(format!(
            "bimodal signal must have four monotone pieces, found {}",
            pieces.len()
        )));
    }
    let dirs: Vec<f64> = pieces.iter().map(|p| p.direction()).collect();
    if dirs != [1.0, -1.0, 1.0, -1.0] {
        return Err(Error::InvalidSignal(
            "bimodal signal must rise, fall, rise, fall".into(),
        ));
    }
    let umin1 = pieces[0].u_start;
    let umax1 = pieces[0].u_end;
    let umin2 = pieces[1].u_end;
    let umax2 = pieces[2].u_end;
    NormalizedInput::from_extrema(umin1, umin2, umax1, umax2)
}
