//! Survival curves, evaluation grids and confidence bands.
//!
//! A [`SurvivalCurve`] is a survival function tabulated on a grid that
//! starts at zero. Exact curves carry the absolute tolerance their values
//! were computed to; empirical curves carry the replication count and a
//! simultaneous Dvoretzky-Kiefer-Wolfowitz half-width at confidence
//! `1 - delta`. Order comparisons read those widths back to decide what
//! counts as a certified difference.

use crate::dist::LifetimeDistribution;
use crate::error::{Error, Result};

/// Number of strictly positive points in a default grid.
pub const DEFAULT_GRID_POINTS: usize = 256;

/// Upper quantile level anchoring default grids.
pub const DEFAULT_GRID_QUANTILE: f64 = 0.999;

/// Provenance of a curve's values, with the matching uncertainty width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    /// Values from quadrature or a closed form, accurate to `tolerance`.
    Exact { tolerance: f64 },
    /// Values from a Monte Carlo ensemble; `half_width` is the simultaneous
    /// DKW band half-width at confidence `1 - confidence_delta`.
    Empirical { replications: usize, confidence_delta: f64, half_width: f64 },
}

impl CurveKind {
    pub fn half_width(&self) -> f64 {
        match *self {
            CurveKind::Exact { tolerance } => tolerance,
            CurveKind::Empirical { half_width, .. } => half_width,
        }
    }

    pub fn is_empirical(&self) -> bool {
        matches!(self, CurveKind::Empirical { .. })
    }
}

/// A survival function tabulated on a fixed grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalCurve {
    grid: Vec<f64>,
    values: Vec<f64>,
    kind: CurveKind,
}

impl SurvivalCurve {
    /// Validates the curve invariants: a strictly increasing grid starting
    /// at zero, values in `[0, 1]` that start at one and never increase by
    /// more than the curve's uncertainty width.
    pub fn new(grid: Vec<f64>, values: Vec<f64>, kind: CurveKind) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::Domain(format!(
                "grid has {} points but {} values were supplied",
                grid.len(),
                values.len()
            )));
        }
        if grid.is_empty() || grid[0] != 0.0 {
            return Err(Error::Domain("curve grids must start at t = 0".into()));
        }
        for w in grid.windows(2) {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(Error::Domain(format!(
                    "curve grid must increase strictly, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let slack = kind.half_width().max(1e-12);
        for (i, &v) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("curve value {v} at index {i} outside [0, 1]")));
            }
        }
        if (values[0] - 1.0).abs() > slack {
            return Err(Error::Domain(format!(
                "curve must start at survival 1, got {}",
                values[0]
            )));
        }
        for (i, w) in values.windows(2).enumerate() {
            if w[1] > w[0] + slack {
                return Err(Error::Domain(format!(
                    "curve increases beyond its uncertainty at index {i}: {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { grid, values, kind })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty grids
    }

    /// Curve value at an arbitrary time inside the grid range, by linear
    /// interpolation (survival functions are monotone, so interpolation
    /// stays monotone).
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let last = *self.grid.last().expect("curves are nonempty");
        if !(t >= 0.0 && t <= last) {
            return Err(Error::Domain(format!("time {t} outside the curve range [0, {last}]")));
        }
        match self.grid.binary_search_by(|g| g.total_cmp(&t)) {
            Ok(i) => Ok(self.values[i]),
            Err(i) => {
                let (t0, t1) = (self.grid[i - 1], self.grid[i]);
                let (v0, v1) = (self.values[i - 1], self.values[i]);
                Ok(v0 + (v1 - v0) * (t - t0) / (t1 - t0))
            }
        }
    }

    /// Re-tabulates the curve on another grid that must lie inside this
    /// curve's range.
    pub fn resample(&self, grid: &[f64]) -> Result<Self> {
        let last = *self.grid.last().expect("curves are nonempty");
        if grid.last().is_some_and(|&g| g > last) {
            return Err(Error::IncompatibleGrids(format!(
                "target grid reaches {} but the curve ends at {last}",
                grid.last().unwrap()
            )));
        }
        let values = grid.iter().map(|&t| self.value_at(t)).collect::<Result<Vec<_>>>()?;
        Self::new(grid.to_vec(), values, self.kind)
    }
}

/// Simultaneous DKW band half-width `sqrt(ln(2/delta) / (2 m))` for an
/// empirical distribution from `m` replications at confidence `1 - delta`.
pub fn dkw_half_width(replications: usize, delta: f64) -> Result<f64> {
    if replications == 0 {
        return Err(Error::Domain("DKW band needs at least one replication".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("confidence delta {delta} outside (0, 1)")));
    }
    Ok(((2.0 / delta).ln() / (2.0 * replications as f64)).sqrt())
}

/// Geometric grid of `points` times on `(0, t_max]`, prepended with zero.
///
/// The lowest positive point is `t_lo` clamped into `[t_max * 1e-6, t_max)`.
pub fn log_grid(t_lo: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::Domain(format!("grid upper end {t_max} must be positive")));
    }
    if points < 2 {
        return Err(Error::Domain("grids need at least two positive points".into()));
    }
    let lo = t_lo.clamp(t_max * 1e-6, t_max * 0.5);
    let ratio = (t_max / lo).ln();
    let mut grid = Vec::with_capacity(points + 1);
    grid.push(0.0);
    for j in 0..points {
        let frac = j as f64 / (points - 1) as f64;
        grid.push(lo * (ratio * frac).exp());
    }
    // guard against rounding collisions at the top end
    let n = grid.len();
    grid[n - 1] = t_max;
    for i in 1..n {
        if grid[i] <= grid[i - 1] {
            grid[i] = grid[i - 1].next_up();
        }
    }
    Ok(grid)
}

/// Default evaluation grid for a distribution: zero plus `points` log-spaced
/// times ending at its `0.999` quantile.
pub fn default_grid(d: &LifetimeDistribution, points: usize) -> Result<Vec<f64>> {
    let t_max = d.quantile(DEFAULT_GRID_QUANTILE)?;
    let t_lo = d.quantile(1.0 - DEFAULT_GRID_QUANTILE)?;
    log_grid(t_lo, t_max, points)
}

/// Family of empirical survival curves, one per arrival index starting at 1.
#[derive(Debug, Clone)]
pub struct EmpiricalCurveSet {
    curves: Vec<SurvivalCurve>,
}

impl EmpiricalCurveSet {
    pub fn new(curves: Vec<SurvivalCurve>) -> Result<Self> {
        if curves.is_empty() {
            return Err(Error::Domain("a curve set needs at least one curve".into()));
        }
        for (i, c) in curves.iter().enumerate() {
            match c.kind() {
                CurveKind::Empirical { half_width, .. } if *half_width > 0.0 => {}
                CurveKind::Empirical { half_width, .. } => {
                    return Err(Error::Domain(format!(
                        "curve {i} has non-positive band half-width {half_width}"
                    )))
                }
                CurveKind::Exact { .. } => {
                    return Err(Error::Domain(format!("curve {i} is not empirical")))
                }
            }
        }
        let grid = curves[0].grid();
        if curves.iter().any(|c| c.grid() != grid) {
            return Err(Error::IncompatibleGrids(
                "curves in a set must share one grid".into(),
            ));
        }
        Ok(Self { curves })
    }

    /// Curve for arrival `n` (1-based).
    pub fn curve(&self, n: usize) -> Result<&SurvivalCurve> {
        if n == 0 || n > self.curves.len() {
            return Err(Error::Truncation { requested: n, available: self.curves.len() });
        }
        Ok(&self.curves[n - 1])
    }

    pub fn curves(&self) -> &[SurvivalCurve] {
        &self.curves
    }

    pub fn max_arrival(&self) -> usize {
        self.curves.len()
    }
}
