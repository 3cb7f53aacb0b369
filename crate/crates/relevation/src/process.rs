//! Seeded path simulators for the five repair policies and the
//! counting-process views of their arrival times.
//!
//! Every replication draws its uniforms from a counter-based stream keyed
//! by `(master seed, replication index, draw index)`, so an ensemble is
//! reproducible bit for bit no matter how replications are scheduled
//! across threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{CurveKind, EmpiricalCurveSet, SurvivalCurve};
use crate::dist::LifetimeDistribution;
use crate::error::{Error, Result};
use crate::rng::{CounterStream, UniformSource};
use crate::seq::DistributionSequence;

/// Cap on repair cycles for count-based age-replacement simulation, so a
/// configuration whose failures are (nearly) impossible errors out instead
/// of spinning forever.
const MAX_AGE_REPLACEMENT_CYCLES: u64 = 1_000_000;

/// A repair policy together with everything needed to simulate it.
#[derive(Debug, Clone)]
pub enum ProcessSpec {
    /// Failed unit repaired by a same-aged unit from the next sequence entry.
    Relevation(DistributionSequence),
    /// Failed unit replaced by a brand-new unit; arrivals are partial sums.
    Renewal(DistributionSequence),
    /// Relevation with identically distributed units.
    MinimalRepair(LifetimeDistribution),
    /// Pure birth chain whose `n`-th arrival has hazard
    /// `(n + offset) * r(t)`, with `r` the base hazard. The default offset
    /// is 1.
    Yule { base: LifetimeDistribution, offset: f64 },
    /// Unit replaced at failure or at age `interval`, whichever comes
    /// first; only failures are recorded as arrivals.
    AgeReplacement { dist: LifetimeDistribution, interval: f64 },
}

impl ProcessSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ProcessSpec::Yule { offset, .. } => {
                if !offset.is_finite() || *offset <= -1.0 {
                    return Err(Error::Domain(format!(
                        "yule offset must exceed -1 so every multiplier is positive, got {offset}"
                    )));
                }
            }
            ProcessSpec::AgeReplacement { interval, .. } => {
                if !interval.is_finite() || *interval <= 0.0 {
                    return Err(Error::Domain(format!(
                        "age replacement interval must be positive, got {interval}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Short identifier used in CSV `process` columns and path metadata.
    pub fn label(&self) -> String {
        match self {
            ProcessSpec::Relevation(seq) => format!("relevation({seq})"),
            ProcessSpec::Renewal(seq) => format!("renewal({seq})"),
            ProcessSpec::MinimalRepair(d) => format!("minimal-repair({d})"),
            ProcessSpec::Yule { base, offset } => format!("yule({base},offset={offset})"),
            ProcessSpec::AgeReplacement { dist, interval } => {
                format!("age-replacement({dist},k={interval})")
            }
        }
    }
}

/// Arrival times of one replication, with enough metadata to regenerate
/// them from scratch.
#[derive(Debug, Clone, Serialize)]
pub struct ArrivalPath {
    pub times: Vec<f64>,
    pub process: String,
    pub replication: u64,
    pub seed: u64,
}

impl ArrivalPath {
    pub fn new(times: Vec<f64>, process: String, replication: u64, seed: u64) -> Result<Self> {
        for (i, w) in times.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::Numeric(format!(
                    "arrival times must increase strictly, got {} then {} at index {i}",
                    w[0], w[1]
                )));
            }
        }
        if times.first().is_some_and(|&t| !(t > 0.0) || !t.is_finite()) {
            return Err(Error::Numeric(format!(
                "first arrival time must be positive and finite, got {}",
                times[0]
            )));
        }
        Ok(ArrivalPath { times, process, replication, seed })
    }

    /// Number of arrivals in `[0, t]`.
    pub fn count_at(&self, t: f64) -> usize {
        self.times.partition_point(|&x| x <= t)
    }
}

/// Draws the arrival times of one path. Consumes one uniform per arrival,
/// except for age replacement which consumes one per repair cycle.
pub fn sample_arrival_times(
    spec: &ProcessSpec,
    n_arrivals: usize,
    src: &mut dyn UniformSource,
) -> Result<Vec<f64>> {
    if n_arrivals == 0 {
        return Err(Error::Domain("a path needs at least one arrival".into()));
    }
    spec.validate()?;
    let mut times = Vec::with_capacity(n_arrivals);
    match spec {
        ProcessSpec::Relevation(seq) => {
            let mut prev = 0.0;
            for i in 1..=n_arrivals {
                prev = seq.entry(i)?.sample_conditional_exceed(src.next_uniform(), prev)?;
                times.push(prev);
            }
        }
        ProcessSpec::Renewal(seq) => {
            let mut clock = 0.0;
            for i in 1..=n_arrivals {
                clock += seq.entry(i)?.sample(src.next_uniform())?;
                times.push(clock);
            }
        }
        ProcessSpec::MinimalRepair(d) => {
            let mut prev = 0.0;
            for _ in 0..n_arrivals {
                prev = d.sample_conditional_exceed(src.next_uniform(), prev)?;
                times.push(prev);
            }
        }
        ProcessSpec::Yule { base, offset } => {
            // in cumulative-hazard space the n-th jump is exponential with
            // rate (n + offset)
            let mut level = 0.0;
            let mut prev = 0.0_f64;
            for i in 1..=n_arrivals {
                let u = src.next_uniform();
                level += -u.ln() / (i as f64 + offset);
                let mut t = base.inverse_cumulative_hazard(level)?;
                if t <= prev {
                    // tie-break when the inverse resolves below its 1e-12
                    // relative precision
                    t = prev.next_up();
                }
                times.push(t);
                prev = t;
            }
        }
        ProcessSpec::AgeReplacement { dist, interval } => {
            let mut clock = 0.0;
            let mut cycles = 0u64;
            while times.len() < n_arrivals {
                cycles += 1;
                if cycles > MAX_AGE_REPLACEMENT_CYCLES {
                    return Err(Error::Numeric(format!(
                        "age replacement produced only {} failures in \
                         {MAX_AGE_REPLACEMENT_CYCLES} cycles",
                        times.len()
                    )));
                }
                let x = dist.sample(src.next_uniform())?;
                if x < *interval {
                    clock += x;
                    times.push(clock);
                } else {
                    clock += interval;
                }
            }
        }
    }
    Ok(times)
}

/// Simulates one replication from its `(seed, replication)` key alone.
pub fn simulate_path(
    spec: &ProcessSpec,
    n_arrivals: usize,
    seed: u64,
    replication: u64,
) -> Result<ArrivalPath> {
    let mut src = CounterStream::new(seed, replication);
    let times = sample_arrival_times(spec, n_arrivals, &mut src)?;
    ArrivalPath::new(times, spec.label(), replication, seed)
}

/// Failure times of an age replacement policy on `[0, horizon]`. Planned
/// replacements at age `interval` advance the clock but are not recorded;
/// the returned path may be empty.
pub fn simulate_age_replacement_failures(
    dist: &LifetimeDistribution,
    interval: f64,
    horizon: f64,
    src: &mut dyn UniformSource,
) -> Result<Vec<f64>> {
    if !(interval > 0.0) || !interval.is_finite() {
        return Err(Error::Domain(format!(
            "age replacement interval must be positive, got {interval}"
        )));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
    }
    let mut failures = Vec::new();
    let mut clock = 0.0;
    while clock < horizon {
        let x = dist.sample(src.next_uniform())?;
        if x < interval {
            clock += x;
            if clock <= horizon {
                failures.push(clock);
            }
        } else {
            clock += interval;
        }
    }
    Ok(failures)
}

/// Runs the replacement chain (partial sums of the `x` entries) and the
/// relevation chain (conditional-exceed on the `y` entries) off one shared
/// uniform stream, one draw per arrival index.
///
/// Returns `(replacement path, relevation path)`. When each `x` entry
/// stochastically dominates the corresponding residual of `y` at every
/// quantile, the relevation times come out below the replacement times
/// pathwise; callers assert that, it is not assumed here.
pub fn simulate_coupled_paths(
    x: &DistributionSequence,
    y: &DistributionSequence,
    n_arrivals: usize,
    seed: u64,
    replication: u64,
) -> Result<(ArrivalPath, ArrivalPath)> {
    if n_arrivals == 0 {
        return Err(Error::Domain("a path needs at least one arrival".into()));
    }
    let mut src = CounterStream::new(seed, replication);
    let mut sums = Vec::with_capacity(n_arrivals);
    let mut chain = Vec::with_capacity(n_arrivals);
    let mut clock = 0.0;
    let mut prev = 0.0;
    for i in 1..=n_arrivals {
        let u = src.next_uniform();
        clock += x.entry(i)?.sample(u)?;
        prev = y.entry(i)?.sample_conditional_exceed(u, prev)?;
        sums.push(clock);
        chain.push(prev);
    }
    Ok((
        ArrivalPath::new(sums, format!("renewal({x})"), replication, seed)?,
        ArrivalPath::new(chain, format!("relevation({y})"), replication, seed)?,
    ))
}

/// Simulates `replications` independent paths in parallel. Results come
/// back sorted by replication index, independent of scheduling.
pub fn simulate_ensemble(
    spec: &ProcessSpec,
    n_arrivals: usize,
    replications: u64,
    seed: u64,
) -> Result<Vec<ArrivalPath>> {
    if replications == 0 {
        return Err(Error::Domain("need at least one replication".into()));
    }
    (0..replications)
        .into_par_iter()
        .map(|rep| simulate_path(spec, n_arrivals, seed, rep))
        .collect()
}

/// Per-replication counts `N(t)` in replication order.
pub fn count_at(paths: &[ArrivalPath], t: f64) -> Vec<usize> {
    let mut indexed: Vec<(u64, usize)> =
        paths.iter().map(|p| (p.replication, p.count_at(t))).collect();
    indexed.sort_by_key(|&(rep, _)| rep);
    indexed.into_iter().map(|(_, c)| c).collect()
}

/// Empirical survival curve of the `n`-th arrival time across `paths`,
/// wrapped in a DKW confidence band at level `1 - delta`.
pub fn empirical_survival(
    paths: &[ArrivalPath],
    n: usize,
    grid: &[f64],
    delta: f64,
) -> Result<SurvivalCurve> {
    if n == 0 {
        return Err(Error::Domain("arrival indices are 1-based".into()));
    }
    if paths.is_empty() {
        return Err(Error::Domain("empirical curve needs at least one path".into()));
    }
    let shortest = paths.iter().map(|p| p.times.len()).min().unwrap();
    if n > shortest {
        return Err(Error::Truncation { requested: n, available: shortest });
    }
    let mut nth: Vec<f64> = paths.iter().map(|p| p.times[n - 1]).collect();
    nth.sort_by(f64::total_cmp);
    let m = nth.len();
    let half_width = crate::curve::dkw_half_width(m, delta)?;
    let mut full = Vec::with_capacity(grid.len() + 1);
    if grid.first() != Some(&0.0) {
        full.push(0.0);
    }
    full.extend_from_slice(grid);
    let values: Vec<f64> =
        full.iter().map(|&t| (m - nth.partition_point(|&x| x <= t)) as f64 / m as f64).collect();
    SurvivalCurve::new(
        full,
        values,
        CurveKind::Empirical { replications: m, confidence_delta: delta, half_width },
    )
}

/// Empirical curves for every arrival index `1..=n_max` on a shared grid.
pub fn empirical_curve_set(
    paths: &[ArrivalPath],
    n_max: usize,
    grid: &[f64],
    delta: f64,
) -> Result<EmpiricalCurveSet> {
    let curves: Vec<SurvivalCurve> =
        (1..=n_max).map(|n| empirical_survival(paths, n, grid, delta)).collect::<Result<_>>()?;
    EmpiricalCurveSet::new(curves)
}
