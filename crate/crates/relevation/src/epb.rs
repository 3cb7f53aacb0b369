//! Arrival-time laws of relevation and replacement policies.
//!
//! For a relevation policy the `n`-th arrival time `T_n` forms an
//! elementary pure birth chain: given `T_{n-1} = s`, the next arrival
//! survives past `t` with probability `S_n(t) / S_n(s)` where `S_n` is the
//! survival of the `n`-th sequence entry. This module computes:
//!
//! * the one-step relevation transform `S_F(t) + S_G(t) int_0^t f(x)/S_G(x) dx`,
//! * the marginal survival of `T_n` by the recursion
//!   `G_n(t) = G_{n-1}(t) + S_n(t) * int_0^t g_{n-1}(x)/S_n(x) dx`
//!   (equivalently `g_n = f_n * I_n` in density form),
//! * the joint density `prod_{i<n} hazard_i(t_i) * f_n(t_n)`,
//! * the closed-form minimal repair marginal
//!   `S(t) * sum_{k<n} H(t)^k / k!`, which doubles as an independent oracle
//!   for the recursion whenever the sequence is iid,
//! * the two-unit replacement survival `S_F(t) + int_0^t S_G(t-x) f(x) dx`.
//!
//! The recursion keeps each level's running integral `I_k` as a piecewise
//! Chebyshev interpolant. Families whose density diverges like `x^-alpha`
//! at the origin are handled by the change of variable `x = y^p` with
//! `p = 1/(1 - alpha)`, which turns the singular integrand into a bounded
//! one and restores spectral convergence of the interpolants.

use std::cell::Cell;

use crate::curve::{CurveKind, SurvivalCurve};
use crate::dist::LifetimeDistribution;
use crate::error::{Error, Result};
use crate::interp::{lobatto_nodes, ChebyshevInterpolant};
use crate::quad;
use crate::seq::DistributionSequence;

/// Survival denominators below this trip a singularity error in the
/// marginal recursion, where the level integrals lose their accuracy long
/// before the arithmetic breaks down.
pub const SINGULARITY_GUARD: f64 = 1e-12;

/// Much lower trip point for the one-step transform. Its integrand is the
/// ratio `f / S_G`, which stays perfectly tame as long as `f` decays at
/// least as fast as `S_G` (for a common law it is just the hazard rate), so
/// the transform only refuses denominators small enough that the division
/// itself could overflow.
pub const RATIO_GUARD: f64 = 1e-250;

/// Largest admissible warp exponent; caps how strong a left-tail
/// singularity the marginal recursion accepts (`alpha <= 15/16`).
const MAX_WARP: f64 = 16.0;

/// Coefficient tail target for level interpolants.
const LEVEL_TAIL_TOL: f64 = 1e-10;

/// Per-panel quadrature tolerance inside the level cache.
const PANEL_TOL: f64 = 1e-12;

fn check_time(t: f64) -> Result<f64> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(Error::Domain(format!("time {t} outside the support [0, inf)")))
    }
}

/// Splits `(0, t)` at the density breakpoints of the given distributions.
fn split_points(dists: &[&LifetimeDistribution], t: f64) -> Vec<f64> {
    let mut cuts = vec![0.0];
    for d in dists {
        for b in d.density_breakpoints() {
            if b > 0.0 && b < t {
                cuts.push(b);
            }
        }
    }
    cuts.push(t);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

/// Survival of the second arrival when a unit from `f` is repaired at its
/// failure age by a same-aged unit from `g`:
/// `S_F(t) + S_G(t) * int_0^t f(x) / S_G(x) dx`.
///
/// Fails with a singularity error, reporting the first offending abscissa,
/// when `S_G` falls below [`RATIO_GUARD`] inside the range.
pub fn relevation_transform(
    f: &LifetimeDistribution,
    g: &LifetimeDistribution,
    t: f64,
) -> Result<f64> {
    let t = check_time(t)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    let tol = f.workspace().quad_tol.min(g.workspace().quad_tol);
    let trap: Cell<Option<f64>> = Cell::new(None);
    let pieces = split_points(&[f, g], t);
    let mut integral = 0.0;
    for w in pieces.windows(2) {
        let part = quad::integrate(
            |x| {
                let denom = g.survival(x).unwrap_or(0.0);
                if denom < RATIO_GUARD {
                    if trap.get().is_none() {
                        trap.set(Some(x));
                    }
                    return 0.0;
                }
                f.density(x).expect("abscissa inside (0, t)") / denom
            },
            w[0],
            w[1],
            tol / (pieces.len() - 1) as f64,
        );
        // A tripped trap outranks whatever the quadrature thought of the
        // mutilated integrand it was left with.
        if let Some(abscissa) = trap.get() {
            return Err(Error::Singularity {
                abscissa,
                what: format!("repair survival fell below {RATIO_GUARD:e}"),
            });
        }
        integral += part?.value;
    }
    let value = f.survival(t)? + g.survival(t)? * integral;
    Ok(value.clamp(0.0, 1.0))
}

/// Survival of `X + Y` for independent lifetimes from `f` and `g`:
/// `S_F(t) + int_0^t S_G(t - x) f(x) dx`. This is the second-arrival law of
/// replacement by a new unit.
pub fn renewal_sum_survival(
    f: &LifetimeDistribution,
    g: &LifetimeDistribution,
    t: f64,
) -> Result<f64> {
    let t = check_time(t)?;
    if t == 0.0 {
        return Ok(1.0);
    }
    let tol = f.workspace().quad_tol.min(g.workspace().quad_tol);
    // the convolution kernel kinks where g's density jumps, mirrored to t - x
    let mut cuts = split_points(&[f], t);
    for b in g.density_breakpoints() {
        let m = t - b;
        if m > 0.0 && m < t {
            cuts.push(m);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut integral = 0.0;
    for w in cuts.windows(2) {
        let part = quad::integrate(
            |x| {
                g.survival(t - x).expect("t - x inside [0, t]")
                    * f.density(x).expect("abscissa inside (0, t)")
            },
            w[0],
            w[1],
            tol / (cuts.len() - 1) as f64,
        )?;
        integral += part.value;
    }
    Ok((f.survival(t)? + integral).clamp(0.0, 1.0))
}

/// Survival of the `n`-th failure under minimal repair of a single unit:
/// `S(t) * sum_{k=0}^{n-1} H(t)^k / k!` with `H` the cumulative hazard.
///
/// Once the survival has underflowed to zero the result is reported as zero
/// outright.
pub fn minimal_repair_marginal(f: &LifetimeDistribution, n: usize, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("arrival indices are 1-based".into()));
    }
    let t = check_time(t)?;
    if f.survival(t)? == 0.0 {
        return Ok(0.0);
    }
    let h = f.cumulative_hazard(t)?;
    let mut term = (-h).exp();
    let mut sum = term;
    for k in 1..n {
        term *= h / k as f64;
        sum += term;
    }
    Ok(sum.clamp(0.0, 1.0))
}

/// Joint density of the first `n` relevation arrival times at
/// `times = (t_1 < ... < t_n)`:
/// `prod_{i=1}^{n-1} hazard_i(t_i) * density_n(t_n)`.
pub fn epb_joint_density(seq: &DistributionSequence, times: &[f64]) -> Result<f64> {
    if times.is_empty() {
        return Err(Error::Domain("joint density needs at least one time".into()));
    }
    for w in times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Domain(format!(
                "joint density requires strictly increasing times, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    let n = times.len();
    let mut product = 1.0;
    for (i, &t) in times.iter().enumerate().take(n - 1) {
        product *= seq.entry(i + 1)?.hazard(check_time(t)?)?;
    }
    Ok(product * seq.entry(n)?.density(check_time(times[n - 1])?)?)
}

// ---------------------------------------------------------------------------
// marginal recursion
// ---------------------------------------------------------------------------

/// Running integral of one recursion level, tabulated piecewise in the
/// warped coordinate `y = x^(1/p)`.
struct LevelIntegral {
    warp: f64,
    /// Ascending segment boundaries in `y`, starting at 0.
    boundaries: Vec<f64>,
    pieces: Vec<ChebyshevInterpolant>,
}

impl LevelIntegral {
    fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let y = if self.warp == 1.0 { x } else { x.powf(1.0 / self.warp) };
        let idx = match self.boundaries.binary_search_by(|b| b.total_cmp(&y)) {
            Ok(i) => i.clamp(1, self.pieces.len()) - 1,
            Err(i) => i.clamp(1, self.pieces.len()) - 1,
        };
        self.pieces[idx].eval(y)
    }
}

/// Integrand of level `k` in warped coordinates:
/// `f_{k-1}(y^p) * I_{k-1}(y^p) / S_k(y^p) * p * y^(p-1)`.
fn warped_level_integrand(
    prev_density: &LifetimeDistribution,
    level_survival: &LifetimeDistribution,
    prev_integral: Option<&LevelIntegral>,
    warp: f64,
    y: f64,
) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let (x, jacobian) = if warp == 1.0 { (y, 1.0) } else { (y.powf(warp), warp * y.powf(warp - 1.0)) };
    if x == 0.0 {
        return 0.0;
    }
    let density = prev_density.density(x).expect("abscissa inside (0, T]");
    let survival = level_survival.survival(x).expect("abscissa inside (0, T]");
    let carried = prev_integral.map_or(1.0, |p| p.eval(x));
    density * carried / survival * jacobian
}

/// Builds the interpolant of `I_k` over all segments, reusing even-node
/// values when a segment's panel count doubles.
fn build_level(
    seq: &DistributionSequence,
    k: usize,
    prev: Option<&LevelIntegral>,
    boundaries: &[f64],
    warp: f64,
) -> Result<LevelIntegral> {
    let prev_density = seq.entry(k - 1)?.clone();
    let level_survival = seq.entry(k)?.clone();
    let mut pieces = Vec::with_capacity(boundaries.len() - 1);
    let mut carry = 0.0;

    for w in boundaries.windows(2) {
        let (ya, yb) = (w[0], w[1]);
        let mut panels = 16;
        let mut nodes = lobatto_nodes(ya, yb, panels);
        let mut values = cumulative_values(
            &prev_density,
            &level_survival,
            prev,
            warp,
            carry,
            &nodes,
            None,
        )?;
        let piece = loop {
            let candidate = ChebyshevInterpolant::from_values_ascending(ya, yb, &values)?;
            let scale = values.last().unwrap().abs().max(1.0);
            if candidate.tail_magnitude() <= LEVEL_TAIL_TOL * scale {
                break candidate;
            }
            if panels >= crate::interp::MAX_PANELS {
                return Err(Error::Numeric(format!(
                    "marginal recursion level {k} failed to converge on \
                     [{ya:.6}, {yb:.6}] at {panels} panels"
                )));
            }
            panels *= 2;
            nodes = lobatto_nodes(ya, yb, panels);
            values = cumulative_values(
                &prev_density,
                &level_survival,
                prev,
                warp,
                carry,
                &nodes,
                Some(&values),
            )?;
        };
        carry = *values.last().unwrap();
        pieces.push(piece);
    }

    Ok(LevelIntegral { warp, boundaries: boundaries.to_vec(), pieces })
}

/// Cumulative integral values at ascending nodes. When `coarse` holds the
/// values of the same segment at half the panel count, even nodes are
/// copied and only the integrals onto odd nodes are recomputed.
fn cumulative_values(
    prev_density: &LifetimeDistribution,
    level_survival: &LifetimeDistribution,
    prev: Option<&LevelIntegral>,
    warp: f64,
    carry: f64,
    nodes: &[f64],
    coarse: Option<&[f64]>,
) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(nodes.len());
    for (j, &y) in nodes.iter().enumerate() {
        if j == 0 {
            values.push(carry);
            continue;
        }
        if let Some(old) = coarse {
            if j % 2 == 0 {
                values.push(old[j / 2]);
                continue;
            }
        }
        // the tolerance tracks the accumulated magnitude: the raw level
        // integral can reach 1e5 and beyond before the survival factor
        // scales it back, and an absolute 1e-12 would sit below the
        // quadrature's rounding floor there
        let tol = PANEL_TOL * values[j - 1].abs().max(1.0);
        let part = quad::integrate(
            |yy| warped_level_integrand(prev_density, level_survival, prev, warp, yy),
            nodes[j - 1],
            y,
            tol,
        )?;
        values.push(values[j - 1] + part.value);
    }
    Ok(values)
}

/// Marginal survival curve of the `n`-th relevation arrival on `grid`.
///
/// The grid must be strictly increasing and nonnegative; a leading zero is
/// added when absent. Values carry an `Exact` tolerance of `n * 1e-7`.
/// Fails with a singularity error if any of the first `n` entries' survival
/// falls below [`SINGULARITY_GUARD`] before the end of the grid.
pub fn epb_marginal(
    seq: &DistributionSequence,
    n: usize,
    grid: &[f64],
) -> Result<SurvivalCurve> {
    if n == 0 {
        return Err(Error::Domain("arrival indices are 1-based".into()));
    }
    if grid.is_empty() {
        return Err(Error::Domain("marginal evaluation needs a nonempty grid".into()));
    }
    let mut full = Vec::with_capacity(grid.len() + 1);
    if grid[0] != 0.0 {
        full.push(0.0);
    }
    full.extend_from_slice(grid);
    for w in full.windows(2) {
        if !(w[1] > w[0]) || !w[1].is_finite() {
            return Err(Error::Domain(format!(
                "marginal grid must increase strictly, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    if full[0] < 0.0 {
        return Err(Error::Domain("marginal grid entries must be nonnegative".into()));
    }
    let t_max = *full.last().unwrap();
    let tolerance = n as f64 * 1e-7;

    // entry lookups also surface sequence exhaustion for finite sequences
    let mut alpha_max = 0.0_f64;
    for k in 1..=n {
        let d = seq.entry(k)?;
        if d.survival(t_max)? < SINGULARITY_GUARD {
            return Err(Error::Singularity {
                abscissa: t_max,
                what: format!("survival of entry {k} fell below {SINGULARITY_GUARD:e} on the grid"),
            });
        }
        alpha_max = alpha_max.max(d.left_tail_singularity());
    }

    let survival_on_grid = |k: usize| -> Result<Vec<f64>> {
        full.iter().map(|&t| seq.entry(k)?.survival(t)).collect()
    };

    let mut values = survival_on_grid(1)?;
    if n == 1 {
        return SurvivalCurve::new(full, values, CurveKind::Exact { tolerance });
    }

    let warp = if alpha_max > 0.0 { 1.0 / (1.0 - alpha_max) } else { 1.0 };
    if warp > MAX_WARP {
        return Err(Error::Numeric(format!(
            "left-tail singularity exponent {alpha_max} too strong for the marginal recursion"
        )));
    }

    // segment boundaries in warped coordinates, split at density breakpoints
    let entries: Vec<&LifetimeDistribution> =
        (1..=n).map(|k| seq.entry(k)).collect::<Result<_>>()?;
    let mut boundaries: Vec<f64> = split_points(&entries, t_max)
        .iter()
        .map(|&b| if warp == 1.0 { b } else { b.powf(1.0 / warp) })
        .collect();
    let y_max = if warp == 1.0 { t_max } else { t_max.powf(1.0 / warp) };
    *boundaries.last_mut().unwrap() = y_max;

    let mut prev: Option<LevelIntegral> = None;
    for k in 2..=n {
        let level = build_level(seq, k, prev.as_ref(), &boundaries, warp)?;
        let survival_k = survival_on_grid(k)?;
        for (i, &t) in full.iter().enumerate() {
            values[i] = (values[i] + survival_k[i] * level.eval(t)).clamp(0.0, 1.0);
        }
        prev = Some(level);
    }

    SurvivalCurve::new(full, values, CurveKind::Exact { tolerance })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve;

    fn exp1() -> LifetimeDistribution {
        LifetimeDistribution::exponential(1.0).unwrap()
    }

    #[test]
    fn relevation_of_two_standard_exponentials() {
        // exact law: (1 + t) e^-t
        for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let got = relevation_transform(&exp1(), &exp1(), t).unwrap();
            let expected = (1.0 + t) * (-t).exp();
            assert!((got - expected).abs() < 1e-8, "t={t}: {got} vs {expected}");
        }
        assert!((relevation_transform(&exp1(), &exp1(), 1.0).unwrap()
            - 2.0 * (-1.0_f64).exp())
        .abs()
            < 1e-8);
    }

    #[test]
    fn relevation_at_zero_is_one() {
        assert_eq!(relevation_transform(&exp1(), &exp1(), 0.0).unwrap(), 1.0);
    }

    #[test]
    fn relevation_dominates_first_failure() {
        let f = LifetimeDistribution::gamma(2.0, 1.0).unwrap();
        let g = LifetimeDistribution::weibull(2.0, 1.0).unwrap();
        for t in [0.3, 1.0, 2.0] {
            let rel = relevation_transform(&f, &g, t).unwrap();
            assert!(rel >= f.survival(t).unwrap() - 1e-10);
            assert!(rel <= 1.0);
        }
    }

    #[test]
    fn relevation_reports_singular_abscissa() {
        // a repair distribution that is numerically dead well before t
        let g = LifetimeDistribution::weibull(4.0, 0.05).unwrap();
        let err = relevation_transform(&exp1(), &g, 2.0).unwrap_err();
        match err {
            Error::Singularity { abscissa, .. } => {
                assert!(abscissa > 0.0 && abscissa < 2.0, "abscissa {abscissa}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn renewal_sum_of_exponentials_is_gamma() {
        for t in [0.25, 1.0, 3.0] {
            let got = renewal_sum_survival(&exp1(), &exp1(), t).unwrap();
            let expected = (1.0 + t) * (-t).exp();
            assert!((got - expected).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn renewal_sum_with_distinct_rates() {
        // exp(1) + exp(2): survival 2 e^-t - e^-2t
        let e2 = LifetimeDistribution::exponential(2.0).unwrap();
        for t in [0.5, 1.0, 2.5] {
            let got = renewal_sum_survival(&exp1(), &e2, t).unwrap();
            let expected = 2.0 * (-t).exp() - (-2.0 * t).exp();
            assert!((got - expected).abs() < 1e-8, "t={t}: {got} vs {expected}");
            // convolution is symmetric in the two summands
            let swapped = renewal_sum_survival(&e2, &exp1(), t).unwrap();
            assert!((got - swapped).abs() < 2e-8);
        }
    }

    #[test]
    fn minimal_repair_matches_poisson_tail() {
        let f = LifetimeDistribution::weibull(2.0, 1.0).unwrap();
        // H(t) = t^2; P(T_3 > t) = e^-t^2 (1 + t^2 + t^4/2)
        for t in [0.5_f64, 1.0, 1.7] {
            let h = t * t;
            let expected = (-h).exp() * (1.0 + h + h * h / 2.0);
            let got = minimal_repair_marginal(&f, 3, t).unwrap();
            assert!((got - expected).abs() < 1e-12, "t={t}");
        }
        assert!((minimal_repair_marginal(&f, 3, 1.0).unwrap()
            - 2.5 * (-1.0_f64).exp())
        .abs()
            < 1e-12);
    }

    #[test]
    fn minimal_repair_handles_the_underflow_region() {
        assert_eq!(minimal_repair_marginal(&exp1(), 2, 800.0).unwrap(), 0.0);
        assert!(minimal_repair_marginal(&exp1(), 0, 1.0).is_err());
    }

    #[test]
    fn stoyanov_minimal_repair_value() {
        let d = LifetimeDistribution::stoyanov_nbu();
        // the cumulative hazard at 1 is sin^2(1)
        let h = 1.0_f64.sin().powi(2);
        let expected = (-h).exp() * (1.0 + h + h * h / 2.0 + h * h * h / 6.0);
        let got = minimal_repair_marginal(&d, 4, 1.0).unwrap();
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn joint_density_values() {
        let seq = DistributionSequence::iid(LifetimeDistribution::gamma(2.0, 1.0).unwrap());
        // hazard(0.5) = 1/3, density(1) = e^-1
        let got = epb_joint_density(&seq, &[0.5, 1.0]).unwrap();
        let expected = (1.0 / 3.0) * (-1.0_f64).exp();
        assert!((got - expected).abs() < 1e-12);
        assert!((expected - 0.122626).abs() < 1e-6);

        // iid exponential: lambda^n e^-lambda t_n
        let seq = DistributionSequence::iid(LifetimeDistribution::exponential(2.0).unwrap());
        let got = epb_joint_density(&seq, &[0.2, 0.5, 1.1]).unwrap();
        let expected = 8.0 * (-2.2_f64).exp();
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn joint_density_requires_ordered_times() {
        let seq = DistributionSequence::iid(exp1());
        assert!(epb_joint_density(&seq, &[1.0, 0.5]).is_err());
        assert!(epb_joint_density(&seq, &[1.0, 1.0]).is_err());
        assert!(epb_joint_density(&seq, &[]).is_err());
        // single time degenerates to the plain density
        let got = epb_joint_density(&seq, &[0.7]).unwrap();
        assert!((got - exp1().density(0.7).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn marginal_of_two_exponentials() {
        let seq = DistributionSequence::iid(exp1());
        let grid = curve::log_grid(1e-3, 5.0, 64).unwrap();
        let c = epb_marginal(&seq, 2, &grid).unwrap();
        for (i, &t) in c.grid().iter().enumerate() {
            let expected = (1.0 + t) * (-t).exp();
            assert!(
                (c.values()[i] - expected).abs() < 1e-8,
                "t={t}: {} vs {expected}",
                c.values()[i]
            );
        }
    }

    #[test]
    fn marginal_matches_weibull_closed_form() {
        let seq = DistributionSequence::iid(LifetimeDistribution::weibull(2.0, 1.0).unwrap());
        // t = 1 joins the grid so the spot check below is free of the linear
        // interpolation error of value_at between nodes
        let mut grid = curve::log_grid(1e-2, 2.6, 64).unwrap();
        grid.push(1.0);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let c = epb_marginal(&seq, 3, &grid).unwrap();
        let at_one = c.value_at(1.0).unwrap();
        assert!((at_one - 2.5 * (-1.0_f64).exp()).abs() < 1e-6, "got {at_one}");
        for (i, &t) in c.grid().iter().enumerate() {
            let h = t * t;
            let expected = (-h).exp() * (1.0 + h + h * h / 2.0);
            assert!((c.values()[i] - expected).abs() < 1e-7, "t={t}");
        }
    }

    #[test]
    fn marginal_agrees_with_minimal_repair_for_iid_entries() {
        let cases: Vec<LifetimeDistribution> = vec![
            exp1(),
            LifetimeDistribution::gamma(2.0, 1.0).unwrap(),
            LifetimeDistribution::gamma(0.5, 1.0).unwrap(),
            LifetimeDistribution::weibull(2.0, 1.0).unwrap(),
            LifetimeDistribution::stoyanov_nbu(),
            LifetimeDistribution::lai_xie_non_monotone(),
        ];
        for d in cases {
            let grid = curve::default_grid(&d, 64).unwrap();
            let seq = DistributionSequence::iid(d.clone());
            for n in [2, 4] {
                let c = epb_marginal(&seq, n, &grid).unwrap();
                for (i, &t) in c.grid().iter().enumerate() {
                    let oracle = minimal_repair_marginal(&d, n, t).unwrap();
                    assert!(
                        (c.values()[i] - oracle).abs() < 1e-6,
                        "{d} n={n} t={t}: {} vs {oracle}",
                        c.values()[i]
                    );
                }
            }
        }
    }

    #[test]
    fn marginals_are_coupled_monotone_in_n() {
        let seq = DistributionSequence::new(
            vec![
                LifetimeDistribution::gamma(2.0, 1.0).unwrap(),
                LifetimeDistribution::weibull(2.0, 1.0).unwrap(),
                exp1(),
            ],
            crate::seq::ExtendRule::RepeatLast,
        )
        .unwrap();
        let grid = curve::log_grid(1e-2, 4.0, 48).unwrap();
        let mut last: Option<SurvivalCurve> = None;
        for n in 1..=4 {
            let c = epb_marginal(&seq, n, &grid).unwrap();
            if let Some(prev) = &last {
                for i in 0..c.len() {
                    assert!(
                        c.values()[i] >= prev.values()[i] - 1e-9,
                        "arrival {n} dipped below arrival {} at index {i}",
                        n - 1
                    );
                }
            }
            last = Some(c);
        }
    }

    #[test]
    fn marginal_respects_finite_sequences() {
        let seq = DistributionSequence::new(vec![exp1()], crate::seq::ExtendRule::Finite).unwrap();
        let err = epb_marginal(&seq, 2, &[0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::SequenceExhausted { index: 2, len: 1 }));
    }

    #[test]
    fn marginal_guards_vanishing_survival() {
        // weibull(4, 0.05) is numerically dead near t = 0.4
        let seq = DistributionSequence::iid(LifetimeDistribution::weibull(4.0, 0.05).unwrap());
        let err = epb_marginal(&seq, 2, &[0.0, 2.0]).unwrap_err();
        assert!(matches!(err, Error::Singularity { .. }), "got {err:?}");
    }

    #[test]
    fn marginal_rejects_bad_grids() {
        let seq = DistributionSequence::iid(exp1());
        assert!(epb_marginal(&seq, 2, &[]).is_err());
        assert!(epb_marginal(&seq, 2, &[0.0, 1.0, 1.0]).is_err());
        assert!(epb_marginal(&seq, 0, &[0.0, 1.0]).is_err());
        // grid without a leading zero gets one
        let c = epb_marginal(&seq, 1, &[0.5, 1.0]).unwrap();
        assert_eq!(c.grid()[0], 0.0);
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn joint_density_integrates_to_the_marginal() {
        // second-arrival survival recovered from the joint density by nested
        // quadrature; independent route check at loose tolerance
        let d = LifetimeDistribution::gamma(2.0, 1.0).unwrap();
        let seq = DistributionSequence::iid(d.clone());
        let t = 1.0;
        let upper = d.quantile(0.99999).unwrap() + 14.0;
        let outer = quad::integrate(
            |t2| {
                let inner = quad::integrate(
                    |t1| epb_joint_density(&seq, &[t1, t2]).unwrap(),
                    0.0,
                    t2,
                    1e-7,
                )
                .unwrap();
                inner.value
            },
            t,
            upper,
            1e-6,
        )
        .unwrap();
        let marginal = epb_marginal(&seq, 2, &[0.0, t]).unwrap().value_at(t).unwrap();
        assert!((outer.value - marginal).abs() < 1e-4, "{} vs {marginal}", outer.value);
    }
}
