//! Stochastic-order verdicts between survival curves, distributions, and
//! arrival-time vectors.
//!
//! All comparisons run on finite grids and certify a sign only when a
//! difference clears the combined tolerance of its inputs. A verdict of
//! `ALessB` always means "the first compared object takes large values
//! less often" in the relevant order; `Crossing` carries grid intervals
//! bracketing a certified sign change, `Inconclusive` means the bands
//! overlap everywhere without a certified sign anywhere.

pub mod history;

pub use history::{history_pair_sampler, validate_severity, History};

use serde::Serialize;

use crate::curve::SurvivalCurve;
use crate::dist::LifetimeDistribution;
use crate::error::{Error, Result};
use crate::quad;
use crate::seq::DistributionSequence;

/// Smallest tolerance used when comparing exact curves.
pub const EXACT_FLOOR_TOL: f64 = 1e-9;

/// Tolerance for dynamic hazard and transition-kernel checks, which
/// evaluate closed forms only.
pub const POINTWISE_TOL: f64 = 1e-12;

/// Default tolerance for pointwise hazard comparison.
pub const HAZARD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderKind {
    St,
    Hr,
    DynHr,
    Cis,
}

/// One grid point (or history) backing a verdict: the two compared values
/// and their signed difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "intervals", rename_all = "snake_case")]
pub enum Relation {
    ALessB,
    BLessA,
    Equal,
    /// Intervals `(t_left, t_right)` between certified opposite signs.
    Crossing(Vec<(f64, f64)>),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub relation: Relation,
    pub order: OrderKind,
    pub tolerance: f64,
    pub grid_size: usize,
    /// Whether the tolerance is a statistical band rather than a numeric
    /// accuracy bound.
    pub statistical: bool,
    pub witnesses: Vec<Witness>,
}

/// Sign bookkeeping shared by all grid comparisons: strongest certified
/// witness per side plus brackets where the certified sign flips.
struct SignScan {
    hi: Option<Witness>,
    lo: Option<Witness>,
    brackets: Vec<(f64, f64)>,
    max_abs: f64,
}

fn scan_differences(points: impl Iterator<Item = Witness>, tol: f64) -> SignScan {
    let mut scan = SignScan { hi: None, lo: None, brackets: Vec::new(), max_abs: 0.0 };
    let mut last: Option<(f64, i8)> = None;
    for w in points {
        let d = w.difference;
        scan.max_abs = scan.max_abs.max(d.abs());
        let sign = if d > tol {
            if scan.hi.is_none_or(|best| d > best.difference) {
                scan.hi = Some(w);
            }
            1
        } else if d < -tol {
            if scan.lo.is_none_or(|best| d < best.difference) {
                scan.lo = Some(w);
            }
            -1
        } else {
            0
        };
        if sign != 0 {
            if let Some((t_prev, s_prev)) = last {
                if s_prev != sign {
                    scan.brackets.push((t_prev, w.t));
                }
            }
            last = Some((w.t, sign));
        }
    }
    scan
}

fn verdict_from_scan(
    scan: SignScan,
    order: OrderKind,
    tolerance: f64,
    grid_size: usize,
    statistical: bool,
    low_means_a_less: bool,
) -> OrderVerdict {
    // `low_means_a_less`: whether a certified negative difference supports
    // ALessB (true for survival values, false for hazards)
    let (supports_a_less, supports_b_less) = if low_means_a_less {
        (scan.lo, scan.hi)
    } else {
        (scan.hi, scan.lo)
    };
    let mut witnesses = Vec::new();
    let relation = match (supports_a_less, supports_b_less) {
        (None, None) => {
            if statistical && scan.max_abs > EXACT_FLOOR_TOL {
                Relation::Inconclusive
            } else {
                Relation::Equal
            }
        }
        (Some(w), None) => {
            witnesses.push(w);
            Relation::ALessB
        }
        (None, Some(w)) => {
            witnesses.push(w);
            Relation::BLessA
        }
        (Some(wa), Some(wb)) => {
            witnesses.push(wa);
            witnesses.push(wb);
            Relation::Crossing(scan.brackets)
        }
    };
    OrderVerdict { relation, order, tolerance, grid_size, statistical, witnesses }
}

/// Compares two survival curves in the usual stochastic order.
///
/// `b` is resampled onto `a`'s grid when the grids differ. The certifying
/// tolerance is the sum of the curves' uncertainty widths (DKW bands for
/// empirical curves, accuracy bounds for exact ones), floored at
/// [`EXACT_FLOOR_TOL`].
pub fn st_compare(a: &SurvivalCurve, b: &SurvivalCurve) -> Result<OrderVerdict> {
    let resampled;
    let b_eval = if a.grid() == b.grid() {
        b
    } else {
        resampled = b.resample(a.grid())?;
        &resampled
    };
    let statistical = a.kind().is_empirical() || b_eval.kind().is_empirical();
    let tolerance = (a.kind().half_width() + b_eval.kind().half_width()).max(EXACT_FLOOR_TOL);
    let points = a.grid().iter().zip(a.values()).zip(b_eval.values()).map(|((&t, &va), &vb)| {
        Witness { t, a: va, b: vb, difference: va - vb }
    });
    let scan = scan_differences(points, tolerance);
    Ok(verdict_from_scan(scan, OrderKind::St, tolerance, a.len(), statistical, true))
}

fn check_positive_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("comparison grid must be nonempty".into()));
    }
    for (i, &t) in grid.iter().enumerate() {
        if !t.is_finite() || t <= 0.0 {
            return Err(Error::Domain(format!("grid time {t} at index {i} must be positive")));
        }
        if i > 0 && !(t > grid[i - 1]) {
            return Err(Error::Domain("comparison grid must increase strictly".into()));
        }
    }
    Ok(())
}

/// Compares two distributions in the hazard rate order on a positive grid:
/// `A` is smaller when its hazard is the larger one everywhere.
///
/// A pointwise verdict additionally gets cross-checked against monotonicity
/// of the matching survival ratio; a certified disagreement (which would
/// indicate a grid too coarse to trust) downgrades the verdict to
/// `Inconclusive` with the offending ratio step as witness.
pub fn hr_compare(
    a: &LifetimeDistribution,
    b: &LifetimeDistribution,
    grid: &[f64],
) -> Result<OrderVerdict> {
    check_positive_grid(grid)?;
    let t_last = *grid.last().unwrap();
    if a.survival(t_last)? <= 0.0 || b.survival(t_last)? <= 0.0 {
        return Err(Error::Domain(
            "hazard comparison needs positive survivals over the whole grid".into(),
        ));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &t in grid {
        let ra = a.hazard(t)?;
        let rb = b.hazard(t)?;
        points.push(Witness { t, a: ra, b: rb, difference: ra - rb });
    }
    let scan = scan_differences(points.iter().copied(), HAZARD_TOL);
    let mut verdict =
        verdict_from_scan(scan, OrderKind::Hr, HAZARD_TOL, grid.len(), false, false);

    let ratio_violation = match verdict.relation {
        // A <=_hr B iff survival_B / survival_A is nondecreasing
        Relation::ALessB => ratio_monotone_violation(b, a, grid)?,
        Relation::BLessA => ratio_monotone_violation(a, b, grid)?,
        _ => None,
    };
    if let Some(w) = ratio_violation {
        verdict.relation = Relation::Inconclusive;
        verdict.witnesses.push(w);
    }
    Ok(verdict)
}

/// First certified decrease of `num.survival / den.survival` on the grid.
fn ratio_monotone_violation(
    num: &LifetimeDistribution,
    den: &LifetimeDistribution,
    grid: &[f64],
) -> Result<Option<Witness>> {
    let mut prev: Option<(f64, f64)> = None;
    for &t in grid {
        let ratio = num.survival(t)? / den.survival(t)?;
        if let Some((t_prev, r_prev)) = prev {
            if ratio < r_prev * (1.0 - 1e-9) - 1e-12 {
                return Ok(Some(Witness {
                    t,
                    a: r_prev,
                    b: ratio,
                    difference: ratio - r_prev,
                }));
            }
            let _ = t_prev;
        }
        prev = Some((t, ratio));
    }
    Ok(None)
}

/// Compares a brand-new unit from `fresh` with the residual life
/// `{base - age | base > age}` in the hazard rate order; the residual's
/// hazard at elapsed time `u` is the base hazard at `age + u`.
pub fn hr_residual_compare(
    fresh: &LifetimeDistribution,
    base: &LifetimeDistribution,
    age: f64,
    grid: &[f64],
) -> Result<OrderVerdict> {
    check_positive_grid(grid)?;
    if !age.is_finite() || age < 0.0 {
        return Err(Error::Domain(format!("residual age must be nonnegative, got {age}")));
    }
    let t_last = *grid.last().unwrap();
    if fresh.survival(t_last)? <= 0.0 || base.survival(age + t_last)? <= 0.0 {
        return Err(Error::Domain(
            "hazard comparison needs positive survivals over the whole grid".into(),
        ));
    }
    let mut points = Vec::with_capacity(grid.len());
    for &u in grid {
        let ra = fresh.hazard(u)?;
        let rb = base.hazard(age + u)?;
        points.push(Witness { t: u, a: ra, b: rb, difference: ra - rb });
    }
    let scan = scan_differences(points.into_iter(), HAZARD_TOL);
    Ok(verdict_from_scan(scan, OrderKind::Hr, HAZARD_TOL, grid.len(), false, false))
}

/// Signed criterion separating the two-arrival laws of relevation and
/// replacement built on `f`:
/// `int_0^t (S(t-x) - S(t)/S(x)) f(x) dx`.
///
/// A positive value certifies that the relevation law lies below the
/// replacement law at `t` (and a negative value the reverse); the value is
/// exactly the difference of the two survivals there. Identically zero for
/// exponentials.
pub fn nbu_relevation_integral(f: &LifetimeDistribution, t: f64) -> Result<f64> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!("time {t} outside the support [0, inf)")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let s_t = f.survival(t)?;
    if s_t <= 0.0 {
        return Err(Error::Singularity {
            abscissa: t,
            what: "survival vanished, the integrand's ratio is undefined".into(),
        });
    }
    let mut cuts = vec![0.0];
    for b in f.density_breakpoints() {
        if b > 0.0 && b < t {
            cuts.push(b);
        }
        let m = t - b;
        if m > 0.0 && m < t {
            cuts.push(m);
        }
    }
    cuts.push(t);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let tol = f.workspace().quad_tol;
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let part = quad::integrate(
            |x| {
                let direct = f.survival(t - x).expect("t - x inside [0, t]");
                let ratio = s_t / f.survival(x).expect("x inside (0, t)");
                (direct - ratio) * f.density(x).expect("x inside (0, t)")
            },
            w[0],
            w[1],
            tol / (cuts.len() - 1) as f64,
        )?;
        total += part.value;
    }
    Ok(total)
}

/// Compares the replacement arrival vector (entries from `x`) with the
/// relevation arrival vector (entries from `y`) in the multivariate
/// dynamic hazard rate order, over explicit history pairs.
///
/// The order puts the more severe history on the side claimed smaller and
/// asks its conditional intensity to dominate, so each direction gets its
/// own certificate from the same `(severe, mild)` pairs. With `j` and `i`
/// failures at censor time `t`, the only nontrivial index is arrival
/// `j + 1` (intensities of later arrivals vanish, earlier ones are not
/// admissible):
///
/// * `ALessB` (replacement counts below relevation counts, the
///   increasing-hazard direction): the relevation intensity under the
///   severe history, the unit hazard at calendar age `t`, must dominate
///   the replacement intensity under the mild history, the unit hazard at
///   age since its last renewal, which is zero unless `i = j`.
/// * `BLessA` (the decreasing-hazard reversal): the same comparison with
///   the severe history moved to the replacement side and the mild one to
///   the relevation side.
///
/// Both certificates holding at once means the margins never clear the
/// tolerance in either direction: `Equal`, the memoryless boundary. Both
/// failing yields `Crossing` with brackets between opposing violations. A
/// verdict's witness is the cell that rules the opposite direction out,
/// stored as `a` = relevation-side hazard, `b` = replacement-side hazard.
pub fn dyn_hr_compare(
    x: &DistributionSequence,
    y: &DistributionSequence,
    pairs: &[(History, History)],
) -> Result<OrderVerdict> {
    if pairs.is_empty() {
        return Err(Error::Domain("dynamic hazard comparison needs history pairs".into()));
    }
    let mut against_a_less: Option<Witness> = None;
    let mut against_b_less: Option<Witness> = None;
    let mut brackets = Vec::new();
    let mut last_violation: Option<(f64, i8)> = None;
    for (severe, mild) in pairs {
        validate_severity(severe, mild)?;
        let t = severe.censor();
        let j = severe.len();
        let i = mild.len();

        // severe history on the relevation side, mild on the replacement
        let eta_fwd = y.entry(j + 1)?.hazard(t)?;
        let lambda_fwd = if i == j {
            x.entry(i + 1)?.hazard(t - mild.last_failure().unwrap_or(0.0))?
        } else {
            0.0
        };
        let margin_fwd = eta_fwd - lambda_fwd;

        // severe history on the replacement side, mild on the relevation
        let lambda_rev = x.entry(j + 1)?.hazard(t - severe.last_failure().unwrap_or(0.0))?;
        let eta_rev = if i == j { y.entry(i + 1)?.hazard(t)? } else { 0.0 };
        let margin_rev = lambda_rev - eta_rev;

        let mut note = |sign: i8, w: Witness, worst: &mut Option<Witness>| {
            if worst.is_none_or(|best| w.difference.abs() > best.difference.abs()) {
                *worst = Some(w);
            }
            if let Some((t_prev, s_prev)) = last_violation {
                if s_prev != sign {
                    brackets.push((t_prev, w.t));
                }
            }
            last_violation = Some((w.t, sign));
        };
        if margin_fwd < -POINTWISE_TOL {
            let w = Witness { t, a: eta_fwd, b: lambda_fwd, difference: margin_fwd };
            note(-1, w, &mut against_a_less);
        }
        if margin_rev < -POINTWISE_TOL {
            let w = Witness { t, a: eta_rev, b: lambda_rev, difference: eta_rev - lambda_rev };
            note(1, w, &mut against_b_less);
        }
    }
    let mut witnesses = Vec::new();
    let relation = match (against_a_less, against_b_less) {
        (None, None) => Relation::Equal,
        (None, Some(w)) => {
            witnesses.push(w);
            Relation::ALessB
        }
        (Some(w), None) => {
            witnesses.push(w);
            Relation::BLessA
        }
        (Some(wf), Some(wr)) => {
            witnesses.push(wf);
            witnesses.push(wr);
            Relation::Crossing(brackets)
        }
    };
    Ok(OrderVerdict {
        relation,
        order: OrderKind::DynHr,
        tolerance: POINTWISE_TOL,
        grid_size: pairs.len(),
        statistical: false,
        witnesses,
    })
}

/// Transition-kernel monotonicity certificate for the relevation chain:
/// verifies that `P(T_k > t | T_{k-1} = s) = S_k(t) / S_k(s)` is
/// nondecreasing in `s` for every fixed `t`, for each distinct sequence
/// entry.
///
/// `ALessB` certifies the property (the kernel at a smaller `s` is the
/// smaller one), `BLessA` a certified reversal, `Crossing` a mix.
pub fn cis_check(
    seq: &DistributionSequence,
    s_grid: &[f64],
    t_grid: &[f64],
) -> Result<OrderVerdict> {
    check_positive_grid(t_grid)?;
    if s_grid.is_empty() {
        return Err(Error::Domain("comparison grid must be nonempty".into()));
    }
    for (idx, &s) in s_grid.iter().enumerate() {
        if !s.is_finite() || s < 0.0 {
            return Err(Error::Domain(format!("grid time {s} at index {idx} must be nonnegative")));
        }
        if idx > 0 && !(s > s_grid[idx - 1]) {
            return Err(Error::Domain("comparison grid must increase strictly".into()));
        }
    }
    let mut points = Vec::new();
    let mut evaluations = 0usize;
    for k in 1..=seq.entries().len() {
        let d = seq.entry(k)?;
        for &t in t_grid {
            let s_t = d.survival(t)?;
            if s_t <= 0.0 {
                return Err(Error::Domain(format!(
                    "transition kernel undefined at t={t}: survival vanished"
                )));
            }
            let mut prev: Option<(f64, f64)> = None;
            for &s in s_grid.iter().filter(|&&s| s <= t) {
                let val = s_t / d.survival(s)?;
                evaluations += 1;
                if let Some((s_prev, v_prev)) = prev {
                    // compare consecutive s at fixed t; positive difference
                    // certifies the increase
                    points.push(Witness {
                        t: s,
                        a: v_prev,
                        b: val,
                        difference: val - v_prev,
                    });
                    let _ = s_prev;
                }
                prev = Some((s, val));
            }
        }
    }
    let scan = scan_differences(points.into_iter(), POINTWISE_TOL);
    // a certified increase of the kernel in s supports the property, so the
    // positive side of the scan maps to ALessB
    Ok(verdict_from_scan(scan, OrderKind::Cis, POINTWISE_TOL, evaluations, false, false))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisMode {
    St,
    Hr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisDirection {
    /// `X_n` above `{Y_n - t | Y_n > t}` in the chosen order.
    XDominates,
    /// The bracketed reversal.
    XDominatedBy,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HypothesisCell {
    pub n: usize,
    /// Residual age; zero for the direct `n = 1` comparison.
    pub t: f64,
    /// Worst signed slack over the probe grid; negative means violated.
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub mode: HypothesisMode,
    pub direction: HypothesisDirection,
    pub tolerance: f64,
    pub cells: Vec<HypothesisCell>,
    pub all_pass: bool,
}

/// Checks the comparison-theorem hypotheses between a replacement sequence
/// `x` and a relevation sequence `y`: the direct `X_1` vs `Y_1` comparison
/// and, for `n >= 2` and every residual age in `t_grid`, `X_n` against the
/// residual `{Y_n - t | Y_n > t}`, in the chosen order over `probe_grid`.
pub fn theorem_hypotheses_check(
    x: &DistributionSequence,
    y: &DistributionSequence,
    mode: HypothesisMode,
    direction: HypothesisDirection,
    n_max: usize,
    t_grid: &[f64],
    probe_grid: &[f64],
) -> Result<HypothesisReport> {
    if n_max == 0 {
        return Err(Error::Domain("arrival indices are 1-based".into()));
    }
    check_positive_grid(probe_grid)?;
    if n_max >= 2 {
        check_positive_grid(t_grid)?;
    }
    let tolerance = EXACT_FLOOR_TOL;
    let sign = match direction {
        HypothesisDirection::XDominates => 1.0,
        HypothesisDirection::XDominatedBy => -1.0,
    };
    let mut cells = Vec::new();
    for n in 1..=n_max {
        let xn = x.entry(n)?;
        let yn = y.entry(n)?;
        let ages: &[f64] = if n == 1 { &[0.0] } else { t_grid };
        for &age in ages {
            let y_at_age = yn.survival(age)?;
            if y_at_age <= 1e-12 {
                return Err(Error::Singularity {
                    abscissa: age,
                    what: format!("residual of entry {n} undefined, survival vanished"),
                });
            }
            let mut margin = f64::INFINITY;
            for &u in probe_grid {
                let slack = match mode {
                    // X >=_st residual: survival of X above residual survival
                    HypothesisMode::St => {
                        xn.survival(u)? - yn.survival(age + u)? / y_at_age
                    }
                    // X >=_hr residual: X's hazard below the residual's
                    HypothesisMode::Hr => yn.hazard(age + u)? - xn.hazard(u)?,
                };
                margin = margin.min(sign * slack);
            }
            cells.push(HypothesisCell { n, t: age, margin, pass: margin >= -tolerance });
        }
    }
    let all_pass = cells.iter().all(|c| c.pass);
    Ok(HypothesisReport { mode, direction, tolerance, cells, all_pass })
}
