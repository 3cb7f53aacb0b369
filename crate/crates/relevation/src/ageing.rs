//! Numerical IFR/DFR/NBU/NWU classification of lifetime distributions.
//!
//! Hazard monotonicity is scanned on a log grid of successive differences;
//! the used/new comparison runs in product form, `S(s + t)` against
//! `S(s) * S(t)`, which is the residual stochastic comparison after
//! clearing denominators and is much better conditioned. Verdicts are
//! tri-state so that the exponential boundary (simultaneously NBU and NWU,
//! constant hazard) does not flap between runs.

use serde::Serialize;

use crate::curve;
use crate::dist::LifetimeDistribution;
use crate::error::{Error, Result};

/// Relative slack before a difference counts as a certified sign.
const CLASSIFY_SCALE: f64 = 1e-9;

/// Grid points for hazard monotonicity scans.
pub const HAZARD_GRID_POINTS: usize = 256;

/// Per-axis grid points for the product-form used/new scan.
pub const PRODUCT_GRID_POINTS: usize = 64;

/// Quantile bounding the classification grids.
pub const CLASSIFY_QUANTILE: f64 = 0.995;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriState {
    Yes,
    No,
    /// Held with equality within tolerance everywhere, as for the
    /// exponential's constant hazard.
    Boundary,
}

/// A grid point certifying a verdict of `No`.
///
/// For hazard properties, `s` and `t` are consecutive grid times with
/// hazards `lhs` and `rhs`; for used/new properties, `lhs` is the product
/// `S(s) * S(t)` and `rhs` the direct survival `S(s + t)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AgeingWitness {
    pub property: &'static str,
    pub s: f64,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AgeingReport {
    pub distribution: String,
    pub ifr: TriState,
    pub dfr: TriState,
    pub nbu: TriState,
    pub nwu: TriState,
    pub witnesses: Vec<AgeingWitness>,
    pub hazard_grid_points: usize,
    pub product_grid_points: usize,
    pub t_max: f64,
}

/// Scans successive hazard differences on `grid` (strictly positive,
/// ascending). Returns the IFR and DFR verdicts and, when a direction
/// fails, the steepest opposing step as witness.
pub fn classify_hazard_monotonicity(
    d: &LifetimeDistribution,
    grid: &[f64],
) -> Result<(TriState, TriState, Vec<AgeingWitness>)> {
    if grid.len() < 2 {
        return Err(Error::Domain("monotonicity scan needs at least two grid times".into()));
    }
    let mut up: Option<AgeingWitness> = None;
    let mut down: Option<AgeingWitness> = None;
    let mut prev: Option<(f64, f64)> = None;
    for &t in grid {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("hazard grid time {t} must be positive")));
        }
        let h = d.hazard(t)?;
        if let Some((t_prev, h_prev)) = prev {
            if !(t > t_prev) {
                return Err(Error::Domain("hazard grid must increase strictly".into()));
            }
            let diff = h - h_prev;
            let slack = CLASSIFY_SCALE * h.abs().max(h_prev.abs()).max(1.0);
            let w = AgeingWitness { property: "", s: t_prev, t, lhs: h_prev, rhs: h };
            if diff > slack && up.is_none_or(|b| diff > b.rhs - b.lhs) {
                up = Some(w);
            }
            if diff < -slack && down.is_none_or(|b| diff < b.rhs - b.lhs) {
                down = Some(w);
            }
        }
        prev = Some((t, h));
    }
    let mut witnesses = Vec::new();
    let ifr = match (up, down) {
        (_, Some(mut w)) => {
            w.property = "ifr";
            witnesses.push(w);
            TriState::No
        }
        (Some(_), None) => TriState::Yes,
        (None, None) => TriState::Boundary,
    };
    let dfr = match (down, up) {
        (_, Some(mut w)) => {
            w.property = "dfr";
            witnesses.push(w);
            TriState::No
        }
        (Some(_), None) => TriState::Yes,
        (None, None) => TriState::Boundary,
    };
    Ok((ifr, dfr, witnesses))
}

/// Product-form used/new scan over the `(s, t)` grid: NBU requires
/// `S(s + t) <= S(s) * S(t)` everywhere, NWU the reverse. The slack scales
/// with the larger of the compared survivals so deep-tail noise cannot
/// fabricate a verdict. Boundary means equality within slack on the whole
/// grid.
pub fn classify_nbu(
    d: &LifetimeDistribution,
    s_grid: &[f64],
    t_grid: &[f64],
) -> Result<(TriState, TriState, Vec<AgeingWitness>)> {
    if s_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::Domain("used/new scan needs nonempty grids".into()));
    }
    let mut nbu_break: Option<AgeingWitness> = None;
    let mut nwu_break: Option<AgeingWitness> = None;
    let mut nbu_support = false;
    let mut nwu_support = false;
    for &s in s_grid {
        let surv_s = d.survival(s)?;
        for &t in t_grid {
            let product = surv_s * d.survival(t)?;
            let direct = d.survival(s + t)?;
            let diff = product - direct;
            let slack = CLASSIFY_SCALE * product.max(direct);
            let w = AgeingWitness { property: "", s, t, lhs: product, rhs: direct };
            if diff < -slack {
                // direct survival exceeds the product: used beats new
                if nbu_break.is_none_or(|b| diff < b.lhs - b.rhs) {
                    nbu_break = Some(w);
                }
                nwu_support = true;
            } else if diff > slack {
                if nwu_break.is_none_or(|b| diff > b.lhs - b.rhs) {
                    nwu_break = Some(w);
                }
                nbu_support = true;
            }
        }
    }
    let mut witnesses = Vec::new();
    let nbu = match nbu_break {
        Some(mut w) => {
            w.property = "nbu";
            witnesses.push(w);
            TriState::No
        }
        None if nbu_support => TriState::Yes,
        None => TriState::Boundary,
    };
    let nwu = match nwu_break {
        Some(mut w) => {
            w.property = "nwu";
            witnesses.push(w);
            TriState::No
        }
        None if nwu_support => TriState::Yes,
        None => TriState::Boundary,
    };
    Ok((nbu, nwu, witnesses))
}

/// Full classification on default log grids up to the `0.995` quantile.
///
/// The report is checked for the ageing implications before it is
/// returned: a certified IFR must come with NBU (and DFR with NWU), with
/// boundary verdicts passing either way. A contradiction means the grids
/// cannot be trusted and is reported as a numeric error.
pub fn classify(d: &LifetimeDistribution) -> Result<AgeingReport> {
    let t_max = d.quantile(CLASSIFY_QUANTILE)?;
    let t_lo = d.quantile(1.0 - CLASSIFY_QUANTILE)?;
    let hazard_grid = &curve::log_grid(t_lo, t_max, HAZARD_GRID_POINTS)?[1..];
    let pair_grid = &curve::log_grid(t_lo, t_max, PRODUCT_GRID_POINTS)?[1..];
    classify_on(d, hazard_grid, pair_grid, pair_grid)
}

/// [`classify`] on caller-provided grids.
pub fn classify_on(
    d: &LifetimeDistribution,
    hazard_grid: &[f64],
    s_grid: &[f64],
    t_grid: &[f64],
) -> Result<AgeingReport> {
    let (ifr, dfr, mut witnesses) = classify_hazard_monotonicity(d, hazard_grid)?;
    let (nbu, nwu, used_new) = classify_nbu(d, s_grid, t_grid)?;
    witnesses.extend(used_new);
    for (stronger, weaker, names) in
        [(ifr, nbu, ("ifr", "nbu")), (dfr, nwu, ("dfr", "nwu"))]
    {
        if stronger == TriState::Yes && weaker == TriState::No {
            return Err(Error::Numeric(format!(
                "inconsistent classification: {} certified but {} violated; \
                 grids are too coarse to trust",
                names.0, names.1
            )));
        }
    }
    Ok(AgeingReport {
        distribution: d.to_string(),
        ifr,
        dfr,
        nbu,
        nwu,
        witnesses,
        hazard_grid_points: hazard_grid.len(),
        product_grid_points: s_grid.len().max(t_grid.len()),
        t_max: *hazard_grid.last().unwrap_or(&0.0),
    })
}
