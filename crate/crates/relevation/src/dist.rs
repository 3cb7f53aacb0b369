//! Lifetime distribution families.
//!
//! All failure times are nonnegative and dimensionless; rate-style and
//! scale-style parameters are mutually reciprocal, so no unit bookkeeping is
//! done anywhere. Five families are supported:
//!
//! | family     | survival                                   | role                         |
//! |------------|--------------------------------------------|------------------------------|
//! | `exp`      | `exp(-rate * t)`                           | memoryless boundary case     |
//! | `gamma`    | regularized upper incomplete gamma         | IFR for shape >= 1, DFR else |
//! | `weibull`  | `exp(-(t/scale)^shape)`                    | IFR for shape >= 1, DFR else |
//! | `stoyanov` | `exp(-h(t))`, `h` piecewise trigonometric  | NBU but not IFR              |
//! | `laixie`   | `exp(-t^0.2 * exp(1.1 t))`                 | bathtub hazard, not NBU/NWU  |
//!
//! The `stoyanov` exponent is `sin^2 t` on `[0, pi/2]` and
//! `(pi/2)(t - pi/2) + 1` beyond; its density jumps at `pi/2` and each branch
//! is evaluated strictly on its own interval. The `laixie` family has a
//! bathtub-shaped hazard, so it is neither IFR nor DFR and neither NBU nor
//! NWU; its density diverges like `t^-0.8` at the origin, which every
//! numeric consumer in this crate must tolerate.
//!
//! Sampling is done by inverting the cumulative hazard: `sample(u)` solves
//! `survival(t) = u`, and `sample_conditional_exceed(u, s)` solves
//! `survival(t) / survival(s) = u`, which in hazard space is simply
//! `H(t) = H(s) - ln u`. Families without a closed-form inverse fall back to
//! exponential-growth bracketing from `t = 1` followed by bisection.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use statrs::function::gamma::{gamma_ur, ln_gamma};

use crate::error::{Error, Result};

/// Survival values below this are clamped to exactly zero.
pub const SURVIVAL_FLOOR: f64 = 1e-300;

/// Relative width at which quantile bisection stops.
const BISECT_REL_WIDTH: f64 = 1e-12;

/// Exponent of the `laixie` cumulative hazard power factor.
const LAI_XIE_POWER: f64 = 0.2;
/// Rate of the `laixie` cumulative hazard exponential factor.
const LAI_XIE_RATE: f64 = 1.1;

/// Tunables for the numeric fallbacks of a distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericWorkspace {
    /// Absolute tolerance handed to quadrature built on this distribution.
    pub quad_tol: f64,
    /// Largest time probed while bracketing an inverse; exceeding it is a
    /// numeric error rather than a silent extrapolation.
    pub bracket_bound: f64,
}

impl Default for NumericWorkspace {
    fn default() -> Self {
        Self { quad_tol: 1e-8, bracket_bound: 1e8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Exponential { rate: f64 },
    Gamma { shape: f64, scale: f64 },
    Weibull { shape: f64, scale: f64 },
    StoyanovNbu,
    LaiXieNonMonotone,
}

/// A lifetime distribution on `[0, inf)` together with its numeric
/// workspace.
#[derive(Debug, Clone, PartialEq)]
pub struct LifetimeDistribution {
    family: Family,
    workspace: NumericWorkspace,
}

fn positive_finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_time(t: f64) -> Result<f64> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(Error::Domain(format!("time {t} outside the support [0, inf)")))
    }
}

fn check_uniform(u: f64) -> Result<f64> {
    if u > 0.0 && u < 1.0 {
        Ok(u)
    } else {
        Err(Error::Domain(format!("uniform draw {u} outside the open interval (0, 1)")))
    }
}

impl LifetimeDistribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        positive_finite("rate", rate)?;
        Ok(Self { family: Family::Exponential { rate }, workspace: NumericWorkspace::default() })
    }

    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        positive_finite("shape", shape)?;
        positive_finite("scale", scale)?;
        Ok(Self { family: Family::Gamma { shape, scale }, workspace: NumericWorkspace::default() })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        positive_finite("shape", shape)?;
        positive_finite("scale", scale)?;
        Ok(Self { family: Family::Weibull { shape, scale }, workspace: NumericWorkspace::default() })
    }

    pub fn stoyanov_nbu() -> Self {
        Self { family: Family::StoyanovNbu, workspace: NumericWorkspace::default() }
    }

    pub fn lai_xie_non_monotone() -> Self {
        Self { family: Family::LaiXieNonMonotone, workspace: NumericWorkspace::default() }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn workspace(&self) -> &NumericWorkspace {
        &self.workspace
    }

    pub fn with_quad_tol(mut self, quad_tol: f64) -> Result<Self> {
        positive_finite("quadrature tolerance", quad_tol)?;
        self.workspace.quad_tol = quad_tol;
        Ok(self)
    }

    pub fn with_bracket_bound(mut self, bound: f64) -> Result<Self> {
        positive_finite("bracket bound", bound)?;
        self.workspace.bracket_bound = bound;
        Ok(self)
    }

    /// Survival probability `P(T > t)`, clamped to zero below
    /// [`SURVIVAL_FLOOR`].
    pub fn survival(&self, t: f64) -> Result<f64> {
        let raw = self.raw_survival(check_time(t)?);
        Ok(if raw < SURVIVAL_FLOOR { 0.0 } else { raw })
    }

    fn raw_survival(&self, t: f64) -> f64 {
        match self.family {
            // statrs rejects x = 0, so the left endpoint is pinned by hand.
            Family::Gamma { .. } if t == 0.0 => 1.0,
            Family::Gamma { shape, scale } => gamma_ur(shape, t / scale),
            _ => (-self.closed_cumulative_hazard(t)).exp(),
        }
    }

    /// Probability density. Divergent limits at `t = 0` (gamma or weibull
    /// shape below one, `laixie`) are reported as `inf`.
    pub fn density(&self, t: f64) -> Result<f64> {
        let t = check_time(t)?;
        Ok(match self.family {
            Family::Exponential { rate } => rate * (-rate * t).exp(),
            Family::Gamma { shape, scale } => {
                if t == 0.0 {
                    if shape > 1.0 {
                        0.0
                    } else if shape == 1.0 {
                        1.0 / scale
                    } else {
                        f64::INFINITY
                    }
                } else {
                    ((shape - 1.0) * t.ln() - t / scale - ln_gamma(shape) - shape * scale.ln())
                        .exp()
                }
            }
            Family::Weibull { shape, scale } => {
                if t == 0.0 {
                    if shape > 1.0 {
                        0.0
                    } else if shape == 1.0 {
                        1.0 / scale
                    } else {
                        f64::INFINITY
                    }
                } else {
                    let z = t / scale;
                    (shape / scale) * z.powf(shape - 1.0) * (-z.powf(shape)).exp()
                }
            }
            Family::StoyanovNbu | Family::LaiXieNonMonotone => {
                let rate = self.hazard_value(t);
                if rate.is_infinite() {
                    f64::INFINITY
                } else {
                    rate * (-self.closed_cumulative_hazard(t)).exp()
                }
            }
        })
    }

    /// Failure rate `density / survival`. Errors once the survival has
    /// clamped to zero.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        let t = check_time(t)?;
        if self.survival(t)? == 0.0 {
            return Err(Error::OutOfSupport { t });
        }
        Ok(match self.family {
            Family::Gamma { .. } => self.density(t)? / self.raw_survival(t),
            _ => self.hazard_value(t),
        })
    }

    /// Hazard for the families whose cumulative hazard has a closed
    /// derivative; gamma is excluded.
    fn hazard_value(&self, t: f64) -> f64 {
        match self.family {
            Family::Exponential { rate } => rate,
            Family::Weibull { shape, scale } => {
                if t == 0.0 {
                    match shape.partial_cmp(&1.0).expect("validated shape") {
                        std::cmp::Ordering::Greater => 0.0,
                        std::cmp::Ordering::Equal => 1.0 / scale,
                        std::cmp::Ordering::Less => f64::INFINITY,
                    }
                } else {
                    (shape / scale) * (t / scale).powf(shape - 1.0)
                }
            }
            Family::StoyanovNbu => {
                if t <= FRAC_PI_2 {
                    (2.0 * t).sin()
                } else {
                    FRAC_PI_2
                }
            }
            Family::LaiXieNonMonotone => {
                if t == 0.0 {
                    f64::INFINITY
                } else {
                    (LAI_XIE_RATE * t).exp()
                        * (LAI_XIE_POWER * t.powf(LAI_XIE_POWER - 1.0)
                            + LAI_XIE_RATE * t.powf(LAI_XIE_POWER))
                }
            }
            Family::Gamma { .. } => unreachable!("gamma hazard uses density / survival"),
        }
    }

    /// Cumulative hazard `H(t) = -ln survival(t)`. Errors once the survival
    /// has clamped to zero.
    pub fn cumulative_hazard(&self, t: f64) -> Result<f64> {
        let t = check_time(t)?;
        if self.survival(t)? == 0.0 {
            return Err(Error::OutOfSupport { t });
        }
        Ok(self.closed_cumulative_hazard(t))
    }

    fn closed_cumulative_hazard(&self, t: f64) -> f64 {
        match self.family {
            Family::Exponential { rate } => rate * t,
            Family::Gamma { shape, scale } => {
                if t == 0.0 {
                    0.0
                } else {
                    -gamma_ur(shape, t / scale).ln()
                }
            }
            Family::Weibull { shape, scale } => (t / scale).powf(shape),
            Family::StoyanovNbu => {
                if t <= FRAC_PI_2 {
                    let s = t.sin();
                    s * s
                } else {
                    FRAC_PI_2 * (t - FRAC_PI_2) + 1.0
                }
            }
            Family::LaiXieNonMonotone => {
                if t == 0.0 {
                    0.0
                } else {
                    t.powf(LAI_XIE_POWER) * (LAI_XIE_RATE * t).exp()
                }
            }
        }
    }

    /// Inverse of the cumulative hazard: the time `t` with `H(t) = h`.
    ///
    /// Closed-form for `exp`, `weibull` and `stoyanov`; `gamma` and `laixie`
    /// bracket from `t = 1` by doubling and bisect to a relative width of
    /// `1e-12`.
    pub fn inverse_cumulative_hazard(&self, h: f64) -> Result<f64> {
        if !h.is_finite() || h < 0.0 {
            return Err(Error::Domain(format!("cumulative hazard {h} must be in [0, inf)")));
        }
        if h == 0.0 {
            return Ok(0.0);
        }
        Ok(match self.family {
            Family::Exponential { rate } => h / rate,
            Family::Weibull { shape, scale } => scale * h.powf(1.0 / shape),
            Family::StoyanovNbu => {
                if h <= 1.0 {
                    h.sqrt().asin()
                } else {
                    FRAC_PI_2 + (h - 1.0) / FRAC_PI_2
                }
            }
            Family::Gamma { .. } | Family::LaiXieNonMonotone => {
                self.bisect_cumulative_hazard(h)?
            }
        })
    }

    fn bisect_cumulative_hazard(&self, target: f64) -> Result<f64> {
        // Treat any region where the survival has underflowed as "hazard
        // above target": the solution always lies below it.
        let eval = |t: f64| -> f64 {
            let raw = self.raw_survival(t);
            if raw == 0.0 {
                f64::INFINITY
            } else {
                self.closed_cumulative_hazard(t)
            }
        };
        let mut hi = 1.0;
        let mut lo = 0.0;
        while eval(hi) < target {
            lo = hi;
            hi *= 2.0;
            if hi > self.workspace.bracket_bound {
                return Err(Error::Numeric(format!(
                    "no bracket for cumulative hazard {target} below bound {}",
                    self.workspace.bracket_bound
                )));
            }
        }
        for _ in 0..200 {
            if hi - lo <= BISECT_REL_WIDTH * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if eval(mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The time `t` with `P(T <= t) = p`, for `p` in `[0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Domain(format!("quantile level {p} outside [0, 1)")));
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        // -ln(1 - p) via ln_1p keeps small levels accurate
        self.inverse_cumulative_hazard(-(-p).ln_1p())
    }

    /// Inverse-transform sample: solves `survival(t) = u`.
    pub fn sample(&self, u: f64) -> Result<f64> {
        check_uniform(u)?;
        self.inverse_cumulative_hazard(-u.ln())
    }

    /// Sample conditioned on exceeding age `s`: solves
    /// `survival(t) / survival(s) = u`, i.e. `H(t) = H(s) - ln u`.
    ///
    /// Always returns strictly more than `s`; when `-ln u` vanishes against
    /// `H(s)` in floating point the result is nudged to the next float up.
    pub fn sample_conditional_exceed(&self, u: f64, s: f64) -> Result<f64> {
        check_uniform(u)?;
        let s = check_time(s)?;
        if self.survival(s)? == 0.0 {
            return Err(Error::OutOfSupport { t: s });
        }
        let t = self.inverse_cumulative_hazard(self.closed_cumulative_hazard(s) - u.ln())?;
        Ok(if t > s { t } else { s.next_up() })
    }

    /// Times at which the density jumps; consumers split integration ranges
    /// here.
    pub fn density_breakpoints(&self) -> Vec<f64> {
        match self.family {
            Family::StoyanovNbu => vec![FRAC_PI_2],
            _ => vec![],
        }
    }

    /// Exponent `alpha` such that the density behaves like `t^-alpha` as
    /// `t -> 0`; zero for families with a bounded density at the origin.
    pub fn left_tail_singularity(&self) -> f64 {
        match self.family {
            Family::Gamma { shape, .. } | Family::Weibull { shape, .. } => {
                (1.0 - shape).max(0.0)
            }
            Family::LaiXieNonMonotone => 1.0 - LAI_XIE_POWER,
            _ => 0.0,
        }
    }
}

// ---------------------------------------------------------------------------
// mini-grammar
// ---------------------------------------------------------------------------

/// Parses a key=value parameter list such as `shape=2,scale=1`.
fn parse_params<'a>(spec: &'a str, family: &str, keys: &[&str]) -> Result<Vec<f64>> {
    let expected = || format!("{family} parameters `{}`", keys.join(","));
    let mut values: Vec<Option<f64>> = vec![None; keys.len()];
    for pair in spec.split(',') {
        let (key, value) = pair.split_once('=').ok_or_else(|| Error::Parse {
            token: pair.to_string(),
            expected: format!("key=value with key in {}", keys.join("|")),
        })?;
        let slot = keys.iter().position(|k| *k == key.trim()).ok_or_else(|| Error::Parse {
            token: key.to_string(),
            expected: format!("one of {}", keys.join("|")),
        })?;
        if values[slot].is_some() {
            return Err(Error::Parse { token: key.to_string(), expected: "each key once".into() });
        }
        let parsed: f64 = value.trim().parse().map_err(|_| Error::Parse {
            token: value.to_string(),
            expected: "a finite number".into(),
        })?;
        values[slot] = Some(parsed);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::Parse { token: keys[i].to_string(), expected: expected() })
        })
        .collect()
}

impl FromStr for LifetimeDistribution {
    type Err = Error;

    /// Accepts `exp:rate=1`, `gamma:shape=2,scale=1`,
    /// `weibull:shape=2,scale=1`, `stoyanov` and `laixie`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (family, params) = match s.split_once(':') {
            Some((f, p)) => (f.trim(), Some(p)),
            None => (s, None),
        };
        match family {
            "exp" => {
                let p = params.ok_or_else(|| Error::Parse {
                    token: s.to_string(),
                    expected: "exp:rate=<positive>".into(),
                })?;
                let v = parse_params(p, "exp", &["rate"])?;
                Self::exponential(v[0])
            }
            "gamma" => {
                let p = params.ok_or_else(|| Error::Parse {
                    token: s.to_string(),
                    expected: "gamma:shape=<positive>,scale=<positive>".into(),
                })?;
                let v = parse_params(p, "gamma", &["shape", "scale"])?;
                Self::gamma(v[0], v[1])
            }
            "weibull" => {
                let p = params.ok_or_else(|| Error::Parse {
                    token: s.to_string(),
                    expected: "weibull:shape=<positive>,scale=<positive>".into(),
                })?;
                let v = parse_params(p, "weibull", &["shape", "scale"])?;
                Self::weibull(v[0], v[1])
            }
            "stoyanov" => {
                if params.is_some() {
                    return Err(Error::Parse {
                        token: s.to_string(),
                        expected: "`stoyanov` without parameters".into(),
                    });
                }
                Ok(Self::stoyanov_nbu())
            }
            "laixie" => {
                if params.is_some() {
                    return Err(Error::Parse {
                        token: s.to_string(),
                        expected: "`laixie` without parameters".into(),
                    });
                }
                Ok(Self::lai_xie_non_monotone())
            }
            other => Err(Error::Parse {
                token: other.to_string(),
                expected: "a family in exp|gamma|weibull|stoyanov|laixie".into(),
            }),
        }
    }
}

impl fmt::Display for LifetimeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Exponential { rate } => write!(f, "exp:rate={rate}"),
            Family::Gamma { shape, scale } => write!(f, "gamma:shape={shape},scale={scale}"),
            Family::Weibull { shape, scale } => write!(f, "weibull:shape={shape},scale={scale}"),
            Family::StoyanovNbu => write!(f, "stoyanov"),
            Family::LaiXieNonMonotone => write!(f, "laixie"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp1() -> LifetimeDistribution {
        LifetimeDistribution::exponential(1.0).unwrap()
    }
    fn gamma21() -> LifetimeDistribution {
        LifetimeDistribution::gamma(2.0, 1.0).unwrap()
    }

    fn all_families() -> Vec<LifetimeDistribution> {
        vec![
            exp1(),
            gamma21(),
            LifetimeDistribution::gamma(0.5, 1.0).unwrap(),
            LifetimeDistribution::weibull(2.0, 1.0).unwrap(),
            LifetimeDistribution::weibull(0.7, 1.3).unwrap(),
            LifetimeDistribution::stoyanov_nbu(),
            LifetimeDistribution::lai_xie_non_monotone(),
        ]
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LifetimeDistribution::exponential(0.0).is_err());
        assert!(LifetimeDistribution::exponential(-1.0).is_err());
        assert!(LifetimeDistribution::gamma(1.0, f64::NAN).is_err());
        assert!(LifetimeDistribution::weibull(f64::INFINITY, 1.0).is_err());
        assert!(exp1().survival(-0.1).is_err());
        assert!(exp1().survival(f64::NAN).is_err());
    }

    #[test]
    fn gamma_survival_matches_closed_form() {
        // shape 2, scale 1: survival(t) = (1 + t) e^-t
        for t in [0.0_f64, 0.3, 1.0, 2.5, 7.0] {
            let expected = (1.0 + t) * (-t).exp();
            let got = gamma21().survival(t).unwrap();
            assert!((got - expected).abs() < 1e-12, "t={t}: {got} vs {expected}");
        }
        assert!((gamma21().survival(1.0).unwrap() - 2.0 * (-1.0_f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn stoyanov_survival_is_continuous_across_the_knee() {
        let d = LifetimeDistribution::stoyanov_nbu();
        let e = (-1.0_f64).exp();
        assert!((d.survival(FRAC_PI_2).unwrap() - e).abs() < 1e-14);
        let below = d.survival(FRAC_PI_2 - 1e-9).unwrap();
        let above = d.survival(FRAC_PI_2 + 1e-9).unwrap();
        assert!((below - e).abs() < 1e-8);
        assert!((above - e).abs() < 1e-8);
    }

    #[test]
    fn stoyanov_density_jumps_at_the_knee() {
        let d = LifetimeDistribution::stoyanov_nbu();
        // left branch: sin(2t) e^-h -> 0 at pi/2; right branch: (pi/2) e^-1
        assert!(d.density(FRAC_PI_2).unwrap().abs() < 1e-12);
        let right = d.density(FRAC_PI_2 + 1e-12).unwrap();
        assert!((right - FRAC_PI_2 * (-1.0_f64).exp()).abs() < 1e-9, "right {right}");
    }

    #[test]
    fn stoyanov_density_beyond_the_knee() {
        let d = LifetimeDistribution::stoyanov_nbu();
        let t = std::f64::consts::PI;
        let h = FRAC_PI_2 * (t - FRAC_PI_2) + 1.0;
        let expected = FRAC_PI_2 * (-h).exp();
        assert!((d.density(t).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn lai_xie_survival_value() {
        let d = LifetimeDistribution::lai_xie_non_monotone();
        let expected = (-(1.1_f64).exp()).exp(); // t = 1: exp(-e^1.1) ~ 0.0496
        assert!((d.survival(1.0).unwrap() - expected).abs() < 1e-14);
        assert!((expected - 0.0496).abs() < 1e-4);
    }

    #[test]
    fn densities_match_survival_by_finite_differences() {
        // central difference of the survival, step 1e-5 (1 + t)
        for d in all_families() {
            for t in [0.2, 0.7, 1.0, 1.9, 3.1] {
                let h = 1e-5 * (1.0 + t);
                let fd =
                    (d.survival(t - h).unwrap() - d.survival(t + h).unwrap()) / (2.0 * h);
                let got = d.density(t).unwrap();
                assert!(
                    (got - fd).abs() < 1e-5 * (1.0 + got.abs()),
                    "{d}: density({t}) = {got} vs finite difference {fd}"
                );
            }
        }
    }

    #[test]
    fn exponential_density_and_hazard() {
        assert!((exp1().density(0.0).unwrap() - 1.0).abs() < 1e-15);
        for t in [0.0, 0.5, 3.0] {
            assert!((exp1().hazard(t).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn gamma_hazard_value() {
        // f(1)/S(1) = e^-1 / (2 e^-1) = 0.5
        assert!((gamma21().hazard(1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((gamma21().density(1.0).unwrap() - (-1.0_f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn lai_xie_hazard_is_non_monotone() {
        let d = LifetimeDistribution::lai_xie_non_monotone();
        let early = d.hazard(0.05).unwrap();
        let middle = d.hazard(0.3).unwrap();
        let late = d.hazard(2.5).unwrap();
        assert!(early > middle, "hazard should fall early: {early} vs {middle}");
        assert!(late > middle, "hazard should rise late: {late} vs {middle}");
    }

    #[test]
    fn cumulative_hazard_is_minus_log_survival() {
        for d in all_families() {
            for t in [0.1, 0.9, 2.2] {
                let h = d.cumulative_hazard(t).unwrap();
                let s = d.survival(t).unwrap();
                assert!((h + s.ln()).abs() < 1e-10, "{d} at {t}: H={h}, -lnS={}", -s.ln());
            }
        }
    }

    #[test]
    fn hazard_errors_when_survival_underflows() {
        let err = exp1().hazard(800.0).unwrap_err();
        assert!(matches!(err, Error::OutOfSupport { .. }), "got {err:?}");
        let err = exp1().cumulative_hazard(800.0).unwrap_err();
        assert!(matches!(err, Error::OutOfSupport { .. }), "got {err:?}");
        assert_eq!(exp1().survival(800.0).unwrap(), 0.0);
    }

    #[test]
    fn quantile_closed_forms() {
        let q = exp1().quantile(0.5).unwrap();
        assert!((q - std::f64::consts::LN_2).abs() < 1e-14);
        // stoyanov: P(T <= pi/2) = 1 - e^-1
        let p = 1.0 - (-1.0_f64).exp();
        let q = LifetimeDistribution::stoyanov_nbu().quantile(p).unwrap();
        assert!((q - FRAC_PI_2).abs() < 1e-9, "got {q}");
        let w = LifetimeDistribution::weibull(2.0, 1.0).unwrap();
        let q = w.quantile(0.5).unwrap();
        assert!((q - std::f64::consts::LN_2.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn quantile_round_trips_through_the_survival() {
        for d in all_families() {
            for i in 1..100 {
                let p = i as f64 / 100.0;
                let t = d.quantile(p).unwrap();
                let s = d.survival(t).unwrap();
                assert!(
                    (s - (1.0 - p)).abs() < 1e-9,
                    "{d}: survival(quantile({p})) = {s}"
                );
            }
            // tighter spot checks away from the tails
            for p in [0.1, 0.5, 0.9] {
                let t = d.quantile(p).unwrap();
                assert!((d.survival(t).unwrap() - (1.0 - p)).abs() < 1e-10, "{d} at {p}");
            }
        }
        assert_eq!(exp1().quantile(0.0).unwrap(), 0.0);
        assert!(exp1().quantile(1.0).is_err());
        assert!(exp1().quantile(-0.1).is_err());
    }

    #[test]
    fn sampling_inverts_the_survival() {
        for d in all_families() {
            for u in [0.9, 0.5, 0.1, 1e-6] {
                let t = d.sample(u).unwrap();
                assert!((d.survival(t).unwrap() - u).abs() < 1e-9, "{d}: u={u}");
            }
        }
        assert!(exp1().sample(0.0).is_err());
        assert!(exp1().sample(1.0).is_err());
    }

    #[test]
    fn conditional_sampling_is_memoryless_for_exponential() {
        for (u, s) in [(0.5, 0.0), (0.5, 2.0), (0.1, 1.0), (0.9, 4.5)] {
            let t = exp1().sample_conditional_exceed(u, s).unwrap();
            assert!((t - (s - u.ln())).abs() < 1e-12, "u={u}, s={s}: {t}");
        }
    }

    #[test]
    fn conditional_sampling_solves_the_ratio_equation() {
        // independent oracle: bisect survival(t)/survival(s) = u directly
        for d in all_families() {
            let s = 1.0;
            for u in [0.8, 0.5, 0.2] {
                let t = d.sample_conditional_exceed(u, s).unwrap();
                let target = u * d.survival(s).unwrap();
                let (mut lo, mut hi) = (s, s + 1.0);
                while d.survival(hi).unwrap() > target {
                    hi += 1.0;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if d.survival(mid).unwrap() > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let oracle = 0.5 * (lo + hi);
                assert!((t - oracle).abs() < 1e-7 * (1.0 + oracle), "{d}: {t} vs {oracle}");
            }
        }
    }

    #[test]
    fn conditional_sample_strictly_exceeds_the_age() {
        for d in all_families() {
            for s in [0.0, 0.5, 2.0] {
                for u in [1.0 - 1e-12, 0.99, 0.5] {
                    let t = d.sample_conditional_exceed(u, s).unwrap();
                    assert!(t > s, "{d}: sample {t} did not exceed age {s}");
                }
            }
        }
    }

    #[test]
    fn conditional_sampling_rejects_dead_age() {
        let err = exp1().sample_conditional_exceed(0.5, 800.0).unwrap_err();
        assert!(matches!(err, Error::OutOfSupport { .. }));
    }

    #[test]
    fn grammar_round_trips() {
        for text in
            ["exp:rate=1", "gamma:shape=2,scale=1", "weibull:shape=0.5,scale=3", "stoyanov", "laixie"]
        {
            let d: LifetimeDistribution = text.parse().unwrap();
            assert_eq!(d.to_string(), text);
            let again: LifetimeDistribution = d.to_string().parse().unwrap();
            assert_eq!(again, d);
        }
    }

    #[test]
    fn grammar_reports_offending_token() {
        let err = "gompertz:a=1".parse::<LifetimeDistribution>().unwrap_err();
        match err {
            Error::Parse { token, expected } => {
                assert_eq!(token, "gompertz");
                assert!(expected.contains("exp|gamma|weibull"), "{expected}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = "gamma:shape=2".parse::<LifetimeDistribution>().unwrap_err();
        match err {
            Error::Parse { token, .. } => assert_eq!(token, "scale"),
            other => panic!("unexpected {other:?}"),
        }
        let err = "gamma:shape=2,rate=1".parse::<LifetimeDistribution>().unwrap_err();
        match err {
            Error::Parse { token, expected } => {
                assert_eq!(token, "rate");
                assert!(expected.contains("shape|scale"), "{expected}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!("exp:rate=banana".parse::<LifetimeDistribution>().is_err());
        assert!("exp".parse::<LifetimeDistribution>().is_err());
        assert!("stoyanov:a=1".parse::<LifetimeDistribution>().is_err());
        assert!("exp:rate=-2".parse::<LifetimeDistribution>().is_err());
    }

    #[test]
    fn singularity_metadata() {
        assert_eq!(exp1().left_tail_singularity(), 0.0);
        assert_eq!(gamma21().left_tail_singularity(), 0.0);
        let g = LifetimeDistribution::gamma(0.5, 1.0).unwrap();
        assert!((g.left_tail_singularity() - 0.5).abs() < 1e-15);
        let lx = LifetimeDistribution::lai_xie_non_monotone();
        assert!((lx.left_tail_singularity() - 0.8).abs() < 1e-15);
        assert_eq!(LifetimeDistribution::stoyanov_nbu().density_breakpoints(), vec![FRAC_PI_2]);
        assert!(exp1().density_breakpoints().is_empty());
    }
}
