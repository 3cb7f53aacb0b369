//! Chebyshev interpolation on an interval.
//!
//! The marginal recursion tabulates each level's running integral at
//! Chebyshev-Lobatto nodes and evaluates it everywhere else through the
//! resulting polynomial. Coefficients come from the standard cosine
//! transform of the node values; evaluation uses the Clenshaw recurrence.
//! The decay of the trailing coefficients doubles as the convergence
//! diagnostic.

use crate::error::{Error, Result};

/// Largest panel count tried by the adaptive fit.
pub const MAX_PANELS: usize = 1024;

/// Chebyshev-Lobatto nodes on `[lo, hi]` in ascending order
/// (`panels + 1` points, endpoints included).
pub fn lobatto_nodes(lo: f64, hi: f64, panels: usize) -> Vec<f64> {
    assert!(panels >= 1 && hi > lo, "need at least one panel on a proper interval");
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let n = panels as f64;
    let mut nodes: Vec<f64> = (0..=panels)
        .map(|j| mid - half * (std::f64::consts::PI * j as f64 / n).cos())
        .collect();
    nodes[0] = lo;
    nodes[panels] = hi;
    nodes
}

/// Polynomial interpolant through values at Chebyshev-Lobatto nodes.
#[derive(Debug, Clone)]
pub struct ChebyshevInterpolant {
    lo: f64,
    hi: f64,
    /// Coefficients of `sum c_k T_k(z)` with `z` the interval mapped to
    /// `[-1, 1]`; no implicit halving.
    coeffs: Vec<f64>,
}

impl ChebyshevInterpolant {
    /// Builds the interpolant from values at [`lobatto_nodes`] in the same
    /// ascending order.
    pub fn from_values_ascending(lo: f64, hi: f64, values: &[f64]) -> Result<Self> {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain(format!("bad interpolation interval [{lo}, {hi}]")));
        }
        if values.len() < 2 {
            return Err(Error::Domain("interpolation needs at least two node values".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite value at interpolation node".into()));
        }
        let n = values.len() - 1;
        // the cosine transform below indexes values with descending x
        let desc: Vec<f64> = values.iter().rev().copied().collect();
        let mut coeffs = vec![0.0; n + 1];
        let scale = 2.0 / n as f64;
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.5 * (desc[0] + if k % 2 == 0 { desc[n] } else { -desc[n] });
            for (j, &v) in desc.iter().enumerate().take(n).skip(1) {
                acc += v * (std::f64::consts::PI * (j * k) as f64 / n as f64).cos();
            }
            *c = scale * acc;
        }
        coeffs[0] *= 0.5;
        coeffs[n] *= 0.5;
        Ok(Self { lo, hi, coeffs })
    }

    /// Adaptive fit of a function: panel count doubles from 16 until the
    /// coefficient tail drops below `tail_tol` or [`MAX_PANELS`] is hit.
    pub fn fit<F: FnMut(f64) -> Result<f64>>(
        mut f: F,
        lo: f64,
        hi: f64,
        tail_tol: f64,
    ) -> Result<Self> {
        let mut panels = 16;
        let mut values: Vec<f64> =
            lobatto_nodes(lo, hi, panels).iter().map(|&x| f(x)).collect::<Result<_>>()?;
        loop {
            let interp = Self::from_values_ascending(lo, hi, &values)?;
            if interp.tail_magnitude() <= tail_tol {
                return Ok(interp);
            }
            if panels >= MAX_PANELS {
                return Err(Error::Numeric(format!(
                    "chebyshev fit on [{lo}, {hi}] still has coefficient tail {:.3e} \
                     (target {tail_tol:.3e}) at {panels} panels",
                    interp.tail_magnitude()
                )));
            }
            panels *= 2;
            let nodes = lobatto_nodes(lo, hi, panels);
            let mut refined = Vec::with_capacity(panels + 1);
            for (j, &x) in nodes.iter().enumerate() {
                if j % 2 == 0 {
                    refined.push(values[j / 2]);
                } else {
                    refined.push(f(x)?);
                }
            }
            values = refined;
        }
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn panels(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest coefficient magnitude in the top eighth of the spectrum.
    pub fn tail_magnitude(&self) -> f64 {
        let n = self.coeffs.len();
        let tail = (n / 8).max(2).min(n);
        self.coeffs[n - tail..].iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Evaluates the interpolant; `x` is clamped to the interval so that
    /// floating-point spill at the endpoints stays harmless.
    pub fn eval(&self, x: f64) -> f64 {
        let z = ((2.0 * x - self.lo - self.hi) / (self.hi - self.lo)).clamp(-1.0, 1.0);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let next = 2.0 * z * b1 - b2 + c;
            b2 = b1;
            b1 = next;
        }
        z * b1 - b2 + self.coeffs[0]
    }
}
