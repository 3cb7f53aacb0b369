//! The `relevation-curve` subcommand: exact second-arrival survival under
//! relevation repair next to replacement by new, both by quadrature.

use std::str::FromStr;

use relevation::epb::{relevation_transform, renewal_sum_survival};
use relevation::LifetimeDistribution;

use crate::{emit, svg, CliError, CurveArgs};

pub struct PairCurves {
    pub grid: Vec<f64>,
    pub relevation: Vec<f64>,
    pub renewal: Vec<f64>,
    pub label_relevation: String,
    pub label_renewal: String,
}

/// Evaluates both survivals on a uniform grid of `points` times in
/// `(0, t_max]`.
pub fn compute(
    first: &LifetimeDistribution,
    second: &LifetimeDistribution,
    t_max: f64,
    points: usize,
) -> Result<PairCurves, CliError> {
    if points < 2 {
        return Err(CliError::Config("--points must be at least 2".into()));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(CliError::Config(format!("--t-max must be positive, got {t_max}")));
    }
    let grid: Vec<f64> = (1..=points).map(|i| t_max * i as f64 / points as f64).collect();
    let mut relevation = Vec::with_capacity(points);
    let mut renewal = Vec::with_capacity(points);
    for &t in &grid {
        relevation.push(relevation_transform(first, second, t)?);
        renewal.push(renewal_sum_survival(first, second, t)?);
    }
    Ok(PairCurves {
        grid,
        relevation,
        renewal,
        label_relevation: format!("relevation({first}|{second})"),
        label_renewal: format!("renewal({first}|{second})"),
    })
}

pub fn write_csv(
    w: &mut dyn std::io::Write,
    config: &str,
    curves: &PairCurves,
) -> Result<(), CliError> {
    emit::write_config_line(w, config)?;
    writeln!(w, "t,relevation,renewal")?;
    for ((&t, &rel), &ren) in curves.grid.iter().zip(&curves.relevation).zip(&curves.renewal) {
        writeln!(w, "{},{},{}", emit::fmt(t), emit::fmt(rel), emit::fmt(ren))?;
    }
    Ok(())
}

pub fn chart(curves: &PairCurves, title: &str) -> String {
    let series = [
        svg::Series {
            name: curves.label_relevation.clone(),
            points: curves.grid.iter().copied().zip(curves.relevation.iter().copied()).collect(),
        },
        svg::Series {
            name: curves.label_renewal.clone(),
            points: curves.grid.iter().copied().zip(curves.renewal.iter().copied()).collect(),
        },
    ];
    svg::line_chart(title, &series)
}

pub fn run(args: &CurveArgs) -> Result<(), CliError> {
    let first = LifetimeDistribution::from_str(&args.first)?;
    let second = LifetimeDistribution::from_str(&args.second)?;
    let t_max = match args.t_max {
        Some(t) => t,
        None => first.quantile(0.995)? + second.quantile(0.995)?,
    };
    let curves = compute(&first, &second, t_max, args.points)?;
    let echo = format!(
        "relevation-curve first={first} second={second} points={} t-max={t_max}",
        args.points
    );
    emit::with_sink(args.out.as_deref(), |w| write_csv(w, &echo, &curves))?;
    if let Some(svg_path) = &args.svg {
        std::fs::write(svg_path, chart(&curves, "second arrival survival"))?;
    }
    Ok(())
}
