//! The `figure` subcommand: two built-in demonstration tables.
//!
//! `cox` puts the one-step relevation survival next to the two-unit
//! replacement survival under the non-monotone bathtub law on (0, 3]; the
//! curves cross, which is the whole point of the demonstration. `age`
//! compares minimal repair (exact, closed form) with age replacement
//! (simulated) under the sine-hazard law for replacement ages
//! K in {0.5, 1, 2}.

use relevation::curve::log_grid;
use relevation::epb::minimal_repair_marginal;
use relevation::process::{empirical_curve_set, simulate_ensemble};
use relevation::{LifetimeDistribution, ProcessSpec};

use crate::{config, emit, svg, transform, CliError, FigureArgs};

const AGE_INTERVALS: [f64; 3] = [0.5, 1.0, 2.0];
const AGE_ARRIVALS: usize = 4;
/// Cumulative-hazard level bounding the age figure's grid; the fourth
/// minimal-repair arrival still has about 1% survival there.
const AGE_HAZARD_SPAN: f64 = 10.0;

pub fn run(args: &FigureArgs) -> Result<(), CliError> {
    match args.name.as_str() {
        "cox" => cox(args),
        "age" => age(args),
        other => Err(CliError::Config(format!(
            "unknown figure `{other}`; available figures are cox and age"
        ))),
    }
}

fn cox(args: &FigureArgs) -> Result<(), CliError> {
    let points = args.points.unwrap_or(512);
    let law = LifetimeDistribution::lai_xie_non_monotone();
    let curves = transform::compute(&law, &law, 3.0, points)?;
    let echo = format!("figure name=cox points={points} t-max=3");
    emit::with_sink(args.out.as_deref(), |w| transform::write_csv(w, &echo, &curves))?;
    if let Some(svg_path) = &args.svg {
        std::fs::write(svg_path, transform::chart(&curves, "second arrival survival"))?;
    }
    Ok(())
}

fn age(args: &FigureArgs) -> Result<(), CliError> {
    let seed = args
        .seed
        .ok_or_else(|| CliError::Config("figure age simulates and needs --seed".into()))?;
    config::check_run_shape(AGE_ARRIVALS, args.reps, args.delta)?;
    let points = args.points.unwrap_or(64);
    if points < 2 {
        return Err(CliError::Config("--points must be at least 2".into()));
    }

    let law = LifetimeDistribution::stoyanov_nbu();
    let t_max = law.inverse_cumulative_hazard(AGE_HAZARD_SPAN)?;
    let grid = log_grid(law.quantile(0.005)?, t_max, points)?;

    let repair: Vec<Vec<f64>> = (1..=AGE_ARRIVALS)
        .map(|n| grid.iter().map(|&t| minimal_repair_marginal(&law, n, t)).collect())
        .collect::<relevation::Result<_>>()?;

    // one independent ensemble per replacement age, each on its own seed
    let mut age_sets = Vec::with_capacity(AGE_INTERVALS.len());
    for (idx, &k) in AGE_INTERVALS.iter().enumerate() {
        let spec = ProcessSpec::AgeReplacement { dist: law.clone(), interval: k };
        let paths = simulate_ensemble(&spec, AGE_ARRIVALS, args.reps, seed.wrapping_add(idx as u64))?;
        age_sets.push(empirical_curve_set(&paths, AGE_ARRIVALS, &grid, args.delta)?);
    }

    let echo = format!(
        "figure name=age reps={} seed={seed} delta={} points={points} k=0.5,1,2 t-max={t_max}",
        args.reps, args.delta,
    );

    emit::with_sink(args.out.as_deref(), |w| {
        emit::write_config_line(w, &echo)?;
        writeln!(w, "t,n,k,minimal_repair,age_survival,age_lower,age_upper")?;
        for (set, &k) in age_sets.iter().zip(&AGE_INTERVALS) {
            for n in 1..=AGE_ARRIVALS {
                let curve = set.curve(n)?;
                let half = curve.kind().half_width();
                for ((&t, &mr), &emp) in
                    grid.iter().zip(&repair[n - 1]).zip(curve.values())
                {
                    writeln!(
                        w,
                        "{},{n},{k},{},{},{},{}",
                        emit::fmt(t),
                        emit::fmt(mr),
                        emit::fmt(emp),
                        emit::fmt((emp - half).max(0.0)),
                        emit::fmt((emp + half).min(1.0)),
                    )?;
                }
            }
        }
        Ok(())
    })?;

    if let Some(svg_path) = &args.svg {
        let mut series = Vec::new();
        for n in 1..=AGE_ARRIVALS {
            series.push(svg::Series {
                name: format!("minimal-repair n={n}"),
                points: grid.iter().copied().zip(repair[n - 1].iter().copied()).collect(),
            });
        }
        for (set, &k) in age_sets.iter().zip(&AGE_INTERVALS) {
            for n in 1..=AGE_ARRIVALS {
                let curve = set.curve(n)?;
                series.push(svg::Series {
                    name: format!("age k={k} n={n}"),
                    points: grid.iter().copied().zip(curve.values().iter().copied()).collect(),
                });
            }
        }
        std::fs::write(svg_path, svg::line_chart("minimal repair vs age replacement", &series))?;
    }
    Ok(())
}
