//! The `simulate` subcommand.

use relevation::curve::log_grid;
use relevation::process::{empirical_curve_set, simulate_ensemble};

use crate::{config, emit, CliError, SimulateArgs};

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    config::check_run_shape(args.n, args.reps, args.delta)?;
    if args.grid_points < 2 {
        return Err(CliError::Config("--grid-points must be at least 2".into()));
    }
    let seq = config::sequence_from(&args.dists, args.seq_file.as_deref(), args.extend.as_deref())?;
    let spec = config::build_spec(&args.process, seq, args.offset, args.interval)?;

    let paths = simulate_ensemble(&spec, args.n, args.reps, args.seed)?;

    let echo = format!(
        "simulate process={} n={} reps={} seed={} delta={} grid-points={} t-max={}",
        spec.label(),
        args.n,
        args.reps,
        args.seed,
        args.delta,
        args.grid_points,
        args.t_max.map_or_else(|| "data".into(), |t| t.to_string()),
    );

    emit::with_sink(args.out.as_deref(), |w| emit::write_paths(w, &echo, &paths))?;

    if let Some(curves_path) = &args.curves_out {
        // grid ends at the largest simulated arrival unless pinned; both
        // choices are deterministic for a fixed seed
        let t_lo = paths.iter().map(|p| p.times[0]).fold(f64::INFINITY, f64::min);
        let t_hi = args.t_max.unwrap_or_else(|| {
            paths.iter().map(|p| *p.times.last().unwrap()).fold(0.0, f64::max)
        });
        let grid = log_grid(t_lo, t_hi, args.grid_points)?;
        let set = empirical_curve_set(&paths, args.n, &grid, args.delta)?;
        let label = spec.label();
        emit::with_sink(Some(curves_path), |w| {
            emit::write_curves_header(w, &echo)?;
            for n in 1..=args.n {
                emit::write_curve_rows(w, set.curve(n)?, n, &label)?;
            }
            Ok(())
        })?;
    }
    Ok(())
}
