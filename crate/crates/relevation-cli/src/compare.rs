//! The `compare` subcommand: two ensembles, one verdict report.
//!
//! The A side is simulated on the master seed and the B side on seed + 1,
//! so the ensembles are independent and each is individually reproducible.
//! The optional coupling certificate instead drives both chains off one
//! shared uniform stream, which is where pathwise dominance can be observed
//! directly.

use serde::Serialize;

use relevation::curve::{dkw_half_width, log_grid};
use relevation::orders::{st_compare, OrderKind, OrderVerdict, Relation, Witness};
use relevation::process::{count_at, empirical_curve_set, simulate_coupled_paths, simulate_ensemble};
use relevation::{DistributionSequence, ProcessSpec};

use crate::{config, emit, CliError, CompareArgs};

#[derive(Serialize)]
struct PerArrival {
    n: usize,
    verdict: OrderVerdict,
}

#[derive(Serialize)]
struct CountingAt {
    t: f64,
    verdict: OrderVerdict,
}

#[derive(Serialize)]
struct CouplingReport {
    replications: u64,
    arrivals: usize,
    replacement_process: String,
    relevation_process: String,
    /// Fraction of paths on which every relevation arrival comes at or
    /// before the matching replacement arrival, and the reverse.
    relevation_below_fraction: f64,
    replacement_below_fraction: f64,
}

#[derive(Serialize)]
struct CompareReport {
    config: String,
    process_a: String,
    process_b: String,
    arrivals: usize,
    replications: u64,
    delta: f64,
    per_n: Vec<PerArrival>,
    counting: Vec<CountingAt>,
    coupling: Option<CouplingReport>,
}

pub fn run(args: &CompareArgs) -> Result<(), CliError> {
    config::check_run_shape(args.n, args.reps, args.delta)?;
    if args.grid_points < 2 {
        return Err(CliError::Config("--grid-points must be at least 2".into()));
    }
    for &t in &args.at {
        if !t.is_finite() || t <= 0.0 {
            return Err(CliError::Config(format!("--at times must be positive, got {t}")));
        }
    }

    let side_seq = |own: &[String]| -> Result<DistributionSequence, CliError> {
        if own.is_empty() {
            config::sequence_from(&args.dists, args.seq_file.as_deref(), args.extend.as_deref())
        } else {
            config::sequence_from(own, None, args.extend.as_deref())
        }
    };
    let seq_a = side_seq(&args.dists_a)?;
    let seq_b = side_seq(&args.dists_b)?;
    let spec_a = config::build_spec(&args.process_a, seq_a, args.offset, args.interval)?;
    let spec_b = config::build_spec(&args.process_b, seq_b, args.offset, args.interval)?;
    let label_a = spec_a.label();
    let label_b = spec_b.label();

    let seed_b = args.seed.wrapping_add(1);
    let paths_a = simulate_ensemble(&spec_a, args.n, args.reps, args.seed)?;
    let paths_b = simulate_ensemble(&spec_b, args.n, args.reps, seed_b)?;

    let t_lo = paths_a
        .iter()
        .chain(&paths_b)
        .map(|p| p.times[0])
        .fold(f64::INFINITY, f64::min);
    let t_hi = args.t_max.unwrap_or_else(|| {
        paths_a
            .iter()
            .chain(&paths_b)
            .map(|p| *p.times.last().unwrap())
            .fold(0.0, f64::max)
    });
    let grid = log_grid(t_lo, t_hi, args.grid_points)?;
    let set_a = empirical_curve_set(&paths_a, args.n, &grid, args.delta)?;
    let set_b = empirical_curve_set(&paths_b, args.n, &grid, args.delta)?;

    let mut per_n = Vec::with_capacity(args.n);
    for n in 1..=args.n {
        let verdict = st_compare(set_a.curve(n)?, set_b.curve(n)?)?;
        per_n.push(PerArrival { n, verdict });
    }

    let mut counting = Vec::with_capacity(args.at.len());
    for &t in &args.at {
        let verdict = counting_verdict(
            &count_at(&paths_a, t),
            &count_at(&paths_b, t),
            args.n,
            args.delta,
        )?;
        counting.push(CountingAt { t, verdict });
    }

    let coupling = if args.couple {
        Some(coupling_certificate(&spec_a, &spec_b, args.n, args.reps, args.seed)?)
    } else {
        None
    };

    let at_echo: Vec<String> = args.at.iter().map(|t| t.to_string()).collect();
    let echo = format!(
        "compare a={label_a} b={label_b} n={} reps={} seed={} delta={} grid-points={} \
         t-max={} at={} couple={} strict={}",
        args.n,
        args.reps,
        args.seed,
        args.delta,
        args.grid_points,
        args.t_max.map_or_else(|| "data".into(), |t| t.to_string()),
        if at_echo.is_empty() { "-".into() } else { at_echo.join(",") },
        args.couple,
        args.strict,
    );

    let inconclusive: Vec<String> = per_n
        .iter()
        .filter(|p| p.verdict.relation == Relation::Inconclusive)
        .map(|p| format!("arrival {}", p.n))
        .chain(
            counting
                .iter()
                .filter(|c| c.verdict.relation == Relation::Inconclusive)
                .map(|c| format!("counting at t = {}", c.t)),
        )
        .collect();

    let report = CompareReport {
        config: echo.clone(),
        process_a: label_a.clone(),
        process_b: label_b.clone(),
        arrivals: args.n,
        replications: args.reps,
        delta: args.delta,
        per_n,
        counting,
        coupling,
    };

    emit::with_sink(args.json_out.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, &report)
            .map_err(|e| CliError::Config(format!("could not serialize report: {e}")))?;
        writeln!(w)?;
        Ok(())
    })?;

    if let Some(curves_path) = &args.curves_out {
        emit::with_sink(Some(curves_path), |w| {
            emit::write_curves_header(w, &echo)?;
            for n in 1..=args.n {
                emit::write_curve_rows(w, set_a.curve(n)?, n, &format!("a:{label_a}"))?;
            }
            for n in 1..=args.n {
                emit::write_curve_rows(w, set_b.curve(n)?, n, &format!("b:{label_b}"))?;
            }
            Ok(())
        })?;
    }

    if args.strict && !inconclusive.is_empty() {
        return Err(CliError::Inconclusive(format!(
            "no certified verdict for {}",
            inconclusive.join(", ")
        )));
    }
    Ok(())
}

/// Usual stochastic order of the two counting variables `N(t)`, decided on
/// the empirical tail frequencies `P(N >= k)` for `k = 1..=n_max` with a
/// two-sided DKW tolerance. Mirrors the survival-curve scan, including the
/// rule that an uncertified but visible difference is inconclusive rather
/// than equal.
fn counting_verdict(
    counts_a: &[usize],
    counts_b: &[usize],
    n_max: usize,
    delta: f64,
) -> Result<OrderVerdict, CliError> {
    let tol = dkw_half_width(counts_a.len(), delta)? + dkw_half_width(counts_b.len(), delta)?;
    let tail = |counts: &[usize], k: usize| {
        counts.iter().filter(|&&c| c >= k).count() as f64 / counts.len() as f64
    };
    let mut hi: Option<Witness> = None;
    let mut lo: Option<Witness> = None;
    let mut brackets = Vec::new();
    let mut last: Option<(f64, i8)> = None;
    let mut max_abs = 0.0_f64;
    for k in 1..=n_max {
        let pa = tail(counts_a, k);
        let pb = tail(counts_b, k);
        let diff = pa - pb;
        max_abs = max_abs.max(diff.abs());
        let w = Witness { t: k as f64, a: pa, b: pb, difference: diff };
        let sign = if diff > tol {
            if hi.is_none_or(|best| diff > best.difference) {
                hi = Some(w);
            }
            1
        } else if diff < -tol {
            if lo.is_none_or(|best| diff < best.difference) {
                lo = Some(w);
            }
            -1
        } else {
            0
        };
        if sign != 0 {
            if let Some((k_prev, s_prev)) = last {
                if s_prev != sign {
                    brackets.push((k_prev, k as f64));
                }
            }
            last = Some((k as f64, sign));
        }
    }
    let mut witnesses = Vec::new();
    // a larger tail frequency means more arrivals, so the positive side of
    // the scan rules ALessB out
    let relation = match (lo, hi) {
        (None, None) => {
            if max_abs > relevation::orders::EXACT_FLOOR_TOL {
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
            Relation::Crossing(brackets)
        }
    };
    Ok(OrderVerdict {
        relation,
        order: OrderKind::St,
        tolerance: tol,
        grid_size: n_max,
        statistical: true,
        witnesses,
    })
}

/// Shared-uniform coupling of a renewal side with a relevation side; counts
/// on what fraction of paths one chain dominates the other componentwise.
fn coupling_certificate(
    spec_a: &ProcessSpec,
    spec_b: &ProcessSpec,
    n: usize,
    reps: u64,
    seed: u64,
) -> Result<CouplingReport, CliError> {
    let (x_seq, y_seq) = match (spec_a, spec_b) {
        (ProcessSpec::Renewal(x), ProcessSpec::Relevation(y)) => (x, y),
        (ProcessSpec::Relevation(y), ProcessSpec::Renewal(x)) => (x, y),
        _ => {
            return Err(CliError::Config(
                "--couple needs one renewal side and one relevation side".into(),
            ))
        }
    };
    let mut relev_below = 0u64;
    let mut repl_below = 0u64;
    for rep in 0..reps {
        let (repl, relev) = simulate_coupled_paths(x_seq, y_seq, n, seed, rep)?;
        if relev.times.iter().zip(&repl.times).all(|(r, s)| r <= s) {
            relev_below += 1;
        }
        if relev.times.iter().zip(&repl.times).all(|(r, s)| s <= r) {
            repl_below += 1;
        }
    }
    Ok(CouplingReport {
        replications: reps,
        arrivals: n,
        replacement_process: format!("renewal({x_seq})"),
        relevation_process: format!("relevation({y_seq})"),
        relevation_below_fraction: relev_below as f64 / reps as f64,
        replacement_below_fraction: repl_below as f64 / reps as f64,
    })
}
