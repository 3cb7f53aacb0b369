//! Acceptance suite. Each test checks one shipped guarantee end to end,
//! prints a single `criterion NN PASS` line with the measured numbers, and
//! asserts its runtime budget where one is part of the guarantee. Run with
//! `--nocapture` to see the lines.

use std::process::Command;
use std::time::{Duration, Instant};

use relevation::curve::{log_grid, CurveKind};
use relevation::orders::{dyn_hr_compare, history_pair_sampler, st_compare, Relation};
use relevation::process::{empirical_curve_set, simulate_coupled_paths, simulate_ensemble};
use relevation::{
    ageing, epb_marginal, relevation_transform, ArrivalPath, DistributionSequence,
    LifetimeDistribution, ProcessSpec, SurvivalCurve, TriState,
};
use relevation::epb::renewal_sum_survival;

fn dist(s: &str) -> LifetimeDistribution {
    s.parse().expect(s)
}

fn grid_to(t_max: f64, points: usize) -> Vec<f64> {
    std::iter::once(0.0)
        .chain((1..=points).map(|i| t_max * i as f64 / points as f64))
        .collect()
}

fn data_grid(paths: &[&[ArrivalPath]], points: usize) -> Vec<f64> {
    let t_lo = paths
        .iter()
        .flat_map(|set| set.iter())
        .map(|p| p.times[0])
        .fold(f64::INFINITY, f64::min);
    let t_hi = paths
        .iter()
        .flat_map(|set| set.iter())
        .map(|p| *p.times.last().unwrap())
        .fold(0.0, f64::max);
    log_grid(t_lo, t_hi, points).unwrap()
}

#[test]
fn criterion_01_exponential_relevation_matches_closed_form() {
    let clock = Instant::now();
    let unit = dist("exp:rate=1");
    let mut worst = 0.0_f64;
    for &t in &[0.25, 0.5, 1.0, 2.0, 4.0] {
        let got = relevation_transform(&unit, &unit, t).unwrap();
        let want = (1.0 + t) * (-t).exp();
        worst = worst.max((got - want).abs());
    }
    assert!(worst < 1e-6, "worst deviation {worst:.3e}");
    let elapsed = clock.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "criterion 01 PASS: exp(1) relevation matches (1+t)e^-t, worst {worst:.2e}, {elapsed:?}"
    );
}

#[test]
fn criterion_02_minimal_repair_marginals_match_poisson_form() {
    let clock = Instant::now();
    let weib = dist("weibull:shape=2,scale=1");
    let seq = DistributionSequence::iid(weib.clone());
    let grid = grid_to(3.0, 256);

    // closed form: survival of the n-th arrival is the upper Poisson tail
    // in the cumulative hazard t^2
    let exact_at = |n: usize, t: f64| {
        let h = t * t;
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 0..n {
            if k > 0 {
                term *= h / k as f64;
            }
            sum += term;
        }
        (-h).exp() * sum
    };

    let mut worst_exact = 0.0_f64;
    let mut exact_curves = Vec::new();
    for n in 2..=4 {
        let curve = epb_marginal(&seq, n, &grid).unwrap();
        for (&t, &v) in curve.grid().iter().zip(curve.values()) {
            worst_exact = worst_exact.max((v - exact_at(n, t)).abs());
        }
        exact_curves.push(curve);
    }
    assert!(worst_exact < 1e-6, "marginal recursion off by {worst_exact:.3e}");

    let paths = simulate_ensemble(&ProcessSpec::MinimalRepair(weib), 4, 100_000, 22_026).unwrap();
    let set = empirical_curve_set(&paths, 4, &grid, 0.01).unwrap();
    let mut worst_mc = 0.0_f64;
    let mut band = 0.0_f64;
    for (curve, n) in exact_curves.iter().zip(2..=4usize) {
        let empirical = set.curve(n).unwrap();
        band = empirical.kind().half_width();
        for (&v_exact, &v_emp) in curve.values().iter().zip(empirical.values()) {
            worst_mc = worst_mc.max((v_exact - v_emp).abs());
        }
    }
    assert!(worst_mc <= band, "Monte Carlo residual {worst_mc:.3e} beyond band {band:.3e}");
    let elapsed = clock.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!(
        "criterion 02 PASS: Weibull(2,1) marginals n=2..4 within {worst_exact:.2e} of the \
         closed form, Monte Carlo within {worst_mc:.2e} of band {band:.2e}, {elapsed:?}"
    );
}

/// Exact second-arrival curves for the non-monotone-hazard law on (0, t_max],
/// compared as survival curves; returns the certified crossing brackets.
fn crossing_brackets(points: usize) -> Vec<(f64, f64)> {
    let law = LifetimeDistribution::lai_xie_non_monotone();
    let grid = grid_to(3.0, points);
    let mut rel = vec![1.0];
    let mut ren = vec![1.0];
    for &t in &grid[1..] {
        rel.push(relevation_transform(&law, &law, t).unwrap());
        ren.push(renewal_sum_survival(&law, &law, t).unwrap());
    }
    let kind = CurveKind::Exact { tolerance: 1e-7 };
    let a = SurvivalCurve::new(grid.clone(), rel, kind).unwrap();
    let b = SurvivalCurve::new(grid, ren, kind).unwrap();
    match st_compare(&a, &b).unwrap().relation {
        Relation::Crossing(brackets) => brackets,
        other => panic!("expected a certified crossing at {points} points, got {other:?}"),
    }
}

#[test]
fn criterion_03_relevation_and_renewal_curves_cross() {
    let mut first_brackets = Vec::new();
    for points in [256usize, 512, 1024] {
        let brackets = crossing_brackets(points);
        assert!(!brackets.is_empty(), "no certified sign change at {points} points");
        first_brackets.push((points, brackets[0]));
    }
    for pair in first_brackets.windows(2) {
        let (coarse_pts, (cl, cr)) = pair[0];
        let (fine_pts, (fl, fr)) = pair[1];
        assert!(
            fl <= cr && cl <= fr,
            "brackets ({cl}, {cr}) at {coarse_pts} and ({fl}, {fr}) at {fine_pts} do not overlap"
        );
        assert!(fr - fl <= cr - cl + 1e-12, "bracket widened under refinement");
    }
    let (l, r) = first_brackets[2].1;
    println!(
        "criterion 03 PASS: certified sign change stable at 256/512/1024 points, \
         finest bracket ({l:.4}, {r:.4})"
    );
}

/// Shared-uniform coupling of an iid renewal chain against the matching
/// relevation chain; checks pathwise dominance on every replication and the
/// certified stochastic order of the marginal curves.
fn coupled_case(law: &str, relevation_on_top: bool) -> (f64, Duration) {
    let clock = Instant::now();
    let seq = DistributionSequence::iid(dist(law));
    let n = 5;
    let reps = 100_000u64;
    let mut repl_paths = Vec::with_capacity(reps as usize);
    let mut relev_paths = Vec::with_capacity(reps as usize);
    let mut dominated = 0u64;
    for rep in 0..reps {
        let (repl, relev) = simulate_coupled_paths(&seq, &seq, n, 42_026, rep).unwrap();
        let ok = if relevation_on_top {
            relev.times.iter().zip(&repl.times).all(|(r, s)| s <= r)
        } else {
            relev.times.iter().zip(&repl.times).all(|(r, s)| r <= s)
        };
        dominated += ok as u64;
        repl_paths.push(repl);
        relev_paths.push(relev);
    }
    let fraction = dominated as f64 / reps as f64;
    assert_eq!(fraction, 1.0, "pathwise dominance failed for {law}");

    let grid = data_grid(&[&repl_paths, &relev_paths], 96);
    let set_relev = empirical_curve_set(&relev_paths, n, &grid, 0.01).unwrap();
    let set_repl = empirical_curve_set(&repl_paths, n, &grid, 0.01).unwrap();
    for k in 1..=n {
        let verdict =
            st_compare(set_relev.curve(k).unwrap(), set_repl.curve(k).unwrap()).unwrap();
        let expected = if k == 1 {
            // the coupling shares the first uniform, so the first-arrival
            // curves coincide exactly
            Relation::Equal
        } else if relevation_on_top {
            Relation::BLessA
        } else {
            Relation::ALessB
        };
        assert_eq!(verdict.relation, expected, "{law} arrival {k}");
    }
    (fraction, clock.elapsed())
}

#[test]
fn criterion_04_coupled_chains_order_pathwise_and_in_distribution() {
    let (frac_ifr, t_ifr) = coupled_case("gamma:shape=2,scale=1", false);
    assert!(t_ifr < Duration::from_secs(60), "increasing-hazard case took {t_ifr:?}");
    let (frac_dfr, t_dfr) = coupled_case("gamma:shape=0.5,scale=1", true);
    assert!(t_dfr < Duration::from_secs(60), "decreasing-hazard case took {t_dfr:?}");
    println!(
        "criterion 04 PASS: 100k coupled paths n<=5 dominated on {:.1}% / {:.1}% of \
         replications with matching curve verdicts, {t_ifr:?} and {t_dfr:?}",
        100.0 * frac_ifr,
        100.0 * frac_dfr,
    );
}

#[test]
fn criterion_05_counting_and_arrival_views_agree_exactly() {
    let specs: Vec<ProcessSpec> = vec![
        ProcessSpec::Renewal(DistributionSequence::iid(dist("exp:rate=1"))),
        ProcessSpec::Relevation(
            DistributionSequence::new(
                vec![dist("gamma:shape=2,scale=1"), dist("exp:rate=2")],
                relevation::ExtendRule::RepeatLast,
            )
            .unwrap(),
        ),
        ProcessSpec::MinimalRepair(dist("stoyanov")),
        ProcessSpec::Yule { base: dist("weibull:shape=2,scale=1"), offset: 1.0 },
        ProcessSpec::AgeReplacement { dist: dist("stoyanov"), interval: 1.0 },
    ];
    let n = 4;
    let mut checked = 0u64;
    for (i, spec) in specs.iter().enumerate() {
        let paths = simulate_ensemble(spec, n, 500, 500 + i as u64).unwrap();
        let grid = data_grid(&[&paths], 64);
        for path in &paths {
            // grid times plus the arrival times themselves, so the tie
            // convention is exercised as well
            for &t in grid.iter().chain(&path.times) {
                for k in 1..=n {
                    let by_count = path.count_at(t) < k;
                    let by_time = path.times[k - 1] > t;
                    assert!(
                        by_count == by_time,
                        "{} path {} at t={t}: count view {by_count}, time view {by_time}",
                        spec.label(),
                        path.replication
                    );
                    checked += 1;
                }
            }
        }
    }
    println!("criterion 05 PASS: counting/arrival equivalence held at {checked} cells");
}

#[test]
fn criterion_06_minimal_repair_stays_below_age_replacement_bands() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("age.csv");
    let clock = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_relevation"))
        .args(["figure", "age", "--seed", "2026", "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    let elapsed = clock.elapsed();
    assert!(status.success());
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");

    let table = std::fs::read_to_string(&out).unwrap();
    let mut rows = 0usize;
    let mut worst_margin = f64::INFINITY;
    let mut seen: std::collections::BTreeSet<(String, String)> = Default::default();
    for line in table.lines().skip(2) {
        let cells: Vec<&str> = line.split(',').collect();
        let repair: f64 = cells[3].parse().unwrap();
        let upper: f64 = cells[6].parse().unwrap();
        assert!(
            repair <= upper,
            "repair curve above the replacement band on row {line}"
        );
        worst_margin = worst_margin.min(upper - repair);
        seen.insert((cells[2].to_string(), cells[1].to_string()));
        rows += 1;
    }
    for k in ["0.5", "1", "2"] {
        for n in ["1", "2", "3", "4"] {
            assert!(seen.contains(&(k.to_string(), n.to_string())), "missing k={k} n={n}");
        }
    }
    println!(
        "criterion 06 PASS: repair curve under every replacement band at {rows} cells, \
         smallest margin {worst_margin:.2e}, {elapsed:?}"
    );
}

#[test]
fn criterion_07_ageing_classifier_hits_the_anchor_families() {
    use TriState::{Boundary, No, Yes};
    let cases: [(&str, [TriState; 4]); 5] = [
        ("gamma:shape=2,scale=1", [Yes, No, Yes, No]),
        ("gamma:shape=0.5,scale=1", [No, Yes, No, Yes]),
        ("exp:rate=1", [Boundary, Boundary, Boundary, Boundary]),
        ("stoyanov", [No, No, Yes, No]),
        ("laixie", [No, No, No, No]),
    ];
    for (name, [ifr, dfr, nbu, nwu]) in cases {
        let report = ageing::classify(&dist(name)).unwrap();
        assert_eq!(report.ifr, ifr, "{name} ifr");
        assert_eq!(report.dfr, dfr, "{name} dfr");
        assert_eq!(report.nbu, nbu, "{name} nbu");
        assert_eq!(report.nwu, nwu, "{name} nwu");
        for (property, verdict) in
            [("ifr", ifr), ("dfr", dfr), ("nbu", nbu), ("nwu", nwu)]
        {
            let has_witness = report.witnesses.iter().any(|w| w.property == property);
            assert_eq!(
                verdict == TriState::No,
                has_witness,
                "{name} {property} witness presence"
            );
        }
    }
    println!("criterion 07 PASS: five anchor families classified with witnesses for every no");
}

#[test]
fn criterion_08_conditional_hazards_order_across_history_pairs() {
    let cases = [
        ("gamma:shape=2,scale=1", Relation::ALessB),
        ("gamma:shape=0.5,scale=1", Relation::BLessA),
    ];
    let mut pairs_checked = 0usize;
    for (name, expected) in cases {
        let seq = DistributionSequence::iid(dist(name));
        for (i, &t) in [0.5, 1.0, 2.0].iter().enumerate() {
            let pairs = history_pair_sampler(800 + i as u64, 10_000, t, 4).unwrap();
            let verdict = dyn_hr_compare(&seq, &seq, &pairs).unwrap();
            assert_eq!(verdict.relation, expected, "{name} at t = {t}");
            pairs_checked += pairs.len();
        }
    }
    println!(
        "criterion 08 PASS: conditional hazard direction held over {pairs_checked} \
         sampled history pairs with no violation beyond 1e-12"
    );
}

#[test]
fn criterion_09_exponential_law_makes_every_policy_equivalent() {
    let unit = dist("exp:rate=1");
    let seq = DistributionSequence::iid(unit.clone());
    let reps = 50_000u64;
    let renewal =
        simulate_ensemble(&ProcessSpec::Renewal(seq.clone()), 5, reps, 900).unwrap();
    let relev = simulate_ensemble(&ProcessSpec::Relevation(seq), 5, reps, 901).unwrap();
    let grid = data_grid(&[&renewal, &relev], 96);
    let set_renewal = empirical_curve_set(&renewal, 5, &grid, 0.01).unwrap();
    let set_relev = empirical_curve_set(&relev, 5, &grid, 0.01).unwrap();
    let mut worst = 0.0_f64;
    let mut allowed = 0.0_f64;
    for n in 1..=5 {
        let a = set_renewal.curve(n).unwrap();
        let b = set_relev.curve(n).unwrap();
        allowed = a.kind().half_width() + b.kind().half_width();
        for (&va, &vb) in a.values().iter().zip(b.values()) {
            worst = worst.max((va - vb).abs());
        }
    }
    assert!(worst <= allowed, "relevation/renewal gap {worst:.3e} beyond {allowed:.3e}");

    let first_failure = set_renewal.curve(1).unwrap();
    let mut worst_age = 0.0_f64;
    for (i, &k) in [0.5, 1.0, 2.0].iter().enumerate() {
        let spec = ProcessSpec::AgeReplacement { dist: unit.clone(), interval: k };
        let paths = simulate_ensemble(&spec, 1, reps, 910 + i as u64).unwrap();
        let set = empirical_curve_set(&paths, 1, &grid, 0.01).unwrap();
        let curve = set.curve(1).unwrap();
        let band = first_failure.kind().half_width() + curve.kind().half_width();
        for (&va, &vb) in first_failure.values().iter().zip(curve.values()) {
            worst_age = worst_age.max((va - vb).abs());
            assert!(
                (va - vb).abs() <= band,
                "age replacement K={k} first-failure gap {:.3e} beyond {band:.3e}",
                (va - vb).abs()
            );
        }
    }
    println!(
        "criterion 09 PASS: exp(1) policies indistinguishable, gaps {worst:.2e} \
         (relevation) and {worst_age:.2e} (age replacement) inside 2x DKW"
    );
}

#[test]
fn criterion_10_outputs_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_relevation");
    let jobs: [(&str, Vec<&str>); 3] = [
        (
            "simulate",
            vec![
                "simulate", "--process", "relevation", "--dist", "gamma:shape=2,scale=1",
                "--n", "4", "--reps", "2000", "--seed", "11",
            ],
        ),
        (
            "compare",
            vec![
                "compare", "--process-a", "relevation", "--process-b", "renewal", "--dist",
                "gamma:shape=2,scale=1", "--n", "3", "--reps", "2000", "--seed", "12",
                "--at", "1,2",
            ],
        ),
        ("figure", vec!["figure", "age", "--seed", "13", "--reps", "2000", "--points", "16"]),
    ];
    for (label, args) in jobs {
        let mut outputs: Vec<(String, Vec<u8>, Vec<u8>)> = Vec::new();
        for threads in ["1", "4", "8"] {
            let main_out = dir.path().join(format!("{label}-{threads}.out"));
            let curves_out = dir.path().join(format!("{label}-{threads}.curves"));
            let mut full = args.clone();
            let sink_flag = match label {
                "compare" => "--json-out",
                _ => "--out",
            };
            full.extend([sink_flag, main_out.to_str().unwrap()]);
            if label != "figure" {
                full.extend(["--curves-out", curves_out.to_str().unwrap()]);
            }
            let status = Command::new(bin)
                .args(&full)
                .env("RAYON_NUM_THREADS", threads)
                .status()
                .unwrap();
            assert!(status.success(), "{label} with {threads} threads");
            let curves = if label == "figure" {
                Vec::new()
            } else {
                std::fs::read(&curves_out).unwrap()
            };
            outputs.push((threads.to_string(), std::fs::read(&main_out).unwrap(), curves));
        }
        for (threads, main, curves) in &outputs[1..] {
            assert_eq!(
                main, &outputs[0].1,
                "{label} main output differs between 1 and {threads} threads"
            );
            assert_eq!(
                curves, &outputs[0].2,
                "{label} curve output differs between 1 and {threads} threads"
            );
        }
    }
    println!("criterion 10 PASS: byte-identical outputs across 1, 4 and 8 threads");
}
