//! Failure histories and the severity relation between them.
//!
//! A history records which arrivals have occurred by a censor time `t`.
//! For ordered arrival chains every history is a prefix: `k` failures at
//! ascending times below `t`, all later arrivals still pending. History
//! `h` is more severe than `h'` when, at the same censor time, `h` has at
//! least as many failures and each shared failure happened no later,
//! so `h` describes the harder-worn system.

use crate::error::{Error, Result};
use crate::rng::{CounterStream, UniformSource};

#[derive(Debug, Clone, PartialEq)]
pub struct History {
    failures: Vec<f64>,
    censor: f64,
}

impl History {
    pub fn new(failures: Vec<f64>, censor: f64) -> Result<Self> {
        if !censor.is_finite() || censor <= 0.0 {
            return Err(Error::History {
                clause: format!("censor time must be positive and finite, got {censor}"),
            });
        }
        for (i, &x) in failures.iter().enumerate() {
            if !x.is_finite() || x <= 0.0 {
                return Err(Error::History {
                    clause: format!("failure time {x} at index {i} must be positive and finite"),
                });
            }
            if i > 0 && !(x > failures[i - 1]) {
                return Err(Error::History {
                    clause: format!(
                        "failure times must ascend strictly, got {} then {x}",
                        failures[i - 1]
                    ),
                });
            }
        }
        if failures.last().is_some_and(|&x| x >= censor) {
            return Err(Error::History {
                clause: format!(
                    "last failure {} must precede the censor time {censor}",
                    failures.last().unwrap()
                ),
            });
        }
        Ok(History { failures, censor })
    }

    pub fn empty(censor: f64) -> Result<Self> {
        History::new(Vec::new(), censor)
    }

    pub fn failures(&self) -> &[f64] {
        &self.failures
    }

    pub fn censor(&self) -> f64 {
        self.censor
    }

    pub fn len(&self) -> usize {
        self.failures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn last_failure(&self) -> Option<f64> {
        self.failures.last().copied()
    }
}

/// Checks that `severe` is more severe than `mild`: equal censor times,
/// at least as many failures, and componentwise earlier failure times on
/// the shared prefix. Errors name the violated clause.
pub fn validate_severity(severe: &History, mild: &History) -> Result<()> {
    if severe.censor != mild.censor {
        return Err(Error::History {
            clause: format!(
                "histories must share a censor time, got {} and {}",
                severe.censor, mild.censor
            ),
        });
    }
    if severe.len() < mild.len() {
        return Err(Error::History {
            clause: format!(
                "the severe history must have at least as many failures, got {} vs {}",
                severe.len(),
                mild.len()
            ),
        });
    }
    for k in 0..mild.len() {
        if severe.failures[k] > mild.failures[k] {
            return Err(Error::History {
                clause: format!(
                    "severe failure {} at index {k} exceeds the milder {}",
                    severe.failures[k], mild.failures[k]
                ),
            });
        }
    }
    Ok(())
}

/// Draws `count` admissible `(severe, mild)` history pairs at censor time
/// `t`, each with at most `max_failures` failures. The first pair is
/// always the degenerate empty pair; pairs with equally many failures on
/// both sides occur as well.
///
/// Construction: draw sorted failure tuples `a` (severe, length `j`) and
/// `b` (mild, length `i <= j`), then pull each shared severe entry down to
/// `min(a_k, b_k)` so componentwise domination holds while both tuples
/// stay ascending.
pub fn history_pair_sampler(
    seed: u64,
    count: usize,
    t: f64,
    max_failures: usize,
) -> Result<Vec<(History, History)>> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::Domain(format!("censor time must be positive, got {t}")));
    }
    if count == 0 {
        return Err(Error::Domain("need at least one history pair".into()));
    }
    let mut pairs = Vec::with_capacity(count);
    pairs.push((History::empty(t)?, History::empty(t)?));
    for m in 1..count as u64 {
        let mut src = CounterStream::new(seed, m);
        let j = (src.next_uniform() * (max_failures + 1) as f64) as usize;
        let j = j.min(max_failures);
        let i = (src.next_uniform() * (j + 1) as f64) as usize;
        let i = i.min(j);
        let severe_raw = sorted_times(&mut src, j, t);
        let mild_times = sorted_times(&mut src, i, t);
        let mut severe_times = severe_raw;
        for k in 0..i {
            if mild_times[k] < severe_times[k] {
                severe_times[k] = mild_times[k];
            }
        }
        enforce_strict_ascent(&mut severe_times);
        let severe = History::new(severe_times, t)?;
        let mild = History::new(mild_times, t)?;
        validate_severity(&severe, &mild)?;
        pairs.push((severe, mild));
    }
    Ok(pairs)
}

fn sorted_times(src: &mut CounterStream, k: usize, t: f64) -> Vec<f64> {
    let mut times: Vec<f64> = (0..k).map(|_| src.next_uniform() * t).collect();
    times.sort_by(f64::total_cmp);
    enforce_strict_ascent(&mut times);
    times
}

/// Ties among 53-bit uniforms are vanishingly rare but not impossible;
/// nudge duplicates apart so history validation never trips on them.
fn enforce_strict_ascent(times: &mut [f64]) {
    for k in 1..times.len() {
        if times[k] <= times[k - 1] {
            times[k] = times[k - 1].next_up();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn history_validation_names_the_broken_clause() {
        assert!(History::new(vec![0.5, 1.0], 2.0).is_ok());
        let cases = [
            (History::new(vec![1.0, 0.5], 2.0), "ascend"),
            (History::new(vec![0.5, 3.0], 2.0), "precede"),
            (History::new(vec![-0.5], 2.0), "positive"),
            (History::new(vec![0.5], 0.0), "censor"),
        ];
        for (res, needle) in cases {
            match res {
                Err(Error::History { clause }) => {
                    assert!(clause.contains(needle), "clause {clause:?} lacks {needle:?}")
                }
                other => panic!("expected history error, got {other:?}"),
            }
        }
    }

    #[test]
    fn severity_requires_shared_censor_and_domination() {
        let severe = History::new(vec![0.2, 0.6], 2.0).unwrap();
        let mild = History::new(vec![0.4], 2.0).unwrap();
        assert!(validate_severity(&severe, &mild).is_ok());

        let late = History::new(vec![0.3], 2.0).unwrap();
        let early = History::new(vec![0.1], 2.0).unwrap();
        assert!(matches!(validate_severity(&late, &early), Err(Error::History { .. })));

        let other_censor = History::new(vec![0.4], 3.0).unwrap();
        assert!(matches!(validate_severity(&severe, &other_censor), Err(Error::History { .. })));

        let more = History::new(vec![0.1, 0.2, 0.3], 2.0).unwrap();
        assert!(matches!(validate_severity(&mild, &more), Err(Error::History { .. })));
    }

    #[test]
    fn sampler_with_no_failures_gives_only_empty_pairs() {
        let pairs = history_pair_sampler(1, 5, 2.0, 0).unwrap();
        assert_eq!(pairs.len(), 5);
        for (severe, mild) in pairs {
            assert!(severe.is_empty());
            assert!(mild.is_empty());
        }
    }

    #[test]
    fn sampler_output_is_always_admissible_and_covers_gaps() {
        let t = 2.0;
        let pairs = history_pair_sampler(42, 10_000, t, 4).unwrap();
        assert_eq!(pairs.len(), 10_000);
        let mut gap_seen = [false; 5];
        let mut equal_lengths = 0usize;
        for (severe, mild) in &pairs {
            validate_severity(severe, mild).unwrap();
            assert!(severe.censor() == t && mild.censor() == t);
            gap_seen[severe.len() - mild.len()] = true;
            if severe.len() == mild.len() {
                equal_lengths += 1;
            }
        }
        assert!(gap_seen.iter().all(|&b| b), "gaps covered: {gap_seen:?}");
        assert!(equal_lengths > 100, "only {equal_lengths} equal-length pairs");
        assert!((pairs[0].0.is_empty()) && pairs[0].1.is_empty());
    }

    #[test]
    fn sampler_is_deterministic_in_the_seed() {
        let a = history_pair_sampler(7, 50, 1.5, 3).unwrap();
        let b = history_pair_sampler(7, 50, 1.5, 3).unwrap();
        assert_eq!(a, b);
        let c = history_pair_sampler(8, 50, 1.5, 3).unwrap();
        assert_ne!(a, c);
    }
}
