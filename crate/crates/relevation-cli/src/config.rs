//! Turns command-line flags into process specifications.

use std::path::Path;
use std::str::FromStr;

use relevation::{DistributionSequence, ExtendRule, LifetimeDistribution, ProcessSpec};

use crate::CliError;

pub fn parse_extend(text: Option<&str>) -> Result<ExtendRule, CliError> {
    match text {
        None | Some("repeat-last") | Some("repeat_last") => Ok(ExtendRule::RepeatLast),
        Some("cycle") => Ok(ExtendRule::Cycle),
        Some("finite") => Ok(ExtendRule::Finite),
        Some(other) => Err(CliError::Config(format!(
            "unknown extension rule `{other}`; use repeat-last, cycle or finite"
        ))),
    }
}

/// Builds the distribution sequence from `--dist` flags or a JSON file.
pub fn sequence_from(
    dists: &[String],
    seq_file: Option<&Path>,
    extend: Option<&str>,
) -> Result<DistributionSequence, CliError> {
    if let Some(path) = seq_file {
        let text = std::fs::read_to_string(path)?;
        return Ok(DistributionSequence::from_json_str(&text)?);
    }
    if dists.is_empty() {
        return Err(CliError::Config(
            "no distribution given; pass --dist or --seq-file".into(),
        ));
    }
    let entries = dists
        .iter()
        .map(|s| LifetimeDistribution::from_str(s))
        .collect::<relevation::Result<Vec<_>>>()?;
    Ok(DistributionSequence::new(entries, parse_extend(extend)?)?)
}

/// Assembles a process from its kind name and the already-parsed sequence.
/// Kinds driven by a single distribution insist on a single `--dist` entry
/// so a silently dropped second entry cannot happen.
pub fn build_spec(
    kind: &str,
    seq: DistributionSequence,
    offset: Option<f64>,
    interval: Option<f64>,
) -> Result<ProcessSpec, CliError> {
    let single = |seq: &DistributionSequence, what: &str| -> Result<LifetimeDistribution, CliError> {
        match seq.entries() {
            [d] => Ok(d.clone()),
            more => Err(CliError::Config(format!(
                "{what} takes exactly one distribution, got {}",
                more.len()
            ))),
        }
    };
    let spec = match kind {
        "renewal" => ProcessSpec::Renewal(seq),
        "relevation" => ProcessSpec::Relevation(seq),
        "minimal-repair" => ProcessSpec::MinimalRepair(single(&seq, "minimal-repair")?),
        "yule" => ProcessSpec::Yule {
            base: single(&seq, "yule")?,
            offset: offset.unwrap_or(1.0),
        },
        "age-replacement" => ProcessSpec::AgeReplacement {
            dist: single(&seq, "age-replacement")?,
            interval: interval.ok_or_else(|| {
                CliError::Config("age-replacement needs --interval".into())
            })?,
        },
        other => {
            return Err(CliError::Config(format!(
                "unknown process kind `{other}`; use renewal, relevation, minimal-repair, \
                 yule or age-replacement"
            )))
        }
    };
    spec.validate()?;
    Ok(spec)
}

/// Shared invariants of every simulating subcommand.
pub fn check_run_shape(n: usize, reps: u64, delta: f64) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Config("--n must be at least 1".into()));
    }
    if reps == 0 {
        return Err(CliError::Config("--reps must be at least 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(CliError::Config(format!(
            "--delta must lie strictly between 0 and 1, got {delta}"
        )));
    }
    Ok(())
}
