//! The `ageing` subcommand: wraps the classifier and prints its report.

use std::str::FromStr;

use serde::Serialize;

use relevation::ageing::{classify, AgeingReport};
use relevation::LifetimeDistribution;

use crate::{emit, AgeingArgs, CliError};

#[derive(Serialize)]
struct Wrapped {
    config: String,
    report: AgeingReport,
}

pub fn run(args: &AgeingArgs) -> Result<(), CliError> {
    let dist = LifetimeDistribution::from_str(&args.dist)?;
    let report = classify(&dist)?;
    let wrapped = Wrapped { config: format!("ageing dist={dist}"), report };
    emit::with_sink(args.json_out.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, &wrapped)
            .map_err(|e| CliError::Config(format!("could not serialize report: {e}")))?;
        writeln!(w)?;
        Ok(())
    })
}
