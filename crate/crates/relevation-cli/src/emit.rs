//! Table output: config echoes, float formatting and the CSV writers.
//!
//! Every table starts with a `# config: ...` line reconstructing the run,
//! followed by a header row. Floats are printed with `{:.16e}`, which is 17
//! significant digits and round-trips every double exactly, so a rerun can
//! be compared byte for byte.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use relevation::{ArrivalPath, SurvivalCurve};

use crate::CliError;

pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Runs `body` against a buffered file writer, or stdout when no path is
/// given, and flushes before returning.
pub fn with_sink<F>(path: Option<&Path>, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match path {
        Some(p) => {
            let file = File::create(p)?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

pub fn write_config_line(w: &mut dyn Write, config: &str) -> Result<(), CliError> {
    writeln!(w, "# config: {config}")?;
    Ok(())
}

/// Path table: one row per simulated arrival, replication-major.
pub fn write_paths(
    w: &mut dyn Write,
    config: &str,
    paths: &[ArrivalPath],
) -> Result<(), CliError> {
    write_config_line(w, config)?;
    writeln!(w, "replication,arrival_index,time")?;
    for p in paths {
        for (i, &t) in p.times.iter().enumerate() {
            writeln!(w, "{},{},{}", p.replication, i + 1, fmt(t))?;
        }
    }
    Ok(())
}

pub fn write_curves_header(w: &mut dyn Write, config: &str) -> Result<(), CliError> {
    write_config_line(w, config)?;
    writeln!(w, "t,survival,lower,upper,n,process")?;
    Ok(())
}

/// One survival curve as rows of an already-headed curve table. The band is
/// the curve's own uncertainty (DKW half-width or exact tolerance), clamped
/// into [0, 1].
pub fn write_curve_rows(
    w: &mut dyn Write,
    curve: &SurvivalCurve,
    n: usize,
    process: &str,
) -> Result<(), CliError> {
    let half = curve.kind().half_width();
    for (&t, &v) in curve.grid().iter().zip(curve.values()) {
        writeln!(
            w,
            "{},{},{},{},{n},{process}",
            fmt(t),
            fmt(v),
            fmt((v - half).max(0.0)),
            fmt((v + half).min(1.0)),
        )?;
    }
    Ok(())
}
