//! Experiment driver: instance generation, online runs with bound checks,
//! CSV output and summaries.

pub mod gen;
pub mod oracle;
pub mod report;
pub mod run;

use std::path::Path;

use anyhow::{Context, Result};
use owct_core::model::{parse_instance, Instance};

pub use gen::{generate, GenParams};
pub use oracle::oracle_report;
pub use report::report;
pub use run::{opt_upper, read_csv, run, violations, write_csv, CsvRow, Row, RunConfig, HEADER};

/// Reads an instance file; its id is the file stem.
pub fn load_instance(path: &Path) -> Result<(String, Instance)> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let inst = parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok((id, inst))
}
