use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::{CliError, Report, RunConfig};

pub const SUMMARY_SCHEMA: &str = "herzlab-summary/1";

/// `--out`, then the config's `[output] dir`, then `HERZLAB_OUT`, then `herzlab-out`.
pub fn output_dir(flag: Option<&Path>, config: Option<&RunConfig>, env: Option<String>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Some(dir) = config.and_then(|c| c.output.as_ref()).map(|o| o.dir.clone()) {
        return PathBuf::from(dir);
    }
    env.filter(|s| !s.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("herzlab-out"))
}

pub fn csv_name(report: &Report) -> String {
    format!("{}.csv", report.command.name())
}

pub fn write_csv(report: &Report, path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(e.to_string()))?;
    w.write_record(&report.table.columns)
        .map_err(|e| CliError::Io(e.to_string()))?;
    for row in &report.table.rows {
        w.write_record(row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn summary(config: &RunConfig, report: &Report) -> serde_json::Value {
    let mut echoed = config.clone();
    echoed.seed = report.seed;
    json!({
        "schema": SUMMARY_SCHEMA,
        "version": env!("CARGO_PKG_VERSION"),
        "command": report.command.name(),
        "seed": report.seed,
        "config": echoed,
        "resolved": report.resolved,
        "results": report.results,
        "csv": {
            "file": csv_name(report),
            "schema": report.table.schema,
            "columns": report.table.columns,
            "rows": report.table.rows.len(),
        },
    })
}

/// Writes `summary.json` and the CSV into `dir`.
pub fn write_report(dir: &Path, config: &RunConfig, report: &Report) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    write_csv(report, &dir.join(csv_name(report)))?;
    let text = serde_json::to_string_pretty(&summary(config, report)).map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(dir.join("summary.json"), text + "\n")?;
    Ok(())
}

/// Best-effort `error.json`; the error object also goes to stderr.
pub fn write_error(dir: &Path, err: &CliError) {
    let text = serde_json::to_string_pretty(&err.to_object()).unwrap_or_default();
    if fs::create_dir_all(dir).is_ok() {
        let _ = fs::write(dir.join("error.json"), text + "\n");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_precedence() {
        let cfg = RunConfig::parse("command = \"norm\"\n[output]\ndir = \"from-config\"\n").unwrap();
        let bare = RunConfig::parse("command = \"norm\"\n").unwrap();
        let env = || Some("from-env".to_string());
        assert_eq!(
            output_dir(Some(Path::new("flag")), Some(&cfg), env()),
            PathBuf::from("flag")
        );
        assert_eq!(output_dir(None, Some(&cfg), env()), PathBuf::from("from-config"));
        assert_eq!(output_dir(None, Some(&bare), env()), PathBuf::from("from-env"));
        assert_eq!(
            output_dir(None, None, Some(String::new())),
            PathBuf::from("herzlab-out")
        );
    }
}
