//! Batch experiment runner: configuration, experiments and CSV output.

pub mod config;
pub mod experiments;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;
use thiserror::Error;

pub use config::{ExperimentConfig, Layers};
pub use experiments::{run, Artifact, RunOutput};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration ({} problem(s)): {}", .0.len(), .0.join("; "))]
    Config(Vec<String>),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] ptdyn::Error),
}

impl CliError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), message: err.to_string() }
    }

    /// Machine-readable one-line error record.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Self::Config(violations) => json!({
                "error": "ConfigError",
                "message": self.to_string(),
                "violations": violations,
            }),
            Self::Io { path, message } => json!({
                "error": "IoError",
                "message": message,
                "path": path.display().to_string(),
            }),
            Self::Input(message) => json!({ "error": "InputError", "message": message }),
            Self::Core(e) => {
                let mut record = json!({ "error": e.kind(), "message": e.to_string() });
                if let ptdyn::Error::CompileFailed { best } = e {
                    record["best"] = json!({
                        "residual": best.residual,
                        "record": best.to_record(),
                    });
                }
                record
            }
        }
    }
}

/// 17 significant digits in scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text with LF line endings.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// `base` with `suffix` spliced in before the extension: `out.csv` → `out_mle.csv`.
pub fn sibling_path(base: &Path, suffix: &str) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    base.with_file_name(name)
}

/// Writes every artifact; the primary one goes to `out` (or stdout).
pub fn write_outputs(output: &RunOutput, out: Option<&Path>, stdout: &mut impl std::io::Write) -> Result<(), CliError> {
    for artifact in &output.artifacts {
        match (out, &artifact.suffix) {
            (Some(path), None) => write_file(path, &artifact.contents)?,
            (Some(path), Some(suffix)) => write_file(&sibling_path(path, suffix), &artifact.contents)?,
            (None, suffix) => {
                if let Some(s) = suffix {
                    let _ = writeln!(stdout, "# {s}");
                }
                stdout
                    .write_all(artifact.contents.as_bytes())
                    .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
            }
        }
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        let x = std::f64::consts::PI;
        assert_eq!(fmt_num(x), "3.1415926535897931e0");
        assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_layout() {
        let text = csv(&["t", "D"], [vec!["0".into(), "1".into()]]);
        assert_eq!(text, "t,D\n0,1\n");
    }

    #[test]
    fn sibling_paths() {
        assert_eq!(sibling_path(Path::new("out/run.csv"), "mle"), PathBuf::from("out/run_mle.csv"));
        assert_eq!(sibling_path(Path::new("run"), "mle"), PathBuf::from("run_mle"));
    }

    #[test]
    fn error_records() {
        let e = CliError::Config(vec!["a: bad".into(), "b: bad".into()]);
        let j = e.to_json();
        assert_eq!(j["error"], "ConfigError");
        assert_eq!(j["violations"].as_array().unwrap().len(), 2);
        let e = CliError::from(ptdyn::Error::NotPassive { norm: 2.0 });
        assert_eq!(e.to_json()["error"], "NotPassive");
    }
}
