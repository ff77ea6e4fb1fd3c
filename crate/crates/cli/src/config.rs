use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

/// Everything that determines a run. Echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub n: i64,
    #[serde(rename = "box")]
    pub bound: i64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn header(&self) -> String {
        format!(
            "# monodromy {} n={} box={} format={} jobs={}",
            self.command,
            self.n,
            self.bound,
            match self.format {
                Format::Text => "text",
                Format::Json => "json",
            },
            self.jobs
        )
    }

    /// Wraps `report` with the config for JSON output.
    pub fn json<T: Serialize>(&self, report: &T) -> Result<String, CliError> {
        let v = serde_json::json!({ "config": self, "report": report });
        serde_json::to_string_pretty(&v).map_err(|e| CliError::Io(e.to_string()))
    }

    /// Writes to `--out` or stdout.
    pub fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => fs::write(path, text)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| {
                        if text.ends_with('\n') {
                            Ok(())
                        } else {
                            stdout.write_all(b"\n")
                        }
                    })
                    .map_err(|e| CliError::Io(e.to_string()))
            }
        }
    }
}
