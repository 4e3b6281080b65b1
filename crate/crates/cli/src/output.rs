use std::io::{self, Write};

use clap::Args;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with_all = ["csv", "pretty"])]
    pub json: bool,
    /// Emit CSV rows where the command produces a table.
    #[arg(long, global = true, conflicts_with = "pretty")]
    pub csv: bool,
    /// Emit a human-readable rendering of the same data.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Report progress on stderr.
    #[arg(long, global = true)]
    pub progress: bool,
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        if self.csv {
            Format::Csv
        } else if self.pretty {
            Format::Pretty
        } else {
            Format::Json
        }
    }
}

/// What a command hands back for printing.
pub struct Rendered {
    pub json: serde_json::Value,
    pub pretty: String,
    /// CSV text, for commands with a tabular result.
    pub csv: Option<String>,
}

impl Rendered {
    pub fn new<T: Serialize>(value: &T, pretty: String) -> Result<Rendered, CliError> {
        Ok(Rendered {
            json: serde_json::to_value(value).map_err(|e| CliError::Domain(e.to_string()))?,
            pretty,
            csv: None,
        })
    }

    pub fn with_table(self, header: &[&str], rows: Vec<Vec<String>>) -> Result<Rendered, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(|e| CliError::Domain(e.to_string()))?;
        for row in rows {
            w.write_record(row).map_err(|e| CliError::Domain(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Domain(e.to_string()))?;
        Ok(self.with_csv(String::from_utf8(bytes).expect("csv output is utf-8")))
    }

    pub fn with_csv(mut self, text: String) -> Rendered {
        self.csv = Some(text);
        self
    }

    pub fn emit(&self, format: Format) -> Result<(), CliError> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.json).map_err(|e| CliError::Domain(e.to_string()))?;
                writeln!(out)?;
            }
            Format::Pretty => {
                write!(out, "{}", self.pretty)?;
                if !self.pretty.ends_with('\n') {
                    writeln!(out)?;
                }
            }
            Format::Csv => {
                let Some(text) = &self.csv else {
                    return Err(CliError::Usage("--csv is only available for tabular commands".into()));
                };
                out.write_all(text.as_bytes())?;
            }
        }
        Ok(())
    }
}
