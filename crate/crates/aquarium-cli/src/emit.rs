//! CSV/JSON emission with reproducibility headers.
//!
//! Every CSV starts with `# config: {json}` followed by the header row;
//! floats are printed with 17 significant digits so outputs are lossless
//! and byte-identical across runs.

use crate::config::RunConfig;
use std::io::Write;

/// 17 significant digits, '.' decimal point.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_else(|| "nan".to_string())
}

/// Destination for a run's artifact: a file or stdout.
pub struct Out(Box<dyn Write>);

impl Out {
    pub fn create(path: Option<&str>) -> std::io::Result<Self> {
        Ok(match path {
            None | Some("-") => Out(Box::new(std::io::stdout())),
            Some(p) => Out(Box::new(std::fs::File::create(p)?)),
        })
    }
}

impl Write for Out {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.0.write(buf)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.0.flush()
    }
}

/// Write the config comment, the header, then all rows.
pub fn write_csv(
    out: &mut dyn Write,
    config: &RunConfig,
    header: &str,
    rows: impl Iterator<Item = String>,
) -> std::io::Result<()> {
    writeln!(out, "# config: {}", config.to_json())?;
    writeln!(out, "{header}")?;
    for row in rows {
        writeln!(out, "{row}")?;
    }
    Ok(())
}

/// Parse the `# config:` comment back out of emitted CSV text.
pub fn reparse_config(csv: &str) -> Option<Result<RunConfig, String>> {
    let line = csv.lines().find(|l| l.starts_with("# config: "))?;
    Some(RunConfig::from_json(&line["# config: ".len()..]))
}
