//! Deterministic file emission: every value with at least nine significant
//! digits, contents assembled in memory, and no partial files left behind
//! when a write fails.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Scientific notation with nine digits after the point.
pub fn sci(v: f64) -> String {
    format!("{v:.9e}")
}

/// A CSV document under construction.
pub struct Csv {
    buf: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv {
            buf: format!("{}\n", header.join(",")),
            columns: header.len(),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "ragged CSV row");
        let _ = writeln!(self.buf, "{}", fields.join(","));
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Write all files or none: contents are prepared up front and any write
/// failure removes the files already placed in this batch.
pub fn write_all(dir: &Path, files: Vec<(String, String)>) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = dir.join(&name);
        let result = std::fs::write(&path, contents)
            .with_context(|| format!("cannot write {}", path.display()));
        if let Err(err) = result {
            let _ = std::fs::remove_file(&path);
            for done in &written {
                let _ = std::fs::remove_file(done);
            }
            return Err(err);
        }
        written.push(path);
    }
    Ok(written)
}
