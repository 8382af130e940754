use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{io_err, CliResult};

/// Where a command writes, and whether it reports progress.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub out: PathBuf,
    pub quiet: bool,
    pub long_run: bool,
}

impl RunContext {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self {
            out: out.into(),
            quiet: true,
            long_run: false,
        }
    }

    pub fn path(&self, rel: impl AsRef<Path>) -> PathBuf {
        self.out.join(rel)
    }

    pub fn progress(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    /// Create `rel`'s parent directories and stream into it.
    pub fn write_with<F>(&self, rel: impl AsRef<Path>, f: F) -> CliResult<PathBuf>
    where
        F: FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>,
    {
        let path = self.path(rel);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        }
        let file = fs::File::create(&path).map_err(|e| io_err(&path, e))?;
        let mut w = BufWriter::new(file);
        f(&mut w).and_then(|_| w.flush()).map_err(|e| io_err(&path, e))?;
        Ok(path)
    }

    pub fn write_json<T: Serialize + ?Sized>(&self, rel: impl AsRef<Path>, value: &T) -> CliResult<PathBuf> {
        self.write_with(rel, |w| {
            serde_json::to_writer_pretty(&mut *w, value).map_err(std::io::Error::other)?;
            writeln!(w)
        })
    }

    pub fn write_text(&self, rel: impl AsRef<Path>, text: &str) -> CliResult<PathBuf> {
        self.write_with(rel, |w| w.write_all(text.as_bytes()))
    }
}

/// File-name fragment for a time value: `25`, `12.5`, `-3`.
pub fn time_label(t: f64) -> String {
    format!("{t}")
}
