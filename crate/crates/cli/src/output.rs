//! Atomic file output and the run manifest.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use tempfile::NamedTempFile;

use crate::error::{CliError, Result};

/// Writes `path` by filling a temporary file in the same directory and
/// renaming it into place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)
        .map_err(|e| CliError::internal(format!("cannot create {}: {e}", dir.display())))?;
    let tmp = NamedTempFile::new_in(dir)
        .map_err(|e| CliError::internal(format!("temp file in {}: {e}", dir.display())))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        fill(&mut w)?;
        w.flush().map_err(|e| CliError::internal(e.to_string()))?;
    }
    // temp files are created owner-only; outputs get ordinary permissions
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        let _ = tmp
            .as_file()
            .set_permissions(fs::Permissions::from_mode(0o644));
    }
    tmp.persist(path)
        .map_err(|e| CliError::internal(format!("cannot write {}: {}", path.display(), e.error)))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)
            .map_err(|e| CliError::internal(e.to_string()))?;
        w.write_all(b"\n")
            .map_err(|e| CliError::internal(e.to_string()))
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    write_atomic(path, |w| {
        w.write_all(text.as_bytes())
            .map_err(|e| CliError::internal(e.to_string()))
    })
}

/// Serializes `rows` as CSV with a header row.
pub fn write_csv_rows<T: Serialize>(path: &Path, rows: &[T], header: &[&str]) -> Result<()> {
    write_atomic(path, |w| {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        let internal = |e: csv::Error| CliError::internal(e.to_string());
        out.write_record(header).map_err(internal)?;
        for r in rows {
            out.serialize(r).map_err(internal)?;
        }
        out.flush().map_err(|e| CliError::internal(e.to_string()))
    })
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

#[derive(Debug, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to reproduce a run: tool version, arguments, seed,
/// effective configuration and input digests. It carries no timestamps so
/// that repeated runs produce identical manifests.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub args: Vec<String>,
    pub seed: u64,
    pub inputs: Vec<InputRecord>,
    pub config: serde_json::Value,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
}

impl Manifest {
    pub fn new(command: &'static str, seed: u64) -> Self {
        Manifest {
            tool: "zonefit",
            version: env!("CARGO_PKG_VERSION"),
            command,
            args: std::env::args().skip(1).collect(),
            seed,
            inputs: Vec::new(),
            config: serde_json::Value::Null,
            outputs: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs.push(InputRecord {
            path: path.display().to_string(),
            sha256: sha256_file(path)?,
        });
        Ok(())
    }

    pub fn config<T: Serialize>(&mut self, cfg: &T) -> Result<()> {
        self.config = serde_json::to_value(cfg).map_err(|e| CliError::internal(e.to_string()))?;
        Ok(())
    }

    /// Prints the warning to stderr and records it.
    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        eprintln!("warning: {msg}");
        self.warnings.push(msg);
    }

    pub fn output(&mut self, path: &Path) {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned());
        self.outputs
            .push(name.unwrap_or_else(|| path.display().to_string()));
    }

    pub fn write(&mut self, path: &Path) -> Result<()> {
        self.outputs.sort();
        write_json(path, self)
    }
}

/// Output directory plus the manifest that will be written into it.
pub struct OutDir {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

impl OutDir {
    pub fn new(dir: &Path, manifest: Manifest) -> Result<Self> {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
            manifest,
        })
    }

    /// Path of an output file, recorded in the manifest.
    pub fn file(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.manifest.output(&p);
        p
    }

    pub fn finish(mut self) -> Result<()> {
        let path = self.dir.join("manifest.json");
        self.manifest.write(&path)
    }
}
