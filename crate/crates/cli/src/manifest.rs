//! Output files and the run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{io_err, CliError};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Phase {
    pub name: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub library_version: String,
    pub config: BTreeMap<String, String>,
    pub phases: Vec<Phase>,
    pub files: Vec<FileEntry>,
    pub notes: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Collects output files under one directory and times the run's phases.
/// The directory is created on the first write.
pub struct Run {
    dir: PathBuf,
    manifest: RunManifest,
    phase: Option<(String, Instant)>,
}

impl Run {
    pub fn new(command: &str, dir: &Path, config: Vec<(&'static str, String)>) -> Self {
        Self {
            dir: dir.to_path_buf(),
            manifest: RunManifest {
                command: command.into(),
                version: env!("CARGO_PKG_VERSION").into(),
                library_version: mtb_dqm::VERSION.into(),
                config: config.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
                phases: Vec::new(),
                files: Vec::new(),
                notes: Vec::new(),
            },
            phase: None,
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn phase(&mut self, name: &str) {
        self.end_phase();
        self.phase = Some((name.to_string(), Instant::now()));
    }

    fn end_phase(&mut self) {
        if let Some((name, t)) = self.phase.take() {
            self.manifest.phases.push(Phase {
                name,
                seconds: t.elapsed().as_secs_f64(),
            });
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.manifest.notes.push(s.into());
    }

    pub fn write(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(io_err(&path))?;
        self.manifest.files.push(FileEntry {
            path: name.to_string(),
            sha256: sha256_hex(body.as_bytes()),
            bytes: body.len(),
        });
        Ok(())
    }

    /// Writes `manifest.json` and returns the manifest.
    pub fn finish(mut self) -> Result<RunManifest, CliError> {
        self.end_phase();
        let json = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let path = self.dir.join("manifest.json");
        fs::write(&path, json + "\n").map_err(io_err(&path))?;
        Ok(self.manifest)
    }
}

/// Minimal CSV table; cells are already formatted.
#[derive(Debug, Clone, Default)]
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

pub fn cell(x: f64) -> String {
    mtb_dqm::format::fmt_f64(x)
}

pub fn opt_cell(x: Option<f64>) -> String {
    x.map(cell).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_abc() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn csv_render() {
        let mut c = Csv::new(&["a", "b"]);
        c.push(vec!["1".into(), opt_cell(None)]);
        assert_eq!(c.render(), "a,b\n1,\n");
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn run_records_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("nested");
        let mut run = Run::new("test", &out, vec![("problem", "p1".into())]);
        run.phase("write");
        run.write("x.csv", "a\n1\n").unwrap();
        let m = run.finish().unwrap();
        assert_eq!(m.files.len(), 1);
        assert_eq!(m.files[0].bytes, 4);
        assert_eq!(m.phases[0].name, "write");
        assert!(out.join("manifest.json").exists());
    }
}
