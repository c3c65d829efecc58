use std::io::Write;
use std::path::{Path, PathBuf};

use monopole::{Error, Result};

/// Writes result files atomically, each with a `<name>.config.json` sidecar
/// holding the effective configuration.
#[derive(Debug)]
pub struct Output {
    dir: PathBuf,
    config_json: String,
    written: Vec<PathBuf>,
}

impl Output {
    /// The directory is created on the first write.
    pub fn new(dir: PathBuf, config_json: String) -> Self {
        Self { dir, config_json, written: Vec::new() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    /// Writes `name` from the bytes produced by `fill`, then its sidecar.
    pub fn write_with(&mut self, name: &str, fill: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<PathBuf> {
        let mut buf = Vec::new();
        fill(&mut buf)?;
        std::fs::create_dir_all(&self.dir)?;
        let path = self.dir.join(name);
        atomic_write(&path, &buf)?;
        atomic_write(&self.dir.join(format!("{name}.config.json")), self.config_json.as_bytes())?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn write_json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        self.write_with(name, |buf| {
            serde_json::to_writer_pretty(&mut *buf, value)?;
            buf.push(b'\n');
            Ok(())
        })
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        self.write_with(name, |buf| {
            buf.extend_from_slice(text.as_bytes());
            Ok(())
        })
    }
}

/// Temp file in the target directory, then rename over the target.
fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().ok_or_else(|| Error::Io(format!("{} has no parent", path.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_file_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = Output::new(dir.path().join("o"), "{\"a\":1}".into());
        out.write_text("x.csv", "t\n1\n").unwrap();
        out.write_text("x.csv", "t\n2\n").unwrap();
        assert_eq!(std::fs::read_to_string(dir.path().join("o/x.csv")).unwrap(), "t\n2\n");
        assert_eq!(std::fs::read_to_string(dir.path().join("o/x.csv.config.json")).unwrap(), "{\"a\":1}");
        assert_eq!(std::fs::read_dir(dir.path().join("o")).unwrap().count(), 2);
    }
}
