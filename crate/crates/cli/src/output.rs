use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

/// A finished output file, held in memory until the run completes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn new(name: impl Into<String>, bytes: Vec<u8>) -> Self {
        Artifact { name: name.into(), bytes }
    }

    pub fn text(name: impl Into<String>, text: String) -> Self {
        Self::new(name, text.into_bytes())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> std::io::Result<PathBuf> {
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, &target)?;
    Ok(target)
}

pub struct ManifestInfo<'a> {
    pub command: &'a str,
    pub descriptor: &'a str,
    pub duration: Duration,
    pub checks: &'a [CheckLine],
}

fn manifest_text(info: &ManifestInfo<'_>, files: &[&Artifact]) -> String {
    let mut s = String::new();
    s.push_str(&format!("toolkit = conformal-flow {}\n", env!("CARGO_PKG_VERSION")));
    s.push_str(&format!("command = {}\n", info.command));
    s.push_str(&format!("wall_clock_seconds = {:.3}\n", info.duration.as_secs_f64()));
    s.push_str("\n[descriptor]\n");
    s.push_str(info.descriptor);
    s.push_str("\n[checks]\n");
    for c in info.checks {
        s.push_str(&format!("{} {} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
    }
    s.push_str("\n[files]\n");
    for a in files {
        s.push_str(&format!("{} {}\n", a.name, a.bytes.len()));
    }
    s
}

/// Writes every artifact, then `manifest.txt` listing them. Empty artifacts are
/// not written and not listed.
pub fn write_run(dir: &Path, artifacts: &[Artifact], info: &ManifestInfo<'_>) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let kept: Vec<&Artifact> = artifacts.iter().filter(|a| !a.bytes.is_empty()).collect();
    let mut paths = Vec::with_capacity(kept.len() + 1);
    for a in &kept {
        paths.push(write_atomic(dir, &a.name, &a.bytes)?);
    }
    paths.push(write_atomic(dir, "manifest.txt", manifest_text(info, &kept).as_bytes())?);
    Ok(paths)
}
