//! Staged outputs and run manifests.
//!
//! Every output is first written to a hidden sibling path and renamed into
//! place only after the whole command succeeded, so a failed run leaves no
//! new files behind.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub version: &'static str,
    pub subcommand: String,
    pub argv: Vec<String>,
    pub seeds: BTreeMap<String, u64>,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(subcommand: &str, argv: &[String]) -> Self {
        Manifest {
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            argv: argv.to_vec(),
            seeds: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn seed(&mut self, name: &str, value: u64) {
        self.seeds.insert(name.to_string(), value);
    }

    /// Records the SHA-256 of a file, or of a directory's sorted
    /// `name digest` listing.
    pub fn input(&mut self, path: &Path) -> Result<()> {
        let sha256 = digest_path(path)?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256,
        });
        Ok(())
    }
}

fn digest_path(path: &Path) -> Result<String> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = fs::read_dir(path)
            .with_context(|| format!("reading directory {}", path.display()))?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()
            .with_context(|| format!("reading directory {}", path.display()))?;
        entries.retain(|p| p.is_file());
        entries.sort();
        let mut h = Sha256::new();
        for p in entries {
            let name = p.file_name().expect("file entry").to_string_lossy().into_owned();
            h.update(format!("{name} {}\n", digest_path(&p)?));
        }
        Ok(hex::encode(h.finalize()))
    } else {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(hex::encode(Sha256::digest(&bytes)))
    }
}

fn staging_path(target: &Path) -> PathBuf {
    let name = target
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    target.with_file_name(format!(".{name}.partial-{}", std::process::id()))
}

fn manifest_path(target: &Path) -> PathBuf {
    let mut s = target.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

struct Staged {
    temp: PathBuf,
    target: PathBuf,
    is_dir: bool,
}

/// Output paths of one command, committed together.
#[derive(Default)]
pub struct Outputs {
    staged: Vec<Staged>,
}

impl Outputs {
    /// Temporary path to write `target` to.
    pub fn file(&mut self, target: &Path) -> Result<PathBuf> {
        if target.is_dir() {
            bail!("output {} is a directory", target.display());
        }
        self.stage(target, false)
    }

    /// Temporary directory standing in for `target`. An existing non-empty
    /// directory is refused rather than replaced.
    pub fn dir(&mut self, target: &Path) -> Result<PathBuf> {
        if target.exists() {
            let empty = target.is_dir()
                && fs::read_dir(target)
                    .with_context(|| format!("reading directory {}", target.display()))?
                    .next()
                    .is_none();
            if !empty {
                bail!("output {} already exists; remove it first", target.display());
            }
        }
        let temp = self.stage(target, true)?;
        fs::create_dir_all(&temp).with_context(|| format!("creating {}", temp.display()))?;
        Ok(temp)
    }

    fn stage(&mut self, target: &Path, is_dir: bool) -> Result<PathBuf> {
        let temp = staging_path(target);
        if let Some(parent) = temp.parent().filter(|p| !p.as_os_str().is_empty()) {
            if !parent.is_dir() {
                bail!("output directory {} does not exist", parent.display());
            }
        }
        self.staged.push(Staged {
            temp: temp.clone(),
            target: target.to_path_buf(),
            is_dir,
        });
        Ok(temp)
    }

    /// Writes `<first output>.manifest.json` and moves everything into place.
    pub fn commit(mut self, mut manifest: Manifest) -> Result<()> {
        let Some(primary) = self.staged.first().map(|s| s.target.clone()) else {
            return Ok(());
        };
        manifest.outputs = self
            .staged
            .iter()
            .map(|s| s.target.display().to_string())
            .collect();
        let mpath = manifest_path(&primary);
        let mtemp = self.file(&mpath)?;
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        fs::write(&mtemp, text).with_context(|| format!("writing {}", mtemp.display()))?;

        for s in std::mem::take(&mut self.staged) {
            if s.is_dir && s.target.is_dir() {
                fs::remove_dir(&s.target)
                    .with_context(|| format!("replacing {}", s.target.display()))?;
            }
            fs::rename(&s.temp, &s.target)
                .with_context(|| format!("moving output into {}", s.target.display()))?;
        }
        Ok(())
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        for s in &self.staged {
            let _ = if s.is_dir {
                fs::remove_dir_all(&s.temp)
            } else {
                fs::remove_file(&s.temp)
            };
        }
    }
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
