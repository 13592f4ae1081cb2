use std::fs::{self, File};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const COMPLETE: &str = ".complete";

/// sha256 of a file's bytes, hex encoded.
pub fn file_digest(path: &Path) -> Result<String> {
    let mut f = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = f.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        h.update(&buf[..n]);
    }
    Ok(hex::encode(h.finalize()))
}

/// Builds a stage key from settings and input file contents.
#[derive(Debug, Clone)]
pub struct StageKey {
    stage: &'static str,
    hasher: Sha256,
}

impl StageKey {
    pub fn new(stage: &'static str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(format!("stage={stage}\n"));
        StageKey { stage, hasher }
    }

    pub fn setting(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.hasher.update(format!("{key}={value}\n"));
        self
    }

    pub fn input(mut self, name: &str, path: &Path) -> Result<Self> {
        let digest = file_digest(path)?;
        self.hasher.update(format!("input {name}={digest}\n"));
        Ok(self)
    }

    pub fn finish(self) -> (String, String) {
        (self.stage.to_string(), hex::encode(self.hasher.finalize()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputFile {
    pub file: String,
    pub sha256: String,
}

/// What a stage produced and whether it came from the cache.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageArtifact {
    pub stage: String,
    pub key: String,
    pub dir: PathBuf,
    pub cached: bool,
    pub outputs: Vec<OutputFile>,
    pub seconds: f64,
}

impl StageArtifact {
    pub fn path(&self, file: &str) -> PathBuf {
        self.dir.join(file)
    }
}

/// Content-addressed stage directories under one root, shared safely by
/// concurrent runs through advisory file locks.
#[derive(Debug, Clone)]
pub struct ArtifactCache {
    root: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl ArtifactCache {
    pub fn new(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
        Ok(ArtifactCache { root: root.to_path_buf() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Returns the stage directory for `key`, running `build` into a fresh
    /// directory first unless a completed one exists. A failed build leaves
    /// its partial directory in place and reports it.
    pub fn run<F>(&self, key: StageKey, build: F) -> Result<StageArtifact>
    where
        F: FnOnce(&Path) -> Result<()>,
    {
        let (stage, hash) = key.finish();
        let name = format!("{stage}-{}", &hash[..16]);
        let dir = self.root.join(&name);
        let lock_path = self.root.join(format!("{name}.lock"));
        let lock = File::create(&lock_path).map_err(|e| Error::io(&lock_path, e))?;
        lock.lock().map_err(|e| Error::io(&lock_path, e))?;
        let start = Instant::now();

        let cached = dir.join(COMPLETE).exists();
        if !cached {
            let tmp = self.root.join(format!(
                "{name}.partial-{}-{}",
                std::process::id(),
                TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
            ));
            if tmp.exists() {
                fs::remove_dir_all(&tmp).map_err(|e| Error::io(&tmp, e))?;
            }
            fs::create_dir_all(&tmp).map_err(|e| Error::io(&tmp, e))?;
            log::info!("running stage {stage} ({})", &hash[..16]);
            build(&tmp).map_err(|e| Error::Stage {
                stage: stage.clone(),
                source: Box::new(e),
            })?;
            fs::write(tmp.join(COMPLETE), &hash).map_err(|e| Error::io(&tmp, e))?;
            if dir.exists() {
                fs::remove_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            }
            fs::rename(&tmp, &dir).map_err(|e| Error::io(&dir, e))?;
        } else {
            log::info!("reusing stage {stage} ({})", &hash[..16]);
        }

        let mut outputs = Vec::new();
        let mut names: Vec<String> = fs::read_dir(&dir)
            .map_err(|e| Error::io(&dir, e))?
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter(|n| n != COMPLETE)
            .collect();
        names.sort();
        for file in names {
            let sha256 = file_digest(&dir.join(&file))?;
            outputs.push(OutputFile { file, sha256 });
        }
        drop(lock);
        Ok(StageArtifact {
            stage,
            key: hash,
            dir,
            cached,
            outputs,
            seconds: start.elapsed().as_secs_f64(),
        })
    }
}
