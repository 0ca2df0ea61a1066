use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Record of one invocation, written next to its outputs as
/// `<verb>.manifest.json`.
#[derive(Debug, Default, Serialize)]
pub struct RunManifest {
    pub seed: u64,
    pub command: Vec<String>,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    pub verification: BTreeMap<String, bool>,
}

pub struct Run {
    out_dir: PathBuf,
    verb: &'static str,
    pub manifest: RunManifest,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Run {
    pub fn new(out_dir: &Path, verb: &'static str, seed: u64) -> Self {
        Self {
            out_dir: out_dir.to_path_buf(),
            verb,
            manifest: RunManifest {
                seed,
                command: std::env::args().skip(1).collect(),
                ..RunManifest::default()
            },
        }
    }

    pub fn read(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        self.manifest.inputs.insert(path.display().to_string(), digest(text.as_bytes()));
        Ok(text)
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out_dir)
            .with_context(|| format!("cannot create {}", self.out_dir.display()))?;
        let path = self.out_dir.join(name);
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        log::info!("wrote {}", path.display());
        self.manifest.outputs.insert(name.to_string(), digest(contents.as_bytes()));
        Ok(path)
    }

    pub fn check(&mut self, name: &str, pass: bool) {
        self.manifest.verification.insert(name.to_string(), pass);
    }

    pub fn all_passed(&self) -> bool {
        self.manifest.verification.values().all(|&p| p)
    }

    pub fn finish(mut self) -> Result<bool> {
        let pass = self.all_passed();
        let text = serde_json::to_string_pretty(&self.manifest)? + "\n";
        let name = format!("{}.manifest.json", self.verb);
        fs::create_dir_all(&self.out_dir)?;
        fs::write(self.out_dir.join(&name), text)?;
        self.manifest.outputs.clear();
        Ok(pass)
    }
}

pub fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}
