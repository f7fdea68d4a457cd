//! On-disk store of subdivided complexes, one JSON file per level with a SHA-256 sidecar.

use crate::error::{CliError, CliResult};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};
use thurston_core::complex::Hierarchy;
use thurston_core::rulekit::save_rule;
use thurston_core::CellComplex;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub loaded: u32,
    pub built: u32,
    pub rebuilt: u32,
    pub stored: u32,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Directory for one rule, named by the hash of its canonical text.
    pub fn rule_dir(&self, hier: &Hierarchy) -> PathBuf {
        let key = sha256_hex(save_rule(hier.rule()).as_bytes());
        self.dir.join(&key[..16])
    }

    fn paths(&self, hier: &Hierarchy, level: u32) -> (PathBuf, PathBuf) {
        let dir = self.rule_dir(hier);
        (dir.join(format!("level-{level}.json")), dir.join(format!("level-{level}.sha256")))
    }

    fn read_entry(&self, hier: &Hierarchy, level: u32) -> Option<CellComplex> {
        let (data, sum) = self.paths(hier, level);
        let bytes = fs::read(&data).ok()?;
        let expected = fs::read_to_string(&sum).ok()?;
        if sha256_hex(&bytes) != expected.trim() {
            return None;
        }
        let cx: CellComplex = serde_json::from_slice(&bytes).ok()?;
        (cx.level == level).then_some(cx)
    }

    fn entry_exists(&self, hier: &Hierarchy, level: u32) -> bool {
        let (data, sum) = self.paths(hier, level);
        data.exists() || sum.exists()
    }

    fn write_entry(&self, hier: &Hierarchy, level: u32) -> CliResult<()> {
        let (data, sum) = self.paths(hier, level);
        let dir = data.parent().expect("entry paths have a parent");
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let bytes = serde_json::to_vec(hier.level(level)?).expect("complexes serialize");
        fs::write(&data, &bytes).map_err(|e| CliError::io(&data, e))?;
        fs::write(&sum, sha256_hex(&bytes) + "\n").map_err(|e| CliError::io(&sum, e))?;
        Ok(())
    }

    /// Extends the hierarchy to `upto` from stored levels. An entry failing its checksum is
    /// recomputed and written back. Levels with no entry are left for the caller.
    pub fn load(&self, hier: &mut Hierarchy, upto: u32, stats: &mut CacheStats) -> CliResult<()> {
        while hier.top() < upto {
            let level = hier.top() + 1;
            if let Some(cx) = self.read_entry(hier, level) {
                if hier.push_level(cx).is_ok() {
                    stats.loaded += 1;
                    continue;
                }
            }
            if !self.entry_exists(hier, level) {
                break;
            }
            hier.ensure(level)?;
            self.write_entry(hier, level)?;
            stats.rebuilt += 1;
        }
        Ok(())
    }

    /// Builds levels up to `upto` and writes every level above 1 that is not stored intact.
    pub fn store(&self, hier: &mut Hierarchy, upto: u32, stats: &mut CacheStats) -> CliResult<()> {
        self.load(hier, upto, stats)?;
        let before = hier.top();
        hier.ensure(upto)?;
        stats.built += hier.top() - before;
        for level in 2..=upto {
            if self.read_entry(hier, level).is_none() {
                self.write_entry(hier, level)?;
                stats.stored += 1;
            }
        }
        Ok(())
    }

    pub fn clear(&self) -> CliResult<()> {
        match fs::remove_dir_all(&self.dir) {
            Ok(()) => Ok(()),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
            Err(e) => Err(CliError::io(&self.dir, e)),
        }
    }
}
