//! On-disk cache of Frobenius-family factorizations.
//!
//! One JSON file, `factor-cache.json`, in the directory named by
//! `IWASAWA_CACHE_DIR`. Entries are keyed `p:N:lambda:n` with `lambda`
//! reduced into `[0, p^N)`. Read or write failures only produce a warning.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use iwasawa_core::primes::PrimeJson;

pub const CACHE_ENV: &str = "IWASAWA_CACHE_DIR";
const FILE_NAME: &str = "factor-cache.json";

#[derive(Debug, Default)]
pub struct FactorCache {
    path: Option<PathBuf>,
    entries: BTreeMap<String, Vec<PrimeJson>>,
    dirty: bool,
}

impl FactorCache {
    /// Opens the cache named by the environment, or a disabled one.
    pub fn open(enabled: bool) -> Self {
        let dir = match std::env::var_os(CACHE_ENV) {
            Some(d) if enabled && !d.is_empty() => PathBuf::from(d),
            _ => return FactorCache::default(),
        };
        let path = dir.join(FILE_NAME);
        let entries = match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text).unwrap_or_else(|e| {
                eprintln!("warning: ignoring unreadable cache {}: {e}", path.display());
                BTreeMap::new()
            }),
            Err(_) => BTreeMap::new(),
        };
        FactorCache {
            path: Some(path),
            entries,
            dirty: false,
        }
    }

    pub fn key(p: u64, precision: u32, lambda_residue: u64, n: u32) -> String {
        format!("{p}:{precision}:{lambda_residue}:{n}")
    }

    pub fn get(&self, key: &str) -> Option<&[PrimeJson]> {
        self.path.as_ref()?;
        self.entries.get(key).map(Vec::as_slice)
    }

    pub fn insert(&mut self, key: String, value: Vec<PrimeJson>) {
        if self.path.is_some() {
            self.entries.insert(key, value);
            self.dirty = true;
        }
    }

    pub fn save(&self) {
        let Some(path) = &self.path else { return };
        if !self.dirty {
            return;
        }
        let write = || -> std::io::Result<()> {
            if let Some(dir) = path.parent() {
                fs::create_dir_all(dir)?;
            }
            let text =
                serde_json::to_string_pretty(&self.entries).map_err(std::io::Error::other)?;
            let tmp = path.with_extension("json.tmp");
            fs::write(&tmp, text)?;
            fs::rename(&tmp, path)
        };
        if let Err(e) = write() {
            eprintln!("warning: could not write cache {}: {e}", path.display());
        }
    }
}
