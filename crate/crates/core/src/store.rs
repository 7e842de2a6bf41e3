//! On-disk memo of computed counts and polynomials.
//!
//! The file is canonical JSON with sorted keys:
//!
//! ```json
//! {
//!   "entries": { "hyp-hat|3|4": "71" },
//!   "format_version": 1,
//!   "polys": { "2,5": ["4", "0", "-2"] }
//! }
//! ```
//!
//! A file with an unknown version or any malformed entry is rejected as a
//! whole; nothing from it reaches the engine.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formulas::{BinPoly, CountKey, Engine};
use crate::peakcore::{is_admissible, Count, PeakSet, Variant};

pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_CACHE_FILE: &str = ".peaktally-cache.json";
pub const CACHE_ENV: &str = "PEAKTALLY_CACHE";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("cache io error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cache is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported cache format_version {found} (expected {FORMAT_VERSION})")]
    Version { found: u32 },
    #[error("bad cache entry {key:?}: {reason}")]
    BadEntry { key: String, reason: String },
}

/// Validated cache contents: memoised counts and polynomials.
pub type Decoded = (Vec<(CountKey, Count)>, Vec<(PeakSet, BinPoly)>);

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheFile {
    pub entries: BTreeMap<String, String>,
    pub format_version: u32,
    pub polys: BTreeMap<String, Vec<String>>,
}

pub fn entry_key(key: &CountKey) -> String {
    format!("{}|{}|{}", key.variant.token(), key.set, key.n)
}

pub fn parse_entry_key(key: &str) -> Result<CountKey, StoreError> {
    let bad = |reason: &str| StoreError::BadEntry {
        key: key.to_string(),
        reason: reason.to_string(),
    };
    let mut parts = key.split('|');
    let (Some(v), Some(s), Some(n), None) =
        (parts.next(), parts.next(), parts.next(), parts.next())
    else {
        return Err(bad("expected variant|set|n"));
    };
    let variant: Variant = v.parse().map_err(|_| bad("unknown variant"))?;
    let set: PeakSet = s.parse().map_err(|_| bad("malformed peak set"))?;
    let n: u32 = n
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| bad("n must be a positive integer"))?;
    Ok(CountKey { variant, set, n })
}

impl CacheFile {
    pub fn from_engine(engine: &Engine) -> Self {
        CacheFile {
            format_version: FORMAT_VERSION,
            entries: engine
                .cached_counts()
                .into_iter()
                .map(|(k, v)| (entry_key(&k), v.to_string()))
                .collect(),
            polys: engine
                .cached_polys()
                .into_iter()
                .map(|(s, p)| (s.to_string(), p.to_decimal_strings()))
                .collect(),
        }
    }

    /// Checks every entry and returns the decoded contents.
    pub fn decode(&self) -> Result<Decoded, StoreError> {
        if self.format_version != FORMAT_VERSION {
            return Err(StoreError::Version {
                found: self.format_version,
            });
        }
        let mut counts = Vec::with_capacity(self.entries.len());
        for (key, value) in &self.entries {
            let k = parse_entry_key(key)?;
            let bad = |reason: &str| StoreError::BadEntry {
                key: key.clone(),
                reason: reason.to_string(),
            };
            let v: Count = value
                .parse()
                .map_err(|_| bad("count is not a decimal integer"))?;
            if !is_admissible(k.set, k.n, k.variant) && v != Count::zero() {
                return Err(bad("nonzero count for an inadmissible set"));
            }
            counts.push((k, v));
        }
        let mut polys = Vec::with_capacity(self.polys.len());
        for (key, coeffs) in &self.polys {
            let bad = |reason: String| StoreError::BadEntry {
                key: key.clone(),
                reason,
            };
            let set: PeakSet = key.parse().map_err(|_| bad("malformed peak set".into()))?;
            let poly = BinPoly::from_decimal_strings(coeffs).map_err(|e| bad(e.to_string()))?;
            polys.push((set, poly));
        }
        Ok((counts, polys))
    }

    pub fn apply(&self, engine: &Engine) -> Result<usize, StoreError> {
        let (counts, polys) = self.decode()?;
        let loaded = counts.len() + polys.len();
        for (k, v) in counts {
            engine.seed_count(k, v);
        }
        for (s, p) in polys {
            engine.seed_poly(s, p);
        }
        Ok(loaded)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("cache serialises");
        s.push('\n');
        s
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn load_cache(path: &Path) -> Result<CacheFile, StoreError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let file: CacheFile = serde_json::from_str(&text)?;
    file.decode()?;
    Ok(file)
}

/// Seeds `engine` from `path`. A missing file loads nothing.
pub fn load_into(path: &Path, engine: &Engine) -> Result<usize, StoreError> {
    if !path.exists() {
        return Ok(0);
    }
    load_cache(path)?.apply(engine)
}

/// Writes the engine's memo through a temporary file and a rename.
pub fn save_cache(path: &Path, engine: &Engine) -> Result<(), StoreError> {
    let json = CacheFile::from_engine(engine).to_json();
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        f.write_all(json.as_bytes()).map_err(io_err(&tmp))?;
        f.sync_all().map_err(io_err(&tmp))?;
    }
    fs::rename(&tmp, path).map_err(io_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_keys_round_trip() {
        let key = CountKey {
            variant: Variant::PB_HAT,
            set: PeakSet::new(&[1, 3]).unwrap(),
            n: 4,
        };
        assert_eq!(entry_key(&key), "hyp-hat|1,3|4");
        assert_eq!(parse_entry_key("hyp-hat|1,3|4").unwrap(), key);
        let empty = parse_entry_key("sym||5").unwrap();
        assert!(empty.set.is_empty());
        for bad in [
            "sym|2",
            "sym|2|0",
            "foo|2|5",
            "sym|2,3|5",
            "sym|2|5|1",
            "sym|x|5",
        ] {
            assert!(parse_entry_key(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn rejects_bad_files() {
        let mut file = CacheFile {
            format_version: 2,
            ..CacheFile::default()
        };
        assert!(matches!(
            file.decode(),
            Err(StoreError::Version { found: 2 })
        ));
        file.format_version = 1;
        file.entries.insert("sym|2|5".into(), "-3".into());
        assert!(file.decode().is_err());
        file.entries.insert("sym|2|5".into(), "16".into());
        assert!(file.decode().is_ok());
        file.entries.insert("sym|1|5".into(), "16".into());
        assert!(file.decode().is_err());
    }
}
