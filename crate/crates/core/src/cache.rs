//! On-disk store for Kostant–Kumar results.
//!
//! One JSON object per line: `{"key", "v", "w", "value"}` where `key` is the
//! SHA-256 of `"kk/1:" + v + ":" + w`. Lines whose key does not match are ignored.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::ktheory::KostantKumar;
use crate::perm::Permutation;
use crate::poly::Polynomial;

const FILE_NAME: &str = "kostant_kumar.jsonl";

#[derive(Serialize, Deserialize)]
struct Record {
    key: String,
    v: String,
    w: String,
    value: String,
}

pub fn key(v: &Permutation, w: &Permutation) -> String {
    let mut h = Sha256::new();
    h.update(format!("kk/1:{v}:{w}").as_bytes());
    hex::encode(h.finalize())
}

pub struct KkStore {
    path: PathBuf,
}

impl KkStore {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { path: dir.join(FILE_NAME) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Loads every valid record into `kk`; returns how many were loaded.
    pub fn load_into(&self, kk: &KostantKumar) -> Result<usize> {
        if !self.path.exists() {
            return Ok(0);
        }
        let mut loaded = 0;
        for line in BufReader::new(fs::File::open(&self.path)?).lines() {
            let line = line?;
            let Ok(rec) = serde_json::from_str::<Record>(&line) else {
                continue;
            };
            let (Ok(v), Ok(w)) = (rec.v.parse::<Permutation>(), rec.w.parse::<Permutation>()) else {
                continue;
            };
            if key(&v, &w) != rec.key {
                continue;
            }
            let Ok(value) = Polynomial::parse(&rec.value) else {
                continue;
            };
            kk.insert(v, w, value);
            loaded += 1;
        }
        Ok(loaded)
    }

    /// Rewrites the store with every entry of `kk`, sorted by key.
    pub fn save(&self, kk: &KostantKumar) -> Result<usize> {
        let mut recs: Vec<Record> = kk
            .entries()
            .into_iter()
            .map(|((v, w), p)| Record { key: key(&v, &w), v: v.to_string(), w: w.to_string(), value: p.to_string() })
            .collect();
        recs.sort_by(|a, b| a.key.cmp(&b.key));
        let tmp = self.path.with_extension("jsonl.tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            for r in &recs {
                writeln!(f, "{}", serde_json::to_string(r)?)?;
            }
        }
        fs::rename(&tmp, &self.path)?;
        Ok(recs.len())
    }
}
