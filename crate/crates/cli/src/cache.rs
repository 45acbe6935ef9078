//! A content-addressed on-disk certificate cache.
//!
//! Entries are keyed by group and orbit-normalized connection set; the key
//! is echoed inside the file so a hash collision or a stale file is
//! detected as corruption and recomputed. Writes go through a temp file
//! and an atomic rename, serialized by a single writer lock.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use cayley_ci::autengine::{analyze, Certificate};
use cayley_ci::citester::{CertificateStore, StoredAnalysis};
use cayley_ci::digraph::{cayley, Digraph};
use cayley_ci::group::{ConnectionSet, GroupSpec};

use crate::output::group_name;

const MAGIC: &str = "cayley-ci cache v1";
const VERIFY_EVERY: u64 = 100;

pub struct FsStore {
    dir: PathBuf,
    verify: bool,
    write_lock: Mutex<u64>,
    lookups: AtomicU64,
    hits: AtomicU64,
    repaired: AtomicU64,
}

impl FsStore {
    pub fn open(dir: &Path, verify: bool) -> std::io::Result<FsStore> {
        fs::create_dir_all(dir)?;
        Ok(FsStore {
            dir: dir.to_path_buf(),
            verify,
            write_lock: Mutex::new(0),
            lookups: AtomicU64::new(0),
            hits: AtomicU64::new(0),
            repaired: AtomicU64::new(0),
        })
    }

    pub fn lookups(&self) -> u64 {
        self.lookups.load(Ordering::Relaxed)
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn repaired(&self) -> u64 {
        self.repaired.load(Ordering::Relaxed)
    }

    fn key(spec: &GroupSpec, set: &ConnectionSet) -> String {
        format!("{}|{}", group_name(spec), set)
    }

    fn path_for(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        let mut name = String::with_capacity(68);
        for byte in digest {
            name.push_str(&format!("{byte:02x}"));
        }
        name.push_str(".txt");
        self.dir.join(name)
    }

    fn render(key: &str, value: &StoredAnalysis) -> String {
        let order = match value.aut_order {
            Some(order) => order.to_string(),
            None => "overflow".to_string(),
        };
        format!(
            "{MAGIC}\nkey {key}\naut_order {order}\n{}",
            value.certificate.to_digraph().to_text()
        )
    }

    fn parse(text: &str, expected_key: &str) -> Option<StoredAnalysis> {
        let mut lines = text.splitn(4, '\n');
        if lines.next()? != MAGIC {
            return None;
        }
        if lines.next()?.strip_prefix("key ")? != expected_key {
            return None;
        }
        let order_text = lines.next()?.strip_prefix("aut_order ")?;
        let aut_order = match order_text {
            "overflow" => None,
            digits => Some(digits.parse::<u128>().ok()?),
        };
        let digraph = Digraph::from_text(lines.next()?).ok()?;
        Some(StoredAnalysis {
            certificate: Certificate::assume_canonical(&digraph),
            aut_order,
        })
    }

    fn write(&self, key: &str, value: &StoredAnalysis) {
        let path = self.path_for(key);
        let mut counter = self.write_lock.lock().unwrap();
        *counter += 1;
        let temp = path.with_extension(format!("tmp.{}.{}", std::process::id(), *counter));
        let payload = FsStore::render(key, value);
        if fs::write(&temp, payload)
            .and_then(|()| fs::rename(&temp, &path))
            .is_err()
        {
            let _ = fs::remove_file(&temp);
            eprintln!("warning: could not write cache entry {}", path.display());
        }
    }

    fn recompute(spec: &GroupSpec, set: &ConnectionSet) -> Option<StoredAnalysis> {
        let graph = cayley(spec, set).ok()?;
        let analysis = analyze(&graph);
        Some(StoredAnalysis {
            certificate: analysis.certificate,
            aut_order: analysis.aut_order,
        })
    }
}

impl CertificateStore for FsStore {
    fn get(&self, spec: &GroupSpec, set: &ConnectionSet) -> Option<StoredAnalysis> {
        self.lookups.fetch_add(1, Ordering::Relaxed);
        let key = FsStore::key(spec, set);
        let path = self.path_for(&key);
        let text = fs::read_to_string(&path).ok()?;
        let Some(stored) = FsStore::parse(&text, &key) else {
            eprintln!(
                "warning: corrupt cache entry {}, recomputing",
                path.display()
            );
            return None;
        };
        let hit_index = self.hits.fetch_add(1, Ordering::Relaxed) + 1;
        if self.verify && hit_index.is_multiple_of(VERIFY_EVERY) {
            if let Some(fresh) = FsStore::recompute(spec, set) {
                if fresh != stored {
                    eprintln!(
                        "warning: cache entry {} disagrees with recomputation, repairing",
                        path.display()
                    );
                    self.repaired.fetch_add(1, Ordering::Relaxed);
                    self.write(&key, &fresh);
                    return Some(fresh);
                }
            }
        }
        Some(stored)
    }

    fn put(&self, spec: &GroupSpec, set: &ConnectionSet, value: &StoredAnalysis) {
        self.write(&FsStore::key(spec, set), value);
    }
}
