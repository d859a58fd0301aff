//! Content-addressed, immutable package store.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use sha2::{Digest, Sha256};
use thiserror::Error;
use tlviz_core::model::{parse_package, AnnotationPackage, PackageError};

/// Package ids are the lowercase hex SHA-256 of the uploaded bytes.
pub fn package_id(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug)]
pub struct StoredPackage {
    pub id: String,
    pub package: AnnotationPackage,
    pub byte_len: usize,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error(transparent)]
    Package(#[from] PackageError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl RegistryError {
    fn io(path: &Path, source: io::Error) -> Self {
        RegistryError::Io {
            path: path.to_owned(),
            source,
        }
    }
}

/// Registered packages, readable concurrently. A package becomes visible
/// only after it has been validated and, when a data directory is
/// configured, durably written.
#[derive(Debug, Default)]
pub struct Registry {
    packages: RwLock<HashMap<String, Arc<StoredPackage>>>,
    data_dir: Option<PathBuf>,
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Registry {
    pub fn in_memory() -> Self {
        Registry::default()
    }

    /// Opens (creating if needed) a persistent store and loads every
    /// `<id>.json` file in it. Files that fail validation or whose name does
    /// not match their content hash are skipped with a warning.
    pub fn open(data_dir: impl Into<PathBuf>) -> Result<Self, RegistryError> {
        let data_dir = data_dir.into();
        fs::create_dir_all(&data_dir).map_err(|e| RegistryError::io(&data_dir, e))?;
        let mut packages = HashMap::new();
        let entries = fs::read_dir(&data_dir).map_err(|e| RegistryError::io(&data_dir, e))?;
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for path in paths {
            let bytes = fs::read(&path).map_err(|e| RegistryError::io(&path, e))?;
            let id = package_id(&bytes);
            if path.file_stem().and_then(|s| s.to_str()) != Some(id.as_str()) {
                tracing::warn!(path = %path.display(), "skipping stored package: name does not match content hash");
                continue;
            }
            match parse_package(&bytes) {
                Ok(package) => {
                    let stored = StoredPackage {
                        id: id.clone(),
                        package,
                        byte_len: bytes.len(),
                    };
                    packages.insert(id, Arc::new(stored));
                }
                Err(e) => {
                    tracing::warn!(path = %path.display(), error = %e, "skipping invalid stored package")
                }
            }
        }
        tracing::info!(count = packages.len(), dir = %data_dir.display(), "loaded package store");
        Ok(Registry {
            packages: RwLock::new(packages),
            data_dir: Some(data_dir),
        })
    }

    pub fn data_dir(&self) -> Option<&Path> {
        self.data_dir.as_deref()
    }

    pub fn get(&self, id: &str) -> Option<Arc<StoredPackage>> {
        self.packages.read().expect("registry lock").get(id).cloned()
    }

    pub fn len(&self) -> usize {
        self.packages.read().expect("registry lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sorted ids of all registered packages.
    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self
            .packages
            .read()
            .expect("registry lock")
            .keys()
            .cloned()
            .collect();
        ids.sort();
        ids
    }

    /// Validates, persists and publishes a package. Uploading bytes that are
    /// already registered returns the existing entry.
    pub fn insert(&self, bytes: &[u8]) -> Result<Arc<StoredPackage>, RegistryError> {
        let id = package_id(bytes);
        if let Some(existing) = self.get(&id) {
            return Ok(existing);
        }
        let package = parse_package(bytes)?;
        if let Some(dir) = &self.data_dir {
            persist(dir, &id, bytes)?;
        }
        let stored = Arc::new(StoredPackage {
            id: id.clone(),
            package,
            byte_len: bytes.len(),
        });
        let mut packages = self.packages.write().expect("registry lock");
        Ok(packages.entry(id).or_insert(stored).clone())
    }
}

/// Writes through a temporary file and a rename so a crash never leaves a
/// truncated `<id>.json` behind.
fn persist(dir: &Path, id: &str, bytes: &[u8]) -> Result<(), RegistryError> {
    let target = dir.join(format!("{id}.json"));
    let n = TEMP_COUNTER.fetch_add(1, Ordering::Relaxed);
    let temp = dir.join(format!(".{id}.{}.{n}.tmp", std::process::id()));
    fs::write(&temp, bytes).map_err(|e| RegistryError::io(&temp, e))?;
    fs::rename(&temp, &target).map_err(|e| {
        let _ = fs::remove_file(&temp);
        RegistryError::io(&target, e)
    })
}
