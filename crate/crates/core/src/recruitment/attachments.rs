use std::collections::HashMap;
use std::path::PathBuf;

use parking_lot::RwLock;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Content-addressed storage for resume attachments. Keys are SHA-256 hex digests.
#[derive(Debug)]
pub enum AttachmentStore {
    Memory(RwLock<HashMap<String, Vec<u8>>>),
    Directory(PathBuf),
}

impl AttachmentStore {
    pub fn memory() -> Self {
        AttachmentStore::Memory(RwLock::new(HashMap::new()))
    }

    pub fn directory(path: impl Into<PathBuf>) -> Self {
        AttachmentStore::Directory(path.into())
    }

    pub fn key_for(bytes: &[u8]) -> String {
        hex::encode(Sha256::digest(bytes))
    }

    pub fn put(&self, bytes: &[u8]) -> Result<String> {
        let key = Self::key_for(bytes);
        match self {
            AttachmentStore::Memory(map) => {
                map.write().entry(key.clone()).or_insert_with(|| bytes.to_vec());
            }
            AttachmentStore::Directory(dir) => {
                let path = dir.join(&key);
                if !path.exists() {
                    let io = |e: std::io::Error| Error::StoreUnavailable(format!("{}: {e}", path.display()));
                    std::fs::create_dir_all(dir).map_err(io)?;
                    let tmp = dir.join(format!("{key}.part"));
                    std::fs::write(&tmp, bytes).map_err(io)?;
                    std::fs::rename(&tmp, &path).map_err(io)?;
                }
            }
        }
        Ok(key)
    }

    pub fn get(&self, key: &str) -> Result<Vec<u8>> {
        if key.len() != 64 || !key.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::StoreUnavailable(format!("malformed attachment key {key:?}")));
        }
        match self {
            AttachmentStore::Memory(map) => map
                .read()
                .get(key)
                .cloned()
                .ok_or_else(|| Error::StoreUnavailable(format!("attachment {key} is missing"))),
            AttachmentStore::Directory(dir) => {
                std::fs::read(dir.join(key)).map_err(|e| Error::StoreUnavailable(format!("attachment {key}: {e}")))
            }
        }
    }
}
