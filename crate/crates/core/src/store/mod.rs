//! Transactional relational storage for every entity kind.
//!
//! The committed state is an immutable [`Tables`] snapshot behind an `Arc`;
//! readers clone the `Arc` and never block each other. A single writer at a
//! time works on a private copy inside a [`Transaction`]; commit validates
//! nothing further (every write was checked when issued) and publishes the
//! copy atomically. Dropping a transaction without committing discards it.
//!
//! When backed by a file the committed state is rewritten to a temporary
//! file, synced and renamed over the store file before it becomes visible,
//! so a crash leaves either the old or the new state on disk.

mod entity;
mod error;
mod query;
mod tables;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Duration;

use parking_lot::{Mutex, MutexGuard, RwLock};
use serde::{Deserialize, Serialize};

pub use entity::{Entity, Key, KeyPolicy, Kind, Ref, UniqueValue};
pub use error::StoreError;
pub use query::{compare_values, Op, OrderBy, Predicate, Query};
pub use tables::{Fixture, Table, Tables};

use crate::model::Validate;
use tables::for_each_table;

/// Current on-disk layout version written by [`Store::migrate`].
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StoreLocation {
    Memory,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreConfig {
    pub location: StoreLocation,
    pub busy_timeout_ms: u64,
}

impl StoreConfig {
    pub fn memory() -> Self {
        StoreConfig {
            location: StoreLocation::Memory,
            busy_timeout_ms: 5_000,
        }
    }

    pub fn file(path: impl Into<PathBuf>) -> Self {
        StoreConfig {
            location: StoreLocation::File(path.into()),
            busy_timeout_ms: 5_000,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct StoreFile {
    schema_version: u32,
    #[serde(default)]
    sequences: std::collections::BTreeMap<Kind, i64>,
    #[serde(flatten)]
    data: Fixture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MigrationOutcome {
    Created,
    Upgraded { from: u32 },
    UpToDate,
}

/// One failed integrity check found by [`Tables::integrity_issues`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegrityIssue {
    Dangling { kind: Kind, key: Key, reference: Ref },
    DuplicateUnique { kind: Kind, value: UniqueValue },
    KeyMismatch { kind: Kind, key: Key },
    Hierarchy { student_id: String },
    Invalid { kind: Kind, key: Key, reason: String },
}

pub struct Store {
    committed: RwLock<Arc<Tables>>,
    writer: Mutex<()>,
    file: Option<PathBuf>,
    busy_timeout: Duration,
    tx_counter: AtomicU64,
}

impl std::fmt::Debug for Store {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Store")
            .field("file", &self.file)
            .finish_non_exhaustive()
    }
}

impl Store {
    pub fn in_memory() -> Store {
        Store::with_tables(Tables::default(), None, Duration::from_millis(5_000))
    }

    fn with_tables(tables: Tables, file: Option<PathBuf>, busy_timeout: Duration) -> Store {
        Store {
            committed: RwLock::new(Arc::new(tables)),
            writer: Mutex::new(()),
            file,
            busy_timeout,
            tx_counter: AtomicU64::new(1),
        }
    }

    /// Opens a store. File stores must have been created by [`Store::migrate`].
    pub fn open(config: &StoreConfig) -> Result<Store, StoreError> {
        let timeout = Duration::from_millis(config.busy_timeout_ms);
        match &config.location {
            StoreLocation::Memory => Ok(Store::with_tables(Tables::default(), None, timeout)),
            StoreLocation::File(path) => {
                let file = read_store_file(path)?.ok_or_else(|| {
                    StoreError::Unavailable(format!("{} has no schema; run migrate first", path.display()))
                })?;
                if file.schema_version != SCHEMA_VERSION {
                    return Err(StoreError::Unavailable(format!(
                        "{} is at schema version {}, expected {SCHEMA_VERSION}; run migrate",
                        path.display(),
                        file.schema_version
                    )));
                }
                let mut tables = load_tables(file.data)?;
                tables.sequences = file.sequences;
                Ok(Store::with_tables(tables, Some(path.clone()), timeout))
            }
        }
    }

    /// Creates the store file, or brings an existing one to [`SCHEMA_VERSION`]. Idempotent.
    pub fn migrate(path: &Path) -> Result<MigrationOutcome, StoreError> {
        match read_store_file(path)? {
            None => {
                write_store_file(path, &Tables::default())?;
                Ok(MigrationOutcome::Created)
            }
            Some(file) if file.schema_version == SCHEMA_VERSION => Ok(MigrationOutcome::UpToDate),
            Some(file) if file.schema_version < SCHEMA_VERSION => {
                let from = file.schema_version;
                let mut tables = load_tables(file.data)?;
                tables.sequences = file.sequences;
                write_store_file(path, &tables)?;
                Ok(MigrationOutcome::Upgraded { from })
            }
            Some(file) => Err(StoreError::Unavailable(format!(
                "{} was written by a newer schema ({})",
                path.display(),
                file.schema_version
            ))),
        }
    }

    pub fn is_durable(&self) -> bool {
        self.file.is_some()
    }

    /// The latest committed state.
    pub fn snapshot(&self) -> Arc<Tables> {
        self.committed.read().clone()
    }

    pub fn find<T: Entity>(&self, key: impl Into<Key>) -> Option<T> {
        T::table(&self.snapshot()).get(&key.into()).cloned()
    }

    pub fn query<T: Entity>(&self, query: &Query) -> Result<Vec<T>, StoreError> {
        query.run(T::table(&self.snapshot()))
    }

    pub fn all<T: Entity>(&self) -> Vec<T> {
        T::table(&self.snapshot()).rows().cloned().collect()
    }

    /// Starts a write transaction, waiting up to the busy timeout for the writer lock.
    pub fn begin(&self) -> Result<Transaction<'_>, StoreError> {
        let guard = self
            .writer
            .try_lock_for(self.busy_timeout)
            .ok_or(StoreError::Busy(self.busy_timeout.as_millis() as u64))?;
        let work = (*self.snapshot()).clone();
        Ok(Transaction {
            store: self,
            _guard: guard,
            id: self.tx_counter.fetch_add(1, Ordering::Relaxed),
            work,
        })
    }

    /// Runs `f` in a transaction, committing on `Ok` and rolling back on `Err`.
    pub fn write<R, E>(&self, f: impl FnOnce(&mut Transaction<'_>) -> Result<R, E>) -> Result<R, E>
    where
        E: From<StoreError>,
    {
        let mut tx = self.begin()?;
        let out = f(&mut tx)?;
        tx.commit()?;
        Ok(out)
    }

    /// Loads a fixture, replacing rows that share a primary key. Idempotent.
    pub fn seed(&self, fixture: &Fixture) -> Result<(), StoreError> {
        self.write(|tx| tx.upsert_fixture(fixture))
    }

    pub fn export(&self) -> Fixture {
        Fixture::from_tables(&self.snapshot())
    }

    pub fn integrity_issues(&self) -> Vec<IntegrityIssue> {
        self.snapshot().integrity_issues()
    }
}

/// An open write transaction. Commit consumes it; drop rolls back.
pub struct Transaction<'s> {
    store: &'s Store,
    _guard: MutexGuard<'s, ()>,
    id: u64,
    work: Tables,
}

impl<'s> Transaction<'s> {
    pub fn id(&self) -> u64 {
        self.id
    }

    /// State as seen inside this transaction, including its own writes.
    pub fn tables(&self) -> &Tables {
        &self.work
    }

    pub fn find<T: Entity>(&self, key: impl Into<Key>) -> Option<T> {
        T::table(&self.work).get(&key.into()).cloned()
    }

    pub fn query<T: Entity>(&self, query: &Query) -> Result<Vec<T>, StoreError> {
        query.run(T::table(&self.work))
    }

    /// Inserts a new row, assigning a generated key when the policy calls for it.
    pub fn insert<T: Entity>(&mut self, mut row: T) -> Result<T, StoreError> {
        match T::KEY_POLICY {
            KeyPolicy::Supplied => {}
            KeyPolicy::GeneratedInt if row.key().is_unset() => {
                let key = self.next_int_key::<T>();
                row.set_key(Key::Int(key));
            }
            KeyPolicy::GeneratedText(prefix) if row.key().is_unset() => {
                let key = self.next_text_key::<T>(prefix);
                row.set_key(Key::Text(key));
            }
            _ => {}
        }
        let key = row.key();
        if T::table(&self.work).contains(&key) {
            return Err(StoreError::DuplicateKey {
                kind: T::KIND,
                constraint: "primary key",
                value: key.to_string(),
            });
        }
        self.check_write(&row, None)?;
        T::table_mut(&mut self.work).put(row.clone());
        Ok(row)
    }

    /// Replaces an existing row with the same primary key.
    pub fn update<T: Entity>(&mut self, row: T) -> Result<T, StoreError> {
        let key = row.key();
        if !T::table(&self.work).contains(&key) {
            return Err(StoreError::NotFound { kind: T::KIND, key });
        }
        self.check_write(&row, Some(&key))?;
        T::table_mut(&mut self.work).put(row.clone());
        Ok(row)
    }

    /// Inserts or replaces by primary key.
    pub fn upsert<T: Entity>(&mut self, row: T) -> Result<T, StoreError> {
        if T::table(&self.work).contains(&row.key()) {
            self.update(row)
        } else {
            self.insert(row)
        }
    }

    /// Removes a row if present, returning how many rows were removed.
    ///
    /// Rows that still have dependents are protected (restrict), except that
    /// deleting an arrangement removes its registrations with it.
    pub fn delete<T: Entity>(&mut self, key: impl Into<Key>) -> Result<usize, StoreError> {
        let key = key.into();
        if !T::table(&self.work).contains(&key) {
            return Ok(0);
        }
        let mut dependents = self.work.dependents_of(T::KIND, &key);
        let cascaded = if T::KIND == Kind::Arrangement {
            dependents.remove(&Kind::Registration).unwrap_or_default()
        } else {
            Vec::new()
        };
        if let Some((kind, keys)) = dependents.into_iter().next() {
            return Err(StoreError::RestrictViolation {
                kind: T::KIND,
                key,
                dependent_kind: kind,
                dependents: keys.len(),
            });
        }
        for reg in cascaded {
            self.work.registrations.take(&reg);
        }
        T::table_mut(&mut self.work).take(&key);
        Ok(1)
    }

    pub fn commit(self) -> Result<(), StoreError> {
        let Transaction {
            store, _guard, work, ..
        } = self;
        if let Some(path) = &store.file {
            write_store_file(path, &work)?;
        }
        *store.committed.write() = Arc::new(work);
        Ok(())
    }

    pub fn rollback(self) {}

    fn check_write<T: Entity>(&self, row: &T, replacing: Option<&Key>) -> Result<(), StoreError> {
        row.validate()?;
        for r in row.references() {
            if !self.work.exists(r.kind, &r.key) {
                return Err(StoreError::ForeignKeyViolation {
                    kind: T::KIND,
                    field: r.field,
                    target: r.key,
                });
            }
        }
        let wanted = row.unique_values();
        if !wanted.is_empty() {
            for other in T::table(&self.work).rows() {
                if Some(&other.key()) == replacing {
                    continue;
                }
                if let Some(clash) = other.unique_values().into_iter().find(|u| wanted.contains(u)) {
                    return Err(StoreError::DuplicateKey {
                        kind: T::KIND,
                        constraint: clash.name,
                        value: clash.value.replace('\u{1f}', "+"),
                    });
                }
            }
        }
        row.check_rules(&self.work)
    }

    fn next_int_key<T: Entity>(&mut self) -> i64 {
        let floor = T::table(&self.work).max_int_key();
        let seq = self.work.sequences.entry(T::KIND).or_insert(0);
        *seq = (*seq).max(floor) + 1;
        *seq
    }

    fn next_text_key<T: Entity>(&mut self, prefix: &str) -> String {
        let mut n = self.work.sequences.get(&T::KIND).copied().unwrap_or(0);
        loop {
            n += 1;
            let candidate = format!("{prefix}{n}");
            if !T::table(&self.work).contains(&Key::Text(candidate.clone())) {
                self.work.sequences.insert(T::KIND, n);
                return candidate;
            }
        }
    }

    fn upsert_fixture(&mut self, f: &Fixture) -> Result<(), StoreError> {
        fn each<T: Entity>(tx: &mut Transaction<'_>, rows: &[T]) -> Result<(), StoreError> {
            rows.iter().try_for_each(|r| tx.upsert(r.clone()).map(|_| ()))
        }
        each(self, &f.colleges)?;
        each(self, &f.majors)?;
        each(self, &f.class_groups)?;
        each(self, &f.education_levels)?;
        each(self, &f.industries)?;
        each(self, &f.administrators)?;
        each(self, &f.students)?;
        each(self, &f.companies)?;
        each(self, &f.company_reviews)?;
        each(self, &f.job_postings)?;
        each(self, &f.resume_applications)?;
        each(self, &f.presentation_applications)?;
        each(self, &f.arrangements)?;
        each(self, &f.registrations)?;
        each(self, &f.notifications)
    }
}

impl Tables {
    /// Full sweep: foreign keys, secondary uniques, stored keys, field limits, hierarchy.
    pub fn integrity_issues(&self) -> Vec<IntegrityIssue> {
        let mut issues: Vec<IntegrityIssue> = self
            .dangling_references()
            .into_iter()
            .map(|(kind, key, reference)| IntegrityIssue::Dangling { kind, key, reference })
            .collect();
        for_each_table!(self, |table| {
            let mut seen = std::collections::BTreeSet::new();
            for row in table.rows() {
                let kind = kind_of(row);
                if table.get(&row.key()).map(|r| r != row).unwrap_or(true) {
                    issues.push(IntegrityIssue::KeyMismatch { kind, key: row.key() });
                }
                if let Err(e) = row.validate() {
                    issues.push(IntegrityIssue::Invalid {
                        kind,
                        key: row.key(),
                        reason: e.to_string(),
                    });
                }
                for u in row.unique_values() {
                    if !seen.insert(u.clone()) {
                        issues.push(IntegrityIssue::DuplicateUnique { kind, value: u });
                    }
                }
            }
        });
        for s in self.students.rows() {
            if s.validate_hierarchy(self) != Ok(true) {
                issues.push(IntegrityIssue::Hierarchy {
                    student_id: s.student_id.clone(),
                });
            }
        }
        issues
    }
}

fn kind_of<T: Entity>(_row: &T) -> Kind {
    T::KIND
}

fn load_tables(data: Fixture) -> Result<Tables, StoreError> {
    let store = Store::in_memory();
    store.seed(&data)?;
    let tables = (*store.snapshot()).clone();
    Ok(tables)
}

fn read_store_file(path: &Path) -> Result<Option<StoreFile>, StoreError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(StoreError::Unavailable(format!("{}: {e}", path.display()))),
    };
    if text.trim().is_empty() {
        return Ok(None);
    }
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| StoreError::Unavailable(format!("{} is corrupt: {e}", path.display())))
}

fn write_store_file(path: &Path, tables: &Tables) -> Result<(), StoreError> {
    let io = |e: std::io::Error| StoreError::Unavailable(format!("{}: {e}", path.display()));
    let doc = StoreFile {
        schema_version: SCHEMA_VERSION,
        sequences: tables.sequences.clone(),
        data: Fixture::from_tables(tables),
    };
    let bytes = serde_json::to_vec_pretty(&doc).map_err(|e| StoreError::Unavailable(e.to_string()))?;
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io)?;
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(&bytes).map_err(io)?;
        f.sync_all().map_err(io)?;
    }
    fs::rename(&tmp, path).map_err(io)?;
    if let Ok(d) = fs::File::open(dir) {
        let _ = d.sync_all();
    }
    Ok(())
}
