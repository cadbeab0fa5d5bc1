use std::sync::Arc;

use crate::auth::{Auth, HashCost};
use crate::clock::{SharedClock, SystemClock};
use crate::config::ServiceConfig;
use crate::directory::Directory;
use crate::error::Result;
use crate::presentations::Presentations;
use crate::recruitment::{AttachmentStore, Recruitment};
use crate::search::Search;
use crate::store::{Fixture, Store};

/// Runtime switches the services consult.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub upload_max_bytes: usize,
    /// Lower-case, dot-prefixed (".pdf").
    pub allowed_extensions: Vec<String>,
    pub enforce_capacity: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            upload_max_bytes: 5 * 1024 * 1024,
            allowed_extensions: vec![".pdf".into(), ".doc".into(), ".docx".into()],
            enforce_capacity: true,
        }
    }
}

/// The assembled application: store, clock, sessions and attachment storage,
/// with one accessor per service area.
pub struct Campus {
    store: Arc<Store>,
    clock: SharedClock,
    auth: Auth,
    attachments: AttachmentStore,
    settings: Settings,
}

impl Campus {
    pub fn builder() -> CampusBuilder {
        CampusBuilder::default()
    }

    pub fn from_config(config: &ServiceConfig) -> Result<Campus> {
        let store = Store::open(&config.store_config())?;
        let attachments = match &config.attachments_dir {
            Some(dir) => AttachmentStore::directory(dir),
            None => AttachmentStore::memory(),
        };
        Ok(Campus::builder()
            .store(Arc::new(store))
            .hash_cost(config.hash_cost())
            .session_ttl_minutes(i64::from(config.session_ttl_minutes))
            .attachments(attachments)
            .settings(Settings {
                upload_max_bytes: config.upload_max_bytes,
                allowed_extensions: config
                    .allowed_extensions
                    .iter()
                    .map(|e| normalize_extension(e))
                    .collect(),
                enforce_capacity: config.enforce_capacity,
            })
            .build())
    }

    pub fn store(&self) -> &Arc<Store> {
        &self.store
    }

    pub fn clock(&self) -> &SharedClock {
        &self.clock
    }

    pub fn auth(&self) -> &Auth {
        &self.auth
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub(crate) fn attachments(&self) -> &AttachmentStore {
        &self.attachments
    }

    pub fn directory(&self) -> Directory<'_> {
        Directory::new(self)
    }

    pub fn recruitment(&self) -> Recruitment<'_> {
        Recruitment::new(self)
    }

    pub fn presentations(&self) -> Presentations<'_> {
        Presentations::new(self)
    }

    pub fn search(&self) -> Search<'_> {
        Search::new(self)
    }
}

fn normalize_extension(ext: &str) -> String {
    let ext = ext.trim().to_ascii_lowercase();
    if ext.starts_with('.') {
        ext
    } else {
        format!(".{ext}")
    }
}

#[derive(Default)]
pub struct CampusBuilder {
    store: Option<Arc<Store>>,
    clock: Option<SharedClock>,
    hash_cost: Option<HashCost>,
    ttl_minutes: Option<i64>,
    attachments: Option<AttachmentStore>,
    settings: Option<Settings>,
    fixture: Option<Fixture>,
}

impl CampusBuilder {
    pub fn store(mut self, store: Arc<Store>) -> Self {
        self.store = Some(store);
        self
    }

    pub fn clock(mut self, clock: SharedClock) -> Self {
        self.clock = Some(clock);
        self
    }

    pub fn hash_cost(mut self, cost: HashCost) -> Self {
        self.hash_cost = Some(cost);
        self
    }

    pub fn session_ttl_minutes(mut self, minutes: i64) -> Self {
        self.ttl_minutes = Some(minutes);
        self
    }

    pub fn attachments(mut self, attachments: AttachmentStore) -> Self {
        self.attachments = Some(attachments);
        self
    }

    pub fn settings(mut self, settings: Settings) -> Self {
        self.settings = Some(settings);
        self
    }

    /// Seeds the store with `fixture` when building.
    pub fn fixture(mut self, fixture: Fixture) -> Self {
        self.fixture = Some(fixture);
        self
    }

    /// Panics if the fixture cannot be loaded.
    pub fn build(self) -> Campus {
        let store = self.store.unwrap_or_else(|| Arc::new(Store::in_memory()));
        if let Some(fixture) = &self.fixture {
            store.seed(fixture).expect("fixture loads");
        }
        let clock = self.clock.unwrap_or_else(|| Arc::new(SystemClock));
        let auth = Auth::new(
            store.clone(),
            clock.clone(),
            self.hash_cost.unwrap_or_default(),
            self.ttl_minutes.unwrap_or(30),
        );
        Campus {
            store,
            clock,
            auth,
            attachments: self.attachments.unwrap_or_else(AttachmentStore::memory),
            settings: self.settings.unwrap_or_default(),
        }
    }
}
