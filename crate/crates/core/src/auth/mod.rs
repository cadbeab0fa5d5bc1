//! Credential checks, sessions and role-based authorization.

pub mod password;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::clock::SharedClock;
use crate::error::{Error, Result};
use crate::model::{Administrator, ApprovalStatus, Company, Student, Timestamp};
use crate::store::Store;

pub use password::{HashCost, PasswordHasher};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    Student,
    Company,
    Admin,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::Student, Role::Company, Role::Admin];
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Student => "Student",
            Role::Company => "Company",
            Role::Admin => "Admin",
        })
    }
}

#[derive(Clone, Deserialize)]
pub struct Credentials {
    pub principal_id: String,
    pub password: String,
}

impl Credentials {
    pub fn new(principal_id: impl Into<String>, password: impl Into<String>) -> Self {
        Credentials {
            principal_id: principal_id.into(),
            password: password.into(),
        }
    }
}

impl fmt::Debug for Credentials {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Credentials")
            .field("principal_id", &self.principal_id)
            .field("password", &"<redacted>")
            .finish()
    }
}

/// Non-empty set of roles allowed to perform an action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleRequirement {
    allowed: BTreeSet<Role>,
}

impl RoleRequirement {
    pub fn new(roles: impl IntoIterator<Item = Role>) -> Option<Self> {
        let allowed: BTreeSet<Role> = roles.into_iter().collect();
        (!allowed.is_empty()).then_some(RoleRequirement { allowed })
    }

    pub fn only(role: Role) -> Self {
        RoleRequirement {
            allowed: BTreeSet::from([role]),
        }
    }

    pub fn any() -> Self {
        RoleRequirement {
            allowed: Role::ALL.into_iter().collect(),
        }
    }

    pub fn allows(&self, role: Role) -> bool {
        self.allowed.contains(&role)
    }

    pub fn roles(&self) -> impl Iterator<Item = Role> + '_ {
        self.allowed.iter().copied()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SessionToken(String);

impl SessionToken {
    pub fn new(raw: impl Into<String>) -> Self {
        SessionToken(raw.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn generate() -> Self {
        let mut bytes = [0u8; 32];
        rand::rngs::OsRng.fill_bytes(&mut bytes);
        SessionToken(hex::encode(bytes))
    }
}

impl fmt::Debug for SessionToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: String = self.0.chars().take(6).collect();
        write!(f, "SessionToken({shown}…)")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Session {
    pub token: SessionToken,
    pub role: Role,
    pub principal_id: String,
    pub expires_at: Timestamp,
}

/// An authenticated identity, as returned by [`Auth::authorize`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Principal {
    pub role: Role,
    pub id: String,
}

impl Principal {
    pub fn new(role: Role, id: impl Into<String>) -> Self {
        Principal { role, id: id.into() }
    }

    pub fn require(&self, role: Role) -> Result<()> {
        if self.role == role {
            Ok(())
        } else {
            Err(Error::Forbidden(role.to_string()))
        }
    }

    pub fn require_any(&self, requirement: &RoleRequirement) -> Result<()> {
        if requirement.allows(self.role) {
            Ok(())
        } else {
            let names: Vec<String> = requirement.roles().map(|r| r.to_string()).collect();
            Err(Error::Forbidden(names.join(" or ")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PasswordChange {
    Changed,
    Mismatch,
    WrongOld,
}

pub struct Auth {
    store: Arc<Store>,
    clock: SharedClock,
    hasher: PasswordHasher,
    ttl_minutes: i64,
    sessions: RwLock<HashMap<SessionToken, Session>>,
}

impl Auth {
    pub fn new(store: Arc<Store>, clock: SharedClock, cost: HashCost, ttl_minutes: i64) -> Self {
        Auth {
            store,
            clock,
            hasher: PasswordHasher::new(cost),
            ttl_minutes,
            sessions: RwLock::new(HashMap::new()),
        }
    }

    pub fn hasher(&self) -> &PasswordHasher {
        &self.hasher
    }

    fn stored_digest(&self, role: Role, id: &str) -> Option<(String, Option<ApprovalStatus>)> {
        match role {
            Role::Student => self.store.find::<Student>(id).map(|s| (s.password_digest, None)),
            Role::Admin => self.store.find::<Administrator>(id).map(|a| (a.password_digest, None)),
            Role::Company => self
                .store
                .find::<Company>(id)
                .map(|c| (c.password_digest, Some(c.approval_status))),
        }
    }

    /// Verifies credentials against the role's table and opens a session.
    ///
    /// Unknown ids and wrong passwords both yield [`Error::InvalidCredentials`].
    /// Companies must also be approved.
    pub fn login(&self, role: Role, credentials: &Credentials) -> Result<Session> {
        if credentials.principal_id.is_empty() || credentials.password.is_empty() {
            return Err(Error::InvalidCredentials);
        }
        let Some((digest, approval)) = self.stored_digest(role, &credentials.principal_id) else {
            self.hasher.verify_decoy(&credentials.password);
            return Err(Error::InvalidCredentials);
        };
        if !self.hasher.verify(&credentials.password, &digest) {
            return Err(Error::InvalidCredentials);
        }
        if matches!(approval, Some(status) if status != ApprovalStatus::Approved) {
            return Err(Error::CompanyNotApproved);
        }
        let session = self.open_session(role, &credentials.principal_id);
        tracing::info!(%role, principal = %credentials.principal_id, "login");
        Ok(session)
    }

    fn open_session(&self, role: Role, principal_id: &str) -> Session {
        let expires_at = self.clock.now().plus_minutes(self.ttl_minutes);
        let mut sessions = self.sessions.write();
        let token = loop {
            let t = SessionToken::generate();
            if !sessions.contains_key(&t) {
                break t;
            }
        };
        let session = Session {
            token: token.clone(),
            role,
            principal_id: principal_id.to_string(),
            expires_at,
        };
        sessions.insert(token, session.clone());
        session
    }

    pub fn authorize(&self, token: Option<&SessionToken>, requirement: &RoleRequirement) -> Result<Principal> {
        let token = token.ok_or(Error::Unauthorized)?;
        let now = self.clock.now();
        let principal = {
            let sessions = self.sessions.read();
            match sessions.get(token) {
                Some(s) if s.expires_at > now => Some(Principal::new(s.role, &s.principal_id)),
                Some(_) => None,
                None => return Err(Error::Unauthorized),
            }
        };
        let Some(principal) = principal else {
            self.sessions.write().remove(token);
            return Err(Error::Unauthorized);
        };
        principal.require_any(requirement)?;
        Ok(principal)
    }

    pub fn logout(&self, token: &SessionToken) {
        self.sessions.write().remove(token);
    }

    /// Replaces the session principal's password digest.
    ///
    /// Confirmation mismatch is checked first; neither failure writes anything.
    pub fn change_password(&self, token: &SessionToken, old: &str, new: &str, confirm: &str) -> Result<PasswordChange> {
        let principal = self.authorize(Some(token), &RoleRequirement::any())?;
        if new != confirm {
            return Ok(PasswordChange::Mismatch);
        }
        if new.is_empty() {
            return Err(Error::validation("new", "must not be empty"));
        }
        let fresh = self.hasher.digest(new);
        let hasher = &self.hasher;
        let id = principal.id.as_str();
        self.store.write(|tx| {
            let wrong = |digest: &str| !hasher.verify(old, digest);
            match principal.role {
                Role::Student => {
                    let mut row: Student = tx.find(id).ok_or(Error::Unauthorized)?;
                    if wrong(&row.password_digest) {
                        return Ok(PasswordChange::WrongOld);
                    }
                    row.password_digest = fresh;
                    tx.update(row)?;
                }
                Role::Company => {
                    let mut row: Company = tx.find(id).ok_or(Error::Unauthorized)?;
                    if wrong(&row.password_digest) {
                        return Ok(PasswordChange::WrongOld);
                    }
                    row.password_digest = fresh;
                    tx.update(row)?;
                }
                Role::Admin => {
                    let mut row: Administrator = tx.find(id).ok_or(Error::Unauthorized)?;
                    if wrong(&row.password_digest) {
                        return Ok(PasswordChange::WrongOld);
                    }
                    row.password_digest = fresh;
                    tx.update(row)?;
                }
            }
            Ok(PasswordChange::Changed)
        })
    }

    /// Drops every session belonging to a principal, e.g. after deletion.
    pub fn revoke_principal(&self, role: Role, principal_id: &str) {
        self.sessions
            .write()
            .retain(|_, s| !(s.role == role && s.principal_id == principal_id));
    }
}
