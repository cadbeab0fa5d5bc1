//! Administrator maintenance of students, companies and the academic dictionaries,
//! plus company self-registration and profile upkeep.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::auth::{Principal, Role};
use crate::campus::Campus;
use crate::error::{Error, Result};
use crate::model::*;
use crate::store::{Entity, Key, Query};

/// Student record as shown to clients; never carries the password digest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudentProfile {
    pub student_id: String,
    pub name: String,
    pub sex: String,
    pub birthday: Date,
    pub phone: String,
    pub email: String,
    pub college_id: String,
    pub major_id: String,
    pub class_id: String,
}

impl From<Student> for StudentProfile {
    fn from(s: Student) -> Self {
        StudentProfile {
            student_id: s.student_id,
            name: s.name,
            sex: s.sex,
            birthday: s.birthday,
            phone: s.phone,
            email: s.email,
            college_id: s.college_id,
            major_id: s.major_id,
            class_id: s.class_id,
        }
    }
}

#[derive(Clone, Deserialize)]
pub struct StudentDraft {
    pub student_id: String,
    pub name: String,
    #[serde(default)]
    pub sex: String,
    pub birthday: Date,
    #[serde(default)]
    pub phone: String,
    pub email: String,
    pub college_id: String,
    pub major_id: String,
    pub class_id: String,
    pub initial_password: String,
}

impl std::fmt::Debug for StudentDraft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StudentDraft")
            .field("student_id", &self.student_id)
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

/// Partial update; absent fields are left unchanged.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudentChanges {
    pub name: Option<String>,
    pub sex: Option<String>,
    pub birthday: Option<Date>,
    pub phone: Option<String>,
    pub email: Option<String>,
    pub college_id: Option<String>,
    pub major_id: Option<String>,
    pub class_id: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeleteOutcome {
    NeedsConfirmation,
    Deleted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Approve,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ReviewDecision {
    pub decision: Decision,
    #[serde(default)]
    pub note: String,
}

impl ReviewDecision {
    pub fn approve() -> Self {
        ReviewDecision {
            decision: Decision::Approve,
            note: String::new(),
        }
    }

    pub fn reject(note: impl Into<String>) -> Self {
        ReviewDecision {
            decision: Decision::Reject,
            note: note.into(),
        }
    }
}

/// Company record as shown to clients; never carries the password digest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompanyProfile {
    pub company_id: String,
    pub company_name: String,
    pub industry_id: String,
    pub phone: String,
    pub scale: String,
    pub address: String,
    pub established: Date,
    pub capital: String,
    pub detail: String,
    pub worktime: String,
    pub email: String,
    pub approval_status: ApprovalStatus,
}

impl From<Company> for CompanyProfile {
    fn from(c: Company) -> Self {
        CompanyProfile {
            company_id: c.company_id,
            company_name: c.company_name,
            industry_id: c.industry_id,
            phone: c.phone,
            scale: c.scale,
            address: c.address,
            established: c.established,
            capital: c.capital,
            detail: c.detail,
            worktime: c.worktime,
            email: c.email,
            approval_status: c.approval_status,
        }
    }
}

#[derive(Clone, Deserialize)]
pub struct CompanyRegistration {
    pub company_id: String,
    pub company_name: String,
    pub industry_id: String,
    #[serde(default)]
    pub phone: String,
    #[serde(default)]
    pub scale: String,
    #[serde(default)]
    pub address: String,
    pub established: Date,
    #[serde(default)]
    pub capital: String,
    #[serde(default)]
    pub detail: String,
    #[serde(default)]
    pub worktime: String,
    pub email: String,
    pub password: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompanyChanges {
    pub company_name: Option<String>,
    pub industry_id: Option<String>,
    pub phone: Option<String>,
    pub scale: Option<String>,
    pub address: Option<String>,
    pub established: Option<Date>,
    pub capital: Option<String>,
    pub detail: Option<String>,
    pub worktime: Option<String>,
    pub email: Option<String>,
}

/// Dictionary tables an administrator maintains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DictKind {
    College,
    Major,
    ClassGroup,
    Industry,
    EducationLevel,
}

impl DictKind {
    pub const ALL: [DictKind; 5] = [
        DictKind::College,
        DictKind::Major,
        DictKind::ClassGroup,
        DictKind::Industry,
        DictKind::EducationLevel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DictKind::College => "college",
            DictKind::Major => "major",
            DictKind::ClassGroup => "class_group",
            DictKind::Industry => "industry",
            DictKind::EducationLevel => "education_level",
        }
    }

    /// Name of the primary key field in this kind's rows.
    pub fn key_field(self) -> &'static str {
        match self {
            DictKind::College => "college_id",
            DictKind::Major => "major_id",
            DictKind::ClassGroup => "class_id",
            DictKind::Industry => "industry_id",
            DictKind::EducationLevel => "education_id",
        }
    }
}

impl FromStr for DictKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DictKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Input(format!("unknown dictionary {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum DictEntry {
    College(College),
    Major(Major),
    ClassGroup(ClassGroup),
    Industry(Industry),
    EducationLevel(EducationLevel),
}

impl DictEntry {
    pub fn kind(&self) -> DictKind {
        match self {
            DictEntry::College(_) => DictKind::College,
            DictEntry::Major(_) => DictKind::Major,
            DictEntry::ClassGroup(_) => DictKind::ClassGroup,
            DictEntry::Industry(_) => DictKind::Industry,
            DictEntry::EducationLevel(_) => DictKind::EducationLevel,
        }
    }

    /// Parses a row of the given kind from its JSON form.
    pub fn from_json(kind: DictKind, value: serde_json::Value) -> Result<DictEntry> {
        let bad = |e: serde_json::Error| Error::validation(kind.as_str(), e.to_string());
        Ok(match kind {
            DictKind::College => DictEntry::College(serde_json::from_value(value).map_err(bad)?),
            DictKind::Major => DictEntry::Major(serde_json::from_value(value).map_err(bad)?),
            DictKind::ClassGroup => DictEntry::ClassGroup(serde_json::from_value(value).map_err(bad)?),
            DictKind::Industry => DictEntry::Industry(serde_json::from_value(value).map_err(bad)?),
            DictKind::EducationLevel => DictEntry::EducationLevel(serde_json::from_value(value).map_err(bad)?),
        })
    }

    pub fn id(&self) -> String {
        match self {
            DictEntry::College(r) => r.key().to_string(),
            DictEntry::Major(r) => r.key().to_string(),
            DictEntry::ClassGroup(r) => r.key().to_string(),
            DictEntry::Industry(r) => r.key().to_string(),
            DictEntry::EducationLevel(r) => r.key().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DictAction {
    Create(DictEntry),
    Update(DictEntry),
    Delete(DictKind, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum DictOutcome {
    Stored(DictEntry),
    Deleted { deleted: usize },
}

pub struct Directory<'a> {
    campus: &'a Campus,
}

impl<'a> Directory<'a> {
    pub(crate) fn new(campus: &'a Campus) -> Self {
        Directory { campus }
    }

    pub fn add_student(&self, admin: &Principal, draft: StudentDraft) -> Result<StudentProfile> {
        admin.require(Role::Admin)?;
        if draft.initial_password.is_empty() {
            return Err(Error::validation("initial_password", "must not be empty"));
        }
        let student = Student {
            student_id: draft.student_id,
            name: draft.name,
            sex: draft.sex,
            birthday: draft.birthday,
            phone: draft.phone,
            email: draft.email,
            password_digest: self.campus.auth().hasher().digest(&draft.initial_password),
            college_id: draft.college_id,
            major_id: draft.major_id,
            class_id: draft.class_id,
        };
        student.validate()?;
        let stored = self.campus.store().write(|tx| tx.insert(student))?;
        Ok(stored.into())
    }

    pub fn update_student(
        &self,
        admin: &Principal,
        student_id: &str,
        changes: StudentChanges,
    ) -> Result<StudentProfile> {
        admin.require(Role::Admin)?;
        let stored = self.campus.store().write(|tx| {
            let mut s: Student = tx
                .find(student_id)
                .ok_or_else(|| Error::not_found("Student", student_id))?;
            let StudentChanges {
                name,
                sex,
                birthday,
                phone,
                email,
                college_id,
                major_id,
                class_id,
            } = changes;
            set(&mut s.name, name);
            set(&mut s.sex, sex);
            set(&mut s.birthday, birthday);
            set(&mut s.phone, phone);
            set(&mut s.email, email);
            set(&mut s.college_id, college_id);
            set(&mut s.major_id, major_id);
            set(&mut s.class_id, class_id);
            Ok::<_, Error>(tx.update(s)?)
        })?;
        Ok(stored.into())
    }

    /// Two-step delete: without confirmation nothing is written.
    pub fn delete_student(&self, admin: &Principal, student_id: &str, confirmed: bool) -> Result<DeleteOutcome> {
        admin.require(Role::Admin)?;
        if self.campus.store().find::<Student>(student_id).is_none() {
            return Err(Error::not_found("Student", student_id));
        }
        if !confirmed {
            return Ok(DeleteOutcome::NeedsConfirmation);
        }
        let removed = self.campus.store().write(|tx| tx.delete::<Student>(student_id))?;
        if removed == 0 {
            return Err(Error::not_found("Student", student_id));
        }
        self.campus.auth().revoke_principal(Role::Student, student_id);
        Ok(DeleteOutcome::Deleted)
    }

    /// Exact, case-sensitive lookup by student id.
    pub fn find_student(&self, admin: &Principal, student_id: &str) -> Result<Option<StudentProfile>> {
        admin.require(Role::Admin)?;
        Ok(self.campus.store().find::<Student>(student_id).map(Into::into))
    }

    pub fn list_students(&self, admin: &Principal) -> Result<Vec<StudentProfile>> {
        admin.require(Role::Admin)?;
        Ok(self
            .campus
            .store()
            .all::<Student>()
            .into_iter()
            .map(Into::into)
            .collect())
    }

    /// One-shot decision on a pending company registration.
    pub fn review_company(
        &self,
        admin: &Principal,
        company_id: &str,
        decision: ReviewDecision,
    ) -> Result<CompanyProfile> {
        admin.require(Role::Admin)?;
        FieldCheck::new()
            .optional_text("note", &decision.note, LONG_TEXT_MAX)
            .finish()?;
        let now = self.campus.clock().now();
        let company = self.campus.store().write(|tx| {
            let mut c: Company = tx
                .find(company_id)
                .ok_or_else(|| Error::not_found("Company", company_id))?;
            if c.approval_status != ApprovalStatus::Pending {
                return Err(Error::InvalidTransition(format!(
                    "company {company_id} was already {:?}",
                    c.approval_status
                )));
            }
            c.approval_status = match decision.decision {
                Decision::Approve => ApprovalStatus::Approved,
                Decision::Reject => ApprovalStatus::Rejected,
            };
            tx.insert(CompanyReview {
                id: 0,
                company_id: company_id.to_string(),
                admin_id: admin.id.clone(),
                decision: c.approval_status,
                note: decision.note,
                decided_at: now,
            })?;
            Ok(tx.update(c)?)
        })?;
        Ok(company.into())
    }

    pub fn list_companies(&self, admin: &Principal, status: Option<ApprovalStatus>) -> Result<Vec<CompanyProfile>> {
        admin.require(Role::Admin)?;
        let mut q = Query::new();
        if let Some(status) = status {
            q = q.eq("approval_status", serde_json::to_value(status).unwrap_or_default());
        }
        Ok(self
            .campus
            .store()
            .query::<Company>(&q)?
            .into_iter()
            .map(Into::into)
            .collect())
    }

    /// Public self-registration. New companies wait for review.
    pub fn register_company(&self, registration: CompanyRegistration) -> Result<CompanyProfile> {
        if registration.password.is_empty() {
            return Err(Error::validation("password", "must not be empty"));
        }
        let company = Company {
            company_id: registration.company_id,
            company_name: registration.company_name,
            industry_id: registration.industry_id,
            phone: registration.phone,
            scale: registration.scale,
            address: registration.address,
            established: registration.established,
            capital: registration.capital,
            detail: registration.detail,
            worktime: registration.worktime,
            email: registration.email,
            password_digest: self.campus.auth().hasher().digest(&registration.password),
            approval_status: ApprovalStatus::Pending,
        };
        company.validate()?;
        Ok(self.campus.store().write(|tx| tx.insert(company))?.into())
    }

    pub fn company_profile(&self, company: &Principal) -> Result<CompanyProfile> {
        company.require(Role::Company)?;
        self.campus
            .store()
            .find::<Company>(&company.id)
            .map(Into::into)
            .ok_or(Error::Unauthorized)
    }

    pub fn update_company_profile(&self, company: &Principal, changes: CompanyChanges) -> Result<CompanyProfile> {
        company.require(Role::Company)?;
        let stored = self.campus.store().write(|tx| {
            let mut c: Company = tx.find(&company.id).ok_or(Error::Unauthorized)?;
            set(&mut c.company_name, changes.company_name);
            set(&mut c.industry_id, changes.industry_id);
            set(&mut c.phone, changes.phone);
            set(&mut c.scale, changes.scale);
            set(&mut c.address, changes.address);
            set(&mut c.established, changes.established);
            set(&mut c.capital, changes.capital);
            set(&mut c.detail, changes.detail);
            set(&mut c.worktime, changes.worktime);
            set(&mut c.email, changes.email);
            Ok::<_, Error>(tx.update(c)?)
        })?;
        Ok(stored.into())
    }

    /// Create, update or delete a dictionary row. Deletes are refused while referenced.
    pub fn manage_dictionary(&self, admin: &Principal, action: DictAction) -> Result<DictOutcome> {
        admin.require(Role::Admin)?;
        let store = self.campus.store();
        match action {
            DictAction::Create(entry) => store
                .write(|tx| {
                    Ok::<_, Error>(match entry {
                        DictEntry::College(r) => DictEntry::College(tx.insert(r)?),
                        DictEntry::Major(r) => DictEntry::Major(tx.insert(r)?),
                        DictEntry::ClassGroup(r) => DictEntry::ClassGroup(tx.insert(r)?),
                        DictEntry::Industry(r) => DictEntry::Industry(tx.insert(r)?),
                        DictEntry::EducationLevel(r) => DictEntry::EducationLevel(tx.insert(r)?),
                    })
                })
                .map(DictOutcome::Stored),
            DictAction::Update(entry) => store
                .write(|tx| {
                    Ok::<_, Error>(match entry {
                        DictEntry::College(r) => DictEntry::College(tx.update(r)?),
                        DictEntry::Major(r) => DictEntry::Major(tx.update(r)?),
                        DictEntry::ClassGroup(r) => DictEntry::ClassGroup(tx.update(r)?),
                        DictEntry::Industry(r) => DictEntry::Industry(tx.update(r)?),
                        DictEntry::EducationLevel(r) => DictEntry::EducationLevel(tx.update(r)?),
                    })
                })
                .map(DictOutcome::Stored),
            DictAction::Delete(kind, id) => {
                let deleted = store.write(|tx| {
                    let key = Key::from(id.as_str());
                    Ok::<_, Error>(match kind {
                        DictKind::College => tx.delete::<College>(key)?,
                        DictKind::Major => tx.delete::<Major>(key)?,
                        DictKind::ClassGroup => tx.delete::<ClassGroup>(key)?,
                        DictKind::Industry => tx.delete::<Industry>(key)?,
                        DictKind::EducationLevel => tx.delete::<EducationLevel>(key)?,
                    })
                })?;
                if deleted == 0 {
                    return Err(Error::not_found("dictionary entry", id));
                }
                Ok(DictOutcome::Deleted { deleted })
            }
        }
    }

    /// Dictionary rows are readable by every role; forms need them.
    pub fn list_dictionary(&self, _viewer: &Principal, kind: DictKind) -> Vec<DictEntry> {
        let store = self.campus.store();
        match kind {
            DictKind::College => store.all::<College>().into_iter().map(DictEntry::College).collect(),
            DictKind::Major => store.all::<Major>().into_iter().map(DictEntry::Major).collect(),
            DictKind::ClassGroup => store
                .all::<ClassGroup>()
                .into_iter()
                .map(DictEntry::ClassGroup)
                .collect(),
            DictKind::Industry => store.all::<Industry>().into_iter().map(DictEntry::Industry).collect(),
            DictKind::EducationLevel => {
                let mut rows = store.all::<EducationLevel>();
                rows.sort_by_key(|e| e.rank);
                rows.into_iter().map(DictEntry::EducationLevel).collect()
            }
        }
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}
