use std::collections::BTreeMap;
use std::fmt;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::model::*;

use super::error::StoreError;
use super::tables::{Table, Tables};

/// Every persisted entity kind, in foreign-key dependency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    College,
    Major,
    ClassGroup,
    EducationLevel,
    Industry,
    Administrator,
    Student,
    Company,
    CompanyReview,
    JobPosting,
    ResumeApplication,
    PresentationApplication,
    Arrangement,
    Registration,
    Notification,
}

impl Kind {
    pub const ALL: [Kind; 15] = [
        Kind::College,
        Kind::Major,
        Kind::ClassGroup,
        Kind::EducationLevel,
        Kind::Industry,
        Kind::Administrator,
        Kind::Student,
        Kind::Company,
        Kind::CompanyReview,
        Kind::JobPosting,
        Kind::ResumeApplication,
        Kind::PresentationApplication,
        Kind::Arrangement,
        Kind::Registration,
        Kind::Notification,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::College => "College",
            Kind::Major => "Major",
            Kind::ClassGroup => "ClassGroup",
            Kind::EducationLevel => "EducationLevel",
            Kind::Industry => "Industry",
            Kind::Administrator => "Administrator",
            Kind::Student => "Student",
            Kind::Company => "Company",
            Kind::CompanyReview => "CompanyReview",
            Kind::JobPosting => "JobPosting",
            Kind::ResumeApplication => "ResumeApplication",
            Kind::PresentationApplication => "PresentationApplication",
            Kind::Arrangement => "Arrangement",
            Kind::Registration => "Registration",
            Kind::Notification => "Notification",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Primary key value. A table only ever holds one variant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Key {
    Int(i64),
    Text(String),
}

impl Key {
    pub fn is_unset(&self) -> bool {
        match self {
            Key::Int(n) => *n == 0,
            Key::Text(s) => s.is_empty(),
        }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Key::Int(n) => write!(f, "{n}"),
            Key::Text(s) => f.write_str(s),
        }
    }
}

impl From<&str> for Key {
    fn from(s: &str) -> Self {
        Key::Text(s.to_string())
    }
}

impl From<String> for Key {
    fn from(s: String) -> Self {
        Key::Text(s)
    }
}

impl From<&String> for Key {
    fn from(s: &String) -> Self {
        Key::Text(s.clone())
    }
}

impl From<i64> for Key {
    fn from(n: i64) -> Self {
        Key::Int(n)
    }
}

/// A foreign reference held by a row.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ref {
    pub field: &'static str,
    pub kind: Kind,
    pub key: Key,
}

impl Ref {
    fn text(field: &'static str, kind: Kind, key: &str) -> Self {
        Ref {
            field,
            kind,
            key: Key::Text(key.to_string()),
        }
    }
}

/// A secondary uniqueness constraint value: rows of a kind must not share `(name, value)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UniqueValue {
    pub name: &'static str,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyPolicy {
    /// Callers pick the identifier.
    Supplied,
    /// The store assigns 1, 2, 3, ... when the key is left at 0.
    GeneratedInt,
    /// The store assigns `{prefix}{n}` when the key is left empty.
    GeneratedText(&'static str),
}

pub trait Entity:
    Clone + PartialEq + fmt::Debug + Serialize + DeserializeOwned + Validate + Send + Sync + 'static
{
    const KIND: Kind;
    /// Serialized field names, used to validate query predicates.
    const FIELDS: &'static [&'static str];
    const KEY_POLICY: KeyPolicy = KeyPolicy::Supplied;

    fn key(&self) -> Key;
    fn set_key(&mut self, _key: Key) {}
    fn table(tables: &Tables) -> &Table<Self>;
    fn table_mut(tables: &mut Tables) -> &mut Table<Self>;

    fn references(&self) -> Vec<Ref> {
        Vec::new()
    }

    fn unique_values(&self) -> Vec<UniqueValue> {
        Vec::new()
    }

    /// Cross-row rules beyond plain foreign keys, checked on every write.
    fn check_rules(&self, _tables: &Tables) -> Result<(), StoreError> {
        Ok(())
    }
}

fn unique(name: &'static str, value: impl Into<String>) -> UniqueValue {
    UniqueValue {
        name,
        value: value.into(),
    }
}

impl Entity for College {
    const KIND: Kind = Kind::College;
    const FIELDS: &'static [&'static str] = &["college_id", "college_name"];
    fn key(&self) -> Key {
        Key::from(&self.college_id)
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.colleges
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.colleges
    }
}

impl Entity for Major {
    const KIND: Kind = Kind::Major;
    const FIELDS: &'static [&'static str] = &["major_id", "major_name", "college_id"];
    fn key(&self) -> Key {
        Key::from(&self.major_id)
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.majors
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.majors
    }
    fn references(&self) -> Vec<Ref> {
        vec![Ref::text("college_id", Kind::College, &self.college_id)]
    }
    fn check_rules(&self, tables: &Tables) -> Result<(), StoreError> {
        // Moving a major to another college would strand its students.
        let stranded = tables
            .students
            .rows()
            .find(|s| s.major_id == self.major_id && s.college_id != self.college_id);
        match stranded {
            Some(s) => Err(StoreError::validation(
                "college_id",
                format!("student {} is enrolled under college {}", s.student_id, s.college_id),
            )),
            None => Ok(()),
        }
    }
}

impl Entity for ClassGroup {
    const KIND: Kind = Kind::ClassGroup;
    const FIELDS: &'static [&'static str] = &["class_id", "class_name", "major_id"];
    fn key(&self) -> Key {
        Key::from(&self.class_id)
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.class_groups
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.class_groups
    }
    fn references(&self) -> Vec<Ref> {
        vec![Ref::text("major_id", Kind::Major, &self.major_id)]
    }
    fn check_rules(&self, tables: &Tables) -> Result<(), StoreError> {
        let stranded = tables
            .students
            .rows()
            .find(|s| s.class_id == self.class_id && s.major_id != self.major_id);
        match stranded {
            Some(s) => Err(StoreError::validation(
                "major_id",
                format!("student {} is enrolled under major {}", s.student_id, s.major_id),
            )),
            None => Ok(()),
        }
    }
}

impl Entity for EducationLevel {
    const KIND: Kind = Kind::EducationLevel;
    const FIELDS: &'static [&'static str] = &["education_id", "education_name", "rank"];
    fn key(&self) -> Key {
        Key::from(&self.education_id)
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.education_levels
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.education_levels
    }
    fn unique_values(&self) -> Vec<UniqueValue> {
        vec![
            unique("education_name", &self.education_name),
            unique("rank", self.rank.to_string()),
        ]
    }
}

impl Entity for Industry {
    const KIND: Kind = Kind::Industry;
    const FIELDS: &'static [&'static str] = &["industry_id", "industry_name"];
    fn key(&self) -> Key {
        Key::from(&self.industry_id)
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.industries
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.industries
    }
    fn unique_values(&self) -> Vec<UniqueValue> {
        vec![unique("industry_name", &self.industry_name)]
    }
}

impl Entity for Administrator {
    const KIND: Kind = Kind::Administrator;
    const FIELDS: &'static [&'static str] = &["admin_id", "name", "phone", "sex", "email", "password_digest"];
    fn key(&self) -> Key {
        Key::from(&self.admin_id)
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.administrators
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.administrators
    }
}

impl Entity for Student {
    const KIND: Kind = Kind::Student;
    const FIELDS: &'static [&'static str] = &[
        "student_id",
        "name",
        "sex",
        "birthday",
        "phone",
        "email",
        "password_digest",
        "college_id",
        "major_id",
        "class_id",
    ];
    fn key(&self) -> Key {
        Key::from(&self.student_id)
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.students
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.students
    }
    fn references(&self) -> Vec<Ref> {
        vec![
            Ref::text("college_id", Kind::College, &self.college_id),
            Ref::text("major_id", Kind::Major, &self.major_id),
            Ref::text("class_id", Kind::ClassGroup, &self.class_id),
        ]
    }
    fn check_rules(&self, tables: &Tables) -> Result<(), StoreError> {
        match self.validate_hierarchy(tables) {
            Ok(true) => Ok(()),
            Ok(false) => Err(StoreError::validation(
                "class_id",
                format!(
                    "class {} / major {} / college {} do not form a chain",
                    self.class_id, self.major_id, self.college_id
                ),
            )),
            Err(missing) => Err(StoreError::ForeignKeyViolation {
                kind: Kind::Student,
                field: missing.kind,
                target: Key::Text(missing.id),
            }),
        }
    }
}

impl Entity for Company {
    const KIND: Kind = Kind::Company;
    const FIELDS: &'static [&'static str] = &[
        "company_id",
        "company_name",
        "industry_id",
        "phone",
        "scale",
        "address",
        "established",
        "capital",
        "detail",
        "worktime",
        "email",
        "password_digest",
        "approval_status",
    ];
    fn key(&self) -> Key {
        Key::from(&self.company_id)
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.companies
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.companies
    }
    fn references(&self) -> Vec<Ref> {
        vec![Ref::text("industry_id", Kind::Industry, &self.industry_id)]
    }
}

impl Entity for CompanyReview {
    const KIND: Kind = Kind::CompanyReview;
    const FIELDS: &'static [&'static str] = &["id", "company_id", "admin_id", "decision", "note", "decided_at"];
    const KEY_POLICY: KeyPolicy = KeyPolicy::GeneratedInt;
    fn key(&self) -> Key {
        Key::Int(self.id)
    }
    fn set_key(&mut self, key: Key) {
        if let Key::Int(n) = key {
            self.id = n;
        }
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.company_reviews
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.company_reviews
    }
    fn references(&self) -> Vec<Ref> {
        vec![
            Ref::text("company_id", Kind::Company, &self.company_id),
            Ref::text("admin_id", Kind::Administrator, &self.admin_id),
        ]
    }
    fn unique_values(&self) -> Vec<UniqueValue> {
        vec![unique("company_id", &self.company_id)]
    }
}

impl Entity for JobPosting {
    const KIND: Kind = Kind::JobPosting;
    const FIELDS: &'static [&'static str] = &[
        "recruit_id",
        "company_id",
        "position_id",
        "education_id",
        "major_id",
        "linkman_name",
        "linkman_email",
        "company_type",
        "place",
        "city",
        "number",
        "salary",
        "recruit_type",
        "experience",
        "time",
        "deadline",
        "detail",
        "withdrawn",
    ];
    const KEY_POLICY: KeyPolicy = KeyPolicy::GeneratedText("J");
    fn key(&self) -> Key {
        Key::from(&self.recruit_id)
    }
    fn set_key(&mut self, key: Key) {
        self.recruit_id = key.to_string();
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.job_postings
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.job_postings
    }
    fn references(&self) -> Vec<Ref> {
        let mut refs = vec![
            Ref::text("company_id", Kind::Company, &self.company_id),
            Ref::text("education_id", Kind::EducationLevel, &self.education_id),
        ];
        if let Some(major) = &self.major_id {
            refs.push(Ref::text("major_id", Kind::Major, major));
        }
        refs
    }
}

impl Entity for ResumeApplication {
    const KIND: Kind = Kind::ResumeApplication;
    const FIELDS: &'static [&'static str] = &[
        "resume_id",
        "recruit_id",
        "student_id",
        "student_name",
        "education_id",
        "major_id",
        "experience",
        "skill",
        "email",
        "phone",
        "accessory",
        "accessory_name",
        "submitted_at",
        "viewed_at",
        "result",
    ];
    const KEY_POLICY: KeyPolicy = KeyPolicy::GeneratedText("R");
    fn key(&self) -> Key {
        Key::from(&self.resume_id)
    }
    fn set_key(&mut self, key: Key) {
        self.resume_id = key.to_string();
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.resume_applications
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.resume_applications
    }
    fn references(&self) -> Vec<Ref> {
        vec![
            Ref::text("recruit_id", Kind::JobPosting, &self.recruit_id),
            Ref::text("student_id", Kind::Student, &self.student_id),
            Ref::text("education_id", Kind::EducationLevel, &self.education_id),
            Ref::text("major_id", Kind::Major, &self.major_id),
        ]
    }
    fn unique_values(&self) -> Vec<UniqueValue> {
        vec![unique(
            "recruit_id+student_id",
            format!("{}\u{1f}{}", self.recruit_id, self.student_id),
        )]
    }
}

impl Entity for PresentationApplication {
    const KIND: Kind = Kind::PresentationApplication;
    const FIELDS: &'static [&'static str] = &[
        "application_id",
        "company_id",
        "requested_start",
        "requested_duration_minutes",
        "theme",
        "expected_attendance",
        "status",
    ];
    const KEY_POLICY: KeyPolicy = KeyPolicy::GeneratedText("PA");
    fn key(&self) -> Key {
        Key::from(&self.application_id)
    }
    fn set_key(&mut self, key: Key) {
        self.application_id = key.to_string();
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.presentation_applications
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.presentation_applications
    }
    fn references(&self) -> Vec<Ref> {
        vec![Ref::text("company_id", Kind::Company, &self.company_id)]
    }
}

impl Entity for Arrangement {
    const KIND: Kind = Kind::Arrangement;
    const FIELDS: &'static [&'static str] = &[
        "arrangement_id",
        "application_id",
        "company_id",
        "start_time",
        "duration_minutes",
        "place",
        "max_participants",
        "theme",
        "updated_at",
    ];
    const KEY_POLICY: KeyPolicy = KeyPolicy::GeneratedInt;
    fn key(&self) -> Key {
        Key::Int(self.arrangement_id)
    }
    fn set_key(&mut self, key: Key) {
        if let Key::Int(n) = key {
            self.arrangement_id = n;
        }
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.arrangements
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.arrangements
    }
    fn references(&self) -> Vec<Ref> {
        vec![
            Ref::text("application_id", Kind::PresentationApplication, &self.application_id),
            Ref::text("company_id", Kind::Company, &self.company_id),
        ]
    }
    fn unique_values(&self) -> Vec<UniqueValue> {
        vec![unique("application_id", &self.application_id)]
    }
    fn check_rules(&self, tables: &Tables) -> Result<(), StoreError> {
        let app = tables.presentation_applications.get(&Key::from(&self.application_id));
        match app {
            Some(app) if app.company_id != self.company_id => Err(StoreError::validation(
                "company_id",
                format!(
                    "application {} belongs to company {}",
                    app.application_id, app.company_id
                ),
            )),
            Some(app) if app.status != PresentationStatus::Approved => Err(StoreError::validation(
                "application_id",
                format!("application {} is not approved", app.application_id),
            )),
            _ => Ok(()),
        }
    }
}

impl Entity for Registration {
    const KIND: Kind = Kind::Registration;
    const FIELDS: &'static [&'static str] = &["id", "student_id", "arrangement_id", "registered_at"];
    const KEY_POLICY: KeyPolicy = KeyPolicy::GeneratedInt;
    fn key(&self) -> Key {
        Key::Int(self.id)
    }
    fn set_key(&mut self, key: Key) {
        if let Key::Int(n) = key {
            self.id = n;
        }
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.registrations
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.registrations
    }
    fn references(&self) -> Vec<Ref> {
        vec![
            Ref::text("student_id", Kind::Student, &self.student_id),
            Ref {
                field: "arrangement_id",
                kind: Kind::Arrangement,
                key: Key::Int(self.arrangement_id),
            },
        ]
    }
    fn unique_values(&self) -> Vec<UniqueValue> {
        vec![unique(
            "student_id+arrangement_id",
            format!("{}\u{1f}{}", self.student_id, self.arrangement_id),
        )]
    }
}

impl Entity for Notification {
    const KIND: Kind = Kind::Notification;
    const FIELDS: &'static [&'static str] = &["id", "student_id", "resume_id", "result", "created_at"];
    const KEY_POLICY: KeyPolicy = KeyPolicy::GeneratedInt;
    fn key(&self) -> Key {
        Key::Int(self.id)
    }
    fn set_key(&mut self, key: Key) {
        if let Key::Int(n) = key {
            self.id = n;
        }
    }
    fn table(t: &Tables) -> &Table<Self> {
        &t.notifications
    }
    fn table_mut(t: &mut Tables) -> &mut Table<Self> {
        &mut t.notifications
    }
    fn references(&self) -> Vec<Ref> {
        vec![
            Ref::text("student_id", Kind::Student, &self.student_id),
            Ref::text("resume_id", Kind::ResumeApplication, &self.resume_id),
        ]
    }
}

/// Projects a row to its JSON object form.
pub(crate) fn project<T: Entity>(row: &T) -> BTreeMap<String, serde_json::Value> {
    match serde_json::to_value(row) {
        Ok(serde_json::Value::Object(map)) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    }
}
