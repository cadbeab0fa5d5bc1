use serde::{Deserialize, Serialize};

use super::time::{Date, Timestamp};
use super::validate::{FieldCheck, ValidationError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct College {
    pub college_id: String,
    pub college_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Major {
    pub major_id: String,
    pub major_name: String,
    pub college_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    pub class_id: String,
    pub class_name: String,
    pub major_id: String,
}

/// Credential level. `rank` orders levels from lowest to highest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EducationLevel {
    pub education_id: String,
    pub education_name: String,
    pub rank: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Industry {
    pub industry_id: String,
    pub industry_name: String,
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Student {
    pub student_id: String,
    pub name: String,
    pub sex: String,
    pub birthday: Date,
    pub phone: String,
    pub email: String,
    pub password_digest: String,
    pub college_id: String,
    pub major_id: String,
    pub class_id: String,
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Administrator {
    pub admin_id: String,
    pub name: String,
    pub phone: String,
    pub sex: String,
    pub email: String,
    pub password_digest: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ApprovalStatus {
    Pending,
    Approved,
    Rejected,
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Company {
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
    pub password_digest: String,
    pub approval_status: ApprovalStatus,
}

/// Outcome of an administrator's review of a company registration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompanyReview {
    pub id: i64,
    pub company_id: String,
    pub admin_id: String,
    pub decision: ApprovalStatus,
    pub note: String,
    pub decided_at: Timestamp,
}

/// Posting type, `0` for full-time and `1` for internship on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecruitType {
    FullTime,
    Internship,
}

impl RecruitType {
    pub fn code(self) -> u8 {
        match self {
            RecruitType::FullTime => 0,
            RecruitType::Internship => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(RecruitType::FullTime),
            1 => Some(RecruitType::Internship),
            _ => None,
        }
    }
}

impl Serialize for RecruitType {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.code())
    }
}

impl<'de> Deserialize<'de> for RecruitType {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let code = u8::deserialize(deserializer)?;
        RecruitType::from_code(code)
            .ok_or_else(|| serde::de::Error::custom(format!("recruit_type must be 0 or 1, got {code}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobPosting {
    pub recruit_id: String,
    pub company_id: String,
    pub position_id: String,
    pub education_id: String,
    /// Major the posting targets, if any. Used to rank matching candidates.
    #[serde(default)]
    pub major_id: Option<String>,
    pub linkman_name: String,
    pub linkman_email: String,
    pub company_type: String,
    pub place: String,
    pub city: String,
    pub number: u32,
    pub salary: u64,
    pub recruit_type: RecruitType,
    pub experience: String,
    pub time: String,
    pub deadline: Timestamp,
    pub detail: String,
    /// Set when the owner deletes a posting that still has applications.
    #[serde(default)]
    pub withdrawn: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeedbackResult {
    Reviewed,
    InterviewScheduled,
    NotSelected,
}

impl FeedbackResult {
    pub fn label(self) -> &'static str {
        match self {
            FeedbackResult::Reviewed => "Reviewed",
            FeedbackResult::InterviewScheduled => "Interview Scheduled",
            FeedbackResult::NotSelected => "Not Selected",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResumeApplication {
    pub resume_id: String,
    pub recruit_id: String,
    pub student_id: String,
    pub student_name: String,
    pub education_id: String,
    pub major_id: String,
    pub experience: String,
    pub skill: String,
    pub email: String,
    pub phone: String,
    pub accessory: Option<String>,
    #[serde(default)]
    pub accessory_name: Option<String>,
    pub submitted_at: Timestamp,
    pub viewed_at: Option<Timestamp>,
    pub result: Option<FeedbackResult>,
}

/// Student-facing tracker stage of a resume application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ApplicationStatus {
    Submitted,
    Viewed,
    Responded,
}

impl ResumeApplication {
    pub fn status(&self) -> ApplicationStatus {
        derive_application_status(self)
    }
}

pub fn derive_application_status(app: &ResumeApplication) -> ApplicationStatus {
    if app.result.is_some() {
        ApplicationStatus::Responded
    } else if app.viewed_at.is_some() {
        ApplicationStatus::Viewed
    } else {
        ApplicationStatus::Submitted
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PresentationStatus {
    Pending,
    Approved,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationApplication {
    pub application_id: String,
    pub company_id: String,
    pub requested_start: Timestamp,
    pub requested_duration_minutes: u32,
    pub theme: String,
    pub expected_attendance: u32,
    pub status: PresentationStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrangement {
    pub arrangement_id: i64,
    pub application_id: String,
    pub company_id: String,
    pub start_time: Timestamp,
    pub duration_minutes: u32,
    pub place: String,
    pub max_participants: u32,
    pub theme: String,
    #[serde(default)]
    pub updated_at: Option<Timestamp>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Registration {
    pub id: i64,
    pub student_id: String,
    pub arrangement_id: i64,
    pub registered_at: Timestamp,
}

/// Inbox record appended for a student when an employer responds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Notification {
    pub id: i64,
    pub student_id: String,
    pub resume_id: String,
    pub result: FeedbackResult,
    pub created_at: Timestamp,
}

/// Debug output that never prints `password_digest`.
macro_rules! redacted_debug {
    ($ty:ident { $($field:ident),* }) => {
        impl std::fmt::Debug for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.debug_struct(stringify!($ty))
                    $(.field(stringify!($field), &self.$field))*
                    .field("password_digest", &"<redacted>")
                    .finish()
            }
        }
    };
}

redacted_debug!(Student {
    student_id,
    name,
    sex,
    birthday,
    phone,
    email,
    college_id,
    major_id,
    class_id
});
redacted_debug!(Administrator {
    admin_id,
    name,
    phone,
    sex,
    email
});
redacted_debug!(Company {
    company_id,
    company_name,
    industry_id,
    phone,
    scale,
    address,
    established,
    capital,
    detail,
    worktime,
    email,
    approval_status
});

pub const ID_MAX: usize = 20;
pub const LONG_TEXT_MAX: usize = 400;
pub const DETAIL_MAX: usize = 4000;

/// Field-level constraints every stored row must satisfy.
pub trait Validate {
    fn validate(&self) -> Result<(), ValidationError>;
}

impl Validate for College {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .id("college_id", &self.college_id)
            .text("college_name", &self.college_name, 20)
            .finish()
    }
}

impl Validate for Major {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .id("major_id", &self.major_id)
            .text("major_name", &self.major_name, 50)
            .id("college_id", &self.college_id)
            .finish()
    }
}

impl Validate for ClassGroup {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .id("class_id", &self.class_id)
            .text("class_name", &self.class_name, 50)
            .id("major_id", &self.major_id)
            .finish()
    }
}

impl Validate for EducationLevel {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .id("education_id", &self.education_id)
            .text("education_name", &self.education_name, 20)
            .finish()
    }
}

impl Validate for Industry {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .id("industry_id", &self.industry_id)
            .text("industry_name", &self.industry_name, 20)
            .finish()
    }
}

impl Validate for Student {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .id("student_id", &self.student_id)
            .text("name", &self.name, 20)
            .optional_text("sex", &self.sex, 10)
            .optional_text("phone", &self.phone, 20)
            .email("email", &self.email, 20)
            .required("password_digest", &self.password_digest)
            .id("college_id", &self.college_id)
            .id("major_id", &self.major_id)
            .id("class_id", &self.class_id)
            .finish()
    }
}

impl Validate for Administrator {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .id("admin_id", &self.admin_id)
            .text("name", &self.name, 20)
            .optional_text("phone", &self.phone, 10)
            .optional_text("sex", &self.sex, 10)
            .email("email", &self.email, 20)
            .required("password_digest", &self.password_digest)
            .finish()
    }
}

impl Validate for Company {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .id("company_id", &self.company_id)
            .text("company_name", &self.company_name, 50)
            .id("industry_id", &self.industry_id)
            .optional_text("phone", &self.phone, 20)
            .optional_text("scale", &self.scale, 20)
            .optional_text("address", &self.address, 20)
            .optional_text("capital", &self.capital, 20)
            .optional_text("detail", &self.detail, DETAIL_MAX)
            .optional_text("worktime", &self.worktime, 100)
            .email("email", &self.email, 20)
            .required("password_digest", &self.password_digest)
            .finish()
    }
}

impl Validate for CompanyReview {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .id("company_id", &self.company_id)
            .id("admin_id", &self.admin_id)
            .optional_text("note", &self.note, LONG_TEXT_MAX)
            .check(
                "decision",
                self.decision != ApprovalStatus::Pending,
                "must be Approved or Rejected",
            )
            .finish()
    }
}

impl Validate for JobPosting {
    fn validate(&self) -> Result<(), ValidationError> {
        let mut check = FieldCheck::new()
            .id("recruit_id", &self.recruit_id)
            .id("company_id", &self.company_id)
            .id("position_id", &self.position_id)
            .id("education_id", &self.education_id)
            .text("linkman_name", &self.linkman_name, 20)
            .email("linkman_email", &self.linkman_email, 20)
            .optional_text("company_type", &self.company_type, 20)
            .text("place", &self.place, 50)
            .text("city", &self.city, 20)
            .check("number", self.number >= 1, "must be at least 1")
            .optional_text("experience", &self.experience, 10)
            .optional_text("time", &self.time, 20)
            .optional_text("detail", &self.detail, DETAIL_MAX);
        if let Some(major) = &self.major_id {
            check = check.id("major_id", major);
        }
        check.finish()
    }
}

impl Validate for ResumeApplication {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .id("resume_id", &self.resume_id)
            .id("recruit_id", &self.recruit_id)
            .id("student_id", &self.student_id)
            .text("student_name", &self.student_name, 20)
            .id("education_id", &self.education_id)
            .id("major_id", &self.major_id)
            .optional_text("experience", &self.experience, LONG_TEXT_MAX)
            .optional_text("skill", &self.skill, LONG_TEXT_MAX)
            .email("email", &self.email, 20)
            .optional_text("phone", &self.phone, 20)
            .check(
                "result",
                self.result.is_none() || self.viewed_at.is_some(),
                "a result requires the application to have been viewed",
            )
            .finish()
    }
}

impl Validate for PresentationApplication {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .id("application_id", &self.application_id)
            .id("company_id", &self.company_id)
            .check(
                "requested_duration_minutes",
                self.requested_duration_minutes >= 1,
                "must be positive",
            )
            .text("theme", &self.theme, 20)
            .check("expected_attendance", self.expected_attendance >= 1, "must be positive")
            .finish()
    }
}

impl Validate for Arrangement {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .check("arrangement_id", self.arrangement_id > 0, "must be positive")
            .id("application_id", &self.application_id)
            .id("company_id", &self.company_id)
            .check("duration_minutes", self.duration_minutes >= 1, "must be positive")
            .text("place", &self.place, 20)
            .check("max_participants", self.max_participants >= 1, "must be positive")
            .text("theme", &self.theme, 20)
            .finish()
    }
}

impl Validate for Registration {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .check("id", self.id > 0, "must be positive")
            .id("student_id", &self.student_id)
            .check("arrangement_id", self.arrangement_id > 0, "must be positive")
            .finish()
    }
}

impl Validate for Notification {
    fn validate(&self) -> Result<(), ValidationError> {
        FieldCheck::new()
            .check("id", self.id > 0, "must be positive")
            .id("student_id", &self.student_id)
            .id("resume_id", &self.resume_id)
            .finish()
    }
}
