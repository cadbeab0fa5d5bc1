//! Persistent entity types and the pure rules attached to them.
//!
//! Everything here is plain data: no I/O, no interior mutability. Write-path
//! checks that need other rows (foreign keys, uniqueness) live in
//! [`crate::store`]; this module only knows field limits, the academic
//! hierarchy rule and the resume status derivation.

mod entities;
mod time;
mod validate;

pub use entities::*;
pub use time::{Date, Timestamp, TimestampParseError};
pub use validate::{FieldCheck, FieldError, ValidationError};

/// Read access to the College → Major → ClassGroup tree.
pub trait AcademicDirectory {
    fn college(&self, college_id: &str) -> Option<&College>;
    fn major(&self, major_id: &str) -> Option<&Major>;
    fn class_group(&self, class_id: &str) -> Option<&ClassGroup>;
}

/// A referenced hierarchy row does not exist.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("integrity violation: {kind} {id:?} does not exist")]
pub struct MissingReference {
    pub kind: &'static str,
    pub id: String,
}

/// True iff the student's class belongs to their major and the major to their college.
pub fn validate_hierarchy(
    college_id: &str,
    major_id: &str,
    class_id: &str,
    directory: &impl AcademicDirectory,
) -> Result<bool, MissingReference> {
    let missing = |kind: &'static str, id: &str| MissingReference {
        kind,
        id: id.to_string(),
    };
    let class = directory
        .class_group(class_id)
        .ok_or_else(|| missing("ClassGroup", class_id))?;
    let major = directory.major(major_id).ok_or_else(|| missing("Major", major_id))?;
    directory
        .college(college_id)
        .ok_or_else(|| missing("College", college_id))?;
    Ok(class.major_id == major_id && major.college_id == college_id)
}

impl Student {
    pub fn validate_hierarchy(&self, directory: &impl AcademicDirectory) -> Result<bool, MissingReference> {
        validate_hierarchy(&self.college_id, &self.major_id, &self.class_id, directory)
    }
}
