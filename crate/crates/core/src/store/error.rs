use crate::model::ValidationError;

use super::entity::{Key, Kind};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StoreError {
    #[error("duplicate {kind} ({constraint} = {value})")]
    DuplicateKey {
        kind: Kind,
        constraint: &'static str,
        value: String,
    },
    #[error("{kind}.{field} references missing row {target}")]
    ForeignKeyViolation {
        kind: Kind,
        field: &'static str,
        target: Key,
    },
    #[error("{kind} {key} is still referenced by {dependents} row(s) of {dependent_kind}")]
    RestrictViolation {
        kind: Kind,
        key: Key,
        dependent_kind: Kind,
        dependents: usize,
    },
    #[error("{kind} {key} not found")]
    NotFound { kind: Kind, key: Key },
    #[error("invalid {0}")]
    Validation(ValidationError),
    #[error("bad query: {0}")]
    Query(String),
    #[error("store is busy: writer lock not acquired within {0} ms")]
    Busy(u64),
    #[error("store unavailable: {0}")]
    Unavailable(String),
}

impl StoreError {
    pub fn validation(field: &str, message: impl Into<String>) -> Self {
        StoreError::Validation(ValidationError::single(field, message))
    }
}

impl From<ValidationError> for StoreError {
    fn from(e: ValidationError) -> Self {
        StoreError::Validation(e)
    }
}
