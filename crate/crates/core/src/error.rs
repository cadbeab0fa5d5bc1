use serde::Serialize;

use crate::model::ValidationError;
use crate::store::StoreError;

/// Stable, closed set of machine-readable error codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCode {
    Unauthorized,
    Forbidden,
    NotOwner,
    NotFound,
    RouteNotFound,
    DuplicateKey,
    DuplicateApplication,
    AlreadyApplied,
    InvalidTransition,
    AlreadyResponded,
    NotViewed,
    ValidationError,
    InputError,
    ForeignKeyViolation,
    RestrictViolation,
    QueryError,
    Full,
    Closed,
    Expired,
    PayloadTooLarge,
    NoAccessory,
    InvalidCredentials,
    CompanyNotApproved,
    PasswordMismatch,
    WrongOldPassword,
    StoreUnavailable,
    Internal,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 27] = [
        ErrorCode::Unauthorized,
        ErrorCode::Forbidden,
        ErrorCode::NotOwner,
        ErrorCode::NotFound,
        ErrorCode::RouteNotFound,
        ErrorCode::DuplicateKey,
        ErrorCode::DuplicateApplication,
        ErrorCode::AlreadyApplied,
        ErrorCode::InvalidTransition,
        ErrorCode::AlreadyResponded,
        ErrorCode::NotViewed,
        ErrorCode::ValidationError,
        ErrorCode::InputError,
        ErrorCode::ForeignKeyViolation,
        ErrorCode::RestrictViolation,
        ErrorCode::QueryError,
        ErrorCode::Full,
        ErrorCode::Closed,
        ErrorCode::Expired,
        ErrorCode::PayloadTooLarge,
        ErrorCode::NoAccessory,
        ErrorCode::InvalidCredentials,
        ErrorCode::CompanyNotApproved,
        ErrorCode::PasswordMismatch,
        ErrorCode::WrongOldPassword,
        ErrorCode::StoreUnavailable,
        ErrorCode::Internal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::Unauthorized => "UNAUTHORIZED",
            ErrorCode::Forbidden => "FORBIDDEN",
            ErrorCode::NotOwner => "NOT_OWNER",
            ErrorCode::NotFound => "NOT_FOUND",
            ErrorCode::RouteNotFound => "ROUTE_NOT_FOUND",
            ErrorCode::DuplicateKey => "DUPLICATE_KEY",
            ErrorCode::DuplicateApplication => "DUPLICATE_APPLICATION",
            ErrorCode::AlreadyApplied => "ALREADY_APPLIED",
            ErrorCode::InvalidTransition => "INVALID_TRANSITION",
            ErrorCode::AlreadyResponded => "ALREADY_RESPONDED",
            ErrorCode::NotViewed => "NOT_VIEWED",
            ErrorCode::ValidationError => "VALIDATION_ERROR",
            ErrorCode::InputError => "INPUT_ERROR",
            ErrorCode::ForeignKeyViolation => "FOREIGN_KEY_VIOLATION",
            ErrorCode::RestrictViolation => "RESTRICT_VIOLATION",
            ErrorCode::QueryError => "QUERY_ERROR",
            ErrorCode::Full => "FULL",
            ErrorCode::Closed => "CLOSED",
            ErrorCode::Expired => "EXPIRED",
            ErrorCode::PayloadTooLarge => "PAYLOAD_TOO_LARGE",
            ErrorCode::NoAccessory => "NO_ACCESSORY",
            ErrorCode::InvalidCredentials => "INVALID_CREDENTIALS",
            ErrorCode::CompanyNotApproved => "COMPANY_NOT_APPROVED",
            ErrorCode::PasswordMismatch => "PASSWORD_MISMATCH",
            ErrorCode::WrongOldPassword => "WRONG_OLD_PASSWORD",
            ErrorCode::StoreUnavailable => "STORE_UNAVAILABLE",
            ErrorCode::Internal => "INTERNAL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("authentication required")]
    Unauthorized,
    #[error("this action requires the {0} role")]
    Forbidden(String),
    #[error("{0} belongs to another company")]
    NotOwner(String),
    #[error("{kind} {id} does not exist")]
    NotFound { kind: &'static str, id: String },
    #[error("{0}")]
    DuplicateKey(String),
    #[error("you have already applied to posting {0}")]
    DuplicateApplication(String),
    #[error("already registered for this presentation")]
    AlreadyApplied,
    #[error("{0}")]
    InvalidTransition(String),
    #[error("a result has already been sent for resume {0}")]
    AlreadyResponded(String),
    #[error("resume {0} must be viewed before responding")]
    NotViewed(String),
    #[error("invalid input: {0}")]
    Validation(ValidationError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    ForeignKey(String),
    #[error("{0}")]
    Restrict(String),
    #[error("{0}")]
    Query(String),
    #[error("this presentation is full")]
    Full,
    #[error("registration for this presentation has closed")]
    Closed,
    #[error("posting {0} is past its deadline")]
    Expired(String),
    #[error("attachment exceeds the {limit} byte limit")]
    PayloadTooLarge { limit: usize },
    #[error("resume {0} has no attachment")]
    NoAccessory(String),
    #[error("invalid id or password")]
    InvalidCredentials,
    #[error("company registration has not been approved")]
    CompanyNotApproved,
    #[error("new password and confirmation do not match")]
    PasswordMismatch,
    #[error("old password is incorrect")]
    WrongOldPassword,
    #[error("storage unavailable: {0}")]
    StoreUnavailable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn code(&self) -> ErrorCode {
        match self {
            Error::Unauthorized => ErrorCode::Unauthorized,
            Error::Forbidden(_) => ErrorCode::Forbidden,
            Error::NotOwner(_) => ErrorCode::NotOwner,
            Error::NotFound { .. } => ErrorCode::NotFound,
            Error::DuplicateKey(_) => ErrorCode::DuplicateKey,
            Error::DuplicateApplication(_) => ErrorCode::DuplicateApplication,
            Error::AlreadyApplied => ErrorCode::AlreadyApplied,
            Error::InvalidTransition(_) => ErrorCode::InvalidTransition,
            Error::AlreadyResponded(_) => ErrorCode::AlreadyResponded,
            Error::NotViewed(_) => ErrorCode::NotViewed,
            Error::Validation(_) => ErrorCode::ValidationError,
            Error::Input(_) => ErrorCode::InputError,
            Error::ForeignKey(_) => ErrorCode::ForeignKeyViolation,
            Error::Restrict(_) => ErrorCode::RestrictViolation,
            Error::Query(_) => ErrorCode::QueryError,
            Error::Full => ErrorCode::Full,
            Error::Closed => ErrorCode::Closed,
            Error::Expired(_) => ErrorCode::Expired,
            Error::PayloadTooLarge { .. } => ErrorCode::PayloadTooLarge,
            Error::NoAccessory(_) => ErrorCode::NoAccessory,
            Error::InvalidCredentials => ErrorCode::InvalidCredentials,
            Error::CompanyNotApproved => ErrorCode::CompanyNotApproved,
            Error::PasswordMismatch => ErrorCode::PasswordMismatch,
            Error::WrongOldPassword => ErrorCode::WrongOldPassword,
            Error::StoreUnavailable(_) => ErrorCode::StoreUnavailable,
        }
    }

    pub fn not_found(kind: &'static str, id: impl ToString) -> Self {
        Error::NotFound {
            kind,
            id: id.to_string(),
        }
    }

    pub fn validation(field: &str, message: impl Into<String>) -> Self {
        Error::Validation(ValidationError::single(field, message))
    }
}

impl From<ValidationError> for Error {
    fn from(e: ValidationError) -> Self {
        Error::Validation(e)
    }
}

impl From<StoreError> for Error {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::DuplicateKey { .. } => Error::DuplicateKey(e.to_string()),
            StoreError::ForeignKeyViolation { .. } => Error::ForeignKey(e.to_string()),
            StoreError::RestrictViolation { .. } => Error::Restrict(e.to_string()),
            StoreError::NotFound { kind, key } => Error::not_found(kind.name(), key),
            StoreError::Validation(v) => Error::Validation(v),
            StoreError::Query(q) => Error::Query(q),
            StoreError::Busy(_) | StoreError::Unavailable(_) => Error::StoreUnavailable(e.to_string()),
        }
    }
}
