use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

use crate::error::{Error, ErrorCode};
use crate::model::FieldError;

/// Body of every non-2xx response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorEnvelope {
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Vec<FieldError>>,
}

pub fn status_for(code: ErrorCode) -> StatusCode {
    use ErrorCode::*;
    match code {
        Unauthorized | InvalidCredentials | CompanyNotApproved => StatusCode::UNAUTHORIZED,
        Forbidden | NotOwner => StatusCode::FORBIDDEN,
        NotFound | NoAccessory | RouteNotFound => StatusCode::NOT_FOUND,
        DuplicateKey | DuplicateApplication | AlreadyApplied | InvalidTransition | AlreadyResponded | NotViewed
        | RestrictViolation | Full | Closed | Expired => StatusCode::CONFLICT,
        PayloadTooLarge => StatusCode::PAYLOAD_TOO_LARGE,
        ValidationError | InputError | ForeignKeyViolation | QueryError | PasswordMismatch | WrongOldPassword => {
            StatusCode::UNPROCESSABLE_ENTITY
        }
        StoreUnavailable => StatusCode::SERVICE_UNAVAILABLE,
        Internal => StatusCode::INTERNAL_SERVER_ERROR,
    }
}

/// A domain error on its way to becoming an HTTP response.
#[derive(Debug)]
pub struct ApiError {
    code: ErrorCode,
    status: StatusCode,
    message: String,
    details: Option<Vec<FieldError>>,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError {
            code,
            status: status_for(code),
            message: message.into(),
            details: None,
        }
    }

    pub fn route_not_found() -> Self {
        ApiError::new(ErrorCode::RouteNotFound, "no such route")
    }

    pub fn method_not_allowed() -> Self {
        ApiError {
            status: StatusCode::METHOD_NOT_ALLOWED,
            ..ApiError::new(ErrorCode::RouteNotFound, "method not allowed for this route")
        }
    }

    pub fn internal() -> Self {
        ApiError::new(ErrorCode::Internal, "internal error")
    }

    pub fn code(&self) -> ErrorCode {
        self.code
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let code = e.code();
        let details = match &e {
            Error::Validation(v) => Some(v.fields.clone()),
            _ => None,
        };
        if code == ErrorCode::StoreUnavailable {
            tracing::error!(error = %e, "store unavailable");
        }
        ApiError {
            details,
            ..ApiError::new(code, e.to_string())
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorEnvelope {
            code: self.code.as_str(),
            message: self.message,
            details: self.details,
        };
        (self.status, Json(body)).into_response()
    }
}
