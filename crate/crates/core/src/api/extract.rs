use std::marker::PhantomData;

use axum::extract::rejection::{JsonRejection, PathRejection, QueryRejection};
use axum::extract::{FromRequest, FromRequestParts, Path, Query, Request};
use axum::http::header::{AUTHORIZATION, COOKIE};
use axum::http::request::Parts;
use axum::http::{HeaderMap, StatusCode};
use axum::Json;
use serde::de::DeserializeOwned;

use super::error::ApiError;
use super::AppState;
use crate::auth::{Principal, Role, RoleRequirement, SessionToken};
use crate::error::ErrorCode;

pub const SESSION_COOKIE: &str = "campus_session";

/// Session token from `Authorization: Bearer` or the session cookie, in that order.
pub fn session_token(headers: &HeaderMap) -> Option<SessionToken> {
    let bearer = headers
        .get(AUTHORIZATION)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Bearer "))
        .map(str::trim)
        .filter(|t| !t.is_empty());
    if let Some(t) = bearer {
        return Some(SessionToken::new(t));
    }
    headers
        .get_all(COOKIE)
        .iter()
        .filter_map(|v| v.to_str().ok())
        .flat_map(|v| v.split(';'))
        .filter_map(|pair| pair.trim().split_once('='))
        .find(|(name, _)| *name == SESSION_COOKIE)
        .map(|(_, value)| SessionToken::new(value))
}

pub trait Roles: Send + Sync + 'static {
    fn requirement() -> RoleRequirement;
}

pub struct AnyRole;
pub struct StudentRole;
pub struct CompanyRole;
pub struct AdminRole;

impl Roles for AnyRole {
    fn requirement() -> RoleRequirement {
        RoleRequirement::any()
    }
}

impl Roles for StudentRole {
    fn requirement() -> RoleRequirement {
        RoleRequirement::only(Role::Student)
    }
}

impl Roles for CompanyRole {
    fn requirement() -> RoleRequirement {
        RoleRequirement::only(Role::Company)
    }
}

impl Roles for AdminRole {
    fn requirement() -> RoleRequirement {
        RoleRequirement::only(Role::Admin)
    }
}

/// An authorized session. Extracted from request parts, so it is checked before any body is read.
pub struct Authed<R> {
    pub principal: Principal,
    pub token: SessionToken,
    _roles: PhantomData<R>,
}

pub type AnySession = Authed<AnyRole>;
pub type StudentSession = Authed<StudentRole>;
pub type CompanySession = Authed<CompanyRole>;
pub type AdminSession = Authed<AdminRole>;

impl<R: Roles> FromRequestParts<AppState> for Authed<R> {
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &AppState) -> Result<Self, ApiError> {
        let token = session_token(&parts.headers);
        let principal = state.auth().authorize(token.as_ref(), &R::requirement())?;
        Ok(Authed {
            principal,
            token: token.expect("authorized sessions carry a token"),
            _roles: PhantomData,
        })
    }
}

fn rejected(status: StatusCode, text: String) -> ApiError {
    if status == StatusCode::PAYLOAD_TOO_LARGE {
        ApiError::new(ErrorCode::PayloadTooLarge, text)
    } else {
        ApiError::new(ErrorCode::InputError, text)
    }
}

/// JSON body whose parse failures use the error envelope.
pub struct JsonBody<T>(pub T);

impl<S, T> FromRequest<S> for JsonBody<T>
where
    T: DeserializeOwned,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request(req: Request, state: &S) -> Result<Self, ApiError> {
        match Json::<T>::from_request(req, state).await {
            Ok(Json(v)) => Ok(JsonBody(v)),
            Err(e) => Err(json_rejection(e)),
        }
    }
}

pub(crate) fn json_rejection(e: JsonRejection) -> ApiError {
    rejected(e.status(), e.body_text())
}

pub struct QueryParams<T>(pub T);

impl<S, T> FromRequestParts<S> for QueryParams<T>
where
    T: DeserializeOwned,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, ApiError> {
        match Query::<T>::from_request_parts(parts, state).await {
            Ok(Query(v)) => Ok(QueryParams(v)),
            Err(e) => Err(query_rejection(e)),
        }
    }
}

fn query_rejection(e: QueryRejection) -> ApiError {
    rejected(e.status(), e.body_text())
}

pub struct PathParams<T>(pub T);

impl<S, T> FromRequestParts<S> for PathParams<T>
where
    T: DeserializeOwned + Send,
    S: Send + Sync,
{
    type Rejection = ApiError;

    async fn from_request_parts(parts: &mut Parts, state: &S) -> Result<Self, ApiError> {
        match Path::<T>::from_request_parts(parts, state).await {
            Ok(Path(v)) => Ok(PathParams(v)),
            Err(e) => Err(path_rejection(e)),
        }
    }
}

fn path_rejection(e: PathRejection) -> ApiError {
    rejected(StatusCode::UNPROCESSABLE_ENTITY, e.body_text())
}
