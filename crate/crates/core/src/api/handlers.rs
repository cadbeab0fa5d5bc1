use axum::extract::{FromRequest, Multipart, Request, State};
use axum::http::header::{CONTENT_DISPOSITION, CONTENT_TYPE, SET_COOKIE};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::error::ApiError;
use super::extract::*;
use super::AppState;
use crate::auth::{Credentials, PasswordChange, Role};
use crate::campus::Campus;
use crate::directory::*;
use crate::error::{Error, ErrorCode, Result};
use crate::model::{ApprovalStatus, FeedbackResult, PresentationStatus, RecruitType};
use crate::presentations::{PresentationRequest, PresentationReview, Schedule};
use crate::recruitment::{Accessory, JobFilter, Page, PostingChanges, PostingDraft, ResumeSubmission};
use crate::search::SearchQuery;

type ApiResult<T> = std::result::Result<T, ApiError>;

/// Runs service code off the async workers; hashing and durable commits block.
async fn blocking<T, F>(state: &AppState, f: F) -> ApiResult<T>
where
    T: Send + 'static,
    F: FnOnce(&Campus) -> Result<T> + Send + 'static,
{
    let campus = state.clone();
    match tokio::task::spawn_blocking(move || f(&campus)).await {
        Ok(out) => out.map_err(ApiError::from),
        Err(e) => {
            tracing::error!(error = %e, "handler task failed");
            Err(ApiError::internal())
        }
    }
}

fn created<T: Serialize>(value: T) -> Response {
    (StatusCode::CREATED, Json(value)).into_response()
}

#[derive(Deserialize)]
pub struct LoginBody {
    role: Role,
    id: String,
    password: String,
}

pub async fn login(State(s): State<AppState>, JsonBody(body): JsonBody<LoginBody>) -> ApiResult<Response> {
    let session = blocking(&s, move |c| {
        c.auth().login(body.role, &Credentials::new(body.id, body.password))
    })
    .await?;
    let max_age = (session.expires_at.epoch_seconds() - s.clock().now().epoch_seconds()).max(0);
    let cookie = format!(
        "{SESSION_COOKIE}={}; HttpOnly; Path=/; SameSite=Lax; Max-Age={max_age}",
        session.token.as_str()
    );
    Ok(([(SET_COOKIE, cookie)], Json(session)).into_response())
}

pub async fn logout(State(s): State<AppState>, session: AnySession) -> Response {
    s.auth().logout(&session.token);
    let cookie = format!("{SESSION_COOKIE}=; HttpOnly; Path=/; SameSite=Lax; Max-Age=0");
    ([(SET_COOKIE, cookie)], Json(json!({ "logged_out": true }))).into_response()
}

#[derive(Deserialize)]
pub struct PasswordBody {
    old: String,
    new: String,
    confirm: String,
}

pub async fn change_password(
    State(s): State<AppState>,
    session: AnySession,
    JsonBody(body): JsonBody<PasswordBody>,
) -> ApiResult<Json<Value>> {
    let token = session.token;
    let outcome = blocking(&s, move |c| {
        c.auth().change_password(&token, &body.old, &body.new, &body.confirm)
    })
    .await?;
    match outcome {
        PasswordChange::Changed => Ok(Json(json!({ "changed": true }))),
        PasswordChange::Mismatch => Err(Error::PasswordMismatch.into()),
        PasswordChange::WrongOld => Err(Error::WrongOldPassword.into()),
    }
}

pub async fn list_students(State(s): State<AppState>, a: AdminSession) -> ApiResult<Response> {
    let rows = blocking(&s, move |c| c.directory().list_students(&a.principal)).await?;
    Ok(Json(rows).into_response())
}

pub async fn add_student(
    State(s): State<AppState>,
    a: AdminSession,
    JsonBody(draft): JsonBody<StudentDraft>,
) -> ApiResult<Response> {
    Ok(created(
        blocking(&s, move |c| c.directory().add_student(&a.principal, draft)).await?,
    ))
}

pub async fn get_student(
    State(s): State<AppState>,
    a: AdminSession,
    PathParams(id): PathParams<String>,
) -> ApiResult<Response> {
    let found = blocking(&s, move |c| {
        c.directory()
            .find_student(&a.principal, &id)?
            .ok_or_else(|| Error::not_found("Student", id))
    })
    .await?;
    Ok(Json(found).into_response())
}

pub async fn update_student(
    State(s): State<AppState>,
    a: AdminSession,
    PathParams(id): PathParams<String>,
    JsonBody(changes): JsonBody<StudentChanges>,
) -> ApiResult<Response> {
    let row = blocking(&s, move |c| c.directory().update_student(&a.principal, &id, changes)).await?;
    Ok(Json(row).into_response())
}

#[derive(Deserialize)]
pub struct ConfirmQuery {
    #[serde(default)]
    confirmed: bool,
}

pub async fn delete_student(
    State(s): State<AppState>,
    a: AdminSession,
    PathParams(id): PathParams<String>,
    QueryParams(q): QueryParams<ConfirmQuery>,
) -> ApiResult<Response> {
    let outcome = blocking(&s, move |c| {
        c.directory().delete_student(&a.principal, &id, q.confirmed)
    })
    .await?;
    Ok(Json(json!({ "outcome": outcome })).into_response())
}

pub async fn register_company(
    State(s): State<AppState>,
    JsonBody(reg): JsonBody<CompanyRegistration>,
) -> ApiResult<Response> {
    Ok(created(
        blocking(&s, move |c| c.directory().register_company(reg)).await?,
    ))
}

#[derive(Deserialize)]
pub struct ApprovalQuery {
    status: Option<ApprovalStatus>,
}

pub async fn list_companies(
    State(s): State<AppState>,
    a: AdminSession,
    QueryParams(q): QueryParams<ApprovalQuery>,
) -> ApiResult<Response> {
    let rows = blocking(&s, move |c| c.directory().list_companies(&a.principal, q.status)).await?;
    Ok(Json(rows).into_response())
}

pub async fn review_company(
    State(s): State<AppState>,
    a: AdminSession,
    PathParams(id): PathParams<String>,
    JsonBody(decision): JsonBody<ReviewDecision>,
) -> ApiResult<Response> {
    let row = blocking(&s, move |c| c.directory().review_company(&a.principal, &id, decision)).await?;
    Ok(Json(row).into_response())
}

pub async fn my_company(State(s): State<AppState>, co: CompanySession) -> ApiResult<Response> {
    let row = blocking(&s, move |c| c.directory().company_profile(&co.principal)).await?;
    Ok(Json(row).into_response())
}

pub async fn update_my_company(
    State(s): State<AppState>,
    co: CompanySession,
    JsonBody(changes): JsonBody<CompanyChanges>,
) -> ApiResult<Response> {
    let row = blocking(&s, move |c| {
        c.directory().update_company_profile(&co.principal, changes)
    })
    .await?;
    Ok(Json(row).into_response())
}

pub async fn list_dictionary(
    State(s): State<AppState>,
    viewer: AnySession,
    PathParams(kind): PathParams<String>,
) -> ApiResult<Response> {
    let kind: DictKind = kind.parse()?;
    let rows = blocking(&s, move |c| Ok(c.directory().list_dictionary(&viewer.principal, kind))).await?;
    Ok(Json(rows).into_response())
}

pub async fn create_dictionary(
    State(s): State<AppState>,
    a: AdminSession,
    PathParams(kind): PathParams<String>,
    JsonBody(body): JsonBody<Value>,
) -> ApiResult<Response> {
    let kind: DictKind = kind.parse()?;
    let entry = DictEntry::from_json(kind, body)?;
    Ok(created(
        blocking(&s, move |c| {
            c.directory().manage_dictionary(&a.principal, DictAction::Create(entry))
        })
        .await?,
    ))
}

pub async fn update_dictionary(
    State(s): State<AppState>,
    a: AdminSession,
    PathParams((kind, id)): PathParams<(String, String)>,
    JsonBody(mut body): JsonBody<Value>,
) -> ApiResult<Response> {
    let kind: DictKind = kind.parse()?;
    if let Value::Object(fields) = &mut body {
        fields
            .entry(kind.key_field())
            .or_insert_with(|| Value::String(id.clone()));
    }
    let entry = DictEntry::from_json(kind, body)?;
    if entry.id() != id {
        return Err(Error::validation(kind.key_field(), "does not match the path").into());
    }
    let out = blocking(&s, move |c| {
        c.directory().manage_dictionary(&a.principal, DictAction::Update(entry))
    })
    .await?;
    Ok(Json(out).into_response())
}

pub async fn delete_dictionary(
    State(s): State<AppState>,
    a: AdminSession,
    PathParams((kind, id)): PathParams<(String, String)>,
) -> ApiResult<Response> {
    let kind: DictKind = kind.parse()?;
    let out = blocking(&s, move |c| {
        c.directory()
            .manage_dictionary(&a.principal, DictAction::Delete(kind, id))
    })
    .await?;
    Ok(Json(out).into_response())
}

#[derive(Deserialize)]
pub struct JobsQuery {
    city: Option<String>,
    education_id: Option<String>,
    recruit_type: Option<u8>,
    #[serde(default)]
    offset: usize,
    limit: Option<usize>,
}

pub async fn list_jobs(
    State(s): State<AppState>,
    _viewer: AnySession,
    QueryParams(q): QueryParams<JobsQuery>,
) -> ApiResult<Response> {
    let recruit_type = match q.recruit_type {
        Some(code) => {
            Some(RecruitType::from_code(code).ok_or_else(|| Error::Input(format!("unknown recruit_type {code}")))?)
        }
        None => None,
    };
    let filter = JobFilter {
        city: q.city,
        education_id: q.education_id,
        recruit_type,
    };
    let page = Page {
        offset: q.offset,
        limit: q.limit,
    };
    let rows = blocking(&s, move |c| c.recruitment().list_jobs(&filter, page)).await?;
    Ok(Json(rows).into_response())
}

pub async fn post_job(
    State(s): State<AppState>,
    co: CompanySession,
    JsonBody(draft): JsonBody<PostingDraft>,
) -> ApiResult<Response> {
    Ok(created(
        blocking(&s, move |c| c.recruitment().post_job(&co.principal, draft)).await?,
    ))
}

pub async fn my_jobs(State(s): State<AppState>, co: CompanySession) -> ApiResult<Response> {
    let rows = blocking(&s, move |c| c.recruitment().my_jobs(&co.principal)).await?;
    Ok(Json(rows).into_response())
}

pub async fn job_detail(
    State(s): State<AppState>,
    viewer: AnySession,
    PathParams(id): PathParams<String>,
) -> ApiResult<Response> {
    let row = blocking(&s, move |c| c.recruitment().job_detail(&viewer.principal, &id)).await?;
    Ok(Json(row).into_response())
}

pub async fn edit_job(
    State(s): State<AppState>,
    co: CompanySession,
    PathParams(id): PathParams<String>,
    JsonBody(changes): JsonBody<PostingChanges>,
) -> ApiResult<Response> {
    let row = blocking(&s, move |c| c.recruitment().edit_job(&co.principal, &id, changes)).await?;
    Ok(Json(row).into_response())
}

pub async fn delete_job(
    State(s): State<AppState>,
    co: CompanySession,
    PathParams(id): PathParams<String>,
) -> ApiResult<Response> {
    let outcome = blocking(&s, move |c| c.recruitment().delete_job(&co.principal, &id)).await?;
    Ok(Json(json!({ "outcome": outcome })).into_response())
}

#[derive(Default, Deserialize)]
pub struct ResumeForm {
    education_id: String,
    #[serde(default)]
    experience: String,
    #[serde(default)]
    skill: String,
    email: Option<String>,
    phone: Option<String>,
}

/// Accepts `multipart/form-data` (with an optional `accessory` file part) or a JSON body.
pub async fn submit_resume(
    State(s): State<AppState>,
    st: StudentSession,
    PathParams(recruit_id): PathParams<String>,
    req: Request,
) -> ApiResult<Response> {
    let is_multipart = req
        .headers()
        .get(CONTENT_TYPE)
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("multipart/form-data"));
    let (form, accessory) = if is_multipart {
        read_multipart(
            Multipart::from_request(req, &s)
                .await
                .map_err(|e| ApiError::new(ErrorCode::InputError, e.body_text()))?,
        )
        .await?
    } else {
        let form = axum::Json::<ResumeForm>::from_request(req, &s)
            .await
            .map_err(json_rejection)?
            .0;
        (form, None)
    };
    let submission = ResumeSubmission {
        recruit_id,
        education_id: form.education_id,
        experience: form.experience,
        skill: form.skill,
        email: form.email,
        phone: form.phone,
        accessory,
    };
    Ok(created(
        blocking(&s, move |c| c.recruitment().submit_resume(&st.principal, submission)).await?,
    ))
}

async fn read_multipart(mut parts: Multipart) -> ApiResult<(ResumeForm, Option<Accessory>)> {
    let mut form = ResumeForm::default();
    let mut accessory = None;
    let fail = |e: axum::extract::multipart::MultipartError| {
        if e.status() == StatusCode::PAYLOAD_TOO_LARGE {
            ApiError::new(ErrorCode::PayloadTooLarge, e.body_text())
        } else {
            ApiError::new(ErrorCode::InputError, e.body_text())
        }
    };
    while let Some(field) = parts.next_field().await.map_err(fail)? {
        let name = field.name().unwrap_or_default().to_string();
        if name == "accessory" {
            let file_name = field.file_name().unwrap_or("attachment").to_string();
            let bytes = field.bytes().await.map_err(fail)?.to_vec();
            if !bytes.is_empty() {
                accessory = Some(Accessory { file_name, bytes });
            }
            continue;
        }
        let text = field.text().await.map_err(fail)?;
        match name.as_str() {
            "education_id" => form.education_id = text,
            "experience" => form.experience = text,
            "skill" => form.skill = text,
            "email" => form.email = Some(text).filter(|t| !t.is_empty()),
            "phone" => form.phone = Some(text).filter(|t| !t.is_empty()),
            other => {
                return Err(ApiError::new(
                    ErrorCode::InputError,
                    format!("unexpected form field {other:?}"),
                ))
            }
        }
    }
    Ok((form, accessory))
}

pub async fn match_candidates(
    State(s): State<AppState>,
    co: CompanySession,
    PathParams(id): PathParams<String>,
) -> ApiResult<Response> {
    let rows = blocking(&s, move |c| c.recruitment().match_candidates(&co.principal, &id)).await?;
    Ok(Json(rows).into_response())
}

pub async fn my_resumes(State(s): State<AppState>, st: StudentSession) -> ApiResult<Response> {
    let rows = blocking(&s, move |c| c.recruitment().list_my_applications(&st.principal)).await?;
    Ok(Json(rows).into_response())
}

#[derive(Deserialize)]
pub struct ReceivedQuery {
    recruit_id: Option<String>,
}

pub async fn received_resumes(
    State(s): State<AppState>,
    co: CompanySession,
    QueryParams(q): QueryParams<ReceivedQuery>,
) -> ApiResult<Response> {
    let rows = blocking(&s, move |c| {
        c.recruitment()
            .list_received_resumes(&co.principal, q.recruit_id.as_deref())
    })
    .await?;
    Ok(Json(rows).into_response())
}

pub async fn resume_detail(
    State(s): State<AppState>,
    co: CompanySession,
    PathParams(id): PathParams<String>,
) -> ApiResult<Response> {
    let row = blocking(&s, move |c| c.recruitment().view_resume_detail(&co.principal, &id)).await?;
    Ok(Json(row).into_response())
}

pub async fn download_accessory(
    State(s): State<AppState>,
    co: CompanySession,
    PathParams(id): PathParams<String>,
) -> ApiResult<Response> {
    let file = blocking(&s, move |c| c.recruitment().download_accessory(&co.principal, &id)).await?;
    let headers = [
        (CONTENT_TYPE, content_type_for(&file.file_name).to_string()),
        (CONTENT_DISPOSITION, content_disposition(&file.file_name)),
    ];
    Ok((headers, file.bytes).into_response())
}

#[derive(Deserialize)]
pub struct ResultBody {
    result: FeedbackResult,
}

pub async fn respond_to_resume(
    State(s): State<AppState>,
    co: CompanySession,
    PathParams(id): PathParams<String>,
    JsonBody(body): JsonBody<ResultBody>,
) -> ApiResult<Response> {
    let row = blocking(&s, move |c| {
        c.recruitment().respond_to_resume(&co.principal, &id, body.result)
    })
    .await?;
    Ok(Json(row).into_response())
}

pub async fn notifications(State(s): State<AppState>, st: StudentSession) -> ApiResult<Response> {
    let rows = blocking(&s, move |c| c.recruitment().notifications(&st.principal)).await?;
    Ok(Json(rows).into_response())
}

pub async fn apply_presentation(
    State(s): State<AppState>,
    co: CompanySession,
    JsonBody(req): JsonBody<PresentationRequest>,
) -> ApiResult<Response> {
    Ok(created(
        blocking(&s, move |c| {
            c.presentations().apply_for_presentation(&co.principal, req)
        })
        .await?,
    ))
}

#[derive(Deserialize)]
pub struct PresentationQuery {
    status: Option<PresentationStatus>,
}

pub async fn list_presentations(
    State(s): State<AppState>,
    a: AdminSession,
    QueryParams(q): QueryParams<PresentationQuery>,
) -> ApiResult<Response> {
    let rows = blocking(&s, move |c| {
        c.presentations().list_presentation_applications(&a.principal, q.status)
    })
    .await?;
    Ok(Json(rows).into_response())
}

pub async fn my_presentations(State(s): State<AppState>, co: CompanySession) -> ApiResult<Response> {
    let rows = blocking(&s, move |c| {
        c.presentations().presentation_application_status(&co.principal)
    })
    .await?;
    Ok(Json(rows).into_response())
}

pub async fn review_presentation(
    State(s): State<AppState>,
    a: AdminSession,
    PathParams(id): PathParams<String>,
    JsonBody(review): JsonBody<PresentationReview>,
) -> ApiResult<Response> {
    let out = blocking(&s, move |c| {
        c.presentations().review_presentation(&a.principal, &id, review)
    })
    .await?;
    Ok(Json(out).into_response())
}

pub async fn list_arrangements(State(s): State<AppState>, _viewer: AnySession) -> ApiResult<Response> {
    let rows = blocking(&s, move |c| Ok(c.presentations().list_arrangements())).await?;
    Ok(Json(rows).into_response())
}

pub async fn my_arrangements(State(s): State<AppState>, st: StudentSession) -> ApiResult<Response> {
    let rows = blocking(&s, move |c| c.presentations().list_my_registrations(&st.principal)).await?;
    Ok(Json(rows).into_response())
}

pub async fn arrangement_detail(
    State(s): State<AppState>,
    viewer: AnySession,
    PathParams(id): PathParams<i64>,
) -> ApiResult<Response> {
    let view = blocking(&s, move |c| c.presentations().arrangement_detail(&viewer.principal, id)).await?;
    Ok(Json(view).into_response())
}

pub async fn update_arrangement(
    State(s): State<AppState>,
    a: AdminSession,
    PathParams(id): PathParams<i64>,
    JsonBody(schedule): JsonBody<Schedule>,
) -> ApiResult<Response> {
    let row = blocking(&s, move |c| {
        c.presentations().update_arrangement(&a.principal, id, schedule)
    })
    .await?;
    Ok(Json(row).into_response())
}

pub async fn register_arrangement(
    State(s): State<AppState>,
    st: StudentSession,
    PathParams(id): PathParams<i64>,
) -> ApiResult<Response> {
    Ok(created(
        blocking(&s, move |c| {
            c.presentations().register_for_arrangement(&st.principal, id)
        })
        .await?,
    ))
}

pub async fn search(
    State(s): State<AppState>,
    viewer: AnySession,
    QueryParams(q): QueryParams<SearchQuery>,
) -> ApiResult<Response> {
    let out = blocking(&s, move |c| c.search().search(&viewer.principal, &q)).await?;
    Ok(Json(out).into_response())
}

fn content_type_for(file_name: &str) -> &'static str {
    let lower = file_name.to_ascii_lowercase();
    if lower.ends_with(".pdf") {
        "application/pdf"
    } else if lower.ends_with(".docx") {
        "application/vnd.openxmlformats-officedocument.wordprocessingml.document"
    } else if lower.ends_with(".doc") {
        "application/msword"
    } else {
        "application/octet-stream"
    }
}

/// `attachment` disposition with an ASCII fallback name and the exact UTF-8 name.
fn content_disposition(file_name: &str) -> String {
    let fallback: String = file_name
        .chars()
        .map(|c| {
            if c.is_ascii_graphic() && c != '"' && c != '\\' || c == ' ' {
                c
            } else {
                '_'
            }
        })
        .collect();
    let mut encoded = String::new();
    for b in file_name.bytes() {
        if b.is_ascii_alphanumeric() || b"!#$&+-.^_`|~".contains(&b) {
            encoded.push(b as char);
        } else {
            encoded.push_str(&format!("%{b:02X}"));
        }
    }
    format!("attachment; filename=\"{fallback}\"; filename*=UTF-8''{encoded}")
}
