//! JSON-over-HTTP surface. Every route lives under `/api`; [`ROUTE_TABLE`] lists them
//! with the roles allowed to call each.

mod error;
mod extract;
mod handlers;

use std::sync::Arc;

use axum::extract::DefaultBodyLimit;
use axum::http::Method;
use axum::routing::{get, patch, post};
use axum::Router;

pub use error::{status_for, ApiError, ErrorEnvelope};
pub use extract::{session_token, SESSION_COOKIE};

use crate::auth::Role;
use crate::campus::Campus;
use handlers as h;

pub type AppState = Arc<Campus>;

/// Who may call a route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Access {
    /// No session needed.
    Public,
    /// Any logged-in role.
    Authenticated,
    Only(Role),
}

impl Access {
    pub fn allows(self, role: Option<Role>) -> bool {
        match self {
            Access::Public => true,
            Access::Authenticated => role.is_some(),
            Access::Only(r) => role == Some(r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouteSpec {
    pub method: &'static str,
    /// Path template, with `{name}` segments.
    pub path: &'static str,
    pub access: Access,
    pub operation: &'static str,
}

impl RouteSpec {
    pub fn method(&self) -> Method {
        self.method.parse().expect("route methods are valid")
    }
}

const fn route(method: &'static str, path: &'static str, access: Access, operation: &'static str) -> RouteSpec {
    RouteSpec {
        method,
        path,
        access,
        operation,
    }
}

use Access::{Authenticated as ANY, Only, Public};
const STUDENT: Access = Only(Role::Student);
const COMPANY: Access = Only(Role::Company);
const ADMIN: Access = Only(Role::Admin);

pub const ROUTE_TABLE: &[RouteSpec] = &[
    route("POST", "/api/login", Public, "login"),
    route("POST", "/api/logout", ANY, "logout"),
    route("POST", "/api/password", ANY, "changePassword"),
    route("GET", "/api/students", ADMIN, "listStudents"),
    route("POST", "/api/students", ADMIN, "addStudent"),
    route("GET", "/api/students/{id}", ADMIN, "findStudent"),
    route("PATCH", "/api/students/{id}", ADMIN, "updateStudent"),
    route("DELETE", "/api/students/{id}", ADMIN, "deleteStudent"),
    route("POST", "/api/companies", Public, "registerCompany"),
    route("GET", "/api/companies", ADMIN, "listCompanies"),
    route("POST", "/api/companies/{id}/review", ADMIN, "reviewCompany"),
    route("GET", "/api/companies/me", COMPANY, "companyProfile"),
    route("PATCH", "/api/companies/me", COMPANY, "updateCompanyProfile"),
    route("GET", "/api/dict/{kind}", ANY, "listDictionary"),
    route("POST", "/api/dict/{kind}", ADMIN, "manageDictionary.create"),
    route("PATCH", "/api/dict/{kind}/{id}", ADMIN, "manageDictionary.update"),
    route("DELETE", "/api/dict/{kind}/{id}", ADMIN, "manageDictionary.delete"),
    route("GET", "/api/jobs", ANY, "listJobs"),
    route("POST", "/api/jobs", COMPANY, "postJob"),
    route("GET", "/api/jobs/mine", COMPANY, "myJobs"),
    route("GET", "/api/jobs/{id}", ANY, "jobDetail"),
    route("PATCH", "/api/jobs/{id}", COMPANY, "editJob"),
    route("DELETE", "/api/jobs/{id}", COMPANY, "deleteJob"),
    route("POST", "/api/jobs/{id}/resumes", STUDENT, "submitResume"),
    route("GET", "/api/jobs/{id}/match", COMPANY, "matchCandidates"),
    route("GET", "/api/resumes/mine", STUDENT, "listMyApplications"),
    route("GET", "/api/resumes/received", COMPANY, "listReceivedResumes"),
    route("GET", "/api/resumes/{id}", COMPANY, "viewResumeDetail"),
    route("GET", "/api/resumes/{id}/accessory", COMPANY, "downloadAccessory"),
    route("POST", "/api/resumes/{id}/result", COMPANY, "respondToResume"),
    route("GET", "/api/notifications", STUDENT, "notifications"),
    route("POST", "/api/presentations", COMPANY, "applyForPresentation"),
    route("GET", "/api/presentations", ADMIN, "listPresentationApplications"),
    route(
        "GET",
        "/api/presentations/mine",
        COMPANY,
        "presentationApplicationStatus",
    ),
    route("POST", "/api/presentations/{id}/review", ADMIN, "reviewPresentation"),
    route("GET", "/api/arrangements", ANY, "listArrangements"),
    route("GET", "/api/arrangements/mine", STUDENT, "listMyRegistrations"),
    route("GET", "/api/arrangements/{id}", ANY, "arrangementDetail"),
    route("PATCH", "/api/arrangements/{id}", ADMIN, "updateArrangement"),
    route(
        "POST",
        "/api/arrangements/{id}/register",
        STUDENT,
        "registerForArrangement",
    ),
    route("GET", "/api/search", ANY, "search"),
];

/// Headroom over the attachment cap for the other form fields.
const FORM_SLACK_BYTES: usize = 64 * 1024;

pub fn router(campus: Arc<Campus>) -> Router {
    let body_limit = campus.settings().upload_max_bytes + FORM_SLACK_BYTES;
    Router::new()
        .route("/api/login", post(h::login))
        .route("/api/logout", post(h::logout))
        .route("/api/password", post(h::change_password))
        .route("/api/students", get(h::list_students).post(h::add_student))
        .route(
            "/api/students/{id}",
            get(h::get_student).patch(h::update_student).delete(h::delete_student),
        )
        .route("/api/companies", post(h::register_company).get(h::list_companies))
        .route("/api/companies/{id}/review", post(h::review_company))
        .route("/api/companies/me", get(h::my_company).patch(h::update_my_company))
        .route("/api/dict/{kind}", get(h::list_dictionary).post(h::create_dictionary))
        .route(
            "/api/dict/{kind}/{id}",
            patch(h::update_dictionary).delete(h::delete_dictionary),
        )
        .route("/api/jobs", get(h::list_jobs).post(h::post_job))
        .route("/api/jobs/mine", get(h::my_jobs))
        .route(
            "/api/jobs/{id}",
            get(h::job_detail).patch(h::edit_job).delete(h::delete_job),
        )
        .route("/api/jobs/{id}/resumes", post(h::submit_resume))
        .route("/api/jobs/{id}/match", get(h::match_candidates))
        .route("/api/resumes/mine", get(h::my_resumes))
        .route("/api/resumes/received", get(h::received_resumes))
        .route("/api/resumes/{id}", get(h::resume_detail))
        .route("/api/resumes/{id}/accessory", get(h::download_accessory))
        .route("/api/resumes/{id}/result", post(h::respond_to_resume))
        .route("/api/notifications", get(h::notifications))
        .route(
            "/api/presentations",
            post(h::apply_presentation).get(h::list_presentations),
        )
        .route("/api/presentations/mine", get(h::my_presentations))
        .route("/api/presentations/{id}/review", post(h::review_presentation))
        .route("/api/arrangements", get(h::list_arrangements))
        .route("/api/arrangements/mine", get(h::my_arrangements))
        .route(
            "/api/arrangements/{id}",
            get(h::arrangement_detail).patch(h::update_arrangement),
        )
        .route("/api/arrangements/{id}/register", post(h::register_arrangement))
        .route("/api/search", get(h::search))
        .fallback(|| async { ApiError::route_not_found() })
        .method_not_allowed_fallback(|| async { ApiError::method_not_allowed() })
        .layer(DefaultBodyLimit::max(body_limit))
        .with_state(campus)
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    listener: tokio::net::TcpListener,
    campus: Arc<Campus>,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(campus))
        .with_graceful_shutdown(shutdown)
        .await
}
