//! Presentation requests from companies, admin scheduling, and student registration.

use serde::{Deserialize, Serialize};

use crate::auth::{Principal, Role};
use crate::campus::Campus;
use crate::directory::Decision;
use crate::error::{Error, Result};
use crate::model::*;
use crate::store::Tables;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct PresentationRequest {
    pub requested_start: Timestamp,
    pub requested_duration_minutes: u32,
    pub theme: String,
    pub expected_attendance: u32,
}

/// Concrete time and venue fixed by the administrator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub start_time: Timestamp,
    pub duration_minutes: u32,
    pub place: String,
    pub max_participants: u32,
    pub theme: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct PresentationReview {
    pub decision: Decision,
    #[serde(default)]
    pub schedule: Option<Schedule>,
}

impl PresentationReview {
    pub fn approve(schedule: Schedule) -> Self {
        PresentationReview {
            decision: Decision::Approve,
            schedule: Some(schedule),
        }
    }

    pub fn reject() -> Self {
        PresentationReview {
            decision: Decision::Reject,
            schedule: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReviewOutcome {
    pub application: PresentationApplication,
    pub arrangement: Option<Arrangement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrangementListing {
    #[serde(flatten)]
    pub arrangement: Arrangement,
    pub company_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompanySummary {
    pub company_id: String,
    pub company_name: String,
    pub industry: String,
    pub scale: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrangementDetailView {
    #[serde(flatten)]
    pub arrangement: Arrangement,
    pub company: CompanySummary,
    pub apply_count: usize,
    /// Always false for non-student viewers.
    pub has_applied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PresentationStatusRow {
    pub application: PresentationApplication,
    pub arrangement: Option<Arrangement>,
}

pub struct Presentations<'a> {
    campus: &'a Campus,
}

impl<'a> Presentations<'a> {
    pub(crate) fn new(campus: &'a Campus) -> Self {
        Presentations { campus }
    }

    fn now(&self) -> Timestamp {
        self.campus.clock().now()
    }

    pub fn apply_for_presentation(
        &self,
        company: &Principal,
        request: PresentationRequest,
    ) -> Result<PresentationApplication> {
        company.require(Role::Company)?;
        let approved = self
            .campus
            .store()
            .find::<Company>(&company.id)
            .is_some_and(|c| c.approval_status == ApprovalStatus::Approved);
        if !approved {
            return Err(Error::Forbidden("company is not approved".into()));
        }
        if request.requested_start <= self.now() {
            return Err(Error::validation("requested_start", "must be in the future"));
        }
        let app = PresentationApplication {
            application_id: String::new(),
            company_id: company.id.clone(),
            requested_start: request.requested_start,
            requested_duration_minutes: request.requested_duration_minutes,
            theme: request.theme,
            expected_attendance: request.expected_attendance,
            status: PresentationStatus::Pending,
        };
        Ok(self.campus.store().write(|tx| tx.insert(app))?)
    }

    /// Approving creates the arrangement in the same transaction as the status change.
    pub fn review_presentation(
        &self,
        admin: &Principal,
        application_id: &str,
        review: PresentationReview,
    ) -> Result<ReviewOutcome> {
        admin.require(Role::Admin)?;
        let schedule = match (review.decision, review.schedule) {
            (Decision::Approve, None) => {
                return Err(Error::validation("schedule", "required when approving"));
            }
            (Decision::Approve, Some(s)) => {
                if s.start_time <= self.now() {
                    return Err(Error::validation("start_time", "must be in the future"));
                }
                Some(s)
            }
            (Decision::Reject, _) => None,
        };
        self.campus.store().write(|tx| {
            let mut app: PresentationApplication = tx
                .find(application_id)
                .ok_or_else(|| Error::not_found("PresentationApplication", application_id))?;
            if app.status != PresentationStatus::Pending {
                return Err(Error::InvalidTransition(format!(
                    "presentation {application_id} was already {:?}",
                    app.status
                )));
            }
            app.status = if schedule.is_some() {
                PresentationStatus::Approved
            } else {
                PresentationStatus::Rejected
            };
            let app = tx.update(app)?;
            let arrangement = match schedule {
                Some(s) => Some(tx.insert(Arrangement {
                    arrangement_id: 0,
                    application_id: app.application_id.clone(),
                    company_id: app.company_id.clone(),
                    start_time: s.start_time,
                    duration_minutes: s.duration_minutes,
                    place: s.place,
                    max_participants: s.max_participants,
                    theme: s.theme,
                    updated_at: None,
                })?),
                None => None,
            };
            Ok(ReviewOutcome {
                application: app,
                arrangement,
            })
        })
    }

    /// Full-field replacement of an arrangement's schedule.
    pub fn update_arrangement(
        &self,
        admin: &Principal,
        arrangement_id: i64,
        schedule: Schedule,
    ) -> Result<Arrangement> {
        admin.require(Role::Admin)?;
        check_id(arrangement_id)?;
        let now = self.now();
        self.campus.store().write(|tx| {
            let mut a: Arrangement = tx
                .find(arrangement_id)
                .ok_or_else(|| Error::not_found("Arrangement", arrangement_id))?;
            let count = registration_count(tx.tables(), arrangement_id);
            if (schedule.max_participants as usize) < count {
                return Err(Error::validation(
                    "max_participants",
                    format!("{count} students are already registered"),
                ));
            }
            a.start_time = schedule.start_time;
            a.duration_minutes = schedule.duration_minutes;
            a.place = schedule.place;
            a.max_participants = schedule.max_participants;
            a.theme = schedule.theme;
            a.updated_at = Some(now);
            Ok(tx.update(a)?)
        })
    }

    /// Every arrangement, soonest first.
    pub fn list_arrangements(&self) -> Vec<ArrangementListing> {
        let tables = self.campus.store().snapshot();
        listings(&tables)
    }

    pub fn arrangement_detail(&self, viewer: &Principal, arrangement_id: i64) -> Result<ArrangementDetailView> {
        check_id(arrangement_id)?;
        let tables = self.campus.store().snapshot();
        let arrangement = tables
            .arrangements
            .get(&arrangement_id.into())
            .cloned()
            .ok_or_else(|| Error::not_found("Arrangement", arrangement_id))?;
        let company = tables.companies.get(&arrangement.company_id.as_str().into());
        let summary = CompanySummary {
            company_id: arrangement.company_id.clone(),
            company_name: company.map(|c| c.company_name.clone()).unwrap_or_default(),
            industry: company
                .and_then(|c| tables.industries.get(&c.industry_id.as_str().into()))
                .map(|i| i.industry_name.clone())
                .unwrap_or_default(),
            scale: company.map(|c| c.scale.clone()).unwrap_or_default(),
            detail: company.map(|c| c.detail.clone()).unwrap_or_default(),
        };
        let has_applied = viewer.role == Role::Student
            && tables
                .registrations
                .rows()
                .any(|r| r.arrangement_id == arrangement_id && r.student_id == viewer.id);
        Ok(ArrangementDetailView {
            apply_count: registration_count(&tables, arrangement_id),
            has_applied,
            company: summary,
            arrangement,
        })
    }

    /// Check-and-insert in one transaction, so capacity holds under concurrent attempts.
    pub fn register_for_arrangement(&self, student: &Principal, arrangement_id: i64) -> Result<Registration> {
        student.require(Role::Student)?;
        check_id(arrangement_id)?;
        let now = self.now();
        let enforce = self.campus.settings().enforce_capacity;
        self.campus.store().write(|tx| {
            let a: Arrangement = tx
                .find(arrangement_id)
                .ok_or_else(|| Error::not_found("Arrangement", arrangement_id))?;
            let tables = tx.tables();
            if tables
                .registrations
                .rows()
                .any(|r| r.arrangement_id == arrangement_id && r.student_id == student.id)
            {
                return Err(Error::AlreadyApplied);
            }
            if a.start_time <= now {
                return Err(Error::Closed);
            }
            if enforce && registration_count(tables, arrangement_id) >= a.max_participants as usize {
                return Err(Error::Full);
            }
            Ok(tx.insert(Registration {
                id: 0,
                student_id: student.id.clone(),
                arrangement_id,
                registered_at: now,
            })?)
        })
    }

    pub fn list_my_registrations(&self, student: &Principal) -> Result<Vec<ArrangementListing>> {
        student.require(Role::Student)?;
        let tables = self.campus.store().snapshot();
        if !tables.students.contains(&student.id.as_str().into()) {
            return Err(Error::Unauthorized);
        }
        let mut mine: Vec<i64> = tables
            .registrations
            .rows()
            .filter(|r| r.student_id == student.id)
            .map(|r| r.arrangement_id)
            .collect();
        mine.sort_unstable();
        Ok(listings(&tables)
            .into_iter()
            .filter(|l| mine.binary_search(&l.arrangement.arrangement_id).is_ok())
            .collect())
    }

    /// The company's own requests; approved rows carry the schedule.
    pub fn presentation_application_status(&self, company: &Principal) -> Result<Vec<PresentationStatusRow>> {
        company.require(Role::Company)?;
        let tables = self.campus.store().snapshot();
        Ok(status_rows(&tables, |a| a.company_id == company.id))
    }

    pub fn list_presentation_applications(
        &self,
        admin: &Principal,
        status: Option<PresentationStatus>,
    ) -> Result<Vec<PresentationStatusRow>> {
        admin.require(Role::Admin)?;
        let tables = self.campus.store().snapshot();
        Ok(status_rows(&tables, |a| status.is_none_or(|s| a.status == s)))
    }
}

fn check_id(arrangement_id: i64) -> Result<()> {
    if arrangement_id <= 0 {
        return Err(Error::validation("arrangement_id", "must be positive"));
    }
    Ok(())
}

fn registration_count(tables: &Tables, arrangement_id: i64) -> usize {
    tables
        .registrations
        .rows()
        .filter(|r| r.arrangement_id == arrangement_id)
        .count()
}

pub(crate) fn listings(tables: &Tables) -> Vec<ArrangementListing> {
    let mut rows: Vec<ArrangementListing> = tables
        .arrangements
        .rows()
        .map(|a| ArrangementListing {
            company_name: tables
                .companies
                .get(&a.company_id.as_str().into())
                .map(|c| c.company_name.clone())
                .unwrap_or_default(),
            arrangement: a.clone(),
        })
        .collect();
    rows.sort_by_key(|l| (l.arrangement.start_time, l.arrangement.arrangement_id));
    rows
}

fn status_rows(tables: &Tables, keep: impl Fn(&PresentationApplication) -> bool) -> Vec<PresentationStatusRow> {
    tables
        .presentation_applications
        .rows()
        .filter(|a| keep(a))
        .map(|a| PresentationStatusRow {
            arrangement: tables
                .arrangements
                .rows()
                .find(|x| x.application_id == a.application_id)
                .cloned(),
            application: a.clone(),
        })
        .collect()
}
