//! Job postings, resume applications, employer feedback and candidate matching.

mod attachments;

use std::cmp::Reverse;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use attachments::AttachmentStore;

use crate::auth::{Principal, Role};
use crate::campus::Campus;
use crate::error::{Error, Result};
use crate::model::*;
use crate::store::{Query, Tables};

/// Everything a company supplies for a new posting.
#[derive(Debug, Clone, Deserialize)]
pub struct PostingDraft {
    pub position_id: String,
    pub education_id: String,
    #[serde(default)]
    pub major_id: Option<String>,
    #[serde(default)]
    pub linkman_name: String,
    #[serde(default)]
    pub linkman_email: String,
    #[serde(default)]
    pub company_type: String,
    pub place: String,
    pub city: String,
    pub number: u32,
    #[serde(default)]
    pub salary: u64,
    pub recruit_type: RecruitType,
    #[serde(default)]
    pub experience: String,
    /// Publication time label; defaults to the posting instant.
    #[serde(default)]
    pub time: Option<String>,
    pub deadline: Timestamp,
    #[serde(default)]
    pub detail: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PostingChanges {
    pub position_id: Option<String>,
    pub education_id: Option<String>,
    pub major_id: Option<String>,
    pub linkman_name: Option<String>,
    pub linkman_email: Option<String>,
    pub company_type: Option<String>,
    pub place: Option<String>,
    pub city: Option<String>,
    pub number: Option<u32>,
    pub salary: Option<u64>,
    pub recruit_type: Option<RecruitType>,
    pub experience: Option<String>,
    pub time: Option<String>,
    pub deadline: Option<Timestamp>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JobRemoval {
    /// No applications referenced the posting; the row is gone.
    Removed,
    /// Applications exist; the posting is hidden but kept for them.
    Withdrawn,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
pub struct JobFilter {
    pub city: Option<String>,
    /// Postings this education level qualifies for (required rank at or below its rank).
    pub education_id: Option<String>,
    pub recruit_type: Option<RecruitType>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
pub struct Page {
    #[serde(default)]
    pub offset: usize,
    pub limit: Option<usize>,
}

impl Page {
    pub fn all() -> Self {
        Page::default()
    }

    pub fn new(offset: usize, limit: usize) -> Self {
        Page {
            offset,
            limit: Some(limit),
        }
    }

    fn apply<T>(self, rows: Vec<T>) -> Vec<T> {
        let it = rows.into_iter().skip(self.offset);
        match self.limit {
            Some(n) => it.take(n).collect(),
            None => it.collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Deserialize)]
pub struct Accessory {
    pub file_name: String,
    pub bytes: Vec<u8>,
}

impl std::fmt::Debug for Accessory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Accessory")
            .field("file_name", &self.file_name)
            .field("len", &self.bytes.len())
            .finish()
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct ResumeSubmission {
    pub recruit_id: String,
    pub education_id: String,
    #[serde(default)]
    pub experience: String,
    #[serde(default)]
    pub skill: String,
    #[serde(default)]
    pub email: Option<String>,
    #[serde(default)]
    pub phone: Option<String>,
    #[serde(skip)]
    pub accessory: Option<Accessory>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PostingSummary {
    pub recruit_id: String,
    pub company_id: String,
    pub company_name: String,
    pub position_id: String,
    pub city: String,
    pub deadline: Timestamp,
    pub withdrawn: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MyApplication {
    pub application: ResumeApplication,
    pub status: ApplicationStatus,
    /// Absent only if the posting row itself is gone.
    pub posting: Option<PostingSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessoryFile {
    pub file_name: String,
    pub bytes: Vec<u8>,
}

pub struct Recruitment<'a> {
    campus: &'a Campus,
}

impl<'a> Recruitment<'a> {
    pub(crate) fn new(campus: &'a Campus) -> Self {
        Recruitment { campus }
    }

    fn now(&self) -> Timestamp {
        self.campus.clock().now()
    }

    pub fn post_job(&self, company: &Principal, draft: PostingDraft) -> Result<JobPosting> {
        company.require(Role::Company)?;
        let approved = self
            .campus
            .store()
            .find::<Company>(&company.id)
            .is_some_and(|c| c.approval_status == ApprovalStatus::Approved);
        if !approved {
            return Err(Error::Forbidden("company is not approved".into()));
        }
        let now = self.now();
        if draft.deadline <= now {
            return Err(Error::validation("deadline", "must be in the future"));
        }
        let posting = JobPosting {
            recruit_id: String::new(),
            company_id: company.id.clone(),
            position_id: draft.position_id,
            education_id: draft.education_id,
            major_id: draft.major_id,
            linkman_name: draft.linkman_name,
            linkman_email: draft.linkman_email,
            company_type: draft.company_type,
            place: draft.place,
            city: draft.city,
            number: draft.number,
            salary: draft.salary,
            recruit_type: draft.recruit_type,
            experience: draft.experience,
            time: draft.time.unwrap_or_else(|| now.to_iso8601()),
            deadline: draft.deadline,
            detail: draft.detail,
            withdrawn: false,
        };
        Ok(self.campus.store().write(|tx| tx.insert(posting))?)
    }

    fn owned_posting(&self, tables: &Tables, company: &Principal, recruit_id: &str) -> Result<JobPosting> {
        let posting = tables
            .job_postings
            .get(&recruit_id.into())
            .ok_or_else(|| Error::not_found("JobPosting", recruit_id))?;
        if posting.company_id != company.id {
            return Err(Error::NotOwner(format!("posting {recruit_id}")));
        }
        Ok(posting.clone())
    }

    pub fn edit_job(&self, company: &Principal, recruit_id: &str, changes: PostingChanges) -> Result<JobPosting> {
        company.require(Role::Company)?;
        let now = self.now();
        self.campus.store().write(|tx| {
            let mut p = self.owned_posting(tx.tables(), company, recruit_id)?;
            if p.withdrawn {
                return Err(Error::not_found("JobPosting", recruit_id));
            }
            if let Some(deadline) = changes.deadline {
                if deadline <= now {
                    return Err(Error::validation("deadline", "must be in the future"));
                }
                p.deadline = deadline;
            }
            set(&mut p.position_id, changes.position_id);
            set(&mut p.education_id, changes.education_id);
            if changes.major_id.is_some() {
                p.major_id = changes.major_id;
            }
            set(&mut p.linkman_name, changes.linkman_name);
            set(&mut p.linkman_email, changes.linkman_email);
            set(&mut p.company_type, changes.company_type);
            set(&mut p.place, changes.place);
            set(&mut p.city, changes.city);
            set(&mut p.number, changes.number);
            set(&mut p.salary, changes.salary);
            set(&mut p.recruit_type, changes.recruit_type);
            set(&mut p.experience, changes.experience);
            set(&mut p.time, changes.time);
            set(&mut p.detail, changes.detail);
            Ok(tx.update(p)?)
        })
    }

    pub fn delete_job(&self, company: &Principal, recruit_id: &str) -> Result<JobRemoval> {
        company.require(Role::Company)?;
        self.campus.store().write(|tx| {
            let mut p = self.owned_posting(tx.tables(), company, recruit_id)?;
            if p.withdrawn {
                return Err(Error::not_found("JobPosting", recruit_id));
            }
            let applied = tx
                .tables()
                .resume_applications
                .rows()
                .any(|r| r.recruit_id == recruit_id);
            if applied {
                p.withdrawn = true;
                tx.update(p)?;
                Ok(JobRemoval::Withdrawn)
            } else {
                tx.delete::<JobPosting>(recruit_id)?;
                Ok(JobRemoval::Removed)
            }
        })
    }

    /// Open postings (deadline not passed, not withdrawn), newest `time` first.
    pub fn list_jobs(&self, filter: &JobFilter, page: Page) -> Result<Vec<JobPosting>> {
        let tables = self.campus.store().snapshot();
        Ok(page.apply(open_postings(&tables, filter, self.now())?))
    }

    /// A company's own postings, including expired ones.
    pub fn my_jobs(&self, company: &Principal) -> Result<Vec<JobPosting>> {
        company.require(Role::Company)?;
        let q = Query::new()
            .eq("company_id", company.id.as_str())
            .eq("withdrawn", false)
            .order_by_desc("time");
        Ok(self.campus.store().query::<JobPosting>(&q)?)
    }

    /// Students see open postings only; the owning company sees its own regardless.
    pub fn job_detail(&self, viewer: &Principal, recruit_id: &str) -> Result<JobPosting> {
        let posting = self
            .campus
            .store()
            .find::<JobPosting>(recruit_id)
            .ok_or_else(|| Error::not_found("JobPosting", recruit_id))?;
        let owner = viewer.role == Role::Company && viewer.id == posting.company_id;
        let open = !posting.withdrawn && posting.deadline >= self.now();
        if owner && !posting.withdrawn || open {
            Ok(posting)
        } else {
            Err(Error::not_found("JobPosting", recruit_id))
        }
    }

    pub fn submit_resume(&self, student: &Principal, submission: ResumeSubmission) -> Result<ResumeApplication> {
        student.require(Role::Student)?;
        let settings = self.campus.settings();
        let mut accessory_key = None;
        let mut accessory_name = None;
        if let Some(file) = &submission.accessory {
            if file.bytes.len() > settings.upload_max_bytes {
                return Err(Error::PayloadTooLarge {
                    limit: settings.upload_max_bytes,
                });
            }
            let ext = extension_of(&file.file_name);
            if !settings
                .allowed_extensions
                .iter()
                .any(|a| Some(a.as_str()) == ext.as_deref())
            {
                return Err(Error::validation(
                    "accessory",
                    format!("file type must be one of {}", settings.allowed_extensions.join(", ")),
                ));
            }
            FieldCheck::new()
                .text("accessory_name", &file.file_name, 255)
                .finish()?;
            accessory_name = Some(file.file_name.clone());
        }
        let now = self.now();
        let store = self.campus.store();
        let check = |tables: &Tables| -> Result<Student> {
            let me = tables
                .students
                .get(&student.id.as_str().into())
                .cloned()
                .ok_or(Error::Unauthorized)?;
            let posting = tables
                .job_postings
                .get(&submission.recruit_id.as_str().into())
                .filter(|p| !p.withdrawn)
                .ok_or_else(|| Error::not_found("JobPosting", &submission.recruit_id))?;
            if posting.deadline < now {
                return Err(Error::Expired(posting.recruit_id.clone()));
            }
            let duplicate = tables
                .resume_applications
                .rows()
                .any(|r| r.recruit_id == submission.recruit_id && r.student_id == student.id);
            if duplicate {
                return Err(Error::DuplicateApplication(submission.recruit_id.clone()));
            }
            Ok(me)
        };
        // Reject early so a refused submission never writes an attachment.
        check(&store.snapshot())?;
        if let Some(file) = &submission.accessory {
            accessory_key = Some(self.campus.attachments().put(&file.bytes)?);
        }
        store.write(|tx| {
            let me = check(tx.tables())?;
            let app = ResumeApplication {
                resume_id: String::new(),
                recruit_id: submission.recruit_id.clone(),
                student_id: me.student_id,
                student_name: me.name,
                education_id: submission.education_id.clone(),
                major_id: me.major_id,
                experience: submission.experience.clone(),
                skill: submission.skill.clone(),
                email: submission.email.clone().unwrap_or(me.email),
                phone: submission.phone.clone().unwrap_or(me.phone),
                accessory: accessory_key,
                accessory_name,
                submitted_at: now,
                viewed_at: None,
                result: None,
            };
            Ok(tx.insert(app)?)
        })
    }

    /// The student's applications, newest first, each with its tracker stage.
    pub fn list_my_applications(&self, student: &Principal) -> Result<Vec<MyApplication>> {
        student.require(Role::Student)?;
        let tables = self.campus.store().snapshot();
        let mut mine: Vec<&ResumeApplication> = tables
            .resume_applications
            .rows()
            .filter(|r| r.student_id == student.id)
            .collect();
        mine.sort_by(|a, b| {
            b.submitted_at
                .cmp(&a.submitted_at)
                .then_with(|| b.resume_id.cmp(&a.resume_id))
        });
        Ok(mine
            .into_iter()
            .map(|app| MyApplication {
                status: app.status(),
                posting: tables
                    .job_postings
                    .get(&app.recruit_id.as_str().into())
                    .map(|p| PostingSummary {
                        recruit_id: p.recruit_id.clone(),
                        company_id: p.company_id.clone(),
                        company_name: tables
                            .companies
                            .get(&p.company_id.as_str().into())
                            .map(|c| c.company_name.clone())
                            .unwrap_or_default(),
                        position_id: p.position_id.clone(),
                        city: p.city.clone(),
                        deadline: p.deadline,
                        withdrawn: p.withdrawn,
                    }),
                application: app.clone(),
            })
            .collect())
    }

    /// Applications to the company's postings. Listing does not count as viewing.
    pub fn list_received_resumes(
        &self,
        company: &Principal,
        recruit_id: Option<&str>,
    ) -> Result<Vec<ResumeApplication>> {
        company.require(Role::Company)?;
        let tables = self.campus.store().snapshot();
        if let Some(id) = recruit_id {
            self.owned_posting(&tables, company, id)?;
        }
        let owned = |r: &ResumeApplication| {
            tables
                .job_postings
                .get(&r.recruit_id.as_str().into())
                .is_some_and(|p| p.company_id == company.id)
        };
        Ok(tables
            .resume_applications
            .rows()
            .filter(|r| recruit_id.is_none_or(|id| r.recruit_id == id) && owned(r))
            .cloned()
            .collect())
    }

    fn owned_resume(&self, tables: &Tables, company: &Principal, resume_id: &str) -> Result<ResumeApplication> {
        let app = tables
            .resume_applications
            .get(&resume_id.into())
            .ok_or_else(|| Error::not_found("ResumeApplication", resume_id))?;
        let owner = tables
            .job_postings
            .get(&app.recruit_id.as_str().into())
            .map(|p| p.company_id.as_str());
        if owner != Some(company.id.as_str()) {
            return Err(Error::NotOwner(format!("resume {resume_id}")));
        }
        Ok(app.clone())
    }

    fn mark_viewed(&self, company: &Principal, resume_id: &str) -> Result<ResumeApplication> {
        let store = self.campus.store();
        let app = self.owned_resume(&store.snapshot(), company, resume_id)?;
        if app.viewed_at.is_some() {
            return Ok(app);
        }
        let now = self.now();
        store.write(|tx| {
            let mut app = self.owned_resume(tx.tables(), company, resume_id)?;
            if app.viewed_at.is_none() {
                app.viewed_at = Some(now);
                app = tx.update(app)?;
            }
            Ok(app)
        })
    }

    /// First view stamps `viewed_at`; later views leave it unchanged.
    pub fn view_resume_detail(&self, company: &Principal, resume_id: &str) -> Result<ResumeApplication> {
        company.require(Role::Company)?;
        self.mark_viewed(company, resume_id)
    }

    pub fn download_accessory(&self, company: &Principal, resume_id: &str) -> Result<AccessoryFile> {
        company.require(Role::Company)?;
        let app = self.owned_resume(&self.campus.store().snapshot(), company, resume_id)?;
        let Some(key) = &app.accessory else {
            return Err(Error::NoAccessory(resume_id.to_string()));
        };
        let bytes = self.campus.attachments().get(key)?;
        self.mark_viewed(company, resume_id)?;
        Ok(AccessoryFile {
            file_name: app.accessory_name.clone().unwrap_or_else(|| key.clone()),
            bytes,
        })
    }

    /// Records the one-shot employer result and drops a notice in the student's inbox.
    pub fn respond_to_resume(
        &self,
        company: &Principal,
        resume_id: &str,
        result: FeedbackResult,
    ) -> Result<ResumeApplication> {
        company.require(Role::Company)?;
        let now = self.now();
        self.campus.store().write(|tx| {
            let mut app = self.owned_resume(tx.tables(), company, resume_id)?;
            if app.viewed_at.is_none() {
                return Err(Error::NotViewed(resume_id.to_string()));
            }
            if app.result.is_some() {
                return Err(Error::AlreadyResponded(resume_id.to_string()));
            }
            app.result = Some(result);
            tx.insert(Notification {
                id: 0,
                student_id: app.student_id.clone(),
                resume_id: app.resume_id.clone(),
                result,
                created_at: now,
            })?;
            Ok(tx.update(app)?)
        })
    }

    /// Applicants meeting the posting's education requirement, best fit first.
    pub fn match_candidates(&self, company: &Principal, recruit_id: &str) -> Result<Vec<ResumeApplication>> {
        company.require(Role::Company)?;
        let tables = self.campus.store().snapshot();
        let posting = self.owned_posting(&tables, company, recruit_id)?;
        Ok(rank_candidates(&tables, &posting))
    }

    pub fn notifications(&self, student: &Principal) -> Result<Vec<Notification>> {
        student.require(Role::Student)?;
        let q = Query::new().eq("student_id", student.id.as_str()).order_by_desc("id");
        Ok(self.campus.store().query::<Notification>(&q)?)
    }
}

pub(crate) fn open_postings(tables: &Tables, filter: &JobFilter, now: Timestamp) -> Result<Vec<JobPosting>> {
    let mut q = Query::new().eq("withdrawn", false);
    if let Some(city) = &filter.city {
        q = q.eq("city", city.as_str());
    }
    if let Some(kind) = filter.recruit_type {
        q = q.eq("recruit_type", kind.code());
    }
    let ranks: HashMap<&str, i32> = tables
        .education_levels
        .rows()
        .map(|e| (e.education_id.as_str(), e.rank))
        .collect();
    let ceiling = match &filter.education_id {
        Some(id) => Some(
            *ranks
                .get(id.as_str())
                .ok_or_else(|| Error::validation("education_id", format!("unknown education level {id}")))?,
        ),
        None => None,
    };
    let mut rows: Vec<JobPosting> = q
        .run(&tables.job_postings)?
        .into_iter()
        .filter(|p| p.deadline >= now)
        .filter(|p| ceiling.is_none_or(|c| ranks.get(p.education_id.as_str()).is_some_and(|r| *r <= c)))
        .collect();
    rows.sort_by(|a, b| b.time.cmp(&a.time).then_with(|| a.recruit_id.cmp(&b.recruit_id)));
    Ok(rows)
}

pub(crate) fn rank_candidates(tables: &Tables, posting: &JobPosting) -> Vec<ResumeApplication> {
    let rank_of = |id: &str| tables.education_levels.get(&id.into()).map(|e| e.rank);
    let Some(required) = rank_of(&posting.education_id) else {
        return Vec::new();
    };
    let mut hits: Vec<(bool, i32, &ResumeApplication)> = tables
        .resume_applications
        .rows()
        .filter(|r| r.recruit_id == posting.recruit_id)
        .filter_map(|r| {
            rank_of(&r.education_id)
                .filter(|rank| *rank >= required)
                .map(|rank| (r, rank))
        })
        .map(|(r, rank)| (posting.major_id.as_deref() == Some(r.major_id.as_str()), rank, r))
        .collect();
    hits.sort_by_key(|(major, rank, r)| (Reverse(*major), Reverse(*rank), r.submitted_at, r.resume_id.clone()));
    hits.into_iter().map(|(_, _, r)| r.clone()).collect()
}

fn extension_of(file_name: &str) -> Option<String> {
    let dot = file_name.rfind('.')?;
    Some(file_name[dot..].to_ascii_lowercase())
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}
