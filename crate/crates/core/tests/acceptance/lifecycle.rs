use std::cell::Cell;
use std::collections::BTreeMap;

use campus_recruit::auth::{Principal, Role};
use campus_recruit::clock::Clock;
use campus_recruit::directory::StudentChanges;
use campus_recruit::model::*;
use campus_recruit::recruitment::{Accessory, ResumeSubmission};
use campus_recruit::store::Fixture;
use campus_recruit::Error;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use crate::support::campus_with;
use crate::Outcome;

const SEQUENCES: u32 = 1_000;
const MAX_OPS: usize = 20;

const STUDENTS: [&str; 4] = ["S1", "S2", "S5", "S8"];
/// J6 is past its deadline; the owner of each posting follows it.
const POSTINGS: [(&str, &str); 6] = [
    ("J1", "C1"),
    ("J2", "C1"),
    ("J3", "C1"),
    ("J4", "C2"),
    ("J5", "C2"),
    ("J6", "C2"),
];
const LEVELS: [&str; 5] = ["E1", "E2", "E3", "E4", "E5"];

#[derive(Debug, Clone)]
enum Step {
    Submit {
        student: usize,
        posting: usize,
        level: usize,
        attach: Option<Vec<u8>>,
        contact: bool,
    },
    View {
        pick: usize,
        wrong_company: bool,
    },
    Download {
        pick: usize,
    },
    Respond {
        pick: usize,
        result: usize,
    },
    EditStudent {
        student: usize,
        tag: u16,
    },
    Advance {
        minutes: i64,
    },
}

fn step() -> impl Strategy<Value = Step> {
    prop_oneof![
        4 => (0..STUDENTS.len(), 0..POSTINGS.len(), 0..LEVELS.len(), proptest::option::of(proptest::collection::vec(any::<u8>(), 0..64)), any::<bool>())
            .prop_map(|(student, posting, level, attach, contact)| Step::Submit { student, posting, level, attach, contact }),
        3 => (any::<usize>(), proptest::bool::weighted(0.2)).prop_map(|(pick, wrong_company)| Step::View { pick, wrong_company }),
        2 => any::<usize>().prop_map(|pick| Step::Download { pick }),
        3 => (any::<usize>(), 0..3usize).prop_map(|(pick, result)| Step::Respond { pick, result }),
        1 => (0..STUDENTS.len(), any::<u16>()).prop_map(|(student, tag)| Step::EditStudent { student, tag }),
        1 => (1..600i64).prop_map(|minutes| Step::Advance { minutes }),
    ]
}

/// What a resume row should look like, tracked independently of the store.
#[derive(Debug, Clone)]
struct Expected {
    recruit_id: String,
    company: &'static str,
    student_id: String,
    snapshot: (String, String, String, String, String),
    attachment: Option<Vec<u8>>,
    viewed_at: Option<Timestamp>,
    result: Option<FeedbackResult>,
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn expect_err(
    got: Result<impl std::fmt::Debug, Error>,
    want: fn(&Error) -> bool,
    what: &str,
) -> Result<(), TestCaseError> {
    match got {
        Err(e) if want(&e) => Ok(()),
        other => Err(fail(format!("{what}: unexpected {other:?}"))),
    }
}

fn sequence(steps: Vec<Step>) -> Result<(), TestCaseError> {
    let mut fixture = Fixture::canonical();
    fixture.resume_applications.clear();
    fixture.notifications.clear();
    let (campus, clock) = campus_with(&fixture);
    let rec = campus.recruitment();
    let admin = Principal::new(Role::Admin, "A1");
    let mut model: BTreeMap<String, Expected> = BTreeMap::new();
    let mut last_status: BTreeMap<String, ApplicationStatus> = BTreeMap::new();
    let mut sent = 0usize;

    for step in steps {
        let ids: Vec<String> = model.keys().cloned().collect();
        let pick = |p: usize| (!ids.is_empty()).then(|| ids[p % ids.len()].clone());
        match step {
            Step::Submit {
                student,
                posting,
                level,
                attach,
                contact,
            } => {
                let sid = STUDENTS[student];
                let (rid, company) = POSTINGS[posting];
                let me = campus.store().find::<Student>(sid).unwrap();
                let submission = ResumeSubmission {
                    recruit_id: rid.into(),
                    education_id: LEVELS[level].into(),
                    experience: "two internships".into(),
                    skill: "rust".into(),
                    email: contact.then(|| format!("{sid}@alt.example")),
                    phone: contact.then(|| "5550000".to_string()),
                    accessory: attach.clone().map(|bytes| Accessory {
                        file_name: "cv.pdf".into(),
                        bytes,
                    }),
                };
                let got = rec.submit_resume(&Principal::new(Role::Student, sid), submission);
                let duplicate = model.values().any(|e| e.recruit_id == rid && e.student_id == sid);
                if rid == "J6" {
                    expect_err(got, |e| matches!(e, Error::Expired(_)), "submit to expired posting")?;
                } else if duplicate {
                    expect_err(
                        got,
                        |e| matches!(e, Error::DuplicateApplication(_)),
                        "second submission",
                    )?;
                } else {
                    let app = got.map_err(|e| fail(format!("submit {sid}->{rid}: {e}")))?;
                    let email = if contact {
                        format!("{sid}@alt.example")
                    } else {
                        me.email.clone()
                    };
                    let phone = if contact {
                        "5550000".to_string()
                    } else {
                        me.phone.clone()
                    };
                    let snapshot = (
                        me.name.clone(),
                        email,
                        phone,
                        LEVELS[level].to_string(),
                        me.major_id.clone(),
                    );
                    model.insert(
                        app.resume_id.clone(),
                        Expected {
                            recruit_id: rid.into(),
                            company,
                            student_id: sid.into(),
                            snapshot,
                            attachment: attach,
                            viewed_at: None,
                            result: None,
                        },
                    );
                }
            }
            Step::View { pick: p, wrong_company } => {
                let Some(id) = pick(p) else { continue };
                let owner = model[&id].company;
                let viewer = if wrong_company {
                    if owner == "C1" {
                        "C2"
                    } else {
                        "C1"
                    }
                } else {
                    owner
                };
                let got = rec.view_resume_detail(&Principal::new(Role::Company, viewer), &id);
                if viewer != owner {
                    expect_err(got, |e| matches!(e, Error::NotOwner(_)), "view by another company")?;
                } else {
                    got.map_err(|e| fail(format!("view {id}: {e}")))?;
                    let e = model.get_mut(&id).unwrap();
                    e.viewed_at.get_or_insert(clock.now());
                }
            }
            Step::Download { pick: p } => {
                let Some(id) = pick(p) else { continue };
                let e = model.get_mut(&id).unwrap();
                let got = rec.download_accessory(&Principal::new(Role::Company, e.company), &id);
                match &e.attachment {
                    None => expect_err(
                        got,
                        |e| matches!(e, Error::NoAccessory(_)),
                        "download without attachment",
                    )?,
                    Some(bytes) => {
                        let file = got.map_err(|err| fail(format!("download {id}: {err}")))?;
                        if &file.bytes != bytes {
                            return Err(fail(format!("download {id} returned different bytes")));
                        }
                        e.viewed_at.get_or_insert(clock.now());
                    }
                }
            }
            Step::Respond { pick: p, result } => {
                let Some(id) = pick(p) else { continue };
                let result = [
                    FeedbackResult::Reviewed,
                    FeedbackResult::InterviewScheduled,
                    FeedbackResult::NotSelected,
                ][result];
                let e = model.get_mut(&id).unwrap();
                let got = rec.respond_to_resume(&Principal::new(Role::Company, e.company), &id, result);
                if e.viewed_at.is_none() {
                    expect_err(got, |e| matches!(e, Error::NotViewed(_)), "respond before view")?;
                } else if e.result.is_some() {
                    expect_err(got, |e| matches!(e, Error::AlreadyResponded(_)), "second response")?;
                } else {
                    got.map_err(|err| fail(format!("respond {id}: {err}")))?;
                    e.result = Some(result);
                    sent += 1;
                }
            }
            Step::EditStudent { student, tag } => {
                let changes = StudentChanges {
                    name: Some(format!("Renamed {tag}")),
                    email: Some(format!("r{tag}@campus.edu")),
                    phone: Some(format!("{tag}")),
                    ..StudentChanges::default()
                };
                campus
                    .directory()
                    .update_student(&admin, STUDENTS[student], changes)
                    .map_err(|e| fail(format!("edit student: {e}")))?;
            }
            Step::Advance { minutes } => clock.advance_minutes(minutes),
        }
        check(&campus, &model, &mut last_status, sent)?;
    }
    Ok(())
}

fn check(
    campus: &campus_recruit::Campus,
    model: &BTreeMap<String, Expected>,
    last_status: &mut BTreeMap<String, ApplicationStatus>,
    sent: usize,
) -> Result<(), TestCaseError> {
    let rows: Vec<ResumeApplication> = campus.store().all();
    if rows.len() != model.len() {
        return Err(fail(format!("{} resume rows, expected {}", rows.len(), model.len())));
    }
    let mut pairs = std::collections::BTreeSet::new();
    for row in &rows {
        if !pairs.insert((row.recruit_id.clone(), row.student_id.clone())) {
            return Err(fail(format!(
                "pair {} / {} stored twice",
                row.recruit_id, row.student_id
            )));
        }
        let e = model
            .get(&row.resume_id)
            .ok_or_else(|| fail(format!("unexpected row {}", row.resume_id)))?;
        if row.result.is_some() && row.viewed_at.is_none() {
            return Err(fail(format!("{} has a result but was never viewed", row.resume_id)));
        }
        if row.viewed_at != e.viewed_at || row.result != e.result {
            return Err(fail(format!(
                "{}: viewed {:?} result {:?}, expected {:?} {:?}",
                row.resume_id, row.viewed_at, row.result, e.viewed_at, e.result
            )));
        }
        let snapshot = (
            row.student_name.clone(),
            row.email.clone(),
            row.phone.clone(),
            row.education_id.clone(),
            row.major_id.clone(),
        );
        if snapshot != e.snapshot {
            return Err(fail(format!(
                "{} snapshot drifted: {snapshot:?} vs {:?}",
                row.resume_id, e.snapshot
            )));
        }
        let status = row.status();
        if let Some(prev) = last_status.insert(row.resume_id.clone(), status) {
            if status < prev {
                return Err(fail(format!("{} went back from {prev:?} to {status:?}", row.resume_id)));
            }
        }
    }
    let notes = campus.store().all::<Notification>().len();
    if notes != sent {
        return Err(fail(format!("{notes} notifications for {sent} responses")));
    }
    for sid in STUDENTS {
        let mine = campus
            .recruitment()
            .list_my_applications(&Principal::new(Role::Student, sid))
            .map_err(|e| fail(e.to_string()))?;
        for m in mine {
            let e = &model[&m.application.resume_id];
            let want = match (e.viewed_at, e.result) {
                (_, Some(_)) => ApplicationStatus::Responded,
                (Some(_), None) => ApplicationStatus::Viewed,
                (None, None) => ApplicationStatus::Submitted,
            };
            if m.status != want || e.student_id != sid {
                return Err(fail(format!(
                    "{sid} sees {} as {:?}, expected {want:?}",
                    m.application.resume_id, m.status
                )));
            }
        }
    }
    Ok(())
}

pub fn run() -> Outcome {
    let cases = Cell::new(0u32);
    let ops = Cell::new(0usize);
    let mut runner = TestRunner::new(Config {
        cases: SEQUENCES,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = proptest::collection::vec(step(), 1..=MAX_OPS);
    runner
        .run(&strategy, |steps| {
            cases.set(cases.get() + 1);
            ops.set(ops.get() + steps.len());
            sequence(steps)
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "{} sequences of at most {MAX_OPS} ops ({} ops total), zero violations",
        cases.get(),
        ops.get()
    ))
}
