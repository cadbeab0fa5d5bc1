//! A posting goes up, a student applies, the employer views and responds,
//! and the student's tracker moves Submitted → Viewed → Responded.

use campus_recruit::auth::{HashCost, Principal, Role};
use campus_recruit::clock::ManualClock;
use campus_recruit::model::{FeedbackResult, RecruitType};
use campus_recruit::recruitment::{Accessory, PostingDraft, ResumeSubmission};
use campus_recruit::store::Fixture;
use campus_recruit::Campus;

fn main() -> campus_recruit::Result<()> {
    let clock = ManualClock::new("2026-10-14T09:00:00Z".parse().unwrap());
    let campus = Campus::builder()
        .clock(clock.clone())
        .hash_cost(HashCost::fast())
        .fixture(Fixture::canonical())
        .build();
    let company = Principal::new(Role::Company, "C1");
    let student = Principal::new(Role::Student, "S7");
    let jobs = campus.recruitment();

    let posting = jobs.post_job(
        &company,
        PostingDraft {
            position_id: "Data engineer".into(),
            education_id: "E3".into(),
            major_id: Some("M4".into()),
            linkman_name: "Chen".into(),
            linkman_email: "chen@nimbus.io".into(),
            company_type: "Private".into(),
            place: "Zhangjiang".into(),
            city: "Shanghai".into(),
            number: 3,
            salary: 18000,
            recruit_type: RecruitType::FullTime,
            experience: "none".into(),
            time: None,
            deadline: "2026-12-31T23:59:59Z".parse().unwrap(),
            detail: "Pipelines and warehousing".into(),
        },
    )?;
    println!("posted {}", posting.recruit_id);

    let app = jobs.submit_resume(
        &student,
        ResumeSubmission {
            recruit_id: posting.recruit_id.clone(),
            education_id: "E3".into(),
            experience: "Campus data club lead".into(),
            skill: "SQL, Python".into(),
            email: None,
            phone: None,
            accessory: Some(Accessory {
                file_name: "resume.pdf".into(),
                bytes: b"%PDF-1.7 ...".to_vec(),
            }),
        },
    )?;
    let track = |label: &str| -> campus_recruit::Result<()> {
        let mine = jobs.list_my_applications(&student)?;
        println!("{label:<10} {:?}", mine[0].status);
        Ok(())
    };
    track("submitted")?;

    clock.advance_minutes(90);
    let file = jobs.download_accessory(&company, &app.resume_id)?;
    println!("downloaded {} ({} bytes)", file.file_name, file.bytes.len());
    track("viewed")?;

    jobs.respond_to_resume(&company, &app.resume_id, FeedbackResult::InterviewScheduled)?;
    track("responded")?;
    for note in jobs.notifications(&student)? {
        println!("inbox: {} → {}", note.resume_id, note.result.label());
    }
    Ok(())
}
