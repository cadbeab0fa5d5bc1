//! A company requests a presentation, the admin schedules it, and students register
//! until the room is full.

use campus_recruit::auth::{HashCost, Principal, Role};
use campus_recruit::clock::ManualClock;
use campus_recruit::presentations::{PresentationRequest, PresentationReview, Schedule};
use campus_recruit::store::Fixture;
use campus_recruit::Campus;

fn main() -> campus_recruit::Result<()> {
    let clock = ManualClock::new("2026-10-14T09:00:00Z".parse().unwrap());
    let campus = Campus::builder()
        .clock(clock)
        .hash_cost(HashCost::fast())
        .fixture(Fixture::canonical())
        .build();
    let company = Principal::new(Role::Company, "C2");
    let admin = Principal::new(Role::Admin, "A1");
    let events = campus.presentations();

    let request = events.apply_for_presentation(
        &company,
        PresentationRequest {
            requested_start: "2026-11-20T14:00:00Z".parse().unwrap(),
            requested_duration_minutes: 60,
            theme: "Graduate program".into(),
            expected_attendance: 2,
        },
    )?;
    let outcome = events.review_presentation(
        &admin,
        &request.application_id,
        PresentationReview::approve(Schedule {
            start_time: "2026-11-20T14:00:00Z".parse().unwrap(),
            duration_minutes: 60,
            place: "Room 301".into(),
            max_participants: 2,
            theme: "Graduate program".into(),
        }),
    )?;
    let arrangement = outcome.arrangement.expect("approval schedules an arrangement");
    println!("scheduled #{} at {}", arrangement.arrangement_id, arrangement.place);

    for id in ["S1", "S2", "S3", "S1"] {
        let student = Principal::new(Role::Student, id);
        match events.register_for_arrangement(&student, arrangement.arrangement_id) {
            Ok(r) => println!("{id}: registered (#{})", r.id),
            Err(e) => println!("{id}: {}", e.code().as_str()),
        }
    }

    let view = events.arrangement_detail(&Principal::new(Role::Student, "S1"), arrangement.arrangement_id)?;
    println!(
        "{} by {}: {}/{} seats, S1 registered: {}",
        view.arrangement.theme,
        view.company.company_name,
        view.apply_count,
        view.arrangement.max_participants,
        view.has_applied
    );
    for row in events.presentation_application_status(&company)? {
        let when = row
            .arrangement
            .map(|a| a.start_time.to_string())
            .unwrap_or_else(|| "-".into());
        println!("{} {:?} {when}", row.application.application_id, row.application.status);
    }
    Ok(())
}
