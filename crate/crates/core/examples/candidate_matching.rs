//! Ranking applicants for a posting by education level and major.

use campus_recruit::auth::{HashCost, Principal, Role};
use campus_recruit::store::Fixture;
use campus_recruit::Campus;

fn main() -> campus_recruit::Result<()> {
    let campus = Campus::builder()
        .hash_cost(HashCost::fast())
        .fixture(Fixture::canonical())
        .build();
    let company = Principal::new(Role::Company, "C1");
    let jobs = campus.recruitment();

    for posting in jobs.my_jobs(&company)? {
        let ranked = jobs.match_candidates(&company, &posting.recruit_id)?;
        let received = jobs.list_received_resumes(&company, Some(&posting.recruit_id))?;
        println!(
            "{} requires {} (major {:?}): {} of {} applicants qualify",
            posting.recruit_id,
            posting.education_id,
            posting.major_id,
            ranked.len(),
            received.len()
        );
        for app in ranked {
            println!(
                "  {} {} {} {}",
                app.resume_id, app.student_name, app.education_id, app.major_id
            );
        }
    }
    Ok(())
}
