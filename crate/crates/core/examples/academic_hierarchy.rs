//! Administrator upkeep of the college → major → class hierarchy and student records.

use campus_recruit::auth::{HashCost, Principal, Role};
use campus_recruit::directory::{DictAction, DictEntry, DictKind, StudentChanges, StudentDraft};
use campus_recruit::model::{ClassGroup, Date, Major};
use campus_recruit::store::Fixture;
use campus_recruit::Campus;

fn main() -> campus_recruit::Result<()> {
    let campus = Campus::builder()
        .hash_cost(HashCost::fast())
        .fixture(Fixture::canonical())
        .build();
    let admin = Principal::new(Role::Admin, "A1");
    let dir = campus.directory();

    let robotics = Major {
        major_id: "M9".into(),
        major_name: "Robotics".into(),
        college_id: "COL1".into(),
    };
    dir.manage_dictionary(&admin, DictAction::Create(DictEntry::Major(robotics)))?;
    let class = ClassGroup {
        class_id: "K9".into(),
        class_name: "Robotics 2026".into(),
        major_id: "M9".into(),
    };
    dir.manage_dictionary(&admin, DictAction::Create(DictEntry::ClassGroup(class)))?;

    let student = dir.add_student(
        &admin,
        StudentDraft {
            student_id: "S100".into(),
            name: "Zhao Lei".into(),
            sex: "M".into(),
            birthday: Date::from_ymd_opt(2004, 5, 1).unwrap(),
            phone: "13800000100".into(),
            email: "zl@campus.edu".into(),
            college_id: "COL1".into(),
            major_id: "M9".into(),
            class_id: "K9".into(),
            initial_password: "change-me".into(),
        },
    )?;
    println!("added {} in class {}", student.student_id, student.class_id);

    // A class from another major breaks the chain and is refused.
    let mismatched = StudentChanges {
        class_id: Some("K3".into()),
        ..Default::default()
    };
    match dir.update_student(&admin, "S100", mismatched) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("inconsistent hierarchy accepted"),
    }

    // Colleges with majors cannot be removed.
    match dir.manage_dictionary(&admin, DictAction::Delete(DictKind::College, "COL1".into())) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("referenced college deleted"),
    }

    for entry in dir.list_dictionary(&admin, DictKind::Major) {
        println!("major {}", entry.id());
    }
    Ok(())
}
