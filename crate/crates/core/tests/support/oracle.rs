//! Straight-line reference implementations, written against the fixture rows
//! rather than the store, for equivalence checks.

use std::cmp::Ordering;
use std::collections::HashMap;

use campus_recruit::model::*;
use campus_recruit::store::{Fixture, Op, Query};
use serde::Serialize;
use serde_json::Value;

fn kind_order(v: &Value) -> u8 {
    match v {
        Value::Null => 0,
        Value::Bool(_) => 1,
        Value::Number(_) => 2,
        Value::String(_) => 3,
        Value::Array(_) => 4,
        Value::Object(_) => 5,
    }
}

fn cmp(a: &Value, b: &Value) -> Ordering {
    if kind_order(a) != kind_order(b) {
        return kind_order(a).cmp(&kind_order(b));
    }
    match (a, b) {
        (Value::Bool(x), Value::Bool(y)) => x.cmp(y),
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            x.partial_cmp(&y).unwrap()
        }
        (Value::String(x), Value::String(y)) => x.as_bytes().cmp(y.as_bytes()),
        _ => Ordering::Equal,
    }
}

fn holds(field: &Value, op: Op, target: &Value) -> bool {
    if op == Op::Contains {
        return match (field.as_str(), target.as_str()) {
            (Some(h), Some(n)) => h.contains(n),
            _ => false,
        };
    }
    let comparable = kind_order(field) == kind_order(target);
    let o = cmp(field, target);
    match op {
        Op::Eq => comparable && o == Ordering::Equal,
        Op::Ne => !comparable || o != Ordering::Equal,
        Op::Lt => comparable && o == Ordering::Less,
        Op::Le => comparable && o != Ordering::Greater,
        Op::Gt => comparable && o == Ordering::Greater,
        Op::Ge => comparable && o != Ordering::Less,
        Op::Contains => unreachable!(),
    }
}

/// `rows` must be in primary-key order, as a store table would hold them.
pub fn query<T: Serialize + Clone>(rows: &[T], q: &Query) -> Vec<T> {
    let mut keyed: Vec<(usize, Value, &T)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (i, serde_json::to_value(r).unwrap(), r))
        .filter(|(_, v, _)| {
            q.filter
                .iter()
                .all(|p| holds(v.get(&p.field).unwrap_or(&Value::Null), p.op, &p.value))
        })
        .collect();
    keyed.sort_by(|(ia, a, _), (ib, b, _)| {
        q.order
            .iter()
            .map(|o| {
                let c = cmp(
                    a.get(&o.field).unwrap_or(&Value::Null),
                    b.get(&o.field).unwrap_or(&Value::Null),
                );
                if o.descending {
                    c.reverse()
                } else {
                    c
                }
            })
            .find(|c| *c != Ordering::Equal)
            .unwrap_or_else(|| ia.cmp(ib))
    });
    let end = q.limit.map_or(usize::MAX, |l| q.offset.saturating_add(l));
    keyed
        .into_iter()
        .enumerate()
        .filter(|(i, _)| *i >= q.offset && *i < end)
        .map(|(_, (_, _, r))| r.clone())
        .collect()
}

/// Primary-key order for text keys like "J12".
pub fn sorted_by_key<T: Clone>(rows: &[T], key: impl Fn(&T) -> String) -> Vec<T> {
    let mut out = rows.to_vec();
    out.sort_by_key(|r| key(r));
    out
}

fn rank(f: &Fixture, education_id: &str) -> Option<i32> {
    f.education_levels
        .iter()
        .find(|e| e.education_id == education_id)
        .map(|e| e.rank)
}

pub fn list_jobs(
    f: &Fixture,
    city: Option<&str>,
    education_id: Option<&str>,
    recruit_type: Option<RecruitType>,
    now: Timestamp,
) -> Vec<JobPosting> {
    let ceiling = education_id.map(|e| rank(f, e).expect("known level"));
    let mut out: Vec<JobPosting> = f
        .job_postings
        .iter()
        .filter(|p| !p.withdrawn)
        .filter(|p| p.deadline.epoch_seconds() >= now.epoch_seconds())
        .filter(|p| city.is_none_or(|c| p.city == c))
        .filter(|p| recruit_type.is_none_or(|t| p.recruit_type == t))
        .filter(|p| match ceiling {
            None => true,
            Some(c) => rank(f, &p.education_id).is_some_and(|r| r <= c),
        })
        .cloned()
        .collect();
    out.sort_by(|a, b| match b.time.cmp(&a.time) {
        Ordering::Equal => a.recruit_id.cmp(&b.recruit_id),
        o => o,
    });
    out
}

fn fold(s: &str) -> String {
    s.chars()
        .flat_map(char::to_uppercase)
        .flat_map(char::to_lowercase)
        .collect()
}

fn company_name<'a>(f: &'a Fixture, id: &str) -> &'a str {
    f.companies
        .iter()
        .find(|c| c.company_id == id)
        .map_or("", |c| c.company_name.as_str())
}

pub fn search_postings(f: &Fixture, keyword: &str, city: Option<&str>, now: Timestamp) -> Vec<JobPosting> {
    let k = fold(keyword);
    list_jobs(f, city, None, None, now)
        .into_iter()
        .filter(|p| {
            fold(&p.place).contains(&k)
                || fold(&p.city).contains(&k)
                || fold(&p.detail).contains(&k)
                || fold(company_name(f, &p.company_id)).contains(&k)
        })
        .collect()
}

/// Arrangement ids, soonest first.
pub fn list_arrangements(f: &Fixture) -> Vec<i64> {
    let mut rows: Vec<&Arrangement> = f.arrangements.iter().collect();
    rows.sort_by(|a, b| {
        a.start_time
            .epoch_seconds()
            .cmp(&b.start_time.epoch_seconds())
            .then(a.arrangement_id.cmp(&b.arrangement_id))
    });
    rows.into_iter().map(|a| a.arrangement_id).collect()
}

pub fn search_arrangements(f: &Fixture, keyword: &str) -> Vec<i64> {
    let k = fold(keyword);
    let by_id: HashMap<i64, &Arrangement> = f.arrangements.iter().map(|a| (a.arrangement_id, a)).collect();
    list_arrangements(f)
        .into_iter()
        .filter(|id| {
            let a = by_id[id];
            fold(&a.theme).contains(&k)
                || fold(&a.place).contains(&k)
                || fold(company_name(f, &a.company_id)).contains(&k)
        })
        .collect()
}

/// Resume ids for a posting: qualifying applicants, matched major first, then
/// higher rank, earlier submission, and resume id.
pub fn match_candidates(f: &Fixture, recruit_id: &str) -> Vec<String> {
    let posting = f.job_postings.iter().find(|p| p.recruit_id == recruit_id).unwrap();
    let Some(required) = rank(f, &posting.education_id) else {
        return Vec::new();
    };
    let mut hits: Vec<(u8, i32, i64, String)> = Vec::new();
    for r in f.resume_applications.iter().filter(|r| r.recruit_id == recruit_id) {
        let Some(have) = rank(f, &r.education_id) else { continue };
        if have < required {
            continue;
        }
        let major_miss = match &posting.major_id {
            Some(m) if *m == r.major_id => 0,
            _ => 1,
        };
        hits.push((major_miss, -have, r.submitted_at.epoch_seconds(), r.resume_id.clone()));
    }
    hits.sort();
    hits.into_iter().map(|h| h.3).collect()
}

pub fn registrations_of(f: &Fixture, student_id: &str) -> Vec<i64> {
    let mine: Vec<i64> = f
        .registrations
        .iter()
        .filter(|r| r.student_id == student_id)
        .map(|r| r.arrangement_id)
        .collect();
    list_arrangements(f)
        .into_iter()
        .filter(|id| mine.contains(id))
        .collect()
}

/// `(table, column, referenced table)` for every foreign key, by fixture table name.
pub const FOREIGN_KEYS: &[(&str, &str, &str)] = &[
    ("majors", "college_id", "colleges"),
    ("class_groups", "major_id", "majors"),
    ("students", "college_id", "colleges"),
    ("students", "major_id", "majors"),
    ("students", "class_id", "class_groups"),
    ("companies", "industry_id", "industries"),
    ("company_reviews", "company_id", "companies"),
    ("company_reviews", "admin_id", "administrators"),
    ("job_postings", "company_id", "companies"),
    ("job_postings", "education_id", "education_levels"),
    ("job_postings", "major_id", "majors"),
    ("resume_applications", "recruit_id", "job_postings"),
    ("resume_applications", "student_id", "students"),
    ("resume_applications", "education_id", "education_levels"),
    ("resume_applications", "major_id", "majors"),
    ("presentation_applications", "company_id", "companies"),
    ("arrangements", "application_id", "presentation_applications"),
    ("arrangements", "company_id", "companies"),
    ("registrations", "student_id", "students"),
    ("registrations", "arrangement_id", "arrangements"),
    ("notifications", "student_id", "students"),
    ("notifications", "resume_id", "resume_applications"),
];

/// Column sets that must be unique within a table.
pub const UNIQUE: &[(&str, &[&str])] = &[
    ("education_levels", &["education_name"]),
    ("education_levels", &["rank"]),
    ("industries", &["industry_name"]),
    ("company_reviews", &["company_id"]),
    ("resume_applications", &["recruit_id", "student_id"]),
    ("arrangements", &["application_id"]),
    ("registrations", &["student_id", "arrangement_id"]),
];

pub fn key_column(table: &str) -> &'static str {
    match table {
        "colleges" => "college_id",
        "majors" => "major_id",
        "class_groups" => "class_id",
        "education_levels" => "education_id",
        "industries" => "industry_id",
        "administrators" => "admin_id",
        "students" => "student_id",
        "companies" => "company_id",
        "job_postings" => "recruit_id",
        "resume_applications" => "resume_id",
        "presentation_applications" => "application_id",
        "arrangements" => "arrangement_id",
        "company_reviews" | "registrations" | "notifications" => "id",
        other => panic!("unknown table {other}"),
    }
}

fn tables(f: &Fixture) -> serde_json::Map<String, Value> {
    match serde_json::to_value(f).unwrap() {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}

fn rows<'a>(t: &'a serde_json::Map<String, Value>, table: &str) -> &'a [Value] {
    t.get(table).and_then(Value::as_array).map_or(&[], Vec::as_slice)
}

/// Every FK, uniqueness and hierarchy violation in a fixture, as text.
pub fn sweep(f: &Fixture) -> Vec<String> {
    let t = tables(f);
    let mut issues = Vec::new();
    for (table, column, target) in FOREIGN_KEYS {
        let key = key_column(target);
        for row in rows(&t, table) {
            let v = &row[*column];
            if v.is_null() {
                continue;
            }
            if !rows(&t, target).iter().any(|r| &r[key] == v) {
                issues.push(format!("{table}.{column} = {v} is dangling"));
            }
        }
    }
    for (table, columns) in UNIQUE {
        let mut seen = std::collections::HashSet::new();
        for row in rows(&t, table) {
            let k: Vec<String> = columns.iter().map(|c| row[*c].to_string()).collect();
            if !seen.insert(k.clone()) {
                issues.push(format!("{table} {columns:?} = {k:?} is duplicated"));
            }
        }
    }
    let mut pk = std::collections::HashSet::new();
    for (table, _) in t.iter() {
        for row in rows(&t, table) {
            if !pk.insert((table.clone(), row[key_column(table)].to_string())) {
                issues.push(format!("{table} key {} is duplicated", row[key_column(table)]));
            }
        }
    }
    for s in &f.students {
        let class_ok = f
            .class_groups
            .iter()
            .any(|c| c.class_id == s.class_id && c.major_id == s.major_id);
        let major_ok = f
            .majors
            .iter()
            .any(|m| m.major_id == s.major_id && m.college_id == s.college_id);
        if !(class_ok && major_ok) {
            issues.push(format!(
                "student {} is outside its class/major/college chain",
                s.student_id
            ));
        }
    }
    issues
}

/// Rows in other tables whose foreign keys point at `key` in `table`.
pub fn dependents(f: &Fixture, table: &str, key: &Value) -> Vec<(&'static str, usize)> {
    let t = tables(f);
    FOREIGN_KEYS
        .iter()
        .filter(|(_, _, target)| *target == table)
        .map(|(from, column, _)| (*from, rows(&t, from).iter().filter(|r| &r[*column] == key).count()))
        .filter(|(_, n)| *n > 0)
        .collect()
}
