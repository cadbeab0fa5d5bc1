use campus_recruit::auth::{Principal, Role};
use campus_recruit::model::*;
use campus_recruit::recruitment::{JobFilter, Page};
use campus_recruit::search::{SearchQuery, SearchResults};
use campus_recruit::store::{Entity, Fixture, Op, OrderBy, Predicate, Query};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::ensure;
use crate::support::gen::{keyword, random_fixture, row_count, CITIES};
use crate::support::{campus_with, now, oracle};
use crate::Outcome;

const FIXTURES: u64 = 200;
const MAX_ROWS: usize = 1_000;
const PROBES: usize = 12;
const OPS: [Op; 7] = [Op::Eq, Op::Ne, Op::Lt, Op::Le, Op::Gt, Op::Ge, Op::Contains];

fn probe_value(rng: &mut StdRng, rows: &[Value], field: &str, op: Op) -> Value {
    let sample = rows
        .choose(rng)
        .and_then(|r| r.get(field))
        .cloned()
        .unwrap_or(Value::Null);
    match rng.gen_range(0..10) {
        0 => json!(rng.gen_range(-5..50_000)),
        1 => json!("J1"),
        2 => Value::Null,
        _ => match (op, &sample) {
            (Op::Contains, Value::String(s)) => {
                let chars: Vec<char> = s.chars().collect();
                let a = rng.gen_range(0..=chars.len());
                let b = rng.gen_range(a..=chars.len().min(a + 4));
                Value::String(chars[a..b].iter().collect())
            }
            _ => sample,
        },
    }
}

fn random_query<T: Entity>(rng: &mut StdRng, rows: &[T]) -> Query {
    let values: Vec<Value> = rows.iter().map(|r| serde_json::to_value(r).unwrap()).collect();
    let mut q = Query::new();
    for _ in 0..rng.gen_range(0..3) {
        let field = *T::FIELDS.choose(rng).unwrap();
        let op = *OPS.choose(rng).unwrap();
        let value = probe_value(rng, &values, field, op);
        q.filter.push(Predicate {
            field: field.into(),
            op,
            value,
        });
    }
    for _ in 0..rng.gen_range(0..3) {
        q.order.push(OrderBy {
            field: (*T::FIELDS.choose(rng).unwrap()).into(),
            descending: rng.gen_bool(0.5),
        });
    }
    if rng.gen_bool(0.3) {
        q.offset = rng.gen_range(0..20);
    }
    if rng.gen_bool(0.4) {
        q.limit = Some(rng.gen_range(0..30));
    }
    q
}

fn check_query<T: Entity>(rng: &mut StdRng, campus: &campus_recruit::Campus, rows: &[T]) -> Result<(), String> {
    let by_key = oracle::sorted_by_key(rows, |r| match r.key() {
        campus_recruit::store::Key::Text(s) => s,
        campus_recruit::store::Key::Int(n) => format!("{n:020}"),
    });
    for _ in 0..PROBES {
        let q = random_query(rng, &by_key);
        let got: Vec<T> = campus.store().query(&q).map_err(|e| format!("{q:?}: {e}"))?;
        let want = oracle::query(&by_key, &q);
        ensure!(
            got == want,
            "{} query {q:?}: {} rows vs oracle {}",
            T::KIND,
            got.len(),
            want.len()
        );
    }
    Ok(())
}

fn ids(postings: &[JobPosting]) -> Vec<String> {
    postings.iter().map(|p| p.recruit_id.clone()).collect()
}

fn one_fixture(seed: u64) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let budget = rng.gen_range(20..=MAX_ROWS);
    let f: Fixture = random_fixture(&mut rng, budget);
    let rows = row_count(&f);
    ensure!(rows <= MAX_ROWS, "fixture {seed} has {rows} rows");
    let (campus, _) = campus_with(&f);
    let viewer = Principal::new(Role::Admin, "A1");

    check_query(&mut rng, &campus, &f.job_postings)?;
    check_query(&mut rng, &campus, &f.resume_applications)?;
    check_query(&mut rng, &campus, &f.students)?;

    let rec = campus.recruitment();
    for _ in 0..PROBES {
        let city = rng.gen_bool(0.5).then(|| CITIES.choose(&mut rng).unwrap().to_string());
        let education_id = rng
            .gen_bool(0.5)
            .then(|| f.education_levels.choose(&mut rng).unwrap().education_id.clone());
        let recruit_type = match rng.gen_range(0..3) {
            0 => Some(RecruitType::FullTime),
            1 => Some(RecruitType::Internship),
            _ => None,
        };
        let filter = JobFilter {
            city: city.clone(),
            education_id: education_id.clone(),
            recruit_type,
        };
        let want = oracle::list_jobs(&f, city.as_deref(), education_id.as_deref(), recruit_type, now());
        let got = rec.list_jobs(&filter, Page::all()).map_err(|e| e.to_string())?;
        ensure!(
            ids(&got) == ids(&want),
            "fixture {seed} list_jobs {filter:?}: {:?} vs {:?}",
            ids(&got),
            ids(&want)
        );
        let (offset, limit) = (rng.gen_range(0..10), rng.gen_range(1..10));
        let paged = rec
            .list_jobs(&filter, Page::new(offset, limit))
            .map_err(|e| e.to_string())?;
        let want_page: Vec<String> = ids(&want).into_iter().skip(offset).take(limit).collect();
        ensure!(
            ids(&paged) == want_page,
            "fixture {seed} list_jobs page {offset}+{limit}"
        );
    }

    let mut corpus: Vec<String> = Vec::new();
    for p in &f.job_postings {
        corpus.extend([p.place.clone(), p.city.clone(), p.detail.clone()]);
    }
    for c in &f.companies {
        corpus.push(c.company_name.clone());
    }
    for a in &f.arrangements {
        corpus.extend([a.theme.clone(), a.place.clone()]);
    }
    let search = campus.search();
    for _ in 0..PROBES {
        let kw = keyword(&mut rng, &corpus);
        let city = rng.gen_bool(0.3).then(|| CITIES.choose(&mut rng).unwrap().to_string());
        let mut q = SearchQuery::new("Recruit", &kw);
        q.city = city.clone();
        let Ok(SearchResults::Recruit(got)) = search.search(&viewer, &q) else {
            return Err(format!("fixture {seed} search Recruit {kw:?} failed"));
        };
        let want = oracle::search_postings(&f, &kw, city.as_deref(), now());
        ensure!(
            ids(&got) == ids(&want),
            "fixture {seed} search Recruit {kw:?} city {city:?}: {:?} vs {:?}",
            ids(&got),
            ids(&want)
        );

        let Ok(SearchResults::Application(got)) = search.search(&viewer, &SearchQuery::new("Application", &kw)) else {
            return Err(format!("fixture {seed} search Application {kw:?} failed"));
        };
        let got: Vec<i64> = got.iter().map(|l| l.arrangement.arrangement_id).collect();
        let want = oracle::search_arrangements(&f, &kw);
        ensure!(
            got == want,
            "fixture {seed} search Application {kw:?}: {got:?} vs {want:?}"
        );
    }

    for p in &f.job_postings {
        let owner = Principal::new(Role::Company, &p.company_id);
        let got: Vec<String> = rec
            .match_candidates(&owner, &p.recruit_id)
            .map_err(|e| format!("match {}: {e}", p.recruit_id))?
            .into_iter()
            .map(|r| r.resume_id)
            .collect();
        let want = oracle::match_candidates(&f, &p.recruit_id);
        ensure!(
            got == want,
            "fixture {seed} match {}: {got:?} vs {want:?}",
            p.recruit_id
        );
    }

    let listed: Vec<i64> = campus
        .presentations()
        .list_arrangements()
        .iter()
        .map(|l| l.arrangement.arrangement_id)
        .collect();
    ensure!(
        listed == oracle::list_arrangements(&f),
        "fixture {seed} arrangement listing order"
    );
    for s in f.students.iter().take(5) {
        let got: Vec<i64> = campus
            .presentations()
            .list_my_registrations(&Principal::new(Role::Student, &s.student_id))
            .map_err(|e| e.to_string())?
            .iter()
            .map(|l| l.arrangement.arrangement_id)
            .collect();
        ensure!(
            got == oracle::registrations_of(&f, &s.student_id),
            "fixture {seed} registrations of {}",
            s.student_id
        );
    }
    Ok(rows)
}

pub fn run() -> Outcome {
    let mut largest = 0;
    let mut total = 0;
    for seed in 0..FIXTURES {
        let rows = one_fixture(seed)?;
        largest = largest.max(rows);
        total += rows;
    }
    Ok(format!(
        "{FIXTURES} fixtures ({total} rows, largest {largest} of max {MAX_ROWS}): query, list_jobs, search, match_candidates all equal the scan oracle"
    ))
}
