use campus_recruit::model::*;
use campus_recruit::store::{Entity, Fixture, Key, Store, StoreError};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde_json::{json, Map, Value};

use crate::ensure;
use crate::support::gen::random_fixture;
use crate::support::oracle::{self, key_column, FOREIGN_KEYS, UNIQUE};
use crate::Outcome;

const SEQUENCES: u64 = 500;
const MAX_OPS: usize = 20;
const TABLES: [&str; 15] = [
    "colleges",
    "majors",
    "class_groups",
    "education_levels",
    "industries",
    "administrators",
    "students",
    "companies",
    "company_reviews",
    "job_postings",
    "resume_applications",
    "presentation_applications",
    "arrangements",
    "registrations",
    "notifications",
];

macro_rules! with_entity {
    ($table:expr, $T:ident => $body:expr) => {
        match $table {
            "colleges" => {
                type $T = College;
                $body
            }
            "majors" => {
                type $T = Major;
                $body
            }
            "class_groups" => {
                type $T = ClassGroup;
                $body
            }
            "education_levels" => {
                type $T = EducationLevel;
                $body
            }
            "industries" => {
                type $T = Industry;
                $body
            }
            "administrators" => {
                type $T = Administrator;
                $body
            }
            "students" => {
                type $T = Student;
                $body
            }
            "companies" => {
                type $T = Company;
                $body
            }
            "company_reviews" => {
                type $T = CompanyReview;
                $body
            }
            "job_postings" => {
                type $T = JobPosting;
                $body
            }
            "resume_applications" => {
                type $T = ResumeApplication;
                $body
            }
            "presentation_applications" => {
                type $T = PresentationApplication;
                $body
            }
            "arrangements" => {
                type $T = Arrangement;
                $body
            }
            "registrations" => {
                type $T = Registration;
                $body
            }
            "notifications" => {
                type $T = Notification;
                $body
            }
            other => unreachable!("{other}"),
        }
    };
}

fn as_key(v: &Value) -> Key {
    match v {
        Value::Number(n) => Key::Int(n.as_i64().unwrap()),
        Value::String(s) => Key::Text(s.clone()),
        other => panic!("not a key: {other}"),
    }
}

fn snapshot(store: &Store) -> Map<String, Value> {
    match serde_json::to_value(store.export()).unwrap() {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}

fn rows<'a>(t: &'a Map<String, Value>, table: &str) -> &'a [Value] {
    t.get(table).and_then(Value::as_array).map_or(&[], Vec::as_slice)
}

fn insert(store: &Store, table: &str, row: Value) -> Result<(), StoreError> {
    with_entity!(table, T => {
        let row: T = serde_json::from_value(row).expect("mutated row keeps its shape");
        store.write(|tx| tx.insert(row)).map(|_| ())
    })
}

fn update(store: &Store, table: &str, row: Value) -> Result<(), StoreError> {
    with_entity!(table, T => {
        let row: T = serde_json::from_value(row).expect("mutated row keeps its shape");
        store.write(|tx| tx.update(row)).map(|_| ())
    })
}

fn delete(store: &Store, table: &str, key: Key) -> Result<usize, StoreError> {
    with_entity!(table, T => store.write(|tx| tx.delete::<T>(key)))
}

fn generated(table: &str) -> Option<Value> {
    with_entity!(table, T => match T::KEY_POLICY {
        campus_recruit::store::KeyPolicy::GeneratedInt => Some(json!(0)),
        campus_recruit::store::KeyPolicy::GeneratedText(_) => Some(json!("")),
        campus_recruit::store::KeyPolicy::Supplied => None,
    })
}

/// Points a foreign key at a random row of its target, or at nothing; or copies
/// another row's unique columns.
fn perturb(rng: &mut StdRng, t: &Map<String, Value>, table: &str, row: &mut Value) {
    let fks: Vec<_> = FOREIGN_KEYS.iter().filter(|(from, _, _)| *from == table).collect();
    let uniques: Vec<_> = UNIQUE.iter().filter(|(u, _)| *u == table).collect();
    if !uniques.is_empty() && rng.gen_bool(0.25) {
        let (_, columns) = uniques.choose(rng).unwrap();
        if let Some(other) = rows(t, table).choose(rng) {
            for c in *columns {
                row[*c] = other[*c].clone();
            }
        }
        return;
    }
    let Some((_, column, target)) = fks.choose(rng) else {
        return;
    };
    let kc = key_column(target);
    row[*column] = match rows(t, target).choose(rng) {
        Some(r) if rng.gen_bool(0.7) => r[kc].clone(),
        _ if kc == "arrangement_id" => json!(999_999),
        _ => json!("GHOST"),
    };
}

#[derive(Default)]
struct Tally {
    ops: usize,
    refused_deletes: usize,
    deletes: usize,
    rejected_writes: usize,
    writes: usize,
}

fn sequence(seed: u64, tally: &mut Tally) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
    let budget = rng.gen_range(40..=250);
    let store = Store::in_memory();
    store
        .seed(&random_fixture(&mut rng, budget))
        .map_err(|e| e.to_string())?;
    let ops = rng.gen_range(1..=MAX_OPS);
    for n in 0..ops {
        tally.ops += 1;
        let before = snapshot(&store);
        let table = *TABLES.choose(&mut rng).unwrap();
        let existing = rows(&before, table);
        let kc = key_column(table);
        match rng.gen_range(0..3) {
            0 => {
                let Some(victim) = existing.choose(&mut rng) else {
                    continue;
                };
                let key = victim[kc].clone();
                let mut blocking = oracle::dependents(
                    &Fixture::from_json(&Value::Object(before.clone()).to_string()).unwrap(),
                    table,
                    &key,
                );
                if table == "arrangements" {
                    blocking.retain(|(from, _)| *from != "registrations");
                }
                let got = delete(&store, table, as_key(&key));
                let after = snapshot(&store);
                tally.deletes += 1;
                if blocking.is_empty() {
                    ensure!(
                        got == Ok(1),
                        "seed {seed}: delete {table} {key} with no dependents gave {got:?}"
                    );
                    ensure!(
                        !rows(&after, table).iter().any(|r| r[kc] == key),
                        "seed {seed}: {table} {key} survived delete"
                    );
                    if table == "arrangements" {
                        ensure!(
                            !rows(&after, "registrations").iter().any(|r| r["arrangement_id"] == key),
                            "seed {seed}: registrations of arrangement {key} were not removed"
                        );
                    }
                } else {
                    tally.refused_deletes += 1;
                    ensure!(
                        matches!(got, Err(StoreError::RestrictViolation { .. })),
                        "seed {seed}: delete {table} {key} with dependents {blocking:?} gave {got:?}"
                    );
                    ensure!(
                        after == before,
                        "seed {seed}: refused delete of {table} {key} changed the store"
                    );
                }
            }
            op => {
                let Some(source) = existing.choose(&mut rng) else {
                    continue;
                };
                let mut row = source.clone();
                perturb(&mut rng, &before, table, &mut row);
                let mut predicted = before.clone();
                let list = predicted.get_mut(table).unwrap().as_array_mut().unwrap();
                let got = if op == 1 {
                    let placeholder = match &row[kc] {
                        Value::Number(_) => json!(10_000_000 + n),
                        _ => json!(format!("NEW{n}")),
                    };
                    row[kc] = placeholder.clone();
                    list.push(row.clone());
                    if let Some(unset) = generated(table) {
                        row[kc] = unset;
                    }
                    insert(&store, table, row)
                } else {
                    let at = list.iter().position(|r| r[kc] == row[kc]).unwrap();
                    list[at] = row.clone();
                    update(&store, table, row)
                };
                let predicted = Fixture::from_json(&Value::Object(predicted).to_string()).unwrap();
                let broken = oracle::sweep(&predicted);
                tally.writes += 1;
                if got.is_err() {
                    tally.rejected_writes += 1;
                    ensure!(
                        snapshot(&store) == before,
                        "seed {seed}: rejected write to {table} changed the store"
                    );
                } else {
                    ensure!(
                        broken.is_empty(),
                        "seed {seed}: write to {table} accepted despite {broken:?}"
                    );
                }
            }
        }
        let issues = store.integrity_issues();
        ensure!(issues.is_empty(), "seed {seed} op {n}: store sweep found {issues:?}");
        let independent = oracle::sweep(&store.export());
        ensure!(
            independent.is_empty(),
            "seed {seed} op {n}: independent sweep found {independent:?}"
        );
    }
    Ok(())
}

pub fn run() -> Outcome {
    let mut tally = Tally::default();
    for seed in 0..SEQUENCES {
        sequence(seed, &mut tally)?;
    }
    ensure!(
        tally.refused_deletes > 0,
        "no sequence ever exercised a restricted delete"
    );
    Ok(format!(
        "{SEQUENCES} sequences, {} ops: {} deletes ({} refused by restrict), {} writes ({} rejected); both sweeps clean after every op",
        tally.ops, tally.deletes, tally.refused_deletes, tally.writes, tally.rejected_writes
    ))
}
