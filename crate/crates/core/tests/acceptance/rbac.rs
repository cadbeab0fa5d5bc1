use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use axum::http::{Method, StatusCode};
use campus_recruit::api::ROUTE_TABLE;
use campus_recruit::auth::Role;
use serde_json::json;

use crate::ensure;
use crate::support::canonical_campus;
use crate::support::http::{concrete_path, Client};
use crate::Outcome;

const LIMIT: Duration = Duration::from_secs(10);

/// Who may call each route: `*` public, `A` any signed-in role, else the role letters.
const MATRIX: &str = "
POST   /api/login                         *
POST   /api/logout                        A
POST   /api/password                      A
GET    /api/students                      a
POST   /api/students                      a
GET    /api/students/{id}                 a
PATCH  /api/students/{id}                 a
DELETE /api/students/{id}                 a
POST   /api/companies                     *
GET    /api/companies                     a
POST   /api/companies/{id}/review         a
GET    /api/companies/me                  c
PATCH  /api/companies/me                  c
GET    /api/dict/{kind}                   A
POST   /api/dict/{kind}                   a
PATCH  /api/dict/{kind}/{id}              a
DELETE /api/dict/{kind}/{id}              a
GET    /api/jobs                          A
POST   /api/jobs                          c
GET    /api/jobs/mine                     c
GET    /api/jobs/{id}                     A
PATCH  /api/jobs/{id}                     c
DELETE /api/jobs/{id}                     c
POST   /api/jobs/{id}/resumes             s
GET    /api/jobs/{id}/match               c
GET    /api/resumes/mine                  s
GET    /api/resumes/received              c
GET    /api/resumes/{id}                  c
GET    /api/resumes/{id}/accessory        c
POST   /api/resumes/{id}/result           c
GET    /api/notifications                 s
POST   /api/presentations                 c
GET    /api/presentations                 a
GET    /api/presentations/mine            c
POST   /api/presentations/{id}/review     a
GET    /api/arrangements                  A
GET    /api/arrangements/mine             s
GET    /api/arrangements/{id}             A
PATCH  /api/arrangements/{id}             a
POST   /api/arrangements/{id}/register    s
GET    /api/search                        A
";

struct Row {
    method: Method,
    path: &'static str,
    public: bool,
    allowed: Vec<Role>,
}

fn matrix() -> Vec<Row> {
    MATRIX
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let cols: Vec<&'static str> = l.split_whitespace().collect();
            let who = cols[2];
            let allowed = match who {
                "*" | "A" => Role::ALL.to_vec(),
                letters => letters
                    .chars()
                    .map(|c| match c {
                        's' => Role::Student,
                        'c' => Role::Company,
                        'a' => Role::Admin,
                        other => panic!("bad matrix letter {other}"),
                    })
                    .collect(),
            };
            Row {
                method: cols[0].parse().unwrap(),
                path: cols[1],
                public: who == "*",
                allowed,
            }
        })
        .collect()
}

fn login_for(role: Role) -> (&'static str, &'static str, &'static str) {
    match role {
        Role::Student => ("Student", "S1", "S1-pass"),
        Role::Company => ("Company", "C1", "C1-pass"),
        Role::Admin => ("Admin", "A1", "A1-pass"),
    }
}

pub fn run() -> Outcome {
    let started = Instant::now();
    let rows = matrix();

    let documented: BTreeSet<(String, &str)> = rows.iter().map(|r| (r.method.to_string(), r.path)).collect();
    let served: BTreeSet<(String, &str)> = ROUTE_TABLE.iter().map(|r| (r.method.to_string(), r.path)).collect();
    ensure!(
        documented == served,
        "route table differs from the matrix: {:?}",
        documented.symmetric_difference(&served).collect::<Vec<_>>()
    );
    for r in ROUTE_TABLE {
        let row = rows
            .iter()
            .find(|m| m.method == r.method() && m.path == r.path)
            .unwrap();
        for role in Role::ALL {
            ensure!(
                r.access.allows(Some(role)) == row.allowed.contains(&role),
                "{} {} declares the wrong access for {role}",
                r.method,
                r.path
            );
        }
    }

    let runtime = tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .unwrap();
    let (role_checks, anonymous_checks) = runtime.block_on(async {
        let mut role_checks = 0;
        for row in &rows {
            for role in Role::ALL {
                let client = Client::new(canonical_campus().0);
                let (r, id, pw) = login_for(role);
                let token = client.login(r, id, pw).await;
                let path = concrete_path(row.path, Some(role));
                let body = matches!(row.method, Method::POST | Method::PATCH).then(|| json!({}));
                let reply = client.call(row.method.clone(), &path, Some(&token), body).await;
                let code = reply.code().unwrap_or_default();
                if row.allowed.contains(&role) {
                    ensure!(
                        reply.status != StatusCode::UNAUTHORIZED && code != "FORBIDDEN" && code != "ROUTE_NOT_FOUND",
                        "{} {path} as {role} should be allowed, got {} {code}",
                        row.method,
                        reply.status
                    );
                } else {
                    ensure!(
                        reply.status == StatusCode::FORBIDDEN && code == "FORBIDDEN",
                        "{} {path} as {role} should be forbidden, got {} {code}",
                        row.method,
                        reply.status
                    );
                }
                role_checks += 1;
            }
        }
        let client = Client::new(canonical_campus().0);
        let mut anonymous_checks = 0;
        for row in &rows {
            let path = concrete_path(row.path, None);
            let body = matches!(row.method, Method::POST | Method::PATCH).then(|| json!({}));
            let reply = client.call(row.method.clone(), &path, None, body).await;
            let code = reply.code().unwrap_or_default();
            if row.public {
                ensure!(
                    reply.status != StatusCode::UNAUTHORIZED,
                    "{} {path} is public but answered 401",
                    row.method
                );
            } else {
                ensure!(
                    reply.status == StatusCode::UNAUTHORIZED && code == "UNAUTHORIZED",
                    "{} {path} without a session gave {} {code}",
                    row.method,
                    reply.status
                );
            }
            anonymous_checks += 1;
        }
        Ok::<_, String>((role_checks, anonymous_checks))
    })?;

    let elapsed = started.elapsed();
    ensure!(elapsed < LIMIT, "took {elapsed:?}, limit {LIMIT:?}");
    Ok(format!(
        "{} routes, {role_checks} role checks + {anonymous_checks} anonymous checks in {:.2}s (limit {}s)",
        rows.len(),
        elapsed.as_secs_f64(),
        LIMIT.as_secs()
    ))
}
