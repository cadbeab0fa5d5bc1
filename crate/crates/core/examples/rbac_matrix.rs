//! Prints which roles may call each HTTP route.

use campus_recruit::api::ROUTE_TABLE;
use campus_recruit::auth::Role;

fn main() {
    println!(
        "{:<7} {:<34} {:^7} {:^7} {:^7}",
        "method", "path", "student", "company", "admin"
    );
    for r in ROUTE_TABLE {
        let mark = |role| if r.access.allows(Some(role)) { "yes" } else { "-" };
        println!(
            "{:<7} {:<34} {:^7} {:^7} {:^7}",
            r.method,
            r.path,
            mark(Role::Student),
            mark(Role::Company),
            mark(Role::Admin)
        );
    }
    let public: Vec<_> = ROUTE_TABLE
        .iter()
        .filter(|r| r.access.allows(None))
        .map(|r| r.path)
        .collect();
    println!("\nno session needed: {public:?}");
}
