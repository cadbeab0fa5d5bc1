//! Login per role, session expiry, and password change.

use campus_recruit::auth::{Credentials, HashCost, Role, RoleRequirement};
use campus_recruit::clock::ManualClock;
use campus_recruit::store::Fixture;
use campus_recruit::Campus;

fn main() -> campus_recruit::Result<()> {
    let clock = ManualClock::new("2026-10-14T09:00:00Z".parse().unwrap());
    let campus = Campus::builder()
        .clock(clock.clone())
        .hash_cost(HashCost::fast())
        .session_ttl_minutes(30)
        .fixture(Fixture::canonical())
        .build();
    let auth = campus.auth();

    let session = auth.login(Role::Student, &Credentials::new("S1", "S1-pass"))?;
    println!("{} logged in until {}", session.principal_id, session.expires_at);

    for role in Role::ALL {
        let outcome = auth.authorize(Some(&session.token), &RoleRequirement::only(role));
        println!(
            "as {role}: {}",
            outcome
                .map(|_| "ok".to_string())
                .unwrap_or_else(|e| e.code().as_str().into())
        );
    }

    // The same id under another role is a different account.
    let wrong_table = auth.login(Role::Admin, &Credentials::new("S1", "S1-pass"));
    println!("S1 as admin: {}", wrong_table.unwrap_err().code().as_str());
    let pending = auth.login(Role::Company, &Credentials::new("C3", "C3-pass"));
    println!("pending company: {}", pending.unwrap_err().code().as_str());

    let changed = auth.change_password(&session.token, "S1-pass", "n3w-secret", "n3w-secret")?;
    println!("password change: {changed:?}");

    clock.advance_minutes(31);
    let expired = auth.authorize(Some(&session.token), &RoleRequirement::any());
    println!("after 31 minutes: {}", expired.unwrap_err().code().as_str());
    auth.login(Role::Student, &Credentials::new("S1", "n3w-secret"))?;
    println!("new password accepted");
    Ok(())
}
