//! Shared test scaffolding: campus builders, a random consistent fixture generator,
//! brute-force reference implementations, and an in-process HTTP client.

#![allow(dead_code)]

pub mod oracle;

use std::sync::Arc;

use campus_recruit::auth::HashCost;
use campus_recruit::clock::ManualClock;
use campus_recruit::model::Timestamp;
use campus_recruit::store::Fixture;
use campus_recruit::Campus;

pub const NOW: &str = "2026-10-14T09:30:00Z";

pub fn now() -> Timestamp {
    NOW.parse().unwrap()
}

pub fn campus_with(fixture: &Fixture) -> (Campus, Arc<ManualClock>) {
    let clock = ManualClock::new(now());
    let campus = Campus::builder()
        .clock(clock.clone())
        .hash_cost(HashCost::fast())
        .fixture(fixture.clone())
        .build();
    (campus, clock)
}

pub fn canonical_campus() -> (Campus, Arc<ManualClock>) {
    campus_with(&Fixture::canonical())
}
