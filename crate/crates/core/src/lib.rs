//! Campus recruitment management: an academic directory, job postings and
//! resume tracking, presentation scheduling with registration, unified search,
//! and an HTTP API over a transactional store.

pub mod api;
pub mod auth;
pub mod campus;
pub mod clock;
pub mod config;
pub mod directory;
pub mod error;
pub mod model;
pub mod presentations;
pub mod recruitment;
pub mod search;
pub mod store;

pub use campus::Campus;
pub use error::{Error, ErrorCode, Result};
