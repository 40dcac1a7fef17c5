//! Acceptance checks for the workspace; see `tests/acceptance.rs`.
//!
//! Run with `cargo test -p timeslice-verify --test acceptance`.
