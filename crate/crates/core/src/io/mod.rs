//! JSON job documents, reports, and the bundled self-test.
//!
//! Exact numbers travel as strings (`"3"`, `"-1/2"`); integer JSON numbers
//! are also accepted on input. Cocharacter exponents and weights are plain
//! integer arrays.

mod corpus;
mod report;
mod request;

pub use corpus::{corpus, run_corpus, Case, CaseOutcome};
pub use report::{
    exit_code_for, run, selftest_result, JobReport, EXIT_BUDGET, EXIT_INTERNAL,
    EXIT_INVALID_INPUT, EXIT_OK,
};
pub use request::{
    parse_request, parse_request_as, request_json, serialize_request, Command, JobRequest, ParseError, Payload};

/// Enumeration cap used when a request does not set one.
pub const DEFAULT_BUDGET: u128 = 2_000_000;
