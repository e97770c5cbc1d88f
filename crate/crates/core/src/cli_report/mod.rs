//! Command-line front end, table fixtures and estimate-vs-exact reports.

mod cli;
mod fixtures;
mod report;
mod verify;

pub use cli::cli_main;
pub use fixtures::{
    builtin_fixtures, load_fixtures, parse_fixtures, ExactValue, Fixture, FixtureError, LoadedFixtures,
    BUILTIN_FIXTURES,
};
pub use report::{build_report, emit, parse_report, EmitError, Format, ReportConfig, ReportRow};
pub use verify::{run_verify, CHECKS};
