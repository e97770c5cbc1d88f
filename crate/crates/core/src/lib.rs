//! Exact counts and asymptotic estimates for magic, bimagic and trimagic series.

pub mod precise;
pub mod problem_model;
pub mod series_calculus;
pub mod diagram_engine;
pub mod exact_enum;
pub mod asymptotics;
pub mod cli_report;
