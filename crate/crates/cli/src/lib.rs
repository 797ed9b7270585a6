//! Command-line verifier: structure documents, suites and defect reports.

pub mod document;
pub mod report;
pub mod suite;

pub use document::{load_builtin, load_document, parse_document, DocumentError};
pub use report::{emit_report, CheckRecord, DefectReport, Format, Status};
pub use suite::{run_suite, Config, SuiteError, SUITES};
