//! Text formats: tree documents, JSON reports and DOT export.

pub mod dot;
pub mod format;
pub mod report;

pub use dot::emit_dot;
pub use format::{parse_tree, serialize_tree, HEADER};
pub use report::AnalysisReport;
