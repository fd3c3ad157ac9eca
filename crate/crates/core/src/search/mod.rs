//! Graph sources and the scan driver that runs checkers over them.

mod scan;
mod source;

use thiserror::Error;

pub use scan::{
    scan, ClassSummary, EnergyRecord, EqualityStats, FailureRecord, GraphRow, OrderSummary,
    ScanOptions, ScanReport, SourceIssue, Timing, DEFAULT_FAILURE_CAP, DEFAULT_P_GRID,
    MAX_CLASS_VIEW_ORDER,
};
pub use source::{
    boundary_family, boundary_family_range, boundary_member, enumerate_all_graphs,
    enumerate_all_graphs_range, stream_graph6, GraphSource, ItemError, SourceItem,
    BOUNDARY_MAX_ORDER, BOUNDARY_MIN_ORDER, MAX_ENUMERATION_ORDER,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("{0}")]
    Range(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{source_name}: {item}")]
    Parse {
        source_name: String,
        item: ItemError,
    },
    #[error("invalid scan options: {0}")]
    Options(String),
    #[error("cannot write report: {0}")]
    Output(String),
}

impl std::error::Error for ItemError {}
