//! Check registry, scan harness and extremal search.

pub mod checks;
pub mod scan;
pub mod search;

pub use checks::{default_suite, parse_check_list, split_list, evaluate, run_check, CheckResult, CheckSpec, Params, Verdict, DEFAULT_SUITE};
pub use scan::{rows_to_csv, rows_to_json, run_scan, run_scan_with, write_atomic, ScanConfig, ScanRow};
pub use search::{search_extremal, Objective, SearchResult};
