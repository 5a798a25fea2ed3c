//! Approximation ratios, worst-case search, strategy-proofness testing and
//! golden checks of the known ratio constants.

mod ledger;
mod ratio;
mod search;
pub mod seeds;
mod strategy;
mod table;

pub use ledger::{theorem_ledger, LedgerRow, GOLDEN_TOL};
pub use ratio::{approximation_ratio, ratio_of, Provenance, RatioFinding};
pub use search::{worst_case_search, SearchConfig, SearchOutcome, TraceEntry};
pub use strategy::{check_misreport, strategy_proofness_test, ManipulationWitness, SpTestConfig};
pub use table::{reproduce_table1, table1_markdown, Cell, CellStatus, Table1Row};
