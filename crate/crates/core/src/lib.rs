//! Equitable, strategy-proof facility location on the unit interval.
//!
//! Agents report locations in `[0, 1]`; a mechanism places one or two
//! facilities (or a lottery over placements); an agent's utility is one
//! minus its distance to the nearest facility. The crate provides:
//!
//! * [`model`]: profiles, placements, lotteries and numeric policy.
//! * [`objectives`]: Gini of distances and utilities, the complemented Gini
//!   index, Nash welfare, max distance, and expectations over lotteries.
//! * [`mechanisms`]: Leftmost, Median, MidOrNearest, phantom medians,
//!   EndPoint, EndPoint-gamma, LRM, and an optimal (manipulable) reference.
//! * [`oracle`]: optimal objective values over all placements.
//! * [`analysis`]: approximation ratios, worst-case search,
//!   strategy-proofness testing, and golden checks of the known constants.

pub mod analysis;
pub mod error;
pub mod mechanisms;
pub mod model;
pub mod objectives;
pub mod oracle;

pub use error::{Error, Result};
pub use mechanisms::{MechanismSpec, Outcome};
pub use model::{distances, utilities, Lottery, NumericPolicy, Placement, Profile};
pub use objectives::{Objective, ObjectiveReport};
pub use oracle::{OracleMethod, OracleResult};
