//! Inversion sequences avoiding consecutive patterns: enumeration,
//! closed recurrences, bijections, and Wilf-equivalence classification.

pub mod enumerate;
pub mod equivalence;
pub mod error;
pub mod permgate;
pub mod recurrences;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use word::{ConsecutivePattern, InversionSequence, PositionSet};
