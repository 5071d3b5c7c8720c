// negated float comparisons are how NaN inputs get rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod io;
pub mod optimize;
pub mod radius;
pub mod reps;
pub mod shift;
pub mod specialfn;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
