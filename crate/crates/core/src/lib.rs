//! Forward procurement of polytopic resources covering an uncertain demand
//! set, under oracle and causal allocation.
//!
//! The crate solves every formulation with its own dense simplex ([`lp`]).
//! [`polytope`] holds the set representations and builders, [`procurement`]
//! the cost LPs and bounds, [`causal`] scenario-tree feasibility and dispatch
//! policies, [`costalloc`] the cost-sharing rule, and [`demandset`] the
//! data-driven demand sets. [`cli`] backs the `causal-procure` binary.

pub mod causal;
pub mod cli;
pub mod costalloc;
pub mod demandset;
pub mod error;
pub mod lp;
pub mod polytope;
pub mod procurement;

pub use error::{Error, Result};
