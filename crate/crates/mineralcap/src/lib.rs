// Pack contents such as 6.28 kg are dataset values, not rounded math
// constants.
#![allow(clippy::approx_constant)]

//! Mineral-constrained EV deployment model.
//!
//! The library answers three linked questions for the 2022-2032 US
//! light-duty market:
//!
//! 1. How many EVs must be sold each year for the fleet-average tailpipe
//!    target to hold ([`scenarios`])?
//! 2. How many battery packs can domestic-plus-allied mineral supply
//!    actually sustain, by chemistry, mix, or joint allocation
//!    ([`supply`], [`capacity`])?
//! 3. What do the missing vehicles cost in lifecycle CO2e, and what would
//!    close the gap: more mineral production, smaller packs, heavier
//!    fleets, or HEV substitution ([`emissions`], [`pathways`])?
//!
//! [`report`] assembles the standard result tables, and the `mineralcap`
//! binary exposes the same pipelines as subcommands. Each major capability
//! also has a runnable example under `examples/`.

pub mod capacity;
pub mod chemistry;
pub mod data;
pub mod emissions;
pub mod error;
pub mod minerals;
pub mod model;
pub mod pathways;
pub mod report;
pub mod scenarios;
pub mod simplex;
pub mod supply;

pub use error::{Error, Result};
