#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod code_construction;
pub mod error;
pub mod format;
pub mod gk_states;
pub mod graph_verify;
pub mod hilbert;
pub mod jc_spectrum;

pub use error::{Error, Result};
