//! File formats: the JSON model document, Aldebaran `.aut`, and DOT export.

mod aut;
mod dot;
mod json;

pub use aut::{read_aut, read_aut_in, write_aut};
pub use dot::{dot_matrix, dot_partition, dot_system};
pub use json::{
    from_value, matrix_summary, partition_value, read_json, to_value, trace_table_value, write_json, write_value,
};

use crate::kernel::System;

/// A system together with its optional designated initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub system: System,
    pub initial: Option<usize>,
}

impl Model {
    pub fn new(system: System) -> Self {
        Self { system, initial: None }
    }
}
