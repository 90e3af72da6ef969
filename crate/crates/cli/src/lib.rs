//! Figure data and CSV output for the `indist` command.

pub mod figures;
pub mod table;

pub use table::{fmt_num, Table};
