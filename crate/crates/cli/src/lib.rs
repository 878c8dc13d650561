//! File formats and the parameter sweep behind the `lexworld` binary.

pub mod output;
pub mod scan;
