//! Command implementations behind the `massey` binary. Each command returns
//! a [`Report`] whose status fixes the process exit code.

pub mod commands;
pub mod json;
pub mod report;

pub use commands::{load_input, FixedArgs, Input};
pub use report::{Report, Status};
