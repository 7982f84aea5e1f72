//! Search harness and file formats for the `semicover` command-line tool.

pub mod campaign;
pub mod partition_arg;
pub mod report;
pub mod table_file;

/// Process exit statuses.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const INPUT_ERROR: u8 = 1;
    /// A checked property failed; at finite order this contradicts a proven
    /// bound and needs investigation.
    pub const VIOLATION: u8 = 2;
    pub const NOT_APPLICABLE: u8 = 3;
}
