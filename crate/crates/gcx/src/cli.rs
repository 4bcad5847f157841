//! Placeholder; implemented in a subsequent layer.

/// Entry point for the command-line interface; returns the process exit code.
pub fn run() -> i32 {
    0
}
