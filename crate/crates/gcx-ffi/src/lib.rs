//! Placeholder; implemented in a subsequent layer.
