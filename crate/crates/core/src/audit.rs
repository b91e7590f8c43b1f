//! Process-wide switch for expensive self-checks.
//!
//! With auditing on, operations re-verify their postconditions through the
//! oracle (full span containment, deadlock recomputation by peeling, witness
//! replay) and report [`crate::Error::Internal`] on mismatch.

use std::sync::atomic::{AtomicBool, Ordering};

static AUDIT: AtomicBool = AtomicBool::new(false);

pub fn set_enabled(on: bool) {
    AUDIT.store(on, Ordering::Relaxed);
}

pub fn enabled() -> bool {
    AUDIT.load(Ordering::Relaxed) || cfg!(debug_assertions)
}
