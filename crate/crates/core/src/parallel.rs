//! Worker-count control.
//!
//! Library routines use rayon's ambient pool. Callers that want to honour
//! `MIRROR_THREADS` wrap their work in [`with_threads`]; every parallel
//! routine in this crate writes to disjoint, index-addressed slots so the
//! output does not depend on the worker count.

use std::num::NonZeroUsize;

pub const THREADS_ENV: &str = "MIRROR_THREADS";

/// Worker count requested through `MIRROR_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<NonZeroUsize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .and_then(NonZeroUsize::new)
}

/// Run `f` inside a pool of `threads` workers (one per core when `None`).
pub fn with_threads<R: Send>(threads: Option<NonZeroUsize>, f: impl FnOnce() -> R + Send) -> R {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.get());
    }
    match builder.build() {
        Ok(pool) => pool.install(f),
        // fall back to the global pool if a dedicated one cannot be spawned
        Err(_) => f(),
    }
}
