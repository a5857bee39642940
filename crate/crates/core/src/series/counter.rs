//! Scoped tally of series multiplications.

use std::cell::RefCell;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

thread_local! {
    static ACTIVE: RefCell<Vec<Arc<AtomicU64>>> = const { RefCell::new(Vec::new()) };
}

/// Counts calls to [`ps_mul`](super::ps_mul) made inside [`MultCounter::scope`].
/// Scopes nest; an inner multiplication is charged to every enclosing scope.
#[derive(Clone, Debug, Default)]
pub struct MultCounter {
    count: Arc<AtomicU64>,
}

impl MultCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }

    pub fn scope<R>(&self, f: impl FnOnce() -> R) -> R {
        struct Pop;
        impl Drop for Pop {
            fn drop(&mut self) {
                ACTIVE.with(|a| {
                    a.borrow_mut().pop();
                });
            }
        }
        ACTIVE.with(|a| a.borrow_mut().push(self.count.clone()));
        let _pop = Pop;
        f()
    }
}

/// Runs `f` and returns its result with the number of multiplications it made.
pub fn counted<R>(f: impl FnOnce() -> R) -> (R, u64) {
    let c = MultCounter::new();
    let r = c.scope(f);
    (r, c.count())
}

pub(crate) fn bump() {
    ACTIVE.with(|a| {
        for c in a.borrow().iter() {
            c.fetch_add(1, Ordering::Relaxed);
        }
    });
}
