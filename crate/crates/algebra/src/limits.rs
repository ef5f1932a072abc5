use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::error::LimitKind;

/// Cooperative cancellation flag shared with long computations.
#[derive(Clone, Debug, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

/// Bounds on Groebner computations. A computation exceeding any bound is
/// abandoned with its partial basis.
#[derive(Clone, Debug)]
pub struct ResourceLimits {
    pub max_degree: u32,
    pub max_basis: usize,
    pub time_budget: Duration,
    pub cancel: CancelToken,
}

impl Default for ResourceLimits {
    fn default() -> Self {
        ResourceLimits {
            max_degree: 24,
            max_basis: 20_000,
            time_budget: Duration::from_secs(600),
            cancel: CancelToken::new(),
        }
    }
}

impl ResourceLimits {
    pub fn unlimited_degree(mut self) -> Self {
        self.max_degree = u32::MAX;
        self
    }

    pub(crate) fn start(&self) -> Deadline<'_> {
        Deadline { limits: self, start: Instant::now() }
    }
}

pub(crate) struct Deadline<'a> {
    pub limits: &'a ResourceLimits,
    start: Instant,
}

impl Deadline<'_> {
    pub fn check(&self) -> Result<(), LimitKind> {
        if self.limits.cancel.is_cancelled() {
            return Err(LimitKind::Cancelled);
        }
        if self.start.elapsed() > self.limits.time_budget {
            return Err(LimitKind::Time);
        }
        Ok(())
    }
}
