//! Bounded memory and expectation formation for the exogenous factor.
//!
//! Both contracting parties store the environment values they observed (the
//! agent) or estimated (the principal), one per elapsed period, and form
//! their expectation as the arithmetic mean of the most recent entries their
//! memory can still reach. Raw values are stored and the mean is recomputed
//! on every read, so the windowed and unbounded cases share one code path.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::numeric::compensated_mean;

/// How many past periods a party can retrieve when forming an expectation.
///
/// Unbounded memory is represented distinctly rather than as "horizon minus
/// one": for a T-period run the two are observationally identical, but the
/// buffer itself does not know the horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MemorySpan {
    /// Retrieval window of the given number of periods (positive).
    Finite(u32),
    /// All history is retrievable.
    Unbounded,
}

impl MemorySpan {
    /// Length of the readable window given the number of stored entries.
    pub fn window_len(self, stored: usize) -> usize {
        match self {
            MemorySpan::Finite(m) => stored.min(m as usize),
            MemorySpan::Unbounded => stored,
        }
    }
}

impl fmt::Display for MemorySpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MemorySpan::Finite(m) => write!(f, "{m}"),
            MemorySpan::Unbounded => write!(f, "inf"),
        }
    }
}

impl FromStr for MemorySpan {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" => Ok(MemorySpan::Unbounded),
            other => {
                let m: u32 = other
                    .parse()
                    .map_err(|_| format!("memory must be a positive integer or `inf`, got `{other}`"))?;
                if m == 0 {
                    return Err("memory must be positive".to_string());
                }
                Ok(MemorySpan::Finite(m))
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MemoryError {
    /// An expectation was requested before any value was stored (period 1).
    #[error("no stored history to form an expectation from")]
    NoHistory,
}

/// Ordered store of past environment values with retrieval-window semantics.
#[derive(Clone, Debug, PartialEq)]
pub struct MemoryBuffer {
    entries: Vec<f64>,
    capacity: MemorySpan,
}

impl MemoryBuffer {
    pub fn new(capacity: MemorySpan) -> Self {
        MemoryBuffer { entries: Vec::new(), capacity }
    }

    pub fn capacity(&self) -> MemorySpan {
        self.capacity
    }

    /// Append `value` as the newest entry. Entries beyond the capacity remain
    /// stored but become unreadable, which is observationally the same as
    /// discarding them.
    pub fn remember(&mut self, value: f64) {
        self.entries.push(value);
    }

    /// The readable window: the most recent `capacity` entries, oldest first.
    pub fn window(&self) -> &[f64] {
        let len = self.capacity.window_len(self.entries.len());
        &self.entries[self.entries.len() - len..]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Expectation of the exogenous factor: the arithmetic mean of the
    /// readable window. Empty history is an error; the caller substitutes its
    /// prior.
    pub fn expected_theta(&self) -> Result<f64, MemoryError> {
        let window = self.window();
        if window.is_empty() {
            return Err(MemoryError::NoHistory);
        }
        Ok(compensated_mean(window))
    }
}

/// The principal cannot observe the agent's action, so she attributes the
/// whole gap between realized outcome and the induced action to the
/// environment: the estimate is `x - a_induced`.
pub fn estimate_theta_principal(x: f64, a_induced: f64) -> f64 {
    x - a_induced
}
