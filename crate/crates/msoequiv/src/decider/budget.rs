//! Per-run resource budget. Exceeding any cap produces a structured
//! resource verdict rather than a wrong answer.

use std::time::{Duration, Instant};

use crate::parikh::EngineLimits;

#[derive(Debug, Clone)]
pub struct Budget {
    /// Cap on automaton states in any single construction.
    pub automaton_states: usize,
    /// Cap on intersection-grammar productions.
    pub grammar_productions: usize,
    /// Wall-clock budget for one decision.
    pub wall: Duration,
    /// Size bound for the concrete-counterexample search.
    pub witness_bound: usize,
    started: Instant,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new()
    }
}

impl Budget {
    pub fn new() -> Budget {
        Budget {
            automaton_states: 200_000,
            grammar_productions: 1_000_000,
            wall: Duration::from_secs(300),
            witness_bound: 12,
            started: Instant::now(),
        }
    }

    /// Scale the default caps by `units / 200_000`, the way the command
    /// line's single budget number works.
    pub fn with_units(units: usize) -> Budget {
        let mut b = Budget::new();
        b.automaton_states = units.max(1);
        b.grammar_productions = units.saturating_mul(5).max(1);
        b
    }

    pub fn restart_clock(&mut self) {
        self.started = Instant::now();
    }

    pub fn deadline(&self) -> Instant {
        self.started + self.wall
    }

    pub fn engine_limits(&self) -> EngineLimits {
        EngineLimits {
            deadline: Some(self.deadline()),
            max_parts: 100_000,
        }
    }
}
