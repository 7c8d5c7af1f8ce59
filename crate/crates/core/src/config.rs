//! Enumeration guards and execution settings shared by the solvers.

/// How data-parallel loops are executed.
///
/// `Parallel` falls back to sequential execution when the crate is built
/// without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

/// Upper limits on exhaustive steps. Exceeding one yields a guard error
/// rather than an unbounded computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Candidate `d`-sets scanned by a full blocking check.
    pub max_groups: u128,
    /// Agents allowed in brute-force enumeration with complete preferences.
    pub max_brute_agents: usize,
    /// Matchings enumerated by brute force.
    pub max_matchings: u128,
    /// Agents per dynamic-programming window.
    pub window_cap: usize,
    /// Distinct states kept at one dynamic-programming step.
    pub max_dp_states: usize,
    /// Entries per agent in a materialised preference list.
    pub max_list_entries: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_groups: 100_000_000,
            max_brute_agents: 12,
            max_matchings: 10_000_000,
            window_cap: 18,
            max_dp_states: 5_000_000,
            max_list_entries: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveConfig {
    pub limits: Limits,
    pub exec: Execution,
    /// Replaces the dynamic program's window size. Windows smaller than the
    /// proven bound make the program a heuristic whose witnesses are
    /// re-checked before being returned.
    pub window_override: Option<usize>,
}

impl SolveConfig {
    pub fn sequential() -> Self {
        SolveConfig {
            exec: Execution::Sequential,
            ..Default::default()
        }
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }
}
