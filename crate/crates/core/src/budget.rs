/// Caps on the exhaustive kernels. Every limit is checked before work starts
/// and reported as [`Error::BudgetExceeded`](crate::Error::BudgetExceeded).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budgets {
    /// Largest `n` for the Ryser permanent (cost `2ⁿ·n`).
    pub direct_max_n: usize,
    /// Entries in a recursion memo table.
    pub memo_entries: usize,
    /// Characters enumerated by a single sparse or full character sum.
    pub characters: u128,
    /// Largest `n` for full sums over all of `Ĝⁿ`.
    pub fourier_max_n: usize,
    /// States in one level of a bitmask DP.
    pub dp_states: u128,
    /// Largest `n` for the three-mask DP.
    pub triple_dp_max_n: usize,
    /// Estimated bytes held by two adjacent DP levels.
    pub dp_memory_bytes: u128,
    /// Pair-DP calls made by the outer-sum strategy.
    pub outer_sum_calls: u128,
    /// Largest `n` for exact counts with four or more summands.
    pub many_summands_max_n: usize,
    /// Injection pairs enumerated by the distance kernel.
    pub injection_pairs: u128,
    /// Histogram cells over `Gᵐ`.
    pub bins: u128,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            direct_max_n: 14,
            memo_entries: 20_000_000,
            characters: 10_000_000,
            fourier_max_n: 5,
            dp_states: 16_000_000,
            triple_dp_max_n: 9,
            dp_memory_bytes: 2 << 30,
            outer_sum_calls: 1_000_000,
            many_summands_max_n: 5,
            injection_pairs: 10_000_000,
            bins: 10_000_000,
        }
    }
}
