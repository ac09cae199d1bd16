//! Build summaries: node counts, oracle traffic, and the size budgets the
//! theory promises. Printed as `key=value` lines so shell pipelines can grep
//! a single figure.

use std::fmt;

/// What the one-sided construction did and what it was allowed to do.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnesidedReport {
    /// Distinct principal formulas materialized (memo entries).
    pub principal_keys: usize,
    /// Satisfiability queries issued during this build.
    pub oracle_calls: u64,
    pub nodes: usize,
    pub edges: usize,
    /// Hard cap on `nodes`; the build fails rather than exceed it.
    pub node_budget: u128,
}

impl fmt::Display for OnesidedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "principal_keys={}", self.principal_keys)?;
        writeln!(f, "oracle_calls={}", self.oracle_calls)?;
        writeln!(f, "nodes={}", self.nodes)?;
        writeln!(f, "edges={}", self.edges)?;
        write!(f, "node_budget={}", self.node_budget)
    }
}

/// What the long-clause construction did, with its two informational budgets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongReport {
    /// Distinct decision types materialized (memo entries).
    pub decision_types: usize,
    /// Upper bound on `decision_types` from the counting argument.
    pub count_bound: u128,
    /// Gadget subproofs spliced in for secondary formulas.
    pub gadget_count: usize,
    /// Decision nodes the primary skeleton may use, excluding gadgets.
    pub node_budget: u128,
    pub oracle_calls: u64,
    pub nodes: usize,
    pub edges: usize,
}

impl fmt::Display for LongReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "decision_types={}", self.decision_types)?;
        writeln!(f, "count_bound={}", self.count_bound)?;
        writeln!(f, "gadget_count={}", self.gadget_count)?;
        writeln!(f, "node_budget={}", self.node_budget)?;
        writeln!(f, "oracle_calls={}", self.oracle_calls)?;
        writeln!(f, "nodes={}", self.nodes)?;
        write!(f, "edges={}", self.edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_print_one_key_per_line() {
        let r = OnesidedReport {
            principal_keys: 3,
            oracle_calls: 12,
            nodes: 7,
            edges: 8,
            node_budget: 1024,
        };
        let text = r.to_string();
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().any(|l| l == "nodes=7"));

        let r = LongReport {
            decision_types: 4,
            count_bound: 12,
            gadget_count: 1,
            node_budget: 256,
            oracle_calls: 9,
            nodes: 11,
            edges: 14,
        };
        assert_eq!(r.to_string().lines().count(), 7);
    }
}
