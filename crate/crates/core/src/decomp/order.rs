//! Postorder machinery over rooted binary decompositions: the postorder
//! listing itself, the variable order it induces via earliest bags, and
//! prefix forests — the maximal subtrees covering a postorder prefix,
//! maintained incrementally.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cnf::Variable;
use crate::decomp::{NodeId, TreeDecomposition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrderError {
    #[error("node {0} has more than two children; binarize first")]
    NotBinary(NodeId),
}

/// A postorder listing (left subtree, right subtree, node) with O(1) rank
/// lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostorderIndex {
    pub order: Vec<NodeId>,
    rank: Vec<usize>,
}

impl PostorderIndex {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Position of `id` in the listing, 0-based.
    pub fn rank(&self, id: NodeId) -> usize {
        self.rank[id.index()]
    }

    pub fn node_at(&self, pos: usize) -> NodeId {
        self.order[pos]
    }
}

pub fn postorder(td: &TreeDecomposition) -> Result<PostorderIndex, OrderError> {
    if let Some(n) = td.nodes().iter().find(|n| n.children.len() > 2) {
        return Err(OrderError::NotBinary(n.id));
    }
    let mut order = Vec::with_capacity(td.len());
    let mut stack = vec![(td.root, 0usize)];
    while let Some((t, i)) = stack.pop() {
        let kids = td.children(t);
        if i < kids.len() {
            stack.push((t, i + 1));
            stack.push((kids[i], 0));
        } else {
            order.push(t);
        }
    }
    let mut rank = vec![usize::MAX; td.len()];
    for (i, id) in order.iter().enumerate() {
        rank[id.index()] = i;
    }
    Ok(PostorderIndex { order, rank })
}

/// First node in postorder whose bag contains `v`, if any.
pub fn min_bag(td: &TreeDecomposition, idx: &PostorderIndex, v: Variable) -> Option<NodeId> {
    idx.order
        .iter()
        .copied()
        .find(|&t| td.node(t).var_bag.contains(&v))
}

/// Strict variable order: `x` comes before `y` iff `x`'s earliest bag
/// precedes `y`'s in postorder. Variables sharing their earliest bag are
/// unordered here; `min_var` breaks such ties by variable index.
pub fn lt_order(td: &TreeDecomposition, idx: &PostorderIndex, x: Variable, y: Variable) -> bool {
    let rx = min_bag(td, idx, x).map(|t| idx.rank(t));
    let ry = min_bag(td, idx, y).map(|t| idx.rank(t));
    match (rx, ry) {
        (Some(a), Some(b)) => a < b,
        _ => false,
    }
}

/// Minimum of `set` under the postorder variable order, ties broken by
/// variable index so the result is unique. Variables in no bag rank last.
pub fn min_var<'a, I>(td: &TreeDecomposition, idx: &PostorderIndex, set: I) -> Option<Variable>
where
    I: IntoIterator<Item = &'a Variable>,
{
    set.into_iter()
        .copied()
        .min_by_key(|&v| (min_bag(td, idx, v).map_or(usize::MAX, |t| idx.rank(t)), v.0))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ForestError {
    #[error("prefix already covers the whole tree")]
    PrefixComplete,
    #[error("listing is not a postorder of this tree (at {0})")]
    Inconsistent(NodeId),
}

/// The maximal subtrees whose union is a postorder prefix, listed left to
/// right. Extending by the next postorder node either adds a fresh leaf tree
/// or merges the last one or two trees beneath it, so membership queries can
/// walk the root list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixForest {
    pub prefix_len: usize,
    /// Roots of the maximal subtrees, in listing order.
    pub trees: Vec<NodeId>,
}

impl PrefixForest {
    pub fn empty() -> Self {
        PrefixForest {
            prefix_len: 0,
            trees: Vec::new(),
        }
    }

    /// Grows the prefix by one node.
    pub fn extend(
        &mut self,
        td: &TreeDecomposition,
        idx: &PostorderIndex,
    ) -> Result<(), ForestError> {
        if self.prefix_len >= idx.len() {
            return Err(ForestError::PrefixComplete);
        }
        let t = idx.node_at(self.prefix_len);
        let kids = td.children(t);
        // In a postorder listing every child subtree is already complete, so
        // the children must be exactly the last trees of the forest.
        if self.trees.len() < kids.len() || self.trees[self.trees.len() - kids.len()..] != *kids {
            return Err(ForestError::Inconsistent(t));
        }
        self.trees.truncate(self.trees.len() - kids.len());
        self.trees.push(t);
        self.prefix_len += 1;
        Ok(())
    }

    /// Earliest listed tree whose subtree contains `v`, given precomputed
    /// per-node subtree variable sets (`TreeDecomposition::subtree_var_sets`).
    pub fn min_tree(&self, subtree_vars: &[BTreeSet<Variable>], v: Variable) -> Option<NodeId> {
        self.trees
            .iter()
            .copied()
            .find(|t| subtree_vars[t.index()].contains(&v))
    }

    /// Union of the variables in all trees of the forest.
    pub fn vars(&self, subtree_vars: &[BTreeSet<Variable>]) -> BTreeSet<Variable> {
        self.trees
            .iter()
            .flat_map(|t| subtree_vars[t.index()].iter().copied())
            .collect()
    }
}

/// Forest of the first `len` postorder nodes, built by repeated extension.
pub fn prefix_forest(
    td: &TreeDecomposition,
    idx: &PostorderIndex,
    len: usize,
) -> Result<PrefixForest, ForestError> {
    let mut f = PrefixForest::empty();
    for _ in 0..len {
        f.extend(td, idx)?;
    }
    Ok(f)
}
