//! Tree decompositions of CNF graphs: validation against the three
//! decomposition rules, rooting and binarization, the primal → one-sided
//! incidence conversion, a min-fill heuristic, and induced
//! sub-decompositions.
//!
//! Decompositions here are always rooted, with ordered children (an only
//! child counts as a left child). Nodes may transiently have more than two
//! children — `binarize_and_root` restores the binary invariant the builders
//! and the postorder machinery rely on.

pub mod format;
pub mod order;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::cnf::{ClauseId, Cnf, Graph, GraphFlavor, Variable, VertexKind};

/// 1-based decomposition node (bag) id.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

/// A graph vertex as decompositions see it: a variable or a clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VertexRef {
    Var(Variable),
    Clause(ClauseId),
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexRef::Var(v) => write!(f, "{v}"),
            VertexRef::Clause(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompNode {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    /// Ordered children; at most two after binarization.
    pub children: Vec<NodeId>,
    pub var_bag: BTreeSet<Variable>,
    pub clause_bag: BTreeSet<ClauseId>,
}

impl DecompNode {
    pub fn bag_size(&self) -> usize {
        self.var_bag.len() + self.clause_bag.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub flavor: GraphFlavor,
    pub root: NodeId,
    nodes: Vec<DecompNode>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TdError {
    #[error("no parentless node to use as root")]
    NoRoot,
    #[error("more than one parentless node ({0} and {1})")]
    MultipleRoots(NodeId, NodeId),
    #[error("node {0} has unknown parent {1}")]
    UnknownParent(NodeId, NodeId),
    #[error("parent links of {0} form a cycle")]
    Cycle(NodeId),
    #[error("decomposition has no nodes")]
    Empty,
}

impl TreeDecomposition {
    /// Builds a decomposition from per-node parent links. Ids are assigned by
    /// position (1-based); children are ordered by ascending id.
    pub fn from_bags(
        flavor: GraphFlavor,
        bags: Vec<(Option<NodeId>, BTreeSet<Variable>, BTreeSet<ClauseId>)>,
    ) -> Result<Self, TdError> {
        if bags.is_empty() {
            return Err(TdError::Empty);
        }
        let n = bags.len();
        let mut nodes: Vec<DecompNode> = bags
            .iter()
            .enumerate()
            .map(|(i, (parent, vb, cb))| DecompNode {
                id: NodeId(i as u32 + 1),
                parent: *parent,
                children: Vec::new(),
                var_bag: vb.clone(),
                clause_bag: cb.clone(),
            })
            .collect();
        let mut root: Option<NodeId> = None;
        for i in 0..n {
            let id = NodeId(i as u32 + 1);
            match nodes[i].parent {
                None => match root {
                    None => root = Some(id),
                    Some(r) => return Err(TdError::MultipleRoots(r, id)),
                },
                Some(p) => {
                    if p.0 == 0 || p.index() >= n {
                        return Err(TdError::UnknownParent(id, p));
                    }
                    nodes[p.index()].children.push(id);
                }
            }
        }
        let root = root.ok_or(TdError::NoRoot)?;
        for node in &mut nodes {
            node.children.sort();
        }
        let td = TreeDecomposition {
            flavor,
            root,
            nodes,
        };
        // A parentless root plus n-1 parent links is a tree iff there are no
        // cycles, which the depth computation detects.
        td.depths().map_err(TdError::Cycle)?;
        Ok(td)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &DecompNode {
        &self.nodes[id.index()]
    }

    pub fn nodes(&self) -> &[DecompNode] {
        &self.nodes
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (1..=self.nodes.len() as u32).map(NodeId)
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.node(id).parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.node(id).children
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.node(id).children.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        self.nodes.iter().all(|n| n.children.len() <= 2)
    }

    /// Max bag size − 1; 0 for all-empty bags.
    pub fn width(&self) -> u32 {
        self.nodes
            .iter()
            .map(|n| n.bag_size() as u32)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Depth of every node (root = 0), or the id of a node whose parent chain
    /// cycles.
    fn depths(&self) -> Result<Vec<u32>, NodeId> {
        let n = self.nodes.len();
        let mut depth = vec![u32::MAX; n];
        for start in 0..n {
            if depth[start] != u32::MAX {
                continue;
            }
            // Walk up to a node of known depth, then unwind.
            let mut chain = Vec::new();
            let mut cur = NodeId(start as u32 + 1);
            let base = loop {
                if depth[cur.index()] != u32::MAX {
                    break depth[cur.index()];
                }
                if chain.contains(&cur) {
                    return Err(cur);
                }
                chain.push(cur);
                match self.parent(cur) {
                    None => break u32::MAX, // root sentinel, fixed below
                    Some(p) => cur = p,
                }
            };
            let start = if base == u32::MAX { 0 } else { base + 1 };
            for (below, &id) in chain.iter().rev().enumerate() {
                depth[id.index()] = start + below as u32;
            }
        }
        Ok(depth)
    }

    pub fn depth(&self, id: NodeId) -> u32 {
        let mut d = 0;
        let mut cur = id;
        while let Some(p) = self.parent(cur) {
            cur = p;
            d += 1;
        }
        d
    }

    /// True iff `anc` lies on the parent chain of `desc` (inclusive).
    pub fn is_ancestor(&self, anc: NodeId, desc: NodeId) -> bool {
        let mut cur = desc;
        loop {
            if cur == anc {
                return true;
            }
            match self.parent(cur) {
                Some(p) => cur = p,
                None => return false,
            }
        }
    }

    /// Nodes of the subtree rooted at `id`, preorder.
    pub fn subtree_nodes(&self, id: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(t) = stack.pop() {
            out.push(t);
            for &c in self.children(t).iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Per-node union of variable bags over the node's subtree, indexed by
    /// `NodeId::index`.
    pub fn subtree_var_sets(&self) -> Vec<BTreeSet<Variable>> {
        let mut sets: Vec<BTreeSet<Variable>> = vec![BTreeSet::new(); self.nodes.len()];
        // Children have larger depth; process deepest-first.
        let mut ids: Vec<NodeId> = self.node_ids().collect();
        let depth = self.depths().expect("validated tree");
        ids.sort_by_key(|id| std::cmp::Reverse(depth[id.index()]));
        for id in ids {
            let mut set = self.node(id).var_bag.clone();
            for &c in self.children(id) {
                set.extend(sets[c.index()].iter().copied());
            }
            sets[id.index()] = set;
        }
        sets
    }

    /// All variables appearing in some bag.
    pub fn all_vars(&self) -> BTreeSet<Variable> {
        self.nodes
            .iter()
            .flat_map(|n| n.var_bag.iter().copied())
            .collect()
    }
}

/// One rule violation found by `validate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    /// Parent/child structure is not a rooted tree.
    BrokenTree(String),
    /// A bag names a vertex outside the subject CNF.
    ForeignVertex { node: NodeId, vertex: VertexRef },
    /// Clause vertices inside a primal decomposition.
    ClauseInPrimalBag { node: NodeId, clause: ClauseId },
    /// Union rule: vertex in no bag.
    Uncovered(VertexRef),
    /// Containment rule: graph edge inside no bag.
    EdgeUncovered(VertexRef, VertexRef),
    /// Connectivity rule: the vertex's bags do not induce a connected
    /// subtree.
    Disconnected(VertexRef),
    /// One-sidedness: the clause's bags are not a vertical path.
    NotVerticalPath(ClauseId),
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::BrokenTree(d) => write!(f, "broken tree structure: {d}"),
            TdViolation::ForeignVertex { node, vertex } => {
                write!(f, "bag {node} names unknown vertex {vertex}")
            }
            TdViolation::ClauseInPrimalBag { node, clause } => {
                write!(f, "primal bag {node} contains clause vertex {clause}")
            }
            TdViolation::Uncovered(v) => write!(f, "vertex {v} appears in no bag"),
            TdViolation::EdgeUncovered(a, b) => write!(f, "edge ({a},{b}) inside no bag"),
            TdViolation::Disconnected(v) => write!(f, "bags of {v} are not connected"),
            TdViolation::NotVerticalPath(c) => {
                write!(f, "bags of clause {c} do not form a vertical path")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WidthReport {
    pub width: u32,
    pub max_bag_size: u32,
    pub num_nodes: u32,
}

/// Checks the union / containment / connectivity rules of `td` against the
/// graph of `cnf` implied by the decomposition's flavor, and — when
/// `one_sided` is set — that every clause's bags form a vertical
/// (ancestor–descendant) path. Requires incidence flavor when `one_sided`.
pub fn validate(
    cnf: &Cnf,
    td: &TreeDecomposition,
    one_sided: bool,
) -> Result<WidthReport, Vec<TdViolation>> {
    let mut out = Vec::new();

    if td.depths().is_err() {
        out.push(TdViolation::BrokenTree(
            "parent links contain a cycle".into(),
        ));
        return Err(out);
    }
    // Reachability from the root (a parentless second component would have
    // been rejected as a second root at construction, but re-check anyway).
    let mut seen = vec![false; td.len()];
    let mut queue = VecDeque::from([td.root]);
    while let Some(t) = queue.pop_front() {
        if std::mem::replace(&mut seen[t.index()], true) {
            continue;
        }
        queue.extend(td.children(t).iter().copied());
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        out.push(TdViolation::BrokenTree(format!(
            "node t{} not reachable from the root",
            i + 1
        )));
        return Err(out);
    }

    let incidence = one_sided || td.flavor == GraphFlavor::Incidence;
    let num_clauses = cnf.clauses.len() as u32;

    for node in td.nodes() {
        for &v in &node.var_bag {
            if v.0 == 0 || v.0 > cnf.num_vars {
                out.push(TdViolation::ForeignVertex {
                    node: node.id,
                    vertex: VertexRef::Var(v),
                });
            }
        }
        for &c in &node.clause_bag {
            if c.0 == 0 || c.0 > num_clauses {
                out.push(TdViolation::ForeignVertex {
                    node: node.id,
                    vertex: VertexRef::Clause(c),
                });
            }
            if !incidence {
                out.push(TdViolation::ClauseInPrimalBag {
                    node: node.id,
                    clause: c,
                });
            }
        }
    }

    // Bag index per vertex.
    let mut var_nodes: BTreeMap<Variable, Vec<NodeId>> = BTreeMap::new();
    let mut clause_nodes: BTreeMap<ClauseId, Vec<NodeId>> = BTreeMap::new();
    for node in td.nodes() {
        for &v in &node.var_bag {
            var_nodes.entry(v).or_default().push(node.id);
        }
        for &c in &node.clause_bag {
            clause_nodes.entry(c).or_default().push(node.id);
        }
    }

    // Union rule.
    for v in cnf.variables() {
        if !var_nodes.contains_key(&v) {
            out.push(TdViolation::Uncovered(VertexRef::Var(v)));
        }
    }
    if incidence {
        for c in &cnf.clauses {
            if !clause_nodes.contains_key(&c.id) {
                out.push(TdViolation::Uncovered(VertexRef::Clause(c.id)));
            }
        }
    }

    // Containment rule, per graph edge.
    let overlap = |a: &[NodeId], b: &[NodeId]| -> bool {
        let set: BTreeSet<NodeId> = a.iter().copied().collect();
        b.iter().any(|t| set.contains(t))
    };
    if incidence {
        for c in &cnf.clauses {
            let cbags = clause_nodes.get(&c.id).cloned().unwrap_or_default();
            for v in c.lits.vars() {
                let vbags = var_nodes.get(&v).cloned().unwrap_or_default();
                if !overlap(&cbags, &vbags) {
                    out.push(TdViolation::EdgeUncovered(
                        VertexRef::Var(v),
                        VertexRef::Clause(c.id),
                    ));
                }
            }
        }
    } else {
        for c in &cnf.clauses {
            let vars: Vec<Variable> = c.lits.vars().collect();
            for (i, &u) in vars.iter().enumerate() {
                for &v in &vars[i + 1..] {
                    let ub = var_nodes.get(&u).cloned().unwrap_or_default();
                    let vb = var_nodes.get(&v).cloned().unwrap_or_default();
                    if !overlap(&ub, &vb) {
                        out.push(TdViolation::EdgeUncovered(
                            VertexRef::Var(u),
                            VertexRef::Var(v),
                        ));
                    }
                }
            }
        }
    }

    // Connectivity rule.
    let connected = |bags: &[NodeId]| -> bool {
        if bags.len() <= 1 {
            return true;
        }
        let set: BTreeSet<NodeId> = bags.iter().copied().collect();
        let mut reached = BTreeSet::from([bags[0]]);
        let mut queue = VecDeque::from([bags[0]]);
        while let Some(t) = queue.pop_front() {
            let mut adj: Vec<NodeId> = td.children(t).to_vec();
            adj.extend(td.parent(t));
            for a in adj {
                if set.contains(&a) && reached.insert(a) {
                    queue.push_back(a);
                }
            }
        }
        reached.len() == set.len()
    };
    for (v, bags) in &var_nodes {
        if !connected(bags) {
            out.push(TdViolation::Disconnected(VertexRef::Var(*v)));
        }
    }
    for (c, bags) in &clause_nodes {
        if !connected(bags) {
            out.push(TdViolation::Disconnected(VertexRef::Clause(*c)));
        }
    }

    // One-sidedness: the bags of each clause, ordered by depth, must be a
    // chain of parent steps.
    if one_sided {
        for (c, bags) in &clause_nodes {
            let deepest = *bags
                .iter()
                .max_by_key(|t| td.depth(**t))
                .expect("nonempty bag list");
            let set: BTreeSet<NodeId> = bags.iter().copied().collect();
            let mut cur = deepest;
            let mut walked = BTreeSet::from([cur]);
            for _ in 1..set.len() {
                match td.parent(cur) {
                    Some(p) => {
                        cur = p;
                        walked.insert(cur);
                    }
                    None => break,
                }
            }
            if walked != set {
                out.push(TdViolation::NotVerticalPath(*c));
            }
        }
    }

    if out.is_empty() {
        Ok(WidthReport {
            width: td.width(),
            max_bag_size: td
                .nodes()
                .iter()
                .map(|n| n.bag_size() as u32)
                .max()
                .unwrap_or(0),
            num_nodes: td.len() as u32,
        })
    } else {
        Err(out)
    }
}

/// Splits every node with more than two children by stacking copies of its
/// bag vertically, preserving child order, width, validity, and (because the
/// copies are vertical) one-sidedness. Already-binary trees come back
/// unchanged.
pub fn binarize_and_root(td: &TreeDecomposition) -> TreeDecomposition {
    let mut nodes: Vec<DecompNode> = td.nodes().to_vec();
    let mut i = 0;
    while i < nodes.len() {
        if nodes[i].children.len() > 2 {
            let keep = nodes[i].children[0];
            let rest: Vec<NodeId> = nodes[i].children[1..].to_vec();
            let copy_id = NodeId(nodes.len() as u32 + 1);
            let copy = DecompNode {
                id: copy_id,
                parent: Some(nodes[i].id),
                children: rest.clone(),
                var_bag: nodes[i].var_bag.clone(),
                clause_bag: nodes[i].clause_bag.clone(),
            };
            nodes[i].children = vec![keep, copy_id];
            for r in rest {
                nodes[r.index()].parent = Some(copy_id);
            }
            nodes.push(copy);
        }
        i += 1;
    }
    TreeDecomposition {
        flavor: td.flavor,
        root: td.root,
        nodes,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConvertError {
    #[error("input decomposition is not primal")]
    NotPrimal,
    #[error("clause {0} fits in no bag (not a primal decomposition of this CNF)")]
    ClauseFitsNoBag(ClauseId),
}

/// Primal → one-sided incidence conversion: every clause gets one fresh bag
/// `{C} ∪ Var(C)` hung beneath the smallest-id bag containing `Var(C)`.
/// Since each clause lives in exactly one bag, the result is trivially
/// one-sided, and the width grows by at most one.
pub fn primal_to_one_sided(
    td: &TreeDecomposition,
    cnf: &Cnf,
) -> Result<TreeDecomposition, ConvertError> {
    if td.flavor != GraphFlavor::Primal {
        return Err(ConvertError::NotPrimal);
    }
    let mut nodes: Vec<DecompNode> = td.nodes().to_vec();
    for c in &cnf.clauses {
        let vars = c.lits.var_set();
        let host = td
            .node_ids()
            .find(|&t| vars.is_subset(&td.node(t).var_bag))
            .ok_or(ConvertError::ClauseFitsNoBag(c.id))?;
        let id = NodeId(nodes.len() as u32 + 1);
        nodes.push(DecompNode {
            id,
            parent: Some(host),
            children: Vec::new(),
            var_bag: vars,
            clause_bag: BTreeSet::from([c.id]),
        });
        nodes[host.index()].children.push(id);
    }
    let out = TreeDecomposition {
        flavor: GraphFlavor::Incidence,
        root: td.root,
        nodes,
    };
    Ok(binarize_and_root(&out))
}

/// Intersects every bag with `keep`: a valid decomposition of the induced
/// primal graph, of no larger width.
pub fn induced_subdecomposition(
    td: &TreeDecomposition,
    keep: &BTreeSet<Variable>,
) -> TreeDecomposition {
    let nodes = td
        .nodes()
        .iter()
        .map(|n| DecompNode {
            var_bag: n.var_bag.intersection(keep).copied().collect(),
            ..n.clone()
        })
        .collect();
    TreeDecomposition {
        flavor: td.flavor,
        root: td.root,
        nodes,
    }
}

/// Min-fill elimination heuristic. Returns a valid (not necessarily optimal)
/// rooted binary primal decomposition of `graph`; vertices are reported as
/// variables.
pub fn heuristic_td(graph: &Graph) -> TreeDecomposition {
    let n = graph.num_vertices as usize;
    if n == 0 {
        return TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![(None, BTreeSet::new(), BTreeSet::new())],
        )
        .expect("single node");
    }
    debug_assert!(graph.kinds.iter().all(|k| *k == VertexKind::Variable));

    let mut adj: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n + 1];
    for &(a, b) in &graph.edges {
        adj[a as usize].insert(b);
        adj[b as usize].insert(a);
    }
    let mut alive: BTreeSet<u32> = (1..=n as u32).collect();

    // Eliminate the vertex whose neighborhood needs the fewest fill edges;
    // ties break toward the smallest vertex.
    let mut bags: Vec<BTreeSet<u32>> = Vec::new();
    let mut eliminated_at: BTreeMap<u32, usize> = BTreeMap::new();
    while let Some(&first) = alive.iter().next() {
        let mut best = (usize::MAX, first);
        for &v in &alive {
            let nbrs: Vec<u32> = adj[v as usize].iter().copied().collect();
            let mut fill = 0;
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if !adj[a as usize].contains(&b) {
                        fill += 1;
                    }
                }
            }
            if fill < best.0 {
                best = (fill, v);
            }
        }
        let v = best.1;
        let nbrs: Vec<u32> = adj[v as usize].iter().copied().collect();
        let mut bag: BTreeSet<u32> = nbrs.iter().copied().collect();
        bag.insert(v);
        eliminated_at.insert(v, bags.len());
        bags.push(bag);
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a as usize].insert(b);
                adj[b as usize].insert(a);
            }
        }
        for &a in &nbrs {
            adj[a as usize].remove(&v);
        }
        adj[v as usize].clear();
        alive.remove(&v);
    }

    // Standard linking: a bag hangs beneath the bag of its earliest-eliminated
    // remaining neighbor; bags with none hang beneath the next bag in order.
    let last = bags.len() - 1;
    let parents: Vec<Option<NodeId>> = bags
        .iter()
        .enumerate()
        .map(|(i, bag)| {
            if i == last {
                return None;
            }
            let next = bag
                .iter()
                .filter_map(|v| {
                    let j = eliminated_at[v];
                    (j > i).then_some(j)
                })
                .min()
                .unwrap_or(i + 1);
            Some(NodeId(next as u32 + 1))
        })
        .collect();
    let td = TreeDecomposition::from_bags(
        GraphFlavor::Primal,
        bags.iter()
            .zip(&parents)
            .map(|(bag, parent)| {
                (
                    *parent,
                    bag.iter().map(|&v| Variable(v)).collect(),
                    BTreeSet::new(),
                )
            })
            .collect(),
    )
    .expect("elimination order yields a tree");
    binarize_and_root(&td)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cnf::{build_graph, parse_dimacs};

    pub(crate) fn vars(ids: &[u32]) -> BTreeSet<Variable> {
        ids.iter().map(|&i| Variable(i)).collect()
    }

    pub(crate) fn clauses(ids: &[u32]) -> BTreeSet<ClauseId> {
        ids.iter().map(|&i| ClauseId(i)).collect()
    }

    /// TOY3: d1=(x1∨x2), d2=(x1∨¬x2), d3=(¬x1∨x3), d4=(¬x1∨¬x3).
    pub(crate) fn toy3() -> (Cnf, TreeDecomposition) {
        let cnf = parse_dimacs("p cnf 3 4\n1 2 0\n1 -2 0\n-1 3 0\n-1 -3 0\n").unwrap();
        // node 1 = a {x1,x2,d1,d2}, node 2 = b {x1,x3,d3,d4}, node 3 = r {x1}
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Incidence,
            vec![
                (Some(NodeId(3)), vars(&[1, 2]), clauses(&[1, 2])),
                (Some(NodeId(3)), vars(&[1, 3]), clauses(&[3, 4])),
                (None, vars(&[1]), BTreeSet::new()),
            ],
        )
        .unwrap();
        (cnf, td)
    }

    #[test]
    fn toy3_is_valid_one_sided_width_3() {
        let (cnf, td) = toy3();
        let report = validate(&cnf, &td, true).unwrap();
        assert_eq!(report.width, 3);
        assert_eq!(report.num_nodes, 3);
    }

    #[test]
    fn missing_variable_breaks_containment() {
        let (cnf, mut td) = toy3();
        td.nodes[0].var_bag.remove(&Variable(1));
        let violations = validate(&cnf, &td, true).unwrap_err();
        assert!(violations.contains(&TdViolation::EdgeUncovered(
            VertexRef::Var(Variable(1)),
            VertexRef::Clause(ClauseId(1))
        )));
    }

    #[test]
    fn clause_in_sibling_bags_is_not_one_sided() {
        let (cnf, mut td) = toy3();
        // d3 into bag a as well: bags {a, b} are siblings.
        td.nodes[0].clause_bag.insert(ClauseId(3));
        let violations = validate(&cnf, &td, true).unwrap_err();
        assert!(violations.contains(&TdViolation::NotVerticalPath(ClauseId(3))));
    }

    #[test]
    fn binarize_star() {
        // center (id 4) with three leaf bags
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![
                (Some(NodeId(4)), vars(&[1]), BTreeSet::new()),
                (Some(NodeId(4)), vars(&[2]), BTreeSet::new()),
                (Some(NodeId(4)), vars(&[3]), BTreeSet::new()),
                (None, vars(&[1, 2, 3]), BTreeSet::new()),
            ],
        )
        .unwrap();
        let b = binarize_and_root(&td);
        assert!(b.is_binary());
        assert!(b.len() <= 7);
        assert_eq!(b.width(), td.width());
        let cnf = parse_dimacs("p cnf 3 3\n1 2 0\n2 3 0\n1 3 0\n").unwrap();
        validate(&cnf, &b, false).unwrap();
    }

    #[test]
    fn binarize_leaves_binary_trees_alone() {
        let (_, td) = toy3();
        assert_eq!(binarize_and_root(&td), td);
        let single = TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![(None, vars(&[1]), BTreeSet::new())],
        )
        .unwrap();
        assert_eq!(binarize_and_root(&single), single);
    }

    #[test]
    fn toy1_one_sided_conversion() {
        let cnf = parse_dimacs("p cnf 2 3\n1 0\n-1 2 0\n-2 0\n").unwrap();
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![(None, vars(&[1, 2]), BTreeSet::new())],
        )
        .unwrap();
        let one = primal_to_one_sided(&td, &cnf).unwrap();
        let report = validate(&cnf, &one, true).unwrap();
        assert_eq!(report.width, 2);
        assert!(report.width <= td.width() + 1);
        // root bag plus one bag per clause, plus binarization copies
        let clause_bags: Vec<_> = one
            .nodes()
            .iter()
            .filter(|n| !n.clause_bag.is_empty())
            .collect();
        assert_eq!(clause_bags.len(), 3);
        assert_eq!(clause_bags[0].var_bag, vars(&[1]));
        assert_eq!(clause_bags[1].var_bag, vars(&[1, 2]));
        assert_eq!(clause_bags[2].var_bag, vars(&[2]));
    }

    #[test]
    fn empty_clause_gets_a_bare_bag() {
        let cnf = parse_dimacs("p cnf 1 2\n1 0\n0\n").unwrap();
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![(None, vars(&[1]), BTreeSet::new())],
        )
        .unwrap();
        let one = primal_to_one_sided(&td, &cnf).unwrap();
        validate(&cnf, &one, true).unwrap();
        let bag = one
            .nodes()
            .iter()
            .find(|n| n.clause_bag.contains(&ClauseId(2)))
            .unwrap();
        assert!(bag.var_bag.is_empty());
    }

    #[test]
    fn conversion_detects_unfittable_clause() {
        let cnf = parse_dimacs("p cnf 2 1\n1 2 0\n").unwrap();
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![
                (Some(NodeId(2)), vars(&[1]), BTreeSet::new()),
                (None, vars(&[2]), BTreeSet::new()),
            ],
        )
        .unwrap();
        assert_eq!(
            primal_to_one_sided(&td, &cnf),
            Err(ConvertError::ClauseFitsNoBag(ClauseId(1)))
        );
    }

    #[test]
    fn heuristic_triangle_and_tree() {
        let triangle = parse_dimacs("p cnf 3 3\n1 2 0\n2 3 0\n1 3 0\n").unwrap();
        let g = build_graph(&triangle, GraphFlavor::Primal);
        let td = heuristic_td(&g);
        assert_eq!(td.width(), 2);
        validate(&triangle, &td, false).unwrap();

        // path a-b-c-d is a tree: width 1
        let path = parse_dimacs("p cnf 4 3\n1 2 0\n2 3 0\n3 4 0\n").unwrap();
        let g = build_graph(&path, GraphFlavor::Primal);
        let td = heuristic_td(&g);
        assert_eq!(td.width(), 1);
        validate(&path, &td, false).unwrap();
    }

    #[test]
    fn heuristic_four_cycle() {
        let cyc = parse_dimacs("p cnf 4 4\n1 2 0\n2 3 0\n3 4 0\n1 4 0\n").unwrap();
        let g = build_graph(&cyc, GraphFlavor::Primal);
        let td = heuristic_td(&g);
        assert_eq!(td.width(), 2);
        validate(&cyc, &td, false).unwrap();
    }

    #[test]
    fn induced_subdecomposition_examples() {
        // primal version of the TOY3 tree
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![
                (Some(NodeId(3)), vars(&[1, 2]), BTreeSet::new()),
                (Some(NodeId(3)), vars(&[1, 3]), BTreeSet::new()),
                (None, vars(&[1]), BTreeSet::new()),
            ],
        )
        .unwrap();
        let keep = vars(&[1, 3]);
        let sub = induced_subdecomposition(&td, &keep);
        assert_eq!(sub.node(NodeId(1)).var_bag, vars(&[1]));
        assert_eq!(sub.node(NodeId(2)).var_bag, vars(&[1, 3]));
        assert_eq!(sub.node(NodeId(3)).var_bag, vars(&[1]));
        assert!(sub.width() <= td.width());
        let cnf = parse_dimacs("p cnf 3 1\n-1 3 0\n").unwrap();
        validate(&cnf, &sub, false).unwrap();

        let empty = induced_subdecomposition(&td, &BTreeSet::new());
        assert!(empty.nodes().iter().all(|n| n.var_bag.is_empty()));
    }
}
