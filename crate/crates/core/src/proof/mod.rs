//! Regular resolution refutations as labeled DAGs, their file format, and a
//! brute-force reference construction.
//!
//! A refutation is a single-source DAG whose inner nodes each decide a
//! variable (two out-edges, one per sign; parallel edges to the same target
//! are fine) and whose sinks name input clauses. Checking that an object of
//! this shape really is a refutation lives in [`check`].

pub mod check;

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{ClauseId, Cnf, Literal, Variable};

/// 1-based proof node id.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RrNodeId(pub u32);

impl RrNodeId {
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Debug for RrNodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for RrNodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeLabel {
    Decision(Variable),
    Sink(ClauseId),
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeLabel::Decision(v) => write!(f, "decision on {v}"),
            NodeLabel::Sink(c) => write!(f, "sink for {c}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RrEdge {
    pub from: RrNodeId,
    pub to: RrNodeId,
    pub lit: Literal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrDag {
    /// Node `i+1` carries `nodes[i]`.
    pub nodes: Vec<NodeLabel>,
    pub edges: Vec<RrEdge>,
    pub root: RrNodeId,
}

impl RrDag {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, id: RrNodeId) -> NodeLabel {
        self.nodes[id.index()]
    }

    /// Outgoing edge indices per node.
    pub fn out_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.from.index()].push(i);
        }
        adj
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for e in &self.edges {
            deg[e.to.index()] += 1;
        }
        deg
    }
}

/// Grow-only construction buffer for proof DAGs; also does the id bookkeeping
/// when one finished DAG is spliced into another.
#[derive(Debug, Default)]
pub struct DagBuilder {
    nodes: Vec<NodeLabel>,
    edges: Vec<RrEdge>,
}

impl DagBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_decision(&mut self, var: Variable) -> RrNodeId {
        self.nodes.push(NodeLabel::Decision(var));
        RrNodeId(self.nodes.len() as u32)
    }

    pub fn add_sink(&mut self, clause: ClauseId) -> RrNodeId {
        self.nodes.push(NodeLabel::Sink(clause));
        RrNodeId(self.nodes.len() as u32)
    }

    pub fn add_edge(&mut self, from: RrNodeId, to: RrNodeId, lit: Literal) {
        self.edges.push(RrEdge { from, to, lit });
    }

    pub fn label(&self, id: RrNodeId) -> NodeLabel {
        self.nodes[id.index()]
    }

    pub fn relabel_sink(&mut self, id: RrNodeId, clause: ClauseId) {
        debug_assert!(matches!(self.nodes[id.index()], NodeLabel::Sink(_)));
        self.nodes[id.index()] = NodeLabel::Sink(clause);
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Copies `dag` in whole; returns the id its old node `k` now carries
    /// (old id plus a fixed offset).
    pub fn append_dag(&mut self, dag: &RrDag) -> impl Fn(RrNodeId) -> RrNodeId {
        let offset = self.nodes.len() as u32;
        self.nodes.extend(dag.nodes.iter().copied());
        self.edges.extend(dag.edges.iter().map(|e| RrEdge {
            from: RrNodeId(e.from.0 + offset),
            to: RrNodeId(e.to.0 + offset),
            lit: e.lit,
        }));
        move |id| RrNodeId(id.0 + offset)
    }

    pub fn finish(self, root: RrNodeId) -> RrDag {
        debug_assert!(root.index() < self.nodes.len());
        RrDag {
            nodes: self.nodes,
            edges: self.edges,
            root,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProofFileError {
    #[error("missing `rr` header line")]
    MissingHeader,
    #[error("line {line_no}: second header line")]
    DuplicateHeader { line_no: usize },
    #[error("line {line_no}: malformed: {text}")]
    Malformed { line_no: usize, text: String },
    #[error("line {line_no}: node id {id} out of range (header declares {count})")]
    NodeIdOutOfRange { line_no: usize, id: u32, count: u32 },
    #[error("node {0} declared twice")]
    DuplicateNode(u32),
    #[error("node {0} never declared")]
    UndeclaredNode(u32),
    #[error("header declares {stated} edges, file has {actual}")]
    EdgeCountMismatch { stated: usize, actual: usize },
    #[error("root {0} out of range")]
    RootOutOfRange(u32),
}

/// Reads the proof format: an `rr <nodes> <edges> <root>` header, `n <id> v
/// <var>` / `n <id> s <clause>` node lines, and `e <from> <to> <±var>` edge
/// lines with DIMACS-signed labels. Structural soundness (degrees, acyclicity,
/// read-once, sinks) is the checker's job, not the parser's.
pub fn parse_proof(text: &str) -> Result<RrDag, ProofFileError> {
    let mut header: Option<(u32, usize, u32)> = None;
    let mut nodes: Vec<Option<NodeLabel>> = Vec::new();
    let mut edges: Vec<RrEdge> = Vec::new();

    let malformed = |line_no: usize, line: &str| ProofFileError::Malformed {
        line_no,
        text: line.trim_end().to_string(),
    };

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let parts: Vec<&str> = trimmed.split_ascii_whitespace().collect();
        match parts[0] {
            "rr" => {
                let [_, n, e, r] = parts[..] else {
                    return Err(malformed(line_no, line));
                };
                let n: u32 = n.parse().map_err(|_| malformed(line_no, line))?;
                let e: usize = e.parse().map_err(|_| malformed(line_no, line))?;
                let r: u32 = r.parse().map_err(|_| malformed(line_no, line))?;
                if header.replace((n, e, r)).is_some() {
                    return Err(ProofFileError::DuplicateHeader { line_no });
                }
                nodes = vec![None; n as usize];
            }
            "n" => {
                let (count, _, _) = header.ok_or(ProofFileError::MissingHeader)?;
                let [_, id, kind, value] = parts[..] else {
                    return Err(malformed(line_no, line));
                };
                let id: u32 = id.parse().map_err(|_| malformed(line_no, line))?;
                if id == 0 || id > count {
                    return Err(ProofFileError::NodeIdOutOfRange { line_no, id, count });
                }
                let value: u32 = value.parse().map_err(|_| malformed(line_no, line))?;
                let label = match kind {
                    "v" if value > 0 => NodeLabel::Decision(Variable(value)),
                    "s" if value > 0 => NodeLabel::Sink(ClauseId(value)),
                    _ => return Err(malformed(line_no, line)),
                };
                if nodes[(id - 1) as usize].replace(label).is_some() {
                    return Err(ProofFileError::DuplicateNode(id));
                }
            }
            "e" => {
                let (count, _, _) = header.ok_or(ProofFileError::MissingHeader)?;
                let [_, from, to, lit] = parts[..] else {
                    return Err(malformed(line_no, line));
                };
                let from: u32 = from.parse().map_err(|_| malformed(line_no, line))?;
                let to: u32 = to.parse().map_err(|_| malformed(line_no, line))?;
                let lit: i64 = lit.parse().map_err(|_| malformed(line_no, line))?;
                for id in [from, to] {
                    if id == 0 || id > count {
                        return Err(ProofFileError::NodeIdOutOfRange { line_no, id, count });
                    }
                }
                let lit = Literal::from_dimacs(lit).ok_or_else(|| malformed(line_no, line))?;
                edges.push(RrEdge {
                    from: RrNodeId(from),
                    to: RrNodeId(to),
                    lit,
                });
            }
            _ => return Err(malformed(line_no, line)),
        }
    }

    let (count, edge_count, root) = header.ok_or(ProofFileError::MissingHeader)?;
    let nodes: Vec<NodeLabel> = nodes
        .into_iter()
        .enumerate()
        .map(|(i, n)| n.ok_or(ProofFileError::UndeclaredNode(i as u32 + 1)))
        .collect::<Result<_, _>>()?;
    if edges.len() != edge_count {
        return Err(ProofFileError::EdgeCountMismatch {
            stated: edge_count,
            actual: edges.len(),
        });
    }
    if root == 0 || root > count {
        return Err(ProofFileError::RootOutOfRange(root));
    }
    Ok(RrDag {
        nodes,
        edges,
        root: RrNodeId(root),
    })
}

pub fn serialize_proof(dag: &RrDag) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "rr {} {} {}",
        dag.num_nodes(),
        dag.num_edges(),
        dag.root
    );
    for (i, label) in dag.nodes.iter().enumerate() {
        match label {
            NodeLabel::Decision(v) => {
                let _ = writeln!(out, "n {} v {}", i + 1, v.0);
            }
            NodeLabel::Sink(c) => {
                let _ = writeln!(out, "n {} s {}", i + 1, c.0);
            }
        }
    }
    for e in &dag.edges {
        let _ = writeln!(out, "e {} {} {}", e.from, e.to, e.lit.to_dimacs());
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecisionTreeError {
    #[error("formula is satisfied by the full assignment {0:?}")]
    Satisfiable(Vec<Literal>),
}

/// The complete decision tree over all variables in index order: every leaf's
/// branch assignment must falsify some clause (the smallest such id becomes
/// the sink label) or the formula is satisfiable. Exponential; calibration
/// use only.
pub fn full_decision_tree_rr(cnf: &Cnf) -> Result<RrDag, DecisionTreeError> {
    let mut b = DagBuilder::new();
    let order: Vec<Variable> = (1..=cnf.num_vars).map(Variable).collect();
    let root = grow(&mut b, cnf, &order, &mut Vec::new())?;
    return Ok(b.finish(root));

    fn grow(
        b: &mut DagBuilder,
        cnf: &Cnf,
        rest: &[Variable],
        branch: &mut Vec<Literal>,
    ) -> Result<RrNodeId, DecisionTreeError> {
        match rest.split_first() {
            None => {
                let falsified = cnf
                    .clauses
                    .iter()
                    .find(|c| c.lits.iter().all(|l| branch.contains(&l.negated())));
                match falsified {
                    Some(c) => Ok(b.add_sink(c.id)),
                    None => Err(DecisionTreeError::Satisfiable(branch.clone())),
                }
            }
            Some((&v, tail)) => {
                let node = b.add_decision(v);
                for positive in [true, false] {
                    let lit = Literal { var: v, positive };
                    branch.push(lit);
                    let child = grow(b, cnf, tail, branch)?;
                    branch.pop();
                    b.add_edge(node, child, lit);
                }
                Ok(node)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProofStats {
    pub num_nodes: usize,
    pub num_edges: usize,
    pub num_decisions: usize,
    pub num_sinks: usize,
    /// Edges on the longest root-to-sink path.
    pub depth: usize,
    pub distinct_vars: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("proof graph is cyclic")]
    Cyclic,
}

/// Size and shape counters; depth needs acyclicity, so cyclic inputs are an
/// error rather than a loop.
pub fn stats(dag: &RrDag) -> Result<ProofStats, StatsError> {
    let n = dag.num_nodes();
    let adj = dag.out_adjacency();
    // longest path via topological order (Kahn)
    let mut indeg = dag.in_degrees();
    let mut topo: Vec<RrNodeId> = Vec::with_capacity(n);
    let mut ready: Vec<RrNodeId> = (1..=n as u32)
        .map(RrNodeId)
        .filter(|id| indeg[id.index()] == 0)
        .collect();
    while let Some(id) = ready.pop() {
        topo.push(id);
        for &ei in &adj[id.index()] {
            let t = dag.edges[ei].to;
            indeg[t.index()] -= 1;
            if indeg[t.index()] == 0 {
                ready.push(t);
            }
        }
    }
    if topo.len() != n {
        return Err(StatsError::Cyclic);
    }
    let mut longest = vec![0usize; n];
    for id in topo.iter().rev() {
        longest[id.index()] = adj[id.index()]
            .iter()
            .map(|&ei| longest[dag.edges[ei].to.index()] + 1)
            .max()
            .unwrap_or(0);
    }
    let mut vars: Vec<Variable> = dag
        .nodes
        .iter()
        .filter_map(|l| match l {
            NodeLabel::Decision(v) => Some(*v),
            NodeLabel::Sink(_) => None,
        })
        .collect();
    vars.sort();
    vars.dedup();
    Ok(ProofStats {
        num_nodes: n,
        num_edges: dag.num_edges(),
        num_decisions: dag
            .nodes
            .iter()
            .filter(|l| matches!(l, NodeLabel::Decision(_)))
            .count(),
        num_sinks: dag
            .nodes
            .iter()
            .filter(|l| matches!(l, NodeLabel::Sink(_)))
            .count(),
        depth: longest[dag.root.index()],
        distinct_vars: vars.len(),
    })
}
