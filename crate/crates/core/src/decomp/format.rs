//! Decomposition files. The format follows the usual treewidth-solver
//! convention — `s td <bags> <max_bag_size> <vertices>` then `b` lines and
//! edge lines — extended with two optional line kinds: `r <bag>` roots the
//! tree and `o <bag> <children...>` fixes child order. Files without them
//! are rooted at bag 1 with children ordered by ascending id.
//!
//! Vertices are numbered as in the incidence graph: 1..n are the variables,
//! n+1..n+m the clauses. A file whose header counts only the variables is a
//! primal decomposition.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{ClauseId, Cnf, GraphFlavor, Variable};
use crate::decomp::{DecompNode, NodeId, TreeDecomposition};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TdFileError {
    #[error("missing `s td` solution line")]
    MissingSolutionLine,
    #[error("line {line_no}: second solution line")]
    DuplicateSolutionLine { line_no: usize },
    #[error("line {line_no}: malformed: {text}")]
    Malformed { line_no: usize, text: String },
    #[error("header counts {stated} vertices; expected {n} (primal) or {both} (incidence)")]
    WrongVertexCount { stated: u32, n: u32, both: u32 },
    #[error("line {line_no}: bag id {id} out of range")]
    BagIdOutOfRange { line_no: usize, id: u32 },
    #[error("bag {0} defined twice")]
    DuplicateBag(u32),
    #[error("line {line_no}: vertex {vertex} out of range")]
    VertexOutOfRange { line_no: usize, vertex: u32 },
    #[error("decomposition declares zero bags")]
    NoBags,
    #[error("second `r` line")]
    MultipleRootLines,
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("`o` line for bag {0} does not list exactly its children")]
    ChildOrderMismatch(u32),
}

/// Parses a decomposition of `cnf` (primal or incidence, by header vertex
/// count), roots it, and orients the edges.
pub fn parse_decomposition(text: &str, cnf: &Cnf) -> Result<TreeDecomposition, TdFileError> {
    let n = cnf.num_vars;
    let m = cnf.clauses.len() as u32;

    let mut header: Option<(u32, u32)> = None; // (num_bags, num_vertices)
    let mut raw_bags: BTreeMap<u32, (Vec<u32>, usize)> = BTreeMap::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut root_line: Option<u32> = None;
    let mut order_lines: BTreeMap<u32, Vec<u32>> = BTreeMap::new();

    let malformed = |line_no: usize, line: &str| TdFileError::Malformed {
        line_no,
        text: line.trim_end().to_string(),
    };

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut parts = trimmed.split_ascii_whitespace();
        let head = parts.next().expect("nonempty line");
        let rest: Result<Vec<u32>, _> = parts.map(str::parse).collect();
        match head {
            "s" => {
                // consumed `s`; expect: td <bags> <max_bag_size> <vertices>
                let mut p = trimmed.split_ascii_whitespace().skip(1);
                if p.next() != Some("td") {
                    return Err(malformed(line_no, line));
                }
                let nums: Result<Vec<u32>, _> = p.map(str::parse).collect();
                let nums = nums.map_err(|_| malformed(line_no, line))?;
                let [bags, _max_bag, verts] = nums[..] else {
                    return Err(malformed(line_no, line));
                };
                if header.replace((bags, verts)).is_some() {
                    return Err(TdFileError::DuplicateSolutionLine { line_no });
                }
            }
            "b" => {
                let nums = rest.map_err(|_| malformed(line_no, line))?;
                let (&id, verts) = nums.split_first().ok_or_else(|| malformed(line_no, line))?;
                if raw_bags.insert(id, (verts.to_vec(), line_no)).is_some() {
                    return Err(TdFileError::DuplicateBag(id));
                }
            }
            "r" => {
                let nums = rest.map_err(|_| malformed(line_no, line))?;
                let [id] = nums[..] else {
                    return Err(malformed(line_no, line));
                };
                if root_line.replace(id).is_some() {
                    return Err(TdFileError::MultipleRootLines);
                }
            }
            "o" => {
                let nums = rest.map_err(|_| malformed(line_no, line))?;
                let (&id, kids) = nums.split_first().ok_or_else(|| malformed(line_no, line))?;
                if kids.is_empty() || order_lines.insert(id, kids.to_vec()).is_some() {
                    return Err(malformed(line_no, line));
                }
            }
            _ if head.chars().all(|c| c.is_ascii_digit()) => {
                let a: u32 = head.parse().map_err(|_| malformed(line_no, line))?;
                let nums = rest.map_err(|_| malformed(line_no, line))?;
                let [b] = nums[..] else {
                    return Err(malformed(line_no, line));
                };
                edges.push((a, b));
            }
            _ => return Err(malformed(line_no, line)),
        }
    }

    let (num_bags, num_verts) = header.ok_or(TdFileError::MissingSolutionLine)?;
    if num_bags == 0 {
        return Err(TdFileError::NoBags);
    }
    let flavor = if num_verts == n {
        GraphFlavor::Primal
    } else if num_verts == n + m {
        GraphFlavor::Incidence
    } else {
        return Err(TdFileError::WrongVertexCount {
            stated: num_verts,
            n,
            both: n + m,
        });
    };

    let check_bag_id = |id: u32, line_no: usize| -> Result<NodeId, TdFileError> {
        if id == 0 || id > num_bags {
            Err(TdFileError::BagIdOutOfRange { line_no, id })
        } else {
            Ok(NodeId(id))
        }
    };

    // Split bag contents into variable and clause vertices.
    let mut var_bags: Vec<BTreeSet<Variable>> = vec![BTreeSet::new(); num_bags as usize];
    let mut clause_bags: Vec<BTreeSet<ClauseId>> = vec![BTreeSet::new(); num_bags as usize];
    for (id, (verts, line_no)) in &raw_bags {
        let id = check_bag_id(*id, *line_no)?;
        for &v in verts {
            if v == 0 || v > num_verts {
                return Err(TdFileError::VertexOutOfRange {
                    line_no: *line_no,
                    vertex: v,
                });
            }
            if v <= n {
                var_bags[id.index()].insert(Variable(v));
            } else {
                clause_bags[id.index()].insert(ClauseId(v - n));
            }
        }
    }

    // Orient edges away from the root.
    let root = check_bag_id(root_line.unwrap_or(1), 0)?;
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); num_bags as usize];
    for &(a, b) in &edges {
        let a = check_bag_id(a, 0)?;
        let b = check_bag_id(b, 0)?;
        adj[a.index()].push(b);
        adj[b.index()].push(a);
    }
    let mut parent: Vec<Option<NodeId>> = vec![None; num_bags as usize];
    let mut seen = vec![false; num_bags as usize];
    seen[root.index()] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(t) = queue.pop_front() {
        for &u in &adj[t.index()] {
            if Some(u) == parent[t.index()] {
                continue;
            }
            if std::mem::replace(&mut seen[u.index()], true) {
                return Err(TdFileError::NotATree(format!(
                    "edge ({t},{u}) closes a cycle"
                )));
            }
            parent[u.index()] = Some(t);
            queue.push_back(u);
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(TdFileError::NotATree(format!(
            "bag t{} unreachable from the root",
            i + 1
        )));
    }

    let mut nodes: Vec<DecompNode> = (0..num_bags)
        .map(|i| DecompNode {
            id: NodeId(i + 1),
            parent: parent[i as usize],
            children: Vec::new(),
            var_bag: std::mem::take(&mut var_bags[i as usize]),
            clause_bag: std::mem::take(&mut clause_bags[i as usize]),
        })
        .collect();
    for (i, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            nodes[p.index()].children.push(NodeId(i as u32 + 1));
        }
    }
    for node in &mut nodes {
        node.children.sort();
    }
    // Apply explicit child orders.
    for (&id, kids) in &order_lines {
        let id = check_bag_id(id, 0)?;
        let want: Vec<NodeId> = kids
            .iter()
            .map(|&k| check_bag_id(k, 0))
            .collect::<Result<_, _>>()?;
        let have: BTreeSet<NodeId> = nodes[id.index()].children.iter().copied().collect();
        let listed: BTreeSet<NodeId> = want.iter().copied().collect();
        if have != listed || want.len() != have.len() {
            return Err(TdFileError::ChildOrderMismatch(id.0));
        }
        nodes[id.index()].children = want;
    }

    Ok(TreeDecomposition {
        flavor,
        root,
        nodes,
    })
}

/// Inverse of `parse_decomposition`: emits a file that parses back to an
/// equal decomposition. `o` lines appear only where child order differs from
/// the ascending-id default.
pub fn serialize_decomposition(td: &TreeDecomposition, cnf: &Cnf) -> String {
    let n = cnf.num_vars;
    let verts = match td.flavor {
        GraphFlavor::Primal => n,
        GraphFlavor::Incidence => n + cnf.clauses.len() as u32,
    };
    let max_bag = td
        .nodes()
        .iter()
        .map(DecompNode::bag_size)
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "s td {} {} {}", td.len(), max_bag, verts);
    for node in td.nodes() {
        let _ = write!(out, "b {}", node.id.0);
        for v in &node.var_bag {
            let _ = write!(out, " {}", v.0);
        }
        for c in &node.clause_bag {
            let _ = write!(out, " {}", n + c.0);
        }
        out.push('\n');
    }
    for node in td.nodes() {
        for child in &node.children {
            let _ = writeln!(out, "{} {}", node.id.0, child.0);
        }
    }
    let _ = writeln!(out, "r {}", td.root.0);
    for node in td.nodes() {
        let mut ascending = node.children.clone();
        ascending.sort();
        if node.children.len() > 1 && node.children != ascending {
            let _ = write!(out, "o {}", node.id.0);
            for child in &node.children {
                let _ = write!(out, " {}", child.0);
            }
            out.push('\n');
        }
    }
    out
}
