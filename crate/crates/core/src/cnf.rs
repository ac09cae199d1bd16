//! CNF formulas and the little algebra the builders live on: restriction,
//! projection, and graph extraction.
//!
//! Clauses and partial assignments are both "well-formed literal sets" (no
//! variable occurs with both polarities), so they share one representation.
//! Clause identity is positional — the 1-based DIMACS position — and survives
//! restriction, which is what lets proof sinks name original input clauses.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// 1-based variable index, matching DIMACS numbering.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(pub u32);

impl Variable {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// 1-based clause index into the input CNF.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseId(pub u32);

impl ClauseId {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: Variable,
    pub positive: bool,
}

impl Literal {
    pub fn positive(var: Variable) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn negative(var: Variable) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Signed DIMACS encoding; returns `None` for 0 or out-of-range input.
    pub fn from_dimacs(n: i64) -> Option<Self> {
        if n == 0 || n.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Literal {
            var: Variable(n.unsigned_abs() as u32),
            positive: n > 0,
        })
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var.0 as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var.0)
        } else {
            write!(f, "¬x{}", self.var.0)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("variable x{} occurs with both polarities", (.0).0)]
pub struct IllFormed(pub Variable);

/// A set of literals in which no variable occurs with both polarities,
/// canonically ordered by variable index. Used for clauses, partial
/// assignments, separators, and path labels alike.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LiteralSet {
    lits: Vec<Literal>,
}

impl LiteralSet {
    pub fn empty() -> Self {
        LiteralSet { lits: Vec::new() }
    }

    pub fn singleton(lit: Literal) -> Self {
        LiteralSet { lits: vec![lit] }
    }

    /// Builds a well-formed set: duplicates collapse, an opposite pair is an
    /// error.
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Result<Self, IllFormed> {
        let mut v: Vec<Literal> = lits.into_iter().collect();
        v.sort();
        v.dedup();
        for w in v.windows(2) {
            if w[0].var == w[1].var {
                return Err(IllFormed(w[0].var));
            }
        }
        Ok(LiteralSet { lits: v })
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.lits.iter().copied()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.sign_of(lit.var) == Some(lit.positive)
    }

    pub fn has_var(&self, var: Variable) -> bool {
        self.sign_of(var).is_some()
    }

    pub fn sign_of(&self, var: Variable) -> Option<bool> {
        self.lits
            .binary_search_by_key(&var, |l| l.var)
            .ok()
            .map(|i| self.lits[i].positive)
    }

    /// Inserts a literal; `Ok(false)` if it was already present, error if the
    /// opposite literal is.
    pub fn insert(&mut self, lit: Literal) -> Result<bool, IllFormed> {
        match self.lits.binary_search_by_key(&lit.var, |l| l.var) {
            Ok(i) => {
                if self.lits[i].positive == lit.positive {
                    Ok(false)
                } else {
                    Err(IllFormed(lit.var))
                }
            }
            Err(i) => {
                self.lits.insert(i, lit);
                Ok(true)
            }
        }
    }

    pub fn union(&self, other: &LiteralSet) -> Result<LiteralSet, IllFormed> {
        let mut out = self.clone();
        for lit in other.iter() {
            out.insert(lit)?;
        }
        Ok(out)
    }

    pub fn vars(&self) -> impl Iterator<Item = Variable> + '_ {
        self.lits.iter().map(|l| l.var)
    }

    pub fn var_set(&self) -> BTreeSet<Variable> {
        self.vars().collect()
    }

    /// True if the two sets share a literal (same variable, same polarity).
    pub fn intersects(&self, other: &LiteralSet) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().any(|l| large.contains(l))
    }

    pub fn vars_disjoint(&self, other: &LiteralSet) -> bool {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        !small.vars().any(|v| large.has_var(v))
    }

    /// Projection: the subset of literals whose variable lies in `keep`.
    /// Defined for arbitrary `keep`, not only subsets of the assigned
    /// variables.
    pub fn project(&self, keep: &BTreeSet<Variable>) -> LiteralSet {
        LiteralSet {
            lits: self
                .lits
                .iter()
                .copied()
                .filter(|l| keep.contains(&l.var))
                .collect(),
        }
    }

    /// Restriction of a clause body by an assignment: `Satisfied` when they
    /// share a literal, otherwise the clause minus the negations of `s`.
    pub fn restrict(&self, s: &LiteralSet) -> Restricted {
        if self.intersects(s) {
            return Restricted::Satisfied;
        }
        Restricted::Residual(LiteralSet {
            lits: self
                .lits
                .iter()
                .copied()
                .filter(|l| !s.contains(l.negated()))
                .collect(),
        })
    }
}

impl fmt::Debug for LiteralSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", l.to_dimacs())?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for LiteralSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Result of restricting a clause by an assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restricted {
    Satisfied,
    Residual(LiteralSet),
}

impl Restricted {
    pub fn residual(self) -> Option<LiteralSet> {
        match self {
            Restricted::Satisfied => None,
            Restricted::Residual(c) => Some(c),
        }
    }
}

/// A clause with its positional identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub id: ClauseId,
    pub lits: LiteralSet,
}

/// A CNF formula. Parsed formulas carry ids 1..=len in file order; restricted
/// formulas keep the originating ids of their surviving clauses.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cnf {
    pub num_vars: u32,
    pub clauses: Vec<Clause>,
}

impl Cnf {
    /// Builds a CNF from bare literal sets, assigning ids 1..=len.
    pub fn from_literal_sets(num_vars: u32, sets: impl IntoIterator<Item = LiteralSet>) -> Self {
        let clauses = sets
            .into_iter()
            .enumerate()
            .map(|(i, lits)| Clause {
                id: ClauseId(i as u32 + 1),
                lits,
            })
            .collect();
        Cnf { num_vars, clauses }
    }

    pub fn clause(&self, id: ClauseId) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }

    /// All restrictions of non-satisfied clauses, each retaining its
    /// originating clause id.
    pub fn restrict(&self, s: &LiteralSet) -> Cnf {
        let clauses = self
            .clauses
            .iter()
            .filter_map(|c| {
                c.lits
                    .restrict(s)
                    .residual()
                    .map(|lits| Clause { id: c.id, lits })
            })
            .collect();
        Cnf {
            num_vars: self.num_vars,
            clauses,
        }
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.clauses.iter().flat_map(|c| c.lits.vars()).collect()
    }

    pub fn empty_clause(&self) -> Option<ClauseId> {
        self.clauses
            .iter()
            .find(|c| c.lits.is_empty())
            .map(|c| c.id)
    }

    pub fn is_satisfied_by(&self, s: &LiteralSet) -> bool {
        self.clauses.iter().all(|c| c.lits.intersects(s))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("missing \"p cnf\" header")]
    MissingHeader,
    #[error("malformed header line {0:?}")]
    MalformedHeader(String),
    #[error("unexpected token {0:?}")]
    BadToken(String),
    #[error("clause {clause}: literal {literal} out of range (num_vars = {num_vars})")]
    LiteralOutOfRange {
        clause: u32,
        literal: i64,
        num_vars: u32,
    },
    #[error("clause {0} is tautological")]
    Tautology(u32),
    #[error("final clause not terminated by 0")]
    Unterminated,
    #[error("header declares {declared} clauses, file has {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
}

/// Parses DIMACS CNF: `p cnf <vars> <clauses>` header, zero-terminated
/// clauses, `c` comment lines. Duplicate literals within a clause collapse;
/// tautological clauses are rejected (a clause is a *set* of literals here,
/// and a tautology can never be falsified, so nothing downstream could use
/// it).
pub fn parse_dimacs(text: &str) -> Result<Cnf, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut tokens: Vec<i64> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::MalformedHeader(line.to_string()));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(DimacsError::MalformedHeader(line.to_string()));
            }
            let nv = parts[2]
                .parse::<u32>()
                .map_err(|_| DimacsError::MalformedHeader(line.to_string()))?;
            let nc = parts[3]
                .parse::<usize>()
                .map_err(|_| DimacsError::MalformedHeader(line.to_string()))?;
            header = Some((nv, nc));
            continue;
        }
        if header.is_none() {
            return Err(DimacsError::MissingHeader);
        }
        for tok in line.split_whitespace() {
            let n = tok
                .parse::<i64>()
                .map_err(|_| DimacsError::BadToken(tok.to_string()))?;
            tokens.push(n);
        }
    }
    let (num_vars, declared) = header.ok_or(DimacsError::MissingHeader)?;

    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for n in tokens {
        let clause_no = clauses.len() as u32 + 1;
        if n == 0 {
            let lits = LiteralSet::new(current.drain(..))
                .map_err(|_| DimacsError::Tautology(clause_no))?;
            clauses.push(Clause {
                id: ClauseId(clause_no),
                lits,
            });
            continue;
        }
        let lit = Literal::from_dimacs(n).ok_or(DimacsError::BadToken(n.to_string()))?;
        if lit.var.0 > num_vars {
            return Err(DimacsError::LiteralOutOfRange {
                clause: clause_no,
                literal: n,
                num_vars,
            });
        }
        current.push(lit);
    }
    if !current.is_empty() {
        return Err(DimacsError::Unterminated);
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCountMismatch {
            declared,
            found: clauses.len(),
        });
    }
    Ok(Cnf { num_vars, clauses })
}

/// Emits DIMACS text (inverse of `parse_dimacs` up to comments/whitespace).
pub fn serialize_dimacs(cnf: &Cnf) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len());
    for c in &cnf.clauses {
        for l in c.lits.iter() {
            out.push_str(&l.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Variable,
    Clause,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFlavor {
    Primal,
    Incidence,
}

/// Simple undirected graph with 1-based vertices. For incidence graphs the
/// clause of id `j` is vertex `num_vars + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub num_vertices: u32,
    pub kinds: Vec<VertexKind>,
    /// Sorted, deduplicated, with u < v in each pair.
    pub edges: Vec<(u32, u32)>,
}

impl Graph {
    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }
}

/// Primal: vertices = variables, a clique per clause. Incidence: variables
/// plus clause vertices, one edge per occurrence.
pub fn build_graph(cnf: &Cnf, flavor: GraphFlavor) -> Graph {
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let (num_vertices, kinds) = match flavor {
        GraphFlavor::Primal => {
            for c in &cnf.clauses {
                let vars: Vec<u32> = c.lits.vars().map(Variable::index).collect();
                for (i, &u) in vars.iter().enumerate() {
                    for &v in &vars[i + 1..] {
                        edges.push((u.min(v), u.max(v)));
                    }
                }
            }
            (
                cnf.num_vars,
                vec![VertexKind::Variable; cnf.num_vars as usize],
            )
        }
        GraphFlavor::Incidence => {
            let n = cnf.num_vars;
            for c in &cnf.clauses {
                let cv = n + c.id.0;
                for v in c.lits.vars() {
                    edges.push((v.0, cv));
                }
            }
            let mut kinds = vec![VertexKind::Variable; n as usize];
            kinds.extend(vec![VertexKind::Clause; cnf.clauses.len()]);
            (n + cnf.clauses.len() as u32, kinds)
        }
    };
    edges.sort();
    edges.dedup();
    Graph {
        num_vertices,
        kinds,
        edges,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("clause {0} of sub is not a clause of whole")]
pub struct NotASubCnf(pub ClauseId);

/// True iff `sub` (a sub-CNF of `whole`, matched by clause id) shares no
/// variable with the rest of `whole`. Errors when `sub` is not a sub-CNF.
pub fn is_modular_subcnf(sub: &Cnf, whole: &Cnf) -> Result<bool, NotASubCnf> {
    for c in &sub.clauses {
        match whole.clause(c.id) {
            Some(w) if w.lits == c.lits => {}
            _ => return Err(NotASubCnf(c.id)),
        }
    }
    let sub_ids: BTreeSet<ClauseId> = sub.clauses.iter().map(|c| c.id).collect();
    let sub_vars = sub.variables();
    let rest_vars: BTreeSet<Variable> = whole
        .clauses
        .iter()
        .filter(|c| !sub_ids.contains(&c.id))
        .flat_map(|c| c.lits.vars())
        .collect();
    Ok(sub_vars.is_disjoint(&rest_vars))
}
