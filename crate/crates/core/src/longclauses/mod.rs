//! Decision types over postorder prefixes: the machinery for refuting CNFs
//! whose primal treewidth is small once p designated "long" clauses are set
//! aside.
//!
//! The construction walks the postorder listing of a decomposition of the
//! short part. States are *interesting pairs* (prefix, assignment), collapsed
//! into finitely many *decision types*; each type determines a residual CNF
//! φ_DT, a canonical family of extensions over the next bag, and a successor
//! map. [`build`] turns all of this into a regular resolution refutation.

pub mod build;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cnf::{
    build_graph, Clause, ClauseId, Cnf, GraphFlavor, Literal, LiteralSet, Restricted, Variable,
};
use crate::decomp::order::{min_var, postorder, PostorderIndex, PrefixForest};
use crate::decomp::{
    binarize_and_root, heuristic_td, validate, NodeId, TdViolation, TreeDecomposition,
};

pub use build::{build_longclauses_rr, BuildError};

/// The p designated long clauses together with a primal decomposition of
/// everything else.
#[derive(Clone, Debug)]
pub struct LongClauseSpec {
    pub long_ids: BTreeSet<ClauseId>,
    pub short_td: TreeDecomposition,
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("long clause id {0} is not a clause of the formula")]
    UnknownLongId(ClauseId),
    #[error("short decomposition must be primal")]
    NotPrimal,
    #[error("short decomposition must be binary")]
    NotBinary,
    #[error("short decomposition rejected with {} violation(s)", .0.len())]
    InvalidShortTd(Vec<TdViolation>),
}

impl LongClauseSpec {
    /// The formula without its long clauses, originating ids kept.
    pub fn short_cnf(&self, cnf: &Cnf) -> Cnf {
        Cnf {
            num_vars: cnf.num_vars,
            clauses: cnf
                .clauses
                .iter()
                .filter(|c| !self.long_ids.contains(&c.id))
                .cloned()
                .collect(),
        }
    }

    /// Checks that `short_td` is a valid, binary, primal decomposition of the
    /// short part (over the full variable range, so every variable — long
    /// clauses included — lives in some bag). Returns its width.
    pub fn validate(&self, cnf: &Cnf) -> Result<u32, SpecError> {
        for &id in &self.long_ids {
            if cnf.clause(id).is_none() {
                return Err(SpecError::UnknownLongId(id));
            }
        }
        if self.short_td.flavor != GraphFlavor::Primal {
            return Err(SpecError::NotPrimal);
        }
        if !self.short_td.is_binary() {
            return Err(SpecError::NotBinary);
        }
        let report = validate(&self.short_cnf(cnf), &self.short_td, false)
            .map_err(SpecError::InvalidShortTd)?;
        Ok(report.width)
    }
}

/// Fallback when no long-clause selection is given: take the p widest
/// clauses (ties to the smallest id) as long, and a min-fill decomposition
/// of the rest. No optimality claim.
pub fn choose_long_clauses(cnf: &Cnf, p: usize) -> LongClauseSpec {
    let mut by_width: Vec<&Clause> = cnf.clauses.iter().collect();
    by_width.sort_by_key(|c| (std::cmp::Reverse(c.lits.len()), c.id));
    let long_ids: BTreeSet<ClauseId> = by_width.iter().take(p).map(|c| c.id).collect();
    let short = Cnf {
        num_vars: cnf.num_vars,
        clauses: cnf
            .clauses
            .iter()
            .filter(|c| !long_ids.contains(&c.id))
            .cloned()
            .collect(),
    };
    let td = heuristic_td(&build_graph(&short, GraphFlavor::Primal));
    LongClauseSpec {
        long_ids,
        short_td: binarize_and_root(&td),
    }
}

/// Everything the per-type operations need, computed once per (formula,
/// spec) pair: the postorder listing, per-node subtree variables, one prefix
/// forest per prefix length, and the variable order.
pub struct LongCtx<'a> {
    pub cnf: &'a Cnf,
    pub spec: &'a LongClauseSpec,
    /// Width of the short decomposition.
    pub k: u32,
    pub idx: PostorderIndex,
    pub subtree_vars: Vec<BTreeSet<Variable>>,
    /// `forests[i]` covers the first `i` postorder nodes.
    pub forests: Vec<PrefixForest>,
    /// Union of the var bags of the first `i` postorder nodes.
    pub prefix_vars: Vec<BTreeSet<Variable>>,
    /// Postorder rank of each variable's earliest bag (the <_T order).
    pub var_rank: BTreeMap<Variable, usize>,
    long_ids: Vec<ClauseId>,
}

impl<'a> LongCtx<'a> {
    pub fn new(cnf: &'a Cnf, spec: &'a LongClauseSpec) -> Result<Self, SpecError> {
        let k = spec.validate(cnf)?;
        let td = &spec.short_td;
        let idx = postorder(td).map_err(|_| SpecError::NotBinary)?;
        let subtree_vars = td.subtree_var_sets();
        let mut forests = vec![PrefixForest::empty()];
        let mut prefix_vars = vec![BTreeSet::new()];
        for i in 0..idx.len() {
            let mut f = forests[i].clone();
            f.extend(td, &idx).expect("postorder listing is consistent");
            forests.push(f);
            let mut pv = prefix_vars[i].clone();
            pv.extend(td.node(idx.node_at(i)).var_bag.iter().copied());
            prefix_vars.push(pv);
        }
        let mut var_rank = BTreeMap::new();
        for pos in 0..idx.len() {
            for &v in &td.node(idx.node_at(pos)).var_bag {
                var_rank.entry(v).or_insert(pos);
            }
        }
        Ok(LongCtx {
            cnf,
            spec,
            k,
            idx,
            subtree_vars,
            forests,
            prefix_vars,
            var_rank,
            long_ids: spec.long_ids.iter().copied().collect(),
        })
    }

    pub fn td(&self) -> &TreeDecomposition {
        &self.spec.short_td
    }

    /// Number of nodes in the postorder listing π_T.
    pub fn len(&self) -> usize {
        self.idx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn longs(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.long_ids
            .iter()
            .map(|&id| self.cnf.clause(id).expect("validated id"))
    }

    pub fn is_long(&self, id: ClauseId) -> bool {
        self.spec.long_ids.contains(&id)
    }
}

/// The tuple (ST, Trees′, C′, F, SL) plus one witnessing assignment. Two
/// interesting pairs of the same type behave identically downstream, so the
/// witness never leaks into [`DecisionType::key`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionType {
    /// Length of the processed postorder prefix (ST).
    pub st_len: usize,
    /// Roots of the satisfying trees, in forest listing order (Trees′).
    pub sat_tree_roots: Vec<NodeId>,
    /// Long clauses satisfied by the witness (C′).
    pub sat_clauses: BTreeSet<ClauseId>,
    /// Satisfied long clause ↦ root of its satisfying tree (F).
    pub tree_of: BTreeMap<ClauseId, NodeId>,
    /// Witness restricted to the union of satisfying-tree root bags (SL).
    pub root_assign: LiteralSet,
    pub witness: LiteralSet,
}

/// Memoization key of a decision type — everything except the witness.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TypeKey {
    pub st_len: usize,
    pub sat_tree_roots: Vec<NodeId>,
    pub sat_clauses: Vec<ClauseId>,
    pub tree_of: Vec<(ClauseId, NodeId)>,
    pub root_assign: LiteralSet,
}

impl DecisionType {
    pub fn key(&self) -> TypeKey {
        TypeKey {
            st_len: self.st_len,
            sat_tree_roots: self.sat_tree_roots.clone(),
            sat_clauses: self.sat_clauses.iter().copied().collect(),
            tree_of: self.tree_of.iter().map(|(&c, &n)| (c, n)).collect(),
            root_assign: self.root_assign.clone(),
        }
    }
}

/// Variables that currently pin down some long clause: x is determining when
/// a long clause C contains x and no <_T-earlier variable of C is satisfied
/// by `s`.
pub fn determining_vars(ctx: &LongCtx, s: &LiteralSet) -> BTreeSet<Variable> {
    let mut out = BTreeSet::new();
    for c in ctx.longs() {
        for x in c.lits.vars() {
            let blocked = c
                .lits
                .iter()
                .any(|ly| ctx.var_rank[&ly.var] < ctx.var_rank[&x] && s.contains(ly));
            if !blocked {
                out.insert(x);
            }
        }
    }
    out
}

/// For each long clause satisfied by `s`: the earliest prefix tree holding
/// the <_T-minimal satisfying variable. Clauses whose minimal satisfier lies
/// outside every prefix tree are omitted (callers treat that as
/// disqualifying).
pub fn satisfying_trees(
    ctx: &LongCtx,
    st_len: usize,
    s: &LiteralSet,
) -> BTreeMap<ClauseId, NodeId> {
    let mut out = BTreeMap::new();
    for c in ctx.longs() {
        let sat_vars: Vec<Variable> = c
            .lits
            .iter()
            .filter(|l| s.contains(*l))
            .map(|l| l.var)
            .collect();
        if sat_vars.is_empty() {
            continue;
        }
        let mv = min_var(ctx.td(), &ctx.idx, sat_vars.iter()).expect("nonempty");
        if let Some(root) = ctx.forests[st_len].min_tree(&ctx.subtree_vars, mv) {
            out.insert(c.id, root);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classified {
    NotInteresting(String),
    Interesting(DecisionType),
}

/// Decides whether (prefix, s) is an interesting pair, and if so computes its
/// decision type. The three conditions: determining variables inside the
/// prefix are assigned; non-determining assignments only touch satisfying
/// trees; satisfying-tree root bags are fully assigned.
pub fn classify_pair(ctx: &LongCtx, st_len: usize, s: &LiteralSet) -> Classified {
    debug_assert!(st_len <= ctx.len());
    debug_assert!(s.vars().all(|v| ctx.prefix_vars[st_len].contains(&v)));

    let det = determining_vars(ctx, s);
    for &v in &det {
        if ctx.prefix_vars[st_len].contains(&v) && !s.has_var(v) {
            return Classified::NotInteresting(format!("determining variable {v} unassigned"));
        }
    }

    let tree_of = satisfying_trees(ctx, st_len, s);
    let satisfied = ctx
        .longs()
        .filter(|c| c.lits.iter().any(|l| s.contains(l)))
        .count();
    if tree_of.len() != satisfied {
        return Classified::NotInteresting("satisfied long clause without satisfying tree".into());
    }

    let sat_tree_roots: Vec<NodeId> = ctx.forests[st_len]
        .trees
        .iter()
        .copied()
        .filter(|t| tree_of.values().any(|r| r == t))
        .collect();
    let tree_vars: BTreeSet<Variable> = sat_tree_roots
        .iter()
        .flat_map(|r| ctx.subtree_vars[r.index()].iter().copied())
        .collect();
    for v in s.vars() {
        if !det.contains(&v) && !tree_vars.contains(&v) {
            return Classified::NotInteresting(format!(
                "non-determining variable {v} assigned outside satisfying trees"
            ));
        }
    }

    let root_bag_vars: BTreeSet<Variable> = sat_tree_roots
        .iter()
        .flat_map(|r| ctx.td().node(*r).var_bag.iter().copied())
        .collect();
    for &v in &root_bag_vars {
        if !s.has_var(v) {
            return Classified::NotInteresting(format!("root bag variable {v} unassigned"));
        }
    }

    Classified::Interesting(DecisionType {
        st_len,
        sat_tree_roots,
        sat_clauses: tree_of.keys().copied().collect(),
        tree_of,
        root_assign: s.project(&root_bag_vars),
        witness: s.clone(),
    })
}

/// Inv(DT) — clause ids whose restriction is the same for every member of the
/// type — and φ_DT, their common restriction under the stored witness
/// (originating ids kept).
pub fn inv_and_phi(ctx: &LongCtx, dt: &DecisionType) -> (BTreeSet<ClauseId>, Cnf) {
    let tree_vars: BTreeSet<Variable> = dt
        .sat_tree_roots
        .iter()
        .flat_map(|r| ctx.subtree_vars[r.index()].iter().copied())
        .collect();
    let mut inv = BTreeSet::new();
    let mut clauses = Vec::new();
    for c in &ctx.cnf.clauses {
        let member = if ctx.is_long(c.id) {
            !dt.sat_clauses.contains(&c.id)
        } else {
            c.lits.vars().any(|v| !tree_vars.contains(&v))
        };
        if !member {
            continue;
        }
        inv.insert(c.id);
        if let Restricted::Residual(r) = c.lits.restrict(&dt.witness) {
            clauses.push(Clause { id: c.id, lits: r });
        }
    }
    (
        inv,
        Cnf {
            num_vars: ctx.cnf.num_vars,
            clauses,
        },
    )
}

/// The canonical extension family over U(DT) = B(t) ∖ Var(witness), t the
/// next postorder node. `Singleton` stands for {∅}; a `Tree` lists the member
/// assignments and the variable order realizing them as a decision tree (the
/// long-relevant variables U₁ queried before the rest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtFamily {
    Singleton,
    Tree {
        members: BTreeSet<LiteralSet>,
        query_order: Vec<Variable>,
    },
}

impl ExtFamily {
    /// Members of the family; {∅} for `Singleton`.
    pub fn members(&self) -> BTreeSet<LiteralSet> {
        match self {
            ExtFamily::Singleton => [LiteralSet::empty()].into_iter().collect(),
            ExtFamily::Tree { members, .. } => members.clone(),
        }
    }
}

/// A type is transient when its only extension is ∅ — nothing gets queried
/// and the walk just advances to the next postorder node.
pub fn is_transient(ctx: &LongCtx, dt: &DecisionType) -> bool {
    dt.st_len < ctx.len() && ext_family(ctx, dt) == ExtFamily::Singleton
}

/// Four cases: no free bag variables → {∅}; a satisfying tree strictly below
/// t → every total assignment of U; no free long-relevant variables → {∅};
/// otherwise total assignments of U₁, completed over U₂ exactly when they
/// satisfy a still-unsatisfied long clause.
pub fn ext_family(ctx: &LongCtx, dt: &DecisionType) -> ExtFamily {
    assert!(dt.st_len < ctx.len(), "no next node past the last prefix");
    let t = ctx.idx.node_at(dt.st_len);
    let u: Vec<Variable> = ctx
        .td()
        .node(t)
        .var_bag
        .iter()
        .copied()
        .filter(|&v| !dt.witness.has_var(v))
        .collect();
    if u.is_empty() {
        return ExtFamily::Singleton;
    }
    if dt
        .sat_tree_roots
        .iter()
        .any(|&r| r != t && ctx.td().is_ancestor(t, r))
    {
        let members = total_assignments(&u).into_iter().collect();
        return ExtFamily::Tree {
            members,
            query_order: u,
        };
    }
    let open_long_vars: BTreeSet<Variable> = ctx
        .longs()
        .filter(|c| !dt.sat_clauses.contains(&c.id))
        .flat_map(|c| c.lits.vars())
        .collect();
    let u1: Vec<Variable> = u
        .iter()
        .copied()
        .filter(|v| open_long_vars.contains(v))
        .collect();
    if u1.is_empty() {
        return ExtFamily::Singleton;
    }
    let u2: Vec<Variable> = u
        .iter()
        .copied()
        .filter(|v| !open_long_vars.contains(v))
        .collect();
    let mut members = BTreeSet::new();
    for s1 in total_assignments(&u1) {
        let satisfies = ctx
            .longs()
            .filter(|c| !dt.sat_clauses.contains(&c.id))
            .any(|c| c.lits.iter().any(|l| s1.contains(l)));
        if satisfies {
            for s2 in total_assignments(&u2) {
                members.insert(s1.union(&s2).expect("disjoint variable blocks"));
            }
        } else {
            members.insert(s1);
        }
    }
    let query_order = u1.into_iter().chain(u2).collect();
    ExtFamily::Tree {
        members,
        query_order,
    }
}

/// All 2^|vars| total assignments over `vars`.
fn total_assignments(vars: &[Variable]) -> Vec<LiteralSet> {
    let mut out = Vec::with_capacity(1 << vars.len());
    for mask in 0..(1u32 << vars.len()) {
        let lits = vars.iter().enumerate().map(|(i, &v)| Literal {
            var: v,
            positive: mask & (1 << i) != 0,
        });
        out.push(LiteralSet::new(lits).expect("distinct variables"));
    }
    out
}

/// The successor's class is guaranteed interesting; anything else means the
/// construction has gone off the rails.
#[derive(Debug, Error)]
#[error("successor pair at prefix {st_len} is not interesting: {reason}")]
pub struct SuccessorBug {
    pub st_len: usize,
    pub reason: String,
}

/// One successor step: classify (prefix+1, witness ∪ s_ext).
fn succ(
    ctx: &LongCtx,
    dt: &DecisionType,
    s_ext: &LiteralSet,
) -> Result<DecisionType, SuccessorBug> {
    let s_new = dt
        .witness
        .union(s_ext)
        .expect("extension is over unassigned variables");
    match classify_pair(ctx, dt.st_len + 1, &s_new) {
        Classified::Interesting(next) => Ok(next),
        Classified::NotInteresting(reason) => Err(SuccessorBug {
            st_len: dt.st_len + 1,
            reason,
        }),
    }
}

/// Skips forward through transient types (extending by ∅ each time) until the
/// type is firm or the prefix is complete.
pub fn chase_transients(ctx: &LongCtx, mut dt: DecisionType) -> Result<DecisionType, SuccessorBug> {
    while is_transient(ctx, &dt) {
        dt = succ(ctx, &dt, &LiteralSet::empty())?;
    }
    Ok(dt)
}

/// Succ*: the firm (or terminal) representative of the successor of `dt`
/// under extension `s_ext`.
pub fn succ_star(
    ctx: &LongCtx,
    dt: &DecisionType,
    s_ext: &LiteralSet,
) -> Result<DecisionType, SuccessorBug> {
    chase_transients(ctx, succ(ctx, dt, s_ext)?)
}

/// Closed-form bound on the number of decision types:
/// n̂ · L^p · 2^p · p^p · 2^{p(k+1)}, with L the largest prefix forest
/// actually measured. Saturates instead of overflowing.
pub fn count_bound(ctx: &LongCtx) -> u128 {
    let n = ctx.len() as u128;
    let l = ctx
        .forests
        .iter()
        .map(|f| f.trees.len())
        .max()
        .unwrap_or(1)
        .max(1) as u128;
    let p = ctx.long_ids.len() as u32;
    let k = ctx.k.min(100);
    n.saturating_mul(l.saturating_pow(p))
        .saturating_mul(pow2(p))
        .saturating_mul((p as u128).saturating_pow(p))
        .saturating_mul(pow2(p.saturating_mul(k + 1)))
}

fn pow2(e: u32) -> u128 {
    if e >= 127 {
        u128::MAX
    } else {
        1u128 << e
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::cnf::parse_dimacs;
    use crate::cnf::tests::lits;

    /// Three unit clauses (¬x1)(¬x2)(¬x3) plus the long clause (x1∨x2∨x3);
    /// the short part decomposes as the chain b1{x1} ← b2{x2} ← b3{x3}.
    pub(crate) fn toy2() -> (Cnf, LongClauseSpec) {
        let cnf = parse_dimacs("p cnf 3 4\n-1 0\n-2 0\n-3 0\n1 2 3 0\n").unwrap();
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![
                (Some(NodeId(2)), [Variable(1)].into(), BTreeSet::new()),
                (Some(NodeId(3)), [Variable(2)].into(), BTreeSet::new()),
                (None, [Variable(3)].into(), BTreeSet::new()),
            ],
        )
        .unwrap();
        (
            cnf,
            LongClauseSpec {
                long_ids: [ClauseId(4)].into(),
                short_td: td,
            },
        )
    }

    fn dt(ctx: &LongCtx, st_len: usize, s: &[i64]) -> DecisionType {
        match classify_pair(ctx, st_len, &lits(s)) {
            Classified::Interesting(d) => d,
            Classified::NotInteresting(r) => panic!("expected interesting, got: {r}"),
        }
    }

    #[test]
    fn toy2_spec_is_valid_at_width_zero() {
        let (cnf, spec) = toy2();
        assert_eq!(spec.validate(&cnf).unwrap(), 0);
        let ctx = LongCtx::new(&cnf, &spec).unwrap();
        assert_eq!(ctx.len(), 3);
        assert_eq!(
            (0..3).map(|i| ctx.idx.node_at(i)).collect::<Vec<_>>(),
            vec![NodeId(1), NodeId(2), NodeId(3)]
        );
    }

    #[test]
    fn toy2_determining_variables() {
        let (cnf, spec) = toy2();
        let ctx = LongCtx::new(&cnf, &spec).unwrap();
        let vars = |ns: &[u32]| ns.iter().map(|&n| Variable(n)).collect::<BTreeSet<_>>();
        assert_eq!(determining_vars(&ctx, &lits(&[])), vars(&[1, 2, 3]));
        assert_eq!(determining_vars(&ctx, &lits(&[1])), vars(&[1]));
        assert_eq!(determining_vars(&ctx, &lits(&[-1])), vars(&[1, 2, 3]));
    }

    #[test]
    fn toy2_satisfying_trees() {
        let (cnf, spec) = toy2();
        let ctx = LongCtx::new(&cnf, &spec).unwrap();
        assert_eq!(
            satisfying_trees(&ctx, 1, &lits(&[1])),
            [(ClauseId(4), NodeId(1))].into()
        );
        assert!(satisfying_trees(&ctx, 1, &lits(&[-1])).is_empty());
        // after the prefix grows, b1 has merged beneath b2
        assert_eq!(
            satisfying_trees(&ctx, 2, &lits(&[-1, 2])),
            [(ClauseId(4), NodeId(2))].into()
        );
    }

    #[test]
    fn toy2_classification() {
        let (cnf, spec) = toy2();
        let ctx = LongCtx::new(&cnf, &spec).unwrap();

        let d = dt(&ctx, 1, &[1]);
        assert_eq!(d.sat_tree_roots, vec![NodeId(1)]);
        assert_eq!(d.sat_clauses, [ClauseId(4)].into());
        assert_eq!(d.tree_of, [(ClauseId(4), NodeId(1))].into());
        assert_eq!(d.root_assign, lits(&[1]));

        assert!(matches!(
            classify_pair(&ctx, 1, &lits(&[])),
            Classified::NotInteresting(_)
        ));

        let d = dt(&ctx, 1, &[-1]);
        assert!(d.sat_tree_roots.is_empty());
        assert!(d.sat_clauses.is_empty());
        assert_eq!(d.root_assign, lits(&[]));
    }

    #[test]
    fn toy2_inv_and_phi() {
        let (cnf, spec) = toy2();
        let ctx = LongCtx::new(&cnf, &spec).unwrap();

        let (inv, phi) = inv_and_phi(&ctx, &dt(&ctx, 1, &[-1]));
        assert_eq!(inv, [1, 2, 3, 4].map(ClauseId).into());
        assert_eq!(
            phi.clauses,
            vec![
                Clause {
                    id: ClauseId(2),
                    lits: lits(&[-2])
                },
                Clause {
                    id: ClauseId(3),
                    lits: lits(&[-3])
                },
                Clause {
                    id: ClauseId(4),
                    lits: lits(&[2, 3])
                },
            ]
        );

        let (inv, phi) = inv_and_phi(&ctx, &dt(&ctx, 1, &[1]));
        assert_eq!(inv, [2, 3].map(ClauseId).into());
        assert_eq!(
            phi.clauses,
            vec![
                Clause {
                    id: ClauseId(2),
                    lits: lits(&[-2])
                },
                Clause {
                    id: ClauseId(3),
                    lits: lits(&[-3])
                },
            ]
        );
    }

    #[test]
    fn phi_is_modular_in_the_restricted_formula() {
        use crate::cnf::is_modular_subcnf;
        let (cnf, spec) = toy2();
        let ctx = LongCtx::new(&cnf, &spec).unwrap();
        for s in [lits(&[-1]), lits(&[1])] {
            let d = dt(
                &ctx,
                1,
                &s.iter().map(|l| l.to_dimacs()).collect::<Vec<_>>(),
            );
            let (_, phi) = inv_and_phi(&ctx, &d);
            assert_eq!(is_modular_subcnf(&phi, &cnf.restrict(&s)), Ok(true));
        }
    }

    #[test]
    fn toy2_extension_families() {
        let (cnf, spec) = toy2();
        let ctx = LongCtx::new(&cnf, &spec).unwrap();

        // root type: U₁ = {x1}, both branches listed (case 4)
        let d0 = dt(&ctx, 0, &[]);
        assert_eq!(
            ext_family(&ctx, &d0),
            ExtFamily::Tree {
                members: [lits(&[1]), lits(&[-1])].into(),
                query_order: vec![Variable(1)],
            }
        );

        // satisfied type: T_{b2} holds the satisfying tree T_{b1} (case 2)
        let d1 = dt(&ctx, 1, &[1]);
        assert_eq!(
            ext_family(&ctx, &d1),
            ExtFamily::Tree {
                members: [lits(&[2]), lits(&[-2])].into(),
                query_order: vec![Variable(2)],
            }
        );
        assert!(!is_transient(&ctx, &d1));
    }

    /// Duplicate chain bags exercise case 1 (U = ∅) and the transient chase.
    #[test]
    fn singleton_family_and_chase() {
        let cnf = parse_dimacs("p cnf 1 2\n-1 0\n1 0\n").unwrap();
        let td = TreeDecomposition::from_bags(
            GraphFlavor::Primal,
            vec![
                (Some(NodeId(2)), [Variable(1)].into(), BTreeSet::new()),
                (Some(NodeId(3)), [Variable(1)].into(), BTreeSet::new()),
                (None, [Variable(1)].into(), BTreeSet::new()),
            ],
        )
        .unwrap();
        let spec = LongClauseSpec {
            long_ids: [ClauseId(2)].into(),
            short_td: td,
        };
        let ctx = LongCtx::new(&cnf, &spec).unwrap();

        let d1 = dt(&ctx, 1, &[1]);
        assert_eq!(ext_family(&ctx, &d1), ExtFamily::Singleton);
        assert!(is_transient(&ctx, &d1));
        // the chase rides the duplicate bags all the way to the end
        let rep = chase_transients(&ctx, d1).unwrap();
        assert_eq!(rep.st_len, 3);
        assert_eq!(rep.witness, lits(&[1]));
    }

    #[test]
    fn toy2_successors() {
        let (cnf, spec) = toy2();
        let ctx = LongCtx::new(&cnf, &spec).unwrap();
        let d = dt(&ctx, 1, &[-1]);

        let next = succ_star(&ctx, &d, &lits(&[2])).unwrap();
        assert_eq!(next.st_len, 2);
        assert_eq!(next.sat_tree_roots, vec![NodeId(2)]);
        assert_eq!(next.sat_clauses, [ClauseId(4)].into());
        assert_eq!(next.tree_of, [(ClauseId(4), NodeId(2))].into());
        assert_eq!(next.root_assign, lits(&[2]));

        let next = succ_star(&ctx, &d, &lits(&[-2])).unwrap();
        assert_eq!(next.st_len, 2);
        assert!(next.sat_tree_roots.is_empty());
        assert!(next.sat_clauses.is_empty());
        assert_eq!(next.root_assign, lits(&[]));
    }

    #[test]
    fn toy2_count_bound() {
        let (cnf, spec) = toy2();
        let ctx = LongCtx::new(&cnf, &spec).unwrap();
        // n̂=3, L=1, p=1, k=0: 3 · 1 · 2 · 1 · 2 = 12
        assert_eq!(count_bound(&ctx), 12);
    }

    #[test]
    fn widest_clause_fallback() {
        let (cnf, _) = toy2();
        let spec = choose_long_clauses(&cnf, 1);
        assert_eq!(spec.long_ids, [ClauseId(4)].into());
        assert_eq!(spec.validate(&cnf).unwrap(), 0);
    }

    #[test]
    fn rejects_broken_specs() {
        let (cnf, spec) = toy2();
        let bad = LongClauseSpec {
            long_ids: [ClauseId(9)].into(),
            ..spec.clone()
        };
        assert!(matches!(
            bad.validate(&cnf),
            Err(SpecError::UnknownLongId(_))
        ));
        // dropping the long id makes C1 a short clause the chain cannot cover
        let bad = LongClauseSpec {
            long_ids: BTreeSet::new(),
            ..spec
        };
        assert!(matches!(
            bad.validate(&cnf),
            Err(SpecError::InvalidShortTd(_))
        ));
    }
}
